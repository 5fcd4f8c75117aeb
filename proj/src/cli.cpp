#include "digitsieve/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <sstream>

#include "CLI11.hpp"

#include "digitsieve/arith.hpp"
#include "digitsieve/bounds.hpp"
#include "digitsieve/char_sums.hpp"
#include "digitsieve/error.hpp"
#include "digitsieve/ffield.hpp"
#include "digitsieve/hilbert.hpp"
#include "digitsieve/mult_stats.hpp"
#include "digitsieve/pattern.hpp"
#include "digitsieve/report.hpp"

namespace digitsieve::cli {

namespace {

using report::CsvTable;
using report::Json;
using report::format_number;

struct Common {
  std::uint64_t seed = 1;
  std::string format = "json";
  std::string out;
  unsigned threads = 1;
  std::uint64_t max_enum = std::uint64_t{1} << 28;
  std::uint64_t max_exact_p = 40;
};

struct Output {
  std::vector<Json> records;
  CsvTable csv;
};

class Stopwatch {
 public:
  double elapsed_ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string num(double v) { return format_number(v); }
std::string num(std::uint64_t v) { return std::to_string(v); }
std::string num(int v) { return std::to_string(v); }

// Patterns from --pattern or a seeded --random corpus.
struct PatternSource {
  std::vector<std::string> patterns;
  std::size_t random = 0;
  int bits = 20;
  double max_kappa = 0.4;
  bool unstarred = false;
  bool allow_degenerate = false;

  void add_options(CLI::App* app) {
    app->add_option("--pattern", patterns, "MSB-first pattern over {0,1,*}; repeatable");
    app->add_option("--random", random, "number of seeded random patterns");
    app->add_option("--bits", bits, "bit-length of random patterns");
    app->add_option("--max-kappa", max_kappa, "largest fixed-digit ratio of random patterns");
    app->add_flag("--unstarred", unstarred, "random patterns need not fix bit 0 to 1");
    app->add_flag("--allow-degenerate", allow_degenerate, "accept patterns without free positions");
  }

  std::vector<DigitPattern> resolve(const Common& common) const {
    std::vector<DigitPattern> out;
    for (const auto& text : patterns) out.push_back(DigitPattern::parse(text, allow_degenerate));
    if (random > 0) {
      auto corpus = random_pattern_corpus(random, bits, max_kappa, !unstarred, common.seed);
      out.insert(out.end(), corpus.begin(), corpus.end());
    }
    if (out.empty()) throw ValidationError("no patterns given (use --pattern or --random)");
    for (const auto& p : out) {
      if (p.member_count() > common.max_enum) {
        throw ResourceError("pattern " + p.to_string() + " has " + std::to_string(p.member_count()) +
                            " members, above --max-enum");
      }
    }
    return out;
  }
};

MultStatsLimits limits_for(const Common& common) {
  MultStatsLimits limits;
  limits.max_members = common.max_enum;
  limits.threads = common.threads;
  return limits;
}

// ---------------------------------------------------------------------------
// Subcommands

void cmd_enumerate(const Common& common, const PatternSource& src, Output& out) {
  out.csv.header = {"pattern", "member"};
  for (const auto& pattern : src.resolve(common)) {
    Json j;
    j["statistic"] = "members";
    j.update(report::pattern_fields(summarize(pattern)));
    j["count"] = pattern.member_count();
    auto members = pattern.members();
    for (auto m : members) out.csv.rows.push_back({pattern.to_string(), num(m)});
    j["members"] = std::move(members);
    out.records.push_back(std::move(j));
  }
}

void cmd_cong(const Common& common, const PatternSource& src, const std::vector<std::uint64_t>& moduli,
              bool histogram, Output& out) {
  out.csv.header = {"q", "rho", "count", "predicted_exponent", "measured_exponent"};
  for (const auto& pattern : src.resolve(common)) {
    Stopwatch watch;
    const auto decay = measure_cong_decay(pattern, moduli);
    for (const auto& row : decay.rows) {
      Json j;
      j["statistic"] = "congruence";
      j.update(report::pattern_fields(decay.pattern));
      j["q"] = row.q;
      j["rho"] = row.rho;
      j["count"] = row.count;
      const auto mc = count_multiples(pattern, row.q);
      j["expected"] = mc.expected;
      j["deviation"] = mc.deviation;
      j["predicted_exponent"] = row.predicted_exponent;
      j["measured_exponent"] = row.measured_exponent;
      j["predicted_ceiling"] = row.predicted_ceiling;
      if (histogram) j["counts"] = congruence_histogram(pattern, row.q).counts;
      out.records.push_back(std::move(j));
      out.csv.rows.push_back({num(row.q), num(row.rho), num(row.count), num(row.predicted_exponent),
                              num(row.measured_exponent)});
    }
    Json fit;
    fit["statistic"] = "congruence_fit";
    fit.update(report::pattern_fields(decay.pattern));
    fit["fitted_constant"] = decay.fitted_constant;
    fit["elapsed_ms"] = watch.elapsed_ms();
    out.records.push_back(std::move(fit));
  }
}

const std::vector<std::string> kStatHeader = {"statistic", "pattern", "n",         "k",      "kappa",     "value",
                                              "total",     "ratio",   "predicted", "method", "elapsed_ms"};

void cmd_squarefree(const Common& common, const PatternSource& src, const std::string& method, Output& out) {
  out.csv.header = kStatHeader;
  const auto limits = limits_for(common);
  for (const auto& pattern : src.resolve(common)) {
    auto emit = [&](const SquarefreeReport& r, double ms) {
      out.records.push_back(report::to_json(r, ms));
      out.csv.rows.push_back({"squarefree", r.pattern.text, num(r.pattern.n), num(r.pattern.k), num(r.pattern.kappa),
                              num(r.count), num(r.total), num(r.ratio), num(r.predicted),
                              std::string(to_string(r.method)), num(ms)});
    };
    if (method == "direct" || method == "both") {
      Stopwatch w;
      const auto r = squarefree_count_direct(pattern, limits);
      emit(r, w.elapsed_ms());
    }
    if (method == "moebius" || method == "both") {
      Stopwatch w;
      const auto r = squarefree_count_moebius(pattern, limits);
      emit(r, w.elapsed_ms());
    }
  }
}

void cmd_euler(const Common& common, const PatternSource& src, const std::string& zero_policy, Output& out) {
  out.csv.header = kStatHeader;
  const auto limits = limits_for(common);
  const auto policy = zero_policy == "reject" ? ZeroPolicy::Reject : ZeroPolicy::Exclude;
  for (const auto& pattern : src.resolve(common)) {
    Stopwatch w;
    const auto r = euler_ratio_sum(pattern, limits, policy);
    const double ms = w.elapsed_ms();
    auto j = report::to_json(r, ms);
    out.csv.rows.push_back({"euler", r.pattern.text, num(r.pattern.n), num(r.pattern.k), num(r.pattern.kappa),
                            num(r.sum), num(r.total), num(r.ratio), num(r.predicted),
                            j["method"].get<std::string>(), num(ms)});
    out.records.push_back(std::move(j));
  }
}

void cmd_expsum(const Common& common, const PatternSource& src, std::uint64_t q, std::vector<std::uint64_t> as,
                Output& out) {
  if (q < 1) throw ValidationError("--q must be at least 1");
  if (as.empty()) {
    if (q > 4096) throw ValidationError("give --a explicitly when q > 4096");
    for (std::uint64_t a = 0; a < q; ++a) as.push_back(a);
  }
  out.csv.header = {"pattern", "a", "q", "re", "im", "magnitude", "normalized", "reference"};
  for (const auto& pattern : src.resolve(common)) {
    for (std::uint64_t a : as) {
      const auto r = exp_sum(pattern, a, q);
      Json j;
      j["statistic"] = "expsum";
      j.update(report::pattern_fields(summarize(pattern)));
      j["a"] = a;
      j["q"] = q;
      j["re"] = r.value.re;
      j["im"] = r.value.im;
      j["magnitude"] = r.value.magnitude();
      j["normalized"] = r.normalized;
      j["reference"] = r.reference;
      j["via_histogram"] = r.via_histogram;
      j["in_small_modulus_range"] = r.in_small_modulus_range;
      out.records.push_back(std::move(j));
      out.csv.rows.push_back({pattern.to_string(), num(a), num(q), num(r.value.re), num(r.value.im),
                              num(r.value.magnitude()), num(r.normalized), num(r.reference)});
    }
  }
}

std::vector<std::uint64_t> window_primes(int n, std::size_t count, std::uint64_t seed) {
  if (n < 2 || n > 61) throw ValidationError("prime window needs 2 <= n <= 61");
  const std::uint64_t low = std::uint64_t{1} << n, high = low << 1;
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  std::uniform_int_distribution<std::uint64_t> dist(low + 1, high - 1);
  std::vector<std::uint64_t> primes;
  for (std::size_t attempts = 0; primes.size() < count; ++attempts) {
    if (attempts > 100 * count + 1000) throw ResourceError("could not find enough distinct primes in the window");
    const std::uint64_t p = arith::next_prime(dist(rng) - 1);
    if (p >= high || std::find(primes.begin(), primes.end(), p) != primes.end()) continue;
    primes.push_back(p);
  }
  return primes;
}

void cmd_qrsplit(const Common& common, const PatternSource& src, std::vector<std::uint64_t> primes,
                 std::size_t window_count, Output& out) {
  out.csv.header = {"p", "n", "kappa", "plus", "minus", "zero", "deviation"};
  const auto patterns = src.resolve(common);
  for (const auto& pattern : patterns) {
    auto list = primes;
    if (window_count > 0) {
      const auto extra = window_primes(pattern.bits(), window_count, common.seed);
      list.insert(list.end(), extra.begin(), extra.end());
    }
    if (list.empty()) throw ValidationError("no primes given (use --p or --window-primes)");
    for (std::uint64_t p : list) {
      const auto r = qr_split(pattern, p);
      Json j;
      j["statistic"] = "qr_split";
      j.update(report::pattern_fields(summarize(pattern)));
      j["p"] = p;
      j["plus"] = r.plus;
      j["minus"] = r.minus;
      j["zero"] = r.zero;
      j["deviation"] = r.deviation;
      j["in_dyadic_window"] = r.in_dyadic_window;
      j["warnings"] = r.warnings;
      out.records.push_back(std::move(j));
      out.csv.rows.push_back({num(p), num(pattern.bits()), num(pattern.kappa()), num(r.plus), num(r.minus),
                              num(r.zero), num(r.deviation)});
    }
  }
}

void cmd_bounds(double kappa, double rho, std::optional<int> lattice_r, std::optional<std::uint64_t> lattice_q,
                Output& out) {
  const auto params = bound_params(kappa, rho);
  Json j;
  j["statistic"] = "bounds";
  j["kappa"] = params.kappa;
  j["rho"] = params.rho;
  j["tau"] = params.tau;
  j["theta"] = params.theta;
  j["med_q_exponent"] = predicted_med_q_exponent(kappa, rho);
  if (rho >= kappa / 2 && rho <= 0.5) {
    j["two_window_exponent"] = predicted_two_window_exponent(kappa, rho);
  } else {
    j["two_window_exponent"] = nullptr;
  }
  out.csv.header = {"kappa", "rho", "tau", "theta"};
  out.csv.rows.push_back({num(params.kappa), num(params.rho), num(params.tau), num(params.theta)});
  out.records.push_back(std::move(j));
  if (lattice_r || lattice_q) {
    if (!lattice_r || !lattice_q) throw ValidationError("--lattice-r and --lattice-q go together");
    Json l = report::to_json(congruence_lattice_minima(*lattice_r, *lattice_q));
    l["statistic"] = "lattice_minima";
    l["r"] = *lattice_r;
    l["q"] = *lattice_q;
    out.records.push_back(std::move(l));
  }
}

void cmd_dyadic(const Common& common, const PatternSource& src, const std::vector<std::uint64_t>& starts,
                double epsilon, Output& out) {
  if (starts.empty()) throw ValidationError("give at least one --A");
  out.csv.header = {"pattern", "A", "sum", "reference"};
  for (const auto& pattern : src.resolve(common)) {
    for (std::uint64_t a : starts) {
      const auto r = measure_dyadic_square_sum(pattern, a, epsilon);
      Json j;
      j["statistic"] = "dyadic_square_sum";
      j.update(report::pattern_fields(summarize(pattern)));
      j["A"] = r.a;
      j["sum"] = r.sum;
      j["epsilon"] = r.epsilon;
      j["reference"] = r.reference;
      out.records.push_back(std::move(j));
      out.csv.rows.push_back({pattern.to_string(), num(a), num(r.sum), num(r.reference)});
    }
  }
}

void cmd_hilbert(std::uint64_t p, std::uint64_t a0, const std::vector<std::uint64_t>& gens,
                 const std::vector<std::uint64_t>& set, std::optional<std::uint64_t> k, Output& out) {
  out.csv.header = {"statistic", "p", "size", "bound", "bound_holds"};
  if (!gens.empty()) {
    const auto cube = build_cube(p, a0, gens);
    const auto ap = longest_ap(cube.elements);
    Json j = report::to_json(cube);
    j["statistic"] = "hilbert_cube";
    j["size"] = cube.elements.size();
    j["longest_ap"] = {{"start", ap.start}, {"difference", ap.difference}, {"length", ap.length}};
    const auto star = sigma_star(cube.gens, p);
    j["sigma_star_size"] = star.sums.size();
    j["sigma_star_bound"] = star.bound;
    out.records.push_back(std::move(j));
    out.csv.rows.push_back({"hilbert_cube", num(p), num(cube.elements.size()), "", ""});
  }
  if (!set.empty()) {
    const auto sums = k ? subset_sums_k(set, *k, p) : sigma_star(set, p);
    Json j;
    j["statistic"] = k ? "subset_sums_k" : "sigma_star";
    j["p"] = p;
    j["set"] = set;
    if (k) j["k"] = *k;
    j["sums"] = sums.sums.elements();
    j["size"] = sums.sums.size();
    j["bound"] = sums.bound;
    j["bound_holds"] = sums.bound_holds;
    out.csv.rows.push_back({j["statistic"].get<std::string>(), num(p), num(sums.sums.size()), num(sums.bound),
                            sums.bound_holds ? "true" : "false"});
    out.records.push_back(std::move(j));
  }
  if (gens.empty() && set.empty()) throw ValidationError("give --gens and/or --set");
}

void cmd_fF(const Common& common, std::vector<std::uint64_t> primes, std::uint64_t p_max,
            const std::string& table_path, std::uint64_t restarts, bool no_zero_gen, Output& out) {
  for (std::uint64_t p = 3; p <= p_max; p += 2)
    if (arith::is_prime(p)) primes.push_back(p);
  if (primes.empty()) throw ValidationError("no primes given (use --p or --p-max)");
  std::sort(primes.begin(), primes.end());
  primes.erase(std::unique(primes.begin(), primes.end()), primes.end());

  std::map<std::uint64_t, Json> table;
  if (!table_path.empty() && std::filesystem::exists(table_path)) {
    std::ifstream in(table_path);
    Json existing;
    try {
      existing = Json::parse(in);
    } catch (const nlohmann::json::exception& e) {
      throw ValidationError(std::string("unreadable f/F table: ") + e.what());
    }
    for (auto& entry : existing) table[entry.at("p").get<std::uint64_t>()] = entry;
  }

  CubeSearchOptions options;
  options.allow_zero_gen = !no_zero_gen;
  options.exact_cap = common.max_exact_p;
  options.greedy_restarts = restarts;
  options.seed = common.seed;
  options.threads = common.threads;

  out.csv.header = {"p", "f", "f_exact", "F", "F_exact", "bound_12p14", "bound_p319"};
  for (std::uint64_t p : primes) {
    Json entry;
    const auto cached = table.find(p);
    if (cached != table.end() && cached->second.value("f_exact", false) && cached->second.value("F_exact", false) &&
        cached->second.value("allow_zero_gen", true) == options.allow_zero_gen) {
      entry = cached->second;
    } else {
      entry = report::to_json(compute_f_and_F(p, options));
      table[p] = entry;
    }
    out.csv.rows.push_back({num(p), num(entry["f"].get<int>()), entry["f_exact"].get<bool>() ? "true" : "false",
                            num(entry["F"].get<int>()), entry["F_exact"].get<bool>() ? "true" : "false",
                            num(entry["bound_12p14"].get<double>()), num(entry["bound_p319"].get<double>())});
    Json record = entry;
    record["statistic"] = "cube_dimensions";
    out.records.push_back(std::move(record));
  }
  if (!table_path.empty()) {
    Json all = Json::array();
    for (auto& [p, e] : table) all.push_back(e);
    std::ofstream os(table_path);
    os << all.dump(2) << '\n';
  }
}

std::vector<std::vector<std::uint64_t>> parse_sets(const std::string& text) {
  std::vector<std::vector<std::uint64_t>> sets;
  std::stringstream outer(text);
  std::string chunk;
  while (std::getline(outer, chunk, ';')) {
    std::vector<std::uint64_t> set;
    std::stringstream inner(chunk);
    std::string item;
    while (std::getline(inner, item, ',')) {
      if (item.empty()) continue;
      try {
        std::size_t used = 0;
        set.push_back(std::stoull(item, &used));
        if (used != item.size()) throw std::invalid_argument(item);
      } catch (const std::exception&) {
        throw ValidationError("bad digit '" + item + "' in --sets");
      }
    }
    sets.push_back(std::move(set));
  }
  return sets;
}

struct FieldArgs {
  std::uint64_t p = 0;
  int n = 0;
  std::vector<std::uint64_t> modulus;
  std::vector<std::uint64_t> basis;
  std::string context_path;
  std::string sets;
  std::string family_path;
  std::uint64_t set_size = 0;
  std::size_t trials = 1;
  double epsilon = 0.1;
};

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("cannot parse " + path + ": " + e.what());
  }
}

void cmd_ffield(const Common& common, const FieldArgs& args, Output& out) {
  const FieldContext ctx = [&] {
    if (!args.context_path.empty()) return report::field_context_from_json(read_json_file(args.context_path));
    if (args.p == 0 || args.n == 0) throw ValidationError("give --p and --n, or --context");
    auto modulus = args.modulus.empty() ? find_irreducible(args.p, args.n, common.seed) : args.modulus;
    if (args.basis.empty()) return FieldContext(args.p, modulus);
    const auto n = static_cast<std::size_t>(args.n);
    if (args.basis.size() != n * n) throw ValidationError("--basis needs n*n entries");
    std::vector<std::vector<std::uint64_t>> rows(n);
    for (std::size_t i = 0; i < n; ++i) rows[i].assign(args.basis.begin() + i * n, args.basis.begin() + (i + 1) * n);
    return FieldContext(args.p, modulus, rows);
  }();

  std::vector<DigitSetFamily> families;
  if (!args.family_path.empty()) families.push_back(report::family_from_json(read_json_file(args.family_path)));
  if (!args.sets.empty()) families.push_back({parse_sets(args.sets)});
  if (args.set_size > 0) {
    if (args.set_size > ctx.p()) throw ValidationError("--set-size exceeds p");
    std::mt19937_64 rng(common.seed);
    std::vector<std::uint64_t> all(ctx.p());
    for (std::size_t t = 0; t < args.trials; ++t) {
      DigitSetFamily family;
      for (int i = 0; i < ctx.degree(); ++i) {
        std::iota(all.begin(), all.end(), 0);
        std::shuffle(all.begin(), all.end(), rng);
        std::vector<std::uint64_t> set(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(args.set_size));
        std::sort(set.begin(), set.end());
        family.sets.push_back(std::move(set));
      }
      families.push_back(std::move(family));
    }
  }
  if (families.empty()) throw ValidationError("give --sets, --family or --set-size");

  out.csv.header = {"p", "n", "size", "plus", "minus", "zero", "deviation", "regime"};
  for (const auto& family : families) {
    Stopwatch w;
    const auto split = qr_split_W(family, ctx);
    const auto cond = check_conditions(family, ctx, args.epsilon);
    std::vector<std::uint64_t> sizes;
    for (const auto& s : family.sets) sizes.push_back(s.size());
    Json j;
    j["statistic"] = "ffield_qr_split";
    j["context"] = report::to_json(ctx);
    j["family"] = report::to_json(family);
    j["size"] = family.product();
    j["plus"] = split.plus;
    j["minus"] = split.minus;
    j["zero"] = split.zero;
    j["deviation"] = split.deviation;
    j["conditions"] = report::to_json(cond);
    j["index_split"] = report::to_json(split_largest_index_set(sizes, args.epsilon));
    j["elapsed_ms"] = w.elapsed_ms();
    out.records.push_back(std::move(j));
    out.csv.rows.push_back({num(ctx.p()), num(ctx.degree()), num(family.product()), num(split.plus),
                            num(split.minus), num(split.zero), num(split.deviation), cond.regime});
  }
}

// Option values of the selected subcommand plus the result-affecting globals.
Json collect_config(const CLI::App& app, const CLI::App& sub, const Common& common) {
  Json config;
  config["command"] = sub.get_name();
  config["seed"] = common.seed;
  config["format"] = common.format;
  config["max_enum"] = common.max_enum;
  config["max_exact_p"] = common.max_exact_p;
  Json opts = Json::object();
  for (const CLI::Option* opt : sub.get_options()) {
    const std::string name = opt->get_name();
    if (name.empty() || name == "--help" || name == "-h") continue;
    if (opt->count() > 0) {
      opts[name] = opt->results();
    } else if (!opt->get_default_str().empty()) {
      opts[name] = opt->get_default_str();
    }
  }
  config["options"] = opts;
  (void)app;
  return config;
}

unsigned default_threads() {
  if (const char* env = std::getenv("DIGITSIEVE_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v >= 1) return static_cast<unsigned>(v);
    } catch (const std::exception&) {
    }
  }
  return 1;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out_stream, std::ostream& err) {
  CLI::App app{"digitsieve: experiments on integers with prescribed binary digits"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "TOML/INI configuration file; command-line flags take precedence");

  Common common;
  common.threads = default_threads();
  app.add_option("--seed", common.seed, "seed for every randomized choice")->capture_default_str();
  app.add_option("--format", common.format, "json or csv")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
  app.add_option("--out", common.out, "output file (default: standard output)");
  app.add_option("--threads", common.threads, "worker threads (fallback: DIGITSIEVE_THREADS)");
  app.add_option("--max-enum", common.max_enum, "largest member count to enumerate")->capture_default_str();
  app.add_option("--max-exact-p", common.max_exact_p, "largest p for exact cube searches")->capture_default_str();

  Output output;
  std::function<void()> action;

  PatternSource enum_src;
  auto* enumerate = app.add_subcommand("enumerate", "list the members of a pattern");
  enum_src.add_options(enumerate);
  enumerate->callback([&] { action = [&] { cmd_enumerate(common, enum_src, output); }; });

  PatternSource cong_src;
  std::vector<std::uint64_t> cong_q;
  bool cong_hist = false;
  auto* cong = app.add_subcommand("cong", "exact counts of multiples of q against the decay exponent");
  cong_src.add_options(cong);
  cong->add_option("--q", cong_q, "odd modulus; repeatable")->required();
  cong->add_flag("--histogram", cong_hist, "include the full residue histogram");
  cong->callback([&] { action = [&] { cmd_cong(common, cong_src, cong_q, cong_hist, output); }; });

  PatternSource sf_src;
  std::string sf_method = "both";
  auto* squarefree = app.add_subcommand("squarefree", "squarefree counts S_n over a pattern");
  sf_src.add_options(squarefree);
  squarefree->add_option("--method", sf_method, "direct, moebius or both")
      ->check(CLI::IsMember({"direct", "moebius", "both"}))
      ->capture_default_str();
  squarefree->callback([&] { action = [&] { cmd_squarefree(common, sf_src, sf_method, output); }; });

  PatternSource eu_src;
  std::string eu_zero = "exclude";
  auto* euler = app.add_subcommand("euler", "sum of phi(s)/s over a pattern");
  eu_src.add_options(euler);
  euler->add_option("--zero-policy", eu_zero, "exclude or reject member 0")
      ->check(CLI::IsMember({"exclude", "reject"}))
      ->capture_default_str();
  euler->callback([&] { action = [&] { cmd_euler(common, eu_src, eu_zero, output); }; });

  PatternSource es_src;
  std::uint64_t es_q = 0;
  std::vector<std::uint64_t> es_a;
  auto* expsum = app.add_subcommand("expsum", "exponential sums over a pattern");
  es_src.add_options(expsum);
  expsum->add_option("--q", es_q, "modulus")->required();
  expsum->add_option("--a", es_a, "frequencies (default: all of 0..q-1)");
  expsum->callback([&] { action = [&] { cmd_expsum(common, es_src, es_q, es_a, output); }; });

  PatternSource qr_src;
  std::vector<std::uint64_t> qr_p;
  std::size_t qr_window = 0;
  auto* qrsplit = app.add_subcommand("qrsplit", "quadratic residue / non-residue split of a pattern mod p");
  qr_src.add_options(qrsplit);
  qrsplit->add_option("--p", qr_p, "odd prime; repeatable");
  qrsplit->add_option("--window-primes", qr_window, "seeded primes drawn from (2^n, 2^(n+1))");
  qrsplit->callback([&] { action = [&] { cmd_qrsplit(common, qr_src, qr_p, qr_window, output); }; });

  double b_kappa = 0, b_rho = 0;
  std::optional<int> b_r;
  std::optional<std::uint64_t> b_q;
  auto* bounds = app.add_subcommand("bounds", "decay exponents tau and theta; optional lattice minima");
  bounds->add_option("--kappa", b_kappa, "fixed-digit ratio k/n")->required();
  bounds->add_option("--rho", b_rho, "log2(q)/n")->required();
  bounds->add_option("--lattice-r", b_r, "exponent r of the lattice basis (1, -2^r), (0, q^2)");
  bounds->add_option("--lattice-q", b_q, "modulus q of the lattice basis");
  bounds->callback([&] { action = [&] { cmd_bounds(b_kappa, b_rho, b_r, b_q, output); }; });

  PatternSource dy_src;
  std::vector<std::uint64_t> dy_a;
  double dy_eps = 0.1;
  auto* dyadic = app.add_subcommand("dyadic", "sum over A < q <= 2A of the multiples of q^2");
  dy_src.add_options(dyadic);
  dyadic->add_option("--A", dy_a, "dyadic range start; repeatable")->required();
  dyadic->add_option("--epsilon", dy_eps, "exponent of the reference curve A^(-eps/2)")->capture_default_str();
  dyadic->callback([&] { action = [&] { cmd_dyadic(common, dy_src, dy_a, dy_eps, output); }; });

  std::uint64_t h_p = 0, h_a0 = 0;
  std::vector<std::uint64_t> h_gens, h_set;
  std::optional<std::uint64_t> h_k;
  auto* hilbert = app.add_subcommand("hilbert", "Hilbert cubes and subset sums in F_p");
  hilbert->add_option("--p", h_p, "prime")->required();
  hilbert->add_option("--a0", h_a0, "cube base point")->capture_default_str();
  hilbert->add_option("--gens", h_gens, "cube generators");
  hilbert->add_option("--set", h_set, "set for subset sums");
  hilbert->add_option("--k", h_k, "subset size (omit for the union over all sizes)");
  hilbert->callback([&] { action = [&] { cmd_hilbert(h_p, h_a0, h_gens, h_set, h_k, output); }; });

  std::vector<std::uint64_t> f_p;
  std::uint64_t f_pmax = 0, f_restarts = 10000;
  std::string f_table;
  bool f_no_zero = false;
  auto* fF = app.add_subcommand("fF", "largest cubes avoiding non-residues (f) and primitive roots (F)");
  fF->add_option("--p", f_p, "odd prime; repeatable");
  fF->add_option("--p-max", f_pmax, "all odd primes up to this bound");
  fF->add_option("--table", f_table, "JSON table reused and extended across runs");
  fF->add_option("--restarts", f_restarts, "greedy restarts above the exact cap")->capture_default_str();
  fF->add_flag("--no-zero-gen", f_no_zero, "forbid 0 as a generator");
  fF->callback([&] { action = [&] { cmd_fF(common, f_p, f_pmax, f_table, f_restarts, f_no_zero, output); }; });

  FieldArgs ff;
  auto* ffield = app.add_subcommand("ffield", "restricted-digit residue counts in F_{p^n}");
  ffield->add_option("--p", ff.p, "characteristic");
  ffield->add_option("--n", ff.n, "extension degree");
  ffield->add_option("--modulus", ff.modulus, "monic modulus, coefficients low to high");
  ffield->add_option("--basis", ff.basis, "basis matrix, row-major power-basis coordinates");
  ffield->add_option("--context", ff.context_path, "field context JSON {p, n, modulus, basis}");
  ffield->add_option("--sets", ff.sets, "digit sets, e.g. \"0,1;1\"");
  ffield->add_option("--family", ff.family_path, "digit sets as a JSON array of arrays");
  ffield->add_option("--set-size", ff.set_size, "seeded random digit sets of this size");
  ffield->add_option("--trials", ff.trials, "number of random families")->capture_default_str();
  ffield->add_option("--epsilon", ff.epsilon, "epsilon of the size conditions")->capture_default_str();
  ffield->callback([&] { action = [&] { cmd_ffield(common, ff, output); }; });

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out_stream << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  }

  try {
    action();
    const CLI::App* sub = app.get_subcommands().front();
    const Json config = collect_config(app, *sub, common);
    const Json manifest = report::manifest(common.seed, config);

    std::ofstream file;
    if (!common.out.empty()) {
      file.open(common.out);
      if (!file) throw ValidationError("cannot write " + common.out);
    }
    std::ostream& os = common.out.empty() ? out_stream : file;
    if (common.format == "json") {
      Json doc;
      doc["manifest"] = manifest;
      doc["records"] = output.records;
      os << doc.dump(2) << '\n';
    } else {
      os << "# " << manifest.dump() << '\n';
      output.csv.write(os);
    }
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const ResourceError& e) {
    err << "resource cap: " << e.what() << '\n';
    return kExitResource;
  }
  return kExitOk;
}

}  // namespace digitsieve::cli
