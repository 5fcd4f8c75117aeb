#include "digitsieve/report.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>

#include "digitsieve/error.hpp"

namespace digitsieve::report {

std::uint64_t config_hash(const Json& config) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : config.dump()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

Json manifest(std::uint64_t seed, const Json& config) {
  Json m;
  m["version"] = kVersion;
  m["schema_version"] = kSchemaVersion;
  m["seed"] = seed;
  m["config_hash"] = hex64(config_hash(config));
  m["config"] = config;
  return m;
}

Json pattern_fields(const PatternSummary& p) {
  Json j;
  j["pattern"] = p.text;
  j["n"] = p.n;
  j["k"] = p.k;
  j["kappa"] = p.kappa;
  j["starred"] = p.starred;
  return j;
}

Json to_json(const SquarefreeReport& r, double elapsed_ms) {
  Json j;
  j["statistic"] = "squarefree";
  j.update(pattern_fields(r.pattern));
  j["value"] = r.count;
  j["total"] = r.total;
  j["ratio"] = r.ratio;
  j["predicted"] = r.predicted;
  j["method"] = to_string(r.method);
  j["outside_proved_range"] = r.outside_proved_range;
  j["elapsed_ms"] = elapsed_ms;
  return j;
}

Json to_json(const EulerReport& r, double elapsed_ms) {
  Json j;
  j["statistic"] = "euler";
  j.update(pattern_fields(r.pattern));
  j["value"] = r.sum;
  j["value_moebius"] = r.sum_moebius;
  if (r.exact) j["exact"] = *r.exact;
  j["total"] = r.total;
  j["ratio"] = r.ratio;
  j["predicted"] = r.predicted;
  j["method"] = r.exact_mode ? "factorization+moebius(exact)" : "factorization+moebius(float)";
  j["route_relative_difference"] = r.route_relative_difference;
  j["zero_excluded"] = r.zero_excluded;
  j["outside_proved_range"] = r.outside_proved_range;
  j["warnings"] = r.warnings;
  j["elapsed_ms"] = elapsed_ms;
  return j;
}

Json to_json(const HilbertCube& cube) {
  Json j;
  j["p"] = cube.p;
  j["a0"] = cube.a0;
  j["gens"] = cube.gens;
  j["elements"] = cube.elements.elements();
  return j;
}

Json to_json(const CubeBoundsReport& r) {
  Json j;
  j["p"] = r.p;
  j["f"] = r.f.dimension;
  j["f_exact"] = r.f.exact;
  j["f_witness"] = to_json(r.f.witness);
  j["F"] = r.F.dimension;
  j["F_exact"] = r.F.exact;
  j["F_witness"] = to_json(r.F.witness);
  j["bound_12p14"] = r.bound_12p14;
  j["bound_p319"] = r.bound_p319;
  j["allow_zero_gen"] = r.f.allow_zero_gen;
  return j;
}

Json to_json(const FieldContext& ctx) {
  Json j;
  j["p"] = ctx.p();
  j["n"] = ctx.degree();
  j["modulus"] = ctx.modulus();
  Json rows = Json::array();
  for (const auto& row : ctx.basis_rows())
    for (auto v : row) rows.push_back(v);
  j["basis"] = rows;
  return j;
}

FieldContext field_context_from_json(const Json& j) {
  try {
    const auto p = j.at("p").get<std::uint64_t>();
    const auto n = j.at("n").get<int>();
    auto modulus = j.at("modulus").get<std::vector<std::uint64_t>>();
    if (!j.contains("basis")) return FieldContext(p, std::move(modulus));
    const auto flat = j.at("basis").get<std::vector<std::uint64_t>>();
    if (n < 1 || flat.size() != static_cast<std::size_t>(n) * n) throw ValidationError("basis must have n*n entries");
    std::vector<std::vector<std::uint64_t>> rows(n);
    for (int i = 0; i < n; ++i) rows[i].assign(flat.begin() + i * n, flat.begin() + (i + 1) * n);
    return FieldContext(p, std::move(modulus), std::move(rows));
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed field context: ") + e.what());
  }
}

Json to_json(const DigitSetFamily& family) { return Json(family.sets); }

DigitSetFamily family_from_json(const Json& j) {
  try {
    return {j.get<std::vector<std::vector<std::uint64_t>>>()};
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed digit set family: ") + e.what());
  }
}

Json to_json(const ConditionReport& r) {
  Json j;
  j["epsilon"] = r.epsilon;
  j["log_p_product"] = r.log_p_product;
  j["product_exponent"] = r.product_exponent;
  j["product_condition"] = r.product_condition;
  j["min_size"] = r.min_size;
  j["min_size_threshold"] = r.min_size_threshold;
  j["min_condition"] = r.min_condition;
  j["linear_threshold"] = r.linear_threshold;
  j["linear_condition"] = r.linear_condition;
  j["regime"] = r.regime;
  return j;
}

Json to_json(const IndexSplit& s) {
  Json j;
  j["m"] = s.m;
  j["n0"] = s.n0;
  j["large_n_branch"] = s.large_n_branch;
  j["large"] = s.large;
  j["rest"] = s.rest;
  j["log_product_large"] = s.log_product_large;
  j["log_product_bound"] = s.log_product_bound;
  j["product_bound_holds"] = s.product_bound_holds;
  return j;
}

Json to_json(const LatticeMinima2D& m) {
  Json j;
  j["basis"] = {{m.basis[0].x, m.basis[0].y}, {m.basis[1].x, m.basis[1].y}};
  j["lambda1"] = m.lambda1;
  j["lambda2"] = m.lambda2;
  j["shortest"] = {m.shortest.x, m.shortest.y};
  return j;
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void CsvTable::write(std::ostream& os) const {
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) os << ',';
      const bool quote = cells[i].find_first_of(",\"\n") != std::string::npos;
      if (!quote) {
        os << cells[i];
        continue;
      }
      os << '"';
      for (char c : cells[i]) {
        if (c == '"') os << '"';
        os << c;
      }
      os << '"';
    }
    os << '\n';
  };
  line(header);
  for (const auto& r : rows) line(r);
}

}  // namespace digitsieve::report
