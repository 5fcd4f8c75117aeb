#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "digitsieve/bounds.hpp"
#include "digitsieve/char_sums.hpp"
#include "digitsieve/ffield.hpp"
#include "digitsieve/hilbert.hpp"
#include "digitsieve/mult_stats.hpp"

// JSON and CSV serialization of experiment results. Keys keep insertion order
// so identical inputs produce byte-identical documents.

namespace digitsieve::report {

using Json = nlohmann::ordered_json;

inline constexpr std::string_view kVersion = "1.0.0";
inline constexpr int kSchemaVersion = 1;

// FNV-1a over the compact dump of `config`.
std::uint64_t config_hash(const Json& config);
std::string hex64(std::uint64_t v);

Json manifest(std::uint64_t seed, const Json& config);

Json pattern_fields(const PatternSummary& p);
Json to_json(const SquarefreeReport& r, double elapsed_ms);
Json to_json(const EulerReport& r, double elapsed_ms);
Json to_json(const HilbertCube& cube);
Json to_json(const CubeBoundsReport& r);
Json to_json(const FieldContext& ctx);
FieldContext field_context_from_json(const Json& j);
Json to_json(const DigitSetFamily& family);
DigitSetFamily family_from_json(const Json& j);
Json to_json(const ConditionReport& r);
Json to_json(const IndexSplit& s);
Json to_json(const LatticeMinima2D& m);

// Shortest round-trip decimal form.
std::string format_number(double v);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  void write(std::ostream& os) const;
};

}  // namespace digitsieve::report
