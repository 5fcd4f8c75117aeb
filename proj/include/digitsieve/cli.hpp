#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace digitsieve::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitResource = 1;
inline constexpr int kExitValidation = 2;

// Parses arguments (without the program name), runs one subcommand and writes
// the report to `out` or to the --out file. Diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace digitsieve::cli
