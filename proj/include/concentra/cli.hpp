#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace concentra {

/// Exit codes of the command-line tool.
inline constexpr int kExitPass = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitUsage = 2;

/// Integer argument that may use scientific notation ("1e6"). Throws Error(parse).
std::uint64_t parse_count(const std::string& text);
/// Real argument; "inf" and "infinity" are accepted.
double parse_real(const std::string& text);
/// Splits on sep, trimming blanks; empty pieces are dropped.
std::vector<std::string> split_list(const std::string& text, char sep);

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace concentra
