#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace pencil::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;
inline constexpr int kExitNumeric = 3;

/// Runs one subcommand.  `args` excludes the program name.  The problem JSON
/// is read from --input, or from `in` when --input is absent or "-".
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

} // namespace pencil::cli
