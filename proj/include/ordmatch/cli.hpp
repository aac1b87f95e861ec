#pragma once

#include <iosfwd>

namespace ordmatch::cli {

inline constexpr int kPass = 0;
inline constexpr int kViolation = 1;
inline constexpr int kUsage = 2;
inline constexpr int kBudget = 3;

/// Runs one command. Reports go to `out` (or the --out file), diagnostics to
/// `err`. Returns the process exit status.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ordmatch::cli
