#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cmc::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDiagnostics = 1;
inline constexpr int kExitUnanswered = 2;
inline constexpr int kExitUsage = 64;

// `cmc check|compile|serve ...`. Machine-readable output goes to `out`,
// diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace cmc::cli
