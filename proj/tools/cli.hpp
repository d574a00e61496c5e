#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace adm::cli {

// Exit codes: 0 success, 1 mathematical refusal or a failed verdict,
// 2 unreadable input, malformed JSON or a shape mismatch.
inline constexpr int kOk = 0;
inline constexpr int kRefused = 1;
inline constexpr int kBadInput = 2;

/// Runs one admtool command. `args` excludes the program name. Reports go
/// to `out` as JSON, diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace adm::cli
