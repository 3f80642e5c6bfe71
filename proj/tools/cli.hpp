#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace symdyn::cli {

enum ExitCode : int { kOk = 0, kVerificationFailed = 1, kUsage = 2, kResource = 3 };

/// Runs one command. `args` excludes the program name. Results go to `out`,
/// errors to `err` as a single JSON line {"error": kind, "reason": text}.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Hex SHA-256 of a byte string.
std::string sha256_hex(const std::string& bytes);

}  // namespace symdyn::cli
