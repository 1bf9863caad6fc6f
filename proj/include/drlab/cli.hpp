#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace drlab {

inline constexpr const char* kToolVersion = "0.1.0";

/// Runs one command line (without the program name). Returns the exit code:
/// 0 success, 1 verification failure, 2 input error, 3 domain error,
/// 4 resource error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Hex SHA-256 of a byte string.
std::string sha256_hex(const std::string& data);

} // namespace drlab
