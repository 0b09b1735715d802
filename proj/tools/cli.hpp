#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace godds::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitBandViolated = 3;

// `args` excludes the program name. Exactly one JSON document goes to `out` on
// success; logs, usage text and errors go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

std::string sha256_file(const std::string& path);

}  // namespace godds::cli
