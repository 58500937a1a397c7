#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qmaj {

// Exit codes: 0 success, 2 usage or configuration error, 3 parse error,
// 4 numeric, normalization, grid-mismatch or unsupported-operation error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitParse = 3;
inline constexpr int kExitNumeric = 4;

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qmaj
