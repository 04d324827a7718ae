#pragma once

#include <string>
#include <vector>

namespace hsu2::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kFailure = 1;
inline constexpr int kUsage = 2;

int run(int argc, char** argv);
int run(const std::vector<std::string>& args);

}  // namespace hsu2::cli
