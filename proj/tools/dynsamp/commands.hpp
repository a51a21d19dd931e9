#pragma once

#include <string>
#include <vector>

namespace dynsamp::cli {

// Process exit codes.
enum ExitCode : int {
    kSuccess = 0,
    kFailure = 1,
    kUnrecoverable = 2,
    kConfigError = 3,
    kIoError = 4,
};

// Entry point shared by the executable and the tests. args[0] is the
// program name.
int run(const std::vector<std::string>& args);

} // namespace dynsamp::cli
