#pragma once

#include <string>
#include <vector>

namespace bellnoise {

// CLI entry point. Exit code 0 on success, 1 on domain errors, 2 on
// usage errors.
int run_cli(int argc, const char* const* argv);

// Same, for in-process invocation; args exclude the program name.
int run_cli(const std::vector<std::string>& args);

}  // namespace bellnoise
