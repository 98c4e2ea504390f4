#pragma once

#include <string>
#include <vector>

namespace dimlab {

/// Entry point behind the dimlab binary. Exit codes: 0 success, 1 rejected
/// certificate or failed verification, 2 usage error. Human-readable
/// output goes to stderr; machine output goes to files or stdout.
int cli_main(const std::vector<std::string>& args);
int cli_main(int argc, const char* const* argv);

}  // namespace dimlab
