#pragma once

namespace fpt {

// Entry point shared by the fpt binary and tests. Returns the process exit
// code: 0 success, 2 validation failure, 3 search/window limits exhausted,
// 4 unreadable or malformed input, 1 anything else.
int run_command(int argc, const char* const* argv);

}  // namespace fpt
