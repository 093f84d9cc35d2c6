#pragma once

#include <ostream>

namespace fpt {

// Acceptance suite.  Each check prints exactly one line, "pass <name>: note"
// or "FAIL <name>: reason"; seeds are fixed, so the output is byte-stable.
// Returns the number of failing checks.
int run_selftest(std::ostream& out);

}  // namespace fpt
