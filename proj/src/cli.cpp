#include "fpt/cli.hpp"

namespace fpt {
int run_command(int, const char* const*) { return 1; }
}
