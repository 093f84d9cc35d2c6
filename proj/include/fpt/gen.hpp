#pragma once

#include <string>
#include <vector>

#include "fpt/rep.hpp"

namespace fpt {

// Deterministic instance generators.  Every returned rep is validated.
//   trivial          zero generator
//   e2               one nilpotent block below the diagonal
//   above-diagonal   one nilpotent block above the diagonal
//   shifted-lattice  one nilpotent block reaching a negative row
//   toeplitz         equal nilpotent blocks repeated along the diagonal,
//                    nilpotency index min(d, p)
//   single-block     seeded square-zero block at a seeded position
//   random           seeded square-zero blocks spread along a diagonal,
//                    validated and retried
Rep gen_instance(const std::string& family, u32 p, int d, u64 seed);

struct NamedInstance {
  std::string name;
  std::string family;
  long long seed = 0;
  Rep rep;
};

// The instance suite the acceptance checks run on.
const std::vector<NamedInstance>& shipped_instances();

}  // namespace fpt
