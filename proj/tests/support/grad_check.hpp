#pragma once

#include <cstdint>

namespace lobarena::testing {

// Builds a seeded random small MLP (1-2 hidden layers, mixed ReLU/sigmoid,
// softmax or linear head by seed parity), computes analytic gradients on a
// random batch, and compares every parameter against central finite
// differences. Returns the maximum relative error over all parameters.
double gradient_check_max_rel_err(std::uint64_t seed);

}  // namespace lobarena::testing
