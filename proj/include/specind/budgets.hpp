#pragma once

#include <cstddef>

namespace specind {

/// Resource caps for enumeration-heavy operations. Defaults are sized for
/// desk-scale experiments; the CLI can override them from flags or the
/// SPECIND_BUDGET_* environment variables.
struct Budgets {
    std::size_t state_evals = std::size_t{1} << 22; // brute-force Gibbs states
    std::size_t tree_nodes = 2'000'000;             // walk-tree nodes per tree
    std::size_t matrix_cells = 50'000'000;          // dense matrix cells (H, W^(k))
    std::size_t chain_states = std::size_t{1} << 14; // exact chain support size
};

} // namespace specind
