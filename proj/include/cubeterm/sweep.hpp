#pragma once

#include "cubeterm/cube.hpp"

#include <functional>

namespace cubeterm {

/// One groupoid's worth of sweep output.
struct SweepRow {
    uint64_t index = 0;              // lexicographic rank over the off-diagonal cells
    std::vector<int> table;          // full k*k table, row-major
    std::optional<int> dimension;    // min cube dimension; empty = none
    bool blocker_found = false;
    bool undecided = false;
    bool consistent = false;         // dichotomy holds for this algebra
};

struct SweepSummary {
    uint64_t total = 0;
    uint64_t maltsev = 0;      // minimal dimension 2
    uint64_t blocked = 0;      // blocker, no cube term
    uint64_t undecided = 0;
    uint64_t violations = 0;   // dichotomy failures
};

/// Enumerates every idempotent binary operation on {0..k-1} (off-diagonal
/// cells counted in row-major order, base k) and decides each one. For a
/// single binary symbol the minimal cube dimension must be 2 or nothing, and
/// "nothing" must coincide with a blocker. Rows are delivered in index order
/// even when `threads` > 1.
SweepSummary sweep_binary_groupoids(int k, const CubeOptions& options, int threads,
                                    const std::function<void(const SweepRow&)>& row_callback);

} // namespace cubeterm
