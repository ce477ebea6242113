#include "cubeterm/sweep.hpp"

#include <thread>

namespace cubeterm {

namespace {

std::vector<int> groupoid_table(int k, uint64_t index) {
    std::vector<int> table(static_cast<size_t>(k) * k);
    // fill off-diagonal cells from the least significant digit upward, so the
    // last cell in row-major order varies fastest
    std::vector<size_t> cells;
    for (int x = 0; x < k; ++x)
        for (int y = 0; y < k; ++y)
            if (x != y) cells.push_back(static_cast<size_t>(x * k + y));
    for (size_t c = cells.size(); c-- > 0;) {
        table[cells[c]] = static_cast<int>(index % static_cast<uint64_t>(k));
        index /= static_cast<uint64_t>(k);
    }
    for (int a = 0; a < k; ++a) table[static_cast<size_t>(a * k + a)] = a;
    return table;
}

SweepRow decide_one(int k, uint64_t index, const CubeOptions& options) {
    SweepRow row;
    row.index = index;
    row.table = groupoid_table(k, index);
    FiniteAlgebra alg(k, Signature({{"f", 2}}), {row.table});
    auto m = min_cube_dimension(alg, options);
    row.dimension = m.dimension;
    row.blocker_found = m.blocker.has_value();
    row.undecided = m.undecided;
    row.consistent = !row.undecided && (row.dimension.has_value() != row.blocker_found) &&
                     (!row.dimension || *row.dimension == 2);
    return row;
}

} // namespace

SweepSummary sweep_binary_groupoids(int k, const CubeOptions& options, int threads,
                                    const std::function<void(const SweepRow&)>& row_callback) {
    if (k < 2) raise(Errc::InvalidArgument, "sweep needs a universe of size >= 2");
    uint64_t total = 1;
    for (int c = 0; c < k * (k - 1); ++c) {
        total *= static_cast<uint64_t>(k);
        if (total > 10'000'000) raise(Errc::SearchCapExceeded, "too many groupoids to sweep");
    }

    SweepSummary summary;
    summary.total = total;
    auto account = [&](const SweepRow& row) {
        if (row.undecided)
            ++summary.undecided;
        else if (row.dimension)
            ++summary.maltsev;
        else if (row.blocker_found)
            ++summary.blocked;
        if (!row.consistent && !row.undecided) ++summary.violations;
        if (row_callback) row_callback(row);
    };

    threads = std::max(1, threads);
    if (threads == 1) {
        for (uint64_t i = 0; i < total; ++i) account(decide_one(k, i, options));
        return summary;
    }
    // batches of `threads` algebras, results reported in index order
    for (uint64_t begin = 0; begin < total; begin += static_cast<uint64_t>(threads)) {
        uint64_t end = std::min(total, begin + static_cast<uint64_t>(threads));
        std::vector<SweepRow> rows(static_cast<size_t>(end - begin));
        std::vector<std::thread> pool;
        for (uint64_t i = begin; i < end; ++i)
            pool.emplace_back([&, i] { rows[static_cast<size_t>(i - begin)] = decide_one(k, i, options); });
        for (auto& t : pool) t.join();
        for (const auto& row : rows) account(row);
    }
    return summary;
}

} // namespace cubeterm
