#include "cubeterm/constructions.hpp"

#include <bit>
#include <numeric>

namespace cubeterm {

namespace {

Signature numbered_signature(const std::vector<int>& arities) {
    std::vector<OperationSymbol> symbols;
    for (size_t i = 0; i < arities.size(); ++i)
        symbols.push_back({"f" + std::to_string(i + 1), arities[i]});
    return Signature(std::move(symbols));
}

} // namespace

Example51 example_51(const std::vector<int>& arities) {
    if (arities.empty()) raise(Errc::DegenerateSignature, "at least one operation symbol required");
    Signature sig = numbered_signature(arities);
    auto stats = signature_stats(sig);
    if (stats.cube_bound <= 2)
        raise(Errc::DegenerateSignature,
              "the construction needs a signature bound above 2; use the Z3 groupoid for the binary case");
    const int n = stats.cube_bound - 1;
    if (n > 16 || n * stats.max_arity > 24)
        raise(Errc::InvalidArgument, "construction too large to tabulate");
    const int k = 1 << n;

    Example51 out;
    int offset = 0;
    for (int a : arities) {
        std::vector<int> cell(static_cast<size_t>(a - 1));
        std::iota(cell.begin(), cell.end(), offset);
        offset += a - 1;
        out.cells.push_back(std::move(cell));
    }

    std::vector<std::vector<int>> tables(arities.size());
    for (size_t op = 0; op < arities.size(); ++op) {
        const int na = arities[op];
        const int lo = out.cells[op].front();
        const int hi = out.cells[op].back();
        size_t total = 1;
        for (int i = 0; i < na; ++i) total *= static_cast<size_t>(k);
        tables[op].resize(total);
        std::vector<int> args(static_cast<size_t>(na), 0);
        for (size_t idx = 0; idx < total; ++idx) {
            int result = 0;
            for (int j = 0; j < n; ++j) {
                int ones = 0;
                for (int i = 0; i < na; ++i) ones += (args[static_cast<size_t>(i)] >> j) & 1;
                bool own = j >= lo && j <= hi;
                // own coordinates: canonical near-unanimity (two agreeing 1s);
                // the rest: join
                int bit = own ? (ones >= 2) : (ones >= 1);
                result |= bit << j;
            }
            tables[op][idx] = result;
            int pos = na - 1;
            while (pos >= 0 && ++args[static_cast<size_t>(pos)] == k) {
                args[static_cast<size_t>(pos)] = 0;
                --pos;
            }
        }
    }
    out.algebra = FiniteAlgebra(k, sig, std::move(tables));
    for (int j = 0; j < n; ++j) {
        Subset u(k);
        for (int e = 0; e < k; ++e)
            if ((e >> j) & 1) u.add(e);
        out.bases.push_back(std::move(u));
    }
    out.cross = Cross(out.bases);
    return out;
}

Example52 example_52(const std::vector<int>& arities) {
    if (arities.empty()) raise(Errc::InvalidArgument, "at least one operation symbol required");
    for (size_t i = 1; i < arities.size(); ++i)
        if (arities[i] > arities[i - 1]) raise(Errc::InvalidArgument, "arities must be sorted descending");
    const int n1 = arities[0];
    if (n1 < 3)
        raise(Errc::LeadingArityTooSmall,
              "leading arity must be >= 3; use the Z3-with-projections variant for all-binary signatures");
    Signature sig = numbered_signature(arities);
    std::vector<std::vector<int>> tables(arities.size());
    for (size_t op = 0; op < arities.size(); ++op) {
        const int na = arities[op];
        tables[op].resize(size_t{1} << na);
        for (size_t idx = 0; idx < tables[op].size(); ++idx) {
            // argument i is bit (na-1-i) of idx (row-major)
            if (op == 0) {
                int ones = std::popcount(idx);
                tables[op][idx] = ones >= 2 ? 1 : 0;
            } else {
                tables[op][idx] = (idx >> (na - 1)) & 1u;  // first projection
            }
        }
    }
    return Example52{FiniteAlgebra(2, sig, std::move(tables)), n1 - 1};
}

FiniteAlgebra example_52_maltsev(int symbol_count) {
    if (symbol_count < 1) raise(Errc::InvalidArgument, "at least one symbol required");
    Signature sig = numbered_signature(std::vector<int>(static_cast<size_t>(symbol_count), 2));
    std::vector<std::vector<int>> tables(static_cast<size_t>(symbol_count));
    for (int op = 0; op < symbol_count; ++op) {
        tables[static_cast<size_t>(op)].resize(9);
        for (int x = 0; x < 3; ++x)
            for (int y = 0; y < 3; ++y)
                tables[static_cast<size_t>(op)][static_cast<size_t>(x * 3 + y)] =
                    op == 0 ? (2 * x + 2 * y) % 3 : x;
    }
    return FiniteAlgebra(3, sig, std::move(tables));
}

FiniteAlgebra z3_maltsev_groupoid() {
    std::vector<int> table(9);
    for (int x = 0; x < 3; ++x)
        for (int y = 0; y < 3; ++y) table[static_cast<size_t>(x * 3 + y)] = (2 * x + 2 * y) % 3;
    return FiniteAlgebra(3, Signature({{"f", 2}}), {std::move(table)});
}

FiniteAlgebra two_element_semilattice(int d) {
    if (d < 2) raise(Errc::InvalidArgument, "operation arity must be >= 2");
    if (d > 24) raise(Errc::InvalidArgument, "arity too large to tabulate");
    std::vector<int> table(size_t{1} << d, 0);
    table.back() = 1;
    return FiniteAlgebra(2, Signature({{"w", d}}), {std::move(table)});
}

} // namespace cubeterm
