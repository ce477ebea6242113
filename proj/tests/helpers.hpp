#pragma once

#include "cubeterm/algebra.hpp"
#include "cubeterm/subpower.hpp"

#include <random>
#include <set>
#include <vector>

namespace cubeterm::testing {

inline FiniteAlgebra meet_semilattice() {
    return FiniteAlgebra(2, Signature({{"meet", 2}}), {{0, 0, 0, 1}});
}

inline FiniteAlgebra majority_on_two() {
    // maj(x,y,z) on {0,1}, row-major over (x,y,z)
    return FiniteAlgebra(2, Signature({{"maj", 3}}), {{0, 0, 0, 1, 0, 1, 1, 1}});
}

inline FiniteAlgebra chain_meet(int k) {
    std::vector<int> table(static_cast<size_t>(k) * k);
    for (int x = 0; x < k; ++x)
        for (int y = 0; y < k; ++y) table[static_cast<size_t>(x * k + y)] = std::min(x, y);
    return FiniteAlgebra(k, Signature({{"meet", 2}}), {std::move(table)});
}

/// Random idempotent algebra: tables uniform, diagonals forced.
inline FiniteAlgebra random_idempotent_algebra(std::mt19937& rng, int size, const std::vector<int>& arities) {
    std::uniform_int_distribution<int> el(0, size - 1);
    std::vector<OperationSymbol> symbols;
    std::vector<std::vector<int>> tables;
    for (size_t i = 0; i < arities.size(); ++i) {
        symbols.push_back({"f" + std::to_string(i + 1), arities[i]});
        size_t total = 1;
        for (int j = 0; j < arities[i]; ++j) total *= static_cast<size_t>(size);
        std::vector<int> t(total);
        for (auto& v : t) v = el(rng);
        for (int a = 0; a < size; ++a) {
            size_t idx = 0;
            for (int j = 0; j < arities[i]; ++j) idx = idx * static_cast<size_t>(size) + static_cast<size_t>(a);
            t[idx] = a;
        }
        tables.push_back(std::move(t));
    }
    return FiniteAlgebra(size, Signature(std::move(symbols)), std::move(tables));
}

/// Random nonempty proper subset.
inline Subset random_proper_subset(std::mt19937& rng, int size) {
    std::uniform_int_distribution<int> bit(0, 1);
    while (true) {
        Subset s(size);
        for (int e = 0; e < size; ++e)
            if (bit(rng)) s.add(e);
        if (s.is_proper_nonempty()) return s;
    }
}

/// Fixpoint oracle for subpower closure: apply every operation to every
/// argument selection until stable. Independent of the engine's layering,
/// hashing and provenance machinery.
inline std::set<std::vector<int>> naive_close(const FiniteAlgebra& algebra,
                                              const std::vector<std::vector<int>>& generators) {
    std::set<std::vector<int>> closed(generators.begin(), generators.end());
    bool grew = true;
    while (grew) {
        grew = false;
        std::vector<std::vector<int>> current(closed.begin(), closed.end());
        for (size_t op = 0; op < algebra.op_count(); ++op) {
            const int n = algebra.arity(op);
            std::vector<size_t> pick(static_cast<size_t>(n), 0);
            while (true) {
                std::vector<int> out(current[0].size());
                std::vector<int> args(static_cast<size_t>(n));
                for (size_t c = 0; c < out.size(); ++c) {
                    for (int i = 0; i < n; ++i) args[static_cast<size_t>(i)] = current[pick[static_cast<size_t>(i)]][c];
                    out[c] = algebra.apply(op, args);
                }
                if (closed.insert(out).second) grew = true;
                int pos = n - 1;
                while (pos >= 0 && ++pick[static_cast<size_t>(pos)] == current.size()) {
                    pick[static_cast<size_t>(pos)] = 0;
                    --pos;
                }
                if (pos < 0) break;
            }
        }
    }
    return closed;
}

/// Subuniverse oracle: the nonempty fixed points of generate_subuniverse.
inline std::vector<Subset> subuniverses_by_fixpoint(const FiniteAlgebra& algebra) {
    std::vector<Subset> out;
    int k = algebra.size();
    for (uint64_t mask = 1; mask < (uint64_t{1} << k); ++mask) {
        Subset s(k);
        for (int e = 0; e < k; ++e)
            if ((mask >> e) & 1u) s.add(e);
        if (generate_subuniverse(algebra, s) == s) out.push_back(std::move(s));
    }
    std::sort(out.begin(), out.end(), subset_less);
    return out;
}

inline std::set<std::vector<int>> closure_as_set(const ClosureResult& c) {
    std::set<std::vector<int>> out;
    for (size_t i = 0; i < c.size(); ++i) out.insert(c.element(i).as_ints());
    return out;
}

} // namespace cubeterm::testing
