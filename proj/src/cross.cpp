#include "cubeterm/cross.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <set>

namespace cubeterm {

// ---------------------------------------------------------------------------
// Cross

Cross::Cross(std::vector<Subset> bases) : bases_(std::move(bases)) {
    if (bases_.empty()) raise(Errc::InvalidArgument, "a cross needs at least one base");
    int u = bases_[0].universe_size();
    for (size_t i = 0; i < bases_.size(); ++i) {
        if (bases_[i].universe_size() != u) raise(Errc::InvalidArgument, "cross bases over different universes");
        if (!bases_[i].is_proper_nonempty())
            raise(Errc::ImproperBase, "base " + std::to_string(i) + " must be a nonempty proper subset");
    }
}

Cross Cross::symmetric(const Subset& base, int arity) {
    if (arity < 1) raise(Errc::InvalidArgument, "cross arity must be >= 1");
    return Cross(std::vector<Subset>(static_cast<size_t>(arity), base));
}

bool Cross::is_symmetric() const {
    return std::all_of(bases_.begin(), bases_.end(), [&](const Subset& b) { return b == bases_[0]; });
}

bool Cross::is_thin() const {
    return std::all_of(bases_.begin(), bases_.end(), [](const Subset& b) { return b.size() == 1; });
}

bool Cross::contains(std::span<const int> tuple) const {
    if (tuple.size() != bases_.size()) raise(Errc::LengthMismatch, "tuple arity differs from cross arity");
    for (size_t i = 0; i < bases_.size(); ++i)
        if (bases_[i].contains(tuple[i])) return true;
    return false;
}

std::vector<std::vector<int>> Cross::members(uint64_t budget) const {
    const int d = arity();
    const int k = universe_size();
    double worst = 0;
    for (const auto& b : bases_) worst += b.size() * std::pow(static_cast<double>(k), d - 1);
    if (worst > static_cast<double>(budget))
        raise(Errc::BudgetExceeded, "cross has too many members to enumerate");
    std::set<std::vector<int>> out;
    std::vector<int> t(static_cast<size_t>(d), 0);
    for (int block = 0; block < d; ++block) {
        std::fill(t.begin(), t.end(), 0);
        auto block_elems = bases_[static_cast<size_t>(block)].elements();
        size_t bi = 0;
        t[static_cast<size_t>(block)] = block_elems[0];
        while (true) {
            out.insert(t);
            // advance: position `block` runs over its base, others over the universe
            int pos = d - 1;
            for (; pos >= 0; --pos) {
                if (pos == block) {
                    if (++bi < block_elems.size()) {
                        t[static_cast<size_t>(pos)] = block_elems[bi];
                        break;
                    }
                    bi = 0;
                    t[static_cast<size_t>(pos)] = block_elems[0];
                } else {
                    if (++t[static_cast<size_t>(pos)] < k) break;
                    t[static_cast<size_t>(pos)] = 0;
                }
            }
            if (pos < 0) break;
        }
    }
    return {out.begin(), out.end()};
}

// ---------------------------------------------------------------------------
// Absorption

bool is_absorbing_in_set(const FiniteAlgebra& algebra, size_t op, uint32_t variable_mask, const Subset& u) {
    const int n = algebra.arity(op);
    const int k = algebra.size();
    if (variable_mask == 0 || variable_mask >= (1u << n))
        raise(Errc::InvalidArgument, "variable mask out of range");
    auto constrained = u.elements();
    std::vector<size_t> pick(static_cast<size_t>(n), 0);
    std::vector<int> args(static_cast<size_t>(n), 0);
    while (true) {
        for (int i = 0; i < n; ++i)
            args[static_cast<size_t>(i)] = (variable_mask >> i) & 1u
                                               ? constrained[pick[static_cast<size_t>(i)]]
                                               : static_cast<int>(pick[static_cast<size_t>(i)]);
        if (!u.contains(algebra.apply(op, args))) return false;
        int pos = n - 1;
        for (; pos >= 0; --pos) {
            size_t limit = (variable_mask >> pos) & 1u ? constrained.size() : static_cast<size_t>(k);
            if (++pick[static_cast<size_t>(pos)] < limit) break;
            pick[static_cast<size_t>(pos)] = 0;
        }
        if (pos < 0) break;
    }
    return true;
}

bool is_absorbing(const FiniteAlgebra& algebra, size_t op, int variable, const Subset& u) {
    if (variable < 0 || variable >= algebra.arity(op)) raise(Errc::InvalidArgument, "variable out of range");
    if (!u.is_proper_nonempty()) raise(Errc::ImproperBase, "absorption is defined for nonempty proper subsets");
    return is_absorbing_in_set(algebra, op, 1u << variable, u);
}

bool AbsorptionCache::absorbing_set(size_t op, uint32_t variable_mask, const Subset& u) {
    auto key = std::make_tuple(op, variable_mask, u.words());
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    bool v = is_absorbing_in_set(*algebra_, op, variable_mask, u);
    memo_.emplace(std::move(key), v);
    return v;
}

// ---------------------------------------------------------------------------
// Compatibility via the map criterion

namespace {

void check_cross_fits(const FiniteAlgebra& algebra, const Cross& cross) {
    if (cross.universe_size() != algebra.size())
        raise(Errc::InvalidArgument, "cross universe does not match algebra");
}

/// Lexicographically least argument row with positions of `mask` in U and
/// op(row) outside U. Exists whenever the set-absorption check failed.
std::vector<int> least_violating_row(const FiniteAlgebra& algebra, size_t op, uint32_t mask, const Subset& u) {
    const int n = algebra.arity(op);
    const int k = algebra.size();
    auto constrained = u.elements();
    std::vector<size_t> pick(static_cast<size_t>(n), 0);
    std::vector<int> args(static_cast<size_t>(n), 0);
    while (true) {
        for (int i = 0; i < n; ++i)
            args[static_cast<size_t>(i)] = (mask >> i) & 1u ? constrained[pick[static_cast<size_t>(i)]]
                                                            : static_cast<int>(pick[static_cast<size_t>(i)]);
        if (!u.contains(algebra.apply(op, args))) return args;
        int pos = n - 1;
        for (; pos >= 0; --pos) {
            size_t limit = (mask >> pos) & 1u ? constrained.size() : static_cast<size_t>(k);
            if (++pick[static_cast<size_t>(pos)] < limit) break;
            pick[static_cast<size_t>(pos)] = 0;
        }
        if (pos < 0) break;
    }
    raise(Errc::Inconsistent, "no violating row found although set absorption failed");
}

} // namespace

CompatibilityResult is_compatible_cross(const FiniteAlgebra& algebra, const Cross& cross) {
    check_cross_fits(algebra, cross);
    const int d = cross.arity();
    AbsorptionCache cache(algebra);
    for (size_t op = 0; op < algebra.op_count(); ++op) {
        const int n = algebra.arity(op);
        if (n * std::log2(std::max(2, d)) > 40)
            raise(Errc::BudgetExceeded, "too many maps to enumerate for criterion check");
        std::vector<int> m(static_cast<size_t>(n), 0);
        while (true) {
            // distinct values of m, ascending
            std::vector<int> image = m;
            std::sort(image.begin(), image.end());
            image.erase(std::unique(image.begin(), image.end()), image.end());
            bool ok = false;
            for (int i : image) {
                uint32_t mask = 0;
                for (int j = 0; j < n; ++j)
                    if (m[static_cast<size_t>(j)] == i) mask |= 1u << j;
                if (cache.absorbing_set(op, mask, cross.base(static_cast<size_t>(i)))) {
                    ok = true;
                    break;
                }
            }
            if (!ok) {
                CrossViolation v;
                v.op = op;
                v.map_m = m;
                for (int i : image) {
                    uint32_t mask = 0;
                    for (int j = 0; j < n; ++j)
                        if (m[static_cast<size_t>(j)] == i) mask |= 1u << j;
                    auto row = least_violating_row(algebra, op, mask, cross.base(static_cast<size_t>(i)));
                    v.violating_output.push_back(algebra.apply(op, row));
                    v.row_base.push_back(i);
                    v.rows.push_back(std::move(row));
                }
                return CompatibilityResult{false, std::move(v)};
            }
            int pos = n - 1;
            while (pos >= 0 && ++m[static_cast<size_t>(pos)] == d) {
                m[static_cast<size_t>(pos)] = 0;
                --pos;
            }
            if (pos < 0) break;
        }
    }
    return CompatibilityResult{true, std::nullopt};
}

bool is_compatible_cross_oracle(const FiniteAlgebra& algebra, const Cross& cross, uint64_t budget) {
    check_cross_fits(algebra, cross);
    auto members = Cross(cross).members(budget);
    const size_t count = members.size();
    int max_arity = signature_stats(algebra.signature()).max_arity;
    if (std::pow(static_cast<double>(count), max_arity) > static_cast<double>(budget))
        raise(Errc::BudgetExceeded, "oracle budget exceeded: |Cross|^max_arity too large");
    const int d = cross.arity();
    for (size_t op = 0; op < algebra.op_count(); ++op) {
        const int n = algebra.arity(op);
        std::vector<size_t> sel(static_cast<size_t>(n), 0);
        std::vector<int> args(static_cast<size_t>(n), 0);
        std::vector<int> out(static_cast<size_t>(d), 0);
        while (true) {
            for (int c = 0; c < d; ++c) {
                for (int i = 0; i < n; ++i)
                    args[static_cast<size_t>(i)] = members[sel[static_cast<size_t>(i)]][static_cast<size_t>(c)];
                out[static_cast<size_t>(c)] = algebra.apply(op, args);
            }
            if (!cross.contains(out)) return false;
            int pos = n - 1;
            while (pos >= 0 && ++sel[static_cast<size_t>(pos)] == count) {
                sel[static_cast<size_t>(pos)] = 0;
                --pos;
            }
            if (pos < 0) break;
        }
    }
    return true;
}

// ---------------------------------------------------------------------------
// Deficiency, absorption graph, Hall matching

std::vector<std::vector<int>> absorption_deficiency(const FiniteAlgebra& algebra, const Cross& cross) {
    check_cross_fits(algebra, cross);
    AbsorptionCache cache(algebra);
    std::vector<std::vector<int>> out(algebra.op_count());
    for (size_t op = 0; op < algebra.op_count(); ++op) {
        const int n = algebra.arity(op);
        for (int j = 0; j < cross.arity(); ++j) {
            bool any = false;
            for (int v = 0; v < n && !any; ++v) any = cache.absorbing(op, v, cross.base(static_cast<size_t>(j)));
            if (!any) out[op].push_back(j);
        }
    }
    return out;
}

AbsorptionGraph make_absorption_graph(const FiniteAlgebra& algebra, size_t op, const Cross& cross) {
    check_cross_fits(algebra, cross);
    AbsorptionGraph g;
    g.left_size = algebra.arity(op);
    g.right_size = cross.arity();
    g.adj.resize(static_cast<size_t>(g.left_size));
    AbsorptionCache cache(algebra);
    for (int i = 0; i < g.left_size; ++i)
        for (int j = 0; j < g.right_size; ++j)
            if (!cache.absorbing(op, i, cross.base(static_cast<size_t>(j)))) g.adj[static_cast<size_t>(i)].push_back(j);
    return g;
}

namespace {

bool try_augment(const AbsorptionGraph& g, int left, std::vector<int>& match_left, std::vector<int>& match_right,
                 std::vector<bool>& visited) {
    for (int r : g.adj[static_cast<size_t>(left)]) {
        if (visited[static_cast<size_t>(r)]) continue;
        visited[static_cast<size_t>(r)] = true;
        if (match_right[static_cast<size_t>(r)] < 0 ||
            try_augment(g, match_right[static_cast<size_t>(r)], match_left, match_right, visited)) {
            match_left[static_cast<size_t>(left)] = r;
            match_right[static_cast<size_t>(r)] = left;
            return true;
        }
    }
    return false;
}

} // namespace

HallResult hall_matching(const AbsorptionGraph& graph) {
    HallResult res;
    res.matching.assign(static_cast<size_t>(graph.left_size), -1);
    std::vector<int> match_right(static_cast<size_t>(graph.right_size), -1);
    for (int i = 0; i < graph.left_size; ++i) {
        std::vector<bool> visited(static_cast<size_t>(graph.right_size), false);
        try_augment(graph, i, res.matching, match_right, visited);
    }
    bool all = std::all_of(res.matching.begin(), res.matching.end(), [](int m) { return m >= 0; });
    if (all) {
        res.saturating = true;
        return res;
    }
    // Hall violator: alternate from the unmatched left vertices. Left vertices
    // reached form Y; right vertices reached form K = N(Y), and |K| < |Y|.
    std::vector<bool> left_seen(static_cast<size_t>(graph.left_size), false);
    std::vector<bool> right_seen(static_cast<size_t>(graph.right_size), false);
    std::deque<int> queue;
    for (int i = 0; i < graph.left_size; ++i)
        if (res.matching[static_cast<size_t>(i)] < 0) {
            left_seen[static_cast<size_t>(i)] = true;
            queue.push_back(i);
        }
    while (!queue.empty()) {
        int i = queue.front();
        queue.pop_front();
        for (int r : graph.adj[static_cast<size_t>(i)]) {
            if (right_seen[static_cast<size_t>(r)]) continue;
            right_seen[static_cast<size_t>(r)] = true;
            int back = match_right[static_cast<size_t>(r)];
            if (back >= 0 && !left_seen[static_cast<size_t>(back)]) {
                left_seen[static_cast<size_t>(back)] = true;
                queue.push_back(back);
            }
        }
    }
    for (int i = 0; i < graph.left_size; ++i)
        if (left_seen[static_cast<size_t>(i)]) res.violator_y.push_back(i);
    for (int r = 0; r < graph.right_size; ++r)
        if (right_seen[static_cast<size_t>(r)]) res.neighborhood_k.push_back(r);
    return res;
}

// ---------------------------------------------------------------------------
// Symmetrization and pullback

Symmetrization symmetrize_cross(const FiniteAlgebra& algebra, const Cross& cross) {
    check_cross_fits(algebra, cross);
    auto stats = signature_stats(algebra.signature());
    if (cross.arity() < stats.cube_bound)
        raise(Errc::PreconditionArity, "cross arity " + std::to_string(cross.arity()) +
                                           " is below the signature bound " + std::to_string(stats.cube_bound));
    AbsorptionCache cache(algebra);
    for (int j = 0; j < cross.arity(); ++j) {
        std::vector<int> absorbing(algebra.op_count(), -1);
        bool all = true;
        for (size_t op = 0; op < algebra.op_count() && all; ++op) {
            all = false;
            for (int v = 0; v < algebra.arity(op); ++v) {
                if (cache.absorbing(op, v, cross.base(static_cast<size_t>(j)))) {
                    absorbing[op] = v;
                    all = true;
                    break;
                }
            }
        }
        if (all) return Symmetrization{j, cross.base(static_cast<size_t>(j)), std::move(absorbing)};
    }
    raise(Errc::NoSuchIndex, "no base is absorbed by every operation; the cross is incompatible or this is a bug");
}

Cross pullback_cross(const Homomorphism& hom, const Cross& cross) {
    if (cross.universe_size() != hom.target().size())
        raise(Errc::InvalidArgument, "cross universe does not match homomorphism target");
    std::vector<Subset> bases;
    bases.reserve(static_cast<size_t>(cross.arity()));
    for (int i = 0; i < cross.arity(); ++i) {
        Subset pre = hom.preimage(cross.base(static_cast<size_t>(i)));
        if (!pre.is_proper_nonempty())
            raise(Errc::ImproperBase, "preimage of base " + std::to_string(i) + " is empty or the whole universe");
        bases.push_back(std::move(pre));
    }
    return Cross(std::move(bases));
}

} // namespace cubeterm
