#pragma once

#include "cubeterm/algebra.hpp"

#include <map>
#include <optional>
#include <vector>

namespace cubeterm {

/// Budget for the direct membership oracle: |Cross|^max_arity must stay below it.
inline constexpr uint64_t kDefaultOracleBudget = 50'000'000;

/// Cross(U_0,...,U_{d-1}): the union of d blocks, block i full in every
/// coordinate except the i-th, where it is U_i. Every base must be a nonempty
/// proper subset of the universe. Arity 1 is allowed (the cross is then just
/// its base).
class Cross {
public:
    Cross() = default;
    explicit Cross(std::vector<Subset> bases);
    static Cross symmetric(const Subset& base, int arity);

    int arity() const { return static_cast<int>(bases_.size()); }
    int universe_size() const { return bases_.empty() ? 0 : bases_[0].universe_size(); }
    const Subset& base(size_t i) const { return bases_[i]; }
    const std::vector<Subset>& bases() const { return bases_; }

    bool is_symmetric() const;
    bool is_thin() const;

    /// Membership of a d-tuple: some coordinate i lies in U_i.
    bool contains(std::span<const int> tuple) const;

    /// All member tuples, deduplicated, in lexicographic order. Throws
    /// BudgetExceeded if the member count would exceed `budget`.
    std::vector<std::vector<int>> members(uint64_t budget = kDefaultOracleBudget) const;

    bool operator==(const Cross&) const = default;

private:
    std::vector<Subset> bases_;
};

/// True iff placing any element of U in variable i of the operation forces
/// the output into U; checked exhaustively over |A|^(n-1) * |U| tuples.
bool is_absorbing(const FiniteAlgebra& algebra, size_t op, int variable, const Subset& u);

/// Generalization used by compatibility checking: the positions in
/// `variable_mask` are restricted to U simultaneously.
bool is_absorbing_in_set(const FiniteAlgebra& algebra, size_t op, uint32_t variable_mask, const Subset& u);

/// Memoizes absorption queries per (operation, variable mask, base bits);
/// deficiency and symmetrization reuse them heavily.
class AbsorptionCache {
public:
    explicit AbsorptionCache(const FiniteAlgebra& algebra) : algebra_(&algebra) {}
    bool absorbing(size_t op, int variable, const Subset& u) { return absorbing_set(op, 1u << variable, u); }
    bool absorbing_set(size_t op, uint32_t variable_mask, const Subset& u);

private:
    const FiniteAlgebra* algebra_;
    std::map<std::tuple<size_t, uint32_t, std::vector<uint64_t>>, bool> memo_;
};

/// Failure certificate for compatibility: the function m from variable
/// positions to base indices for which the implication fails at every
/// i in im(m), together with one witnessing argument row per such i and the
/// violating output column. The rows' columns lie in the cross; the output
/// column does not.
struct CrossViolation {
    size_t op = 0;
    std::vector<int> map_m;                // length n, values in [0, d)
    std::vector<int> row_base;             // the i in im(m), ascending
    std::vector<std::vector<int>> rows;    // per i, the argument row (length n)
    std::vector<int> violating_output;     // per i, op(row) which lands outside U_i
};

struct CompatibilityResult {
    bool compatible = false;
    std::optional<CrossViolation> violation;
};

/// Decides compatibility by the per-operation criterion: for every function
/// m: variables -> base indices there must be some i in im(m) such that
/// arguments with all m^{-1}(i)-positions in U_i evaluate into U_i. Checking
/// fundamental operations suffices for all term operations because relations
/// compatible with each operation are compatible with their compositions.
/// Maps are enumerated lexicographically and the first failing map is
/// returned, with lexicographically least witness rows.
CompatibilityResult is_compatible_cross(const FiniteAlgebra& algebra, const Cross& cross);

/// Direct oracle: enumerates the cross's member tuples and applies every
/// operation to every argument selection. Throws BudgetExceeded when
/// |Cross|^max_arity exceeds the budget.
bool is_compatible_cross_oracle(const FiniteAlgebra& algebra, const Cross& cross,
                                uint64_t budget = kDefaultOracleBudget);

/// Per operation, the base indices j such that no variable is U_j-absorbing.
/// For a compatible cross and an operation of arity n <= d, each set has at
/// most n-1 indices.
std::vector<std::vector<int>> absorption_deficiency(const FiniteAlgebra& algebra, const Cross& cross);

/// Bipartite graph of one operation against the bases of a cross: edge (i, j)
/// present iff the operation is NOT U_j-absorbing in variable i.
struct AbsorptionGraph {
    int left_size = 0;   // variable positions
    int right_size = 0;  // base indices
    std::vector<std::vector<int>> adj;  // adj[i] = sorted right neighbours of i
};

AbsorptionGraph make_absorption_graph(const FiniteAlgebra& algebra, size_t op, const Cross& cross);

/// Maximum bipartite matching by augmenting paths. If the left side cannot be
/// saturated, returns a Hall violator: a left set Y whose neighbourhood K has
/// |K| < |Y|, extracted from the final alternating-reachability partition.
struct HallResult {
    bool saturating = false;
    std::vector<int> matching;      // left -> right, -1 if unmatched
    std::vector<int> violator_y;    // nonempty iff !saturating
    std::vector<int> neighborhood_k;
};

HallResult hall_matching(const AbsorptionGraph& graph);

/// For a compatible cross of arity >= the signature's cube bound, some base
/// U_j is absorbed by every operation in some variable; that base heads a
/// blocker (U_j, A). Returns the index, the base, and the per-operation
/// absorbing variable.
struct Symmetrization {
    int base_index = 0;
    Subset base;
    std::vector<int> absorbing_variable;  // per operation
};

Symmetrization symmetrize_cross(const FiniteAlgebra& algebra, const Cross& cross);

/// Preimage cross: bases phi^{-1}(U_i). Throws ImproperBase when a preimage
/// is empty or the whole source universe. Compatibility over the target
/// transfers to the source.
Cross pullback_cross(const Homomorphism& hom, const Cross& cross);

} // namespace cubeterm
