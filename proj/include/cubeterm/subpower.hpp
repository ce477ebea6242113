#pragma once

#include "cubeterm/algebra.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace cubeterm {

/// Default ceiling on closure size. Desk-scale bound with loud failure.
inline constexpr uint64_t kDefaultClosureCap = 10'000'000;

/// An element of A^N with entries in 0..k-1.
class PowerTuple {
public:
    PowerTuple() = default;
    explicit PowerTuple(std::vector<uint16_t> entries) : entries_(std::move(entries)) {}
    static PowerTuple from(const std::vector<int>& v);

    size_t length() const { return entries_.size(); }
    uint16_t operator[](size_t i) const { return entries_[i]; }
    const std::vector<uint16_t>& entries() const { return entries_; }
    std::vector<int> as_ints() const { return {entries_.begin(), entries_.end()}; }

    bool operator==(const PowerTuple&) const = default;

private:
    std::vector<uint16_t> entries_;
};

/// One node of a term DAG: a generator leaf or an operation applied to
/// earlier nodes. Children refer to node ids within the same witness.
struct TermNode {
    int op = -1;                     // -1 for a leaf
    uint32_t leaf = 0;               // generator index, meaningful for leaves
    std::vector<uint32_t> children;  // ids of argument nodes
};

/// A DAG of operation applications over generator leaves. Nodes are stored in
/// topological order (children precede parents); subterms are shared rather
/// than copied.
class TermWitness {
public:
    TermWitness() = default;
    TermWitness(std::vector<TermNode> nodes, uint32_t root);

    const std::vector<TermNode>& nodes() const { return nodes_; }
    uint32_t root() const { return root_; }
    size_t depth() const;

    /// Generator indices appearing as leaves, ascending, deduplicated.
    std::vector<uint32_t> distinct_leaves() const;

    /// Evaluates bottom-up with leaf i taking values_by_leaf[i].
    int evaluate_by_leaf(const FiniteAlgebra& algebra, std::span<const int> values_by_leaf) const;

    /// Coordinatewise evaluation over tuples; leaf i takes tuples_by_leaf[i].
    PowerTuple evaluate_tuples(const FiniteAlgebra& algebra, std::span<const PowerTuple> tuples_by_leaf) const;

    /// Textual form like f(f(x,z),y); leaf i prints as leaf_names[i].
    std::string to_string(const FiniteAlgebra& algebra, const std::vector<std::string>& leaf_names) const;

private:
    std::vector<TermNode> nodes_;
    uint32_t root_ = 0;
};

/// Evaluates a witness over single elements, with the i-th smallest distinct
/// leaf bound to args[i]. Throws ArityMismatch unless the argument count
/// equals the number of distinct leaves.
int evaluate_witness(const TermWitness& witness, const FiniteAlgebra& algebra, std::span<const int> args);

/// A generated subalgebra of A^N: its elements, plus per-element provenance
/// from which a TermWitness can be extracted. Element ids follow discovery
/// order (generators first), which is the BFS layering, so extracted
/// witnesses have minimal composition depth.
class ClosureResult {
public:
    ClosureResult() = default;

    size_t size() const { return prov_op_.size(); }
    size_t tuple_length() const { return len_; }
    int universe() const { return universe_; }
    size_t generator_count() const { return generator_ids_.size(); }

    PowerTuple element(size_t id) const;
    std::span<const uint16_t> element_entries(size_t id) const;
    std::optional<size_t> index_of(const PowerTuple& t) const;

    /// Element id of the i-th input generator (duplicates collapse).
    uint32_t generator_id(size_t input_index) const { return generator_ids_[input_index]; }

    TermWitness witness(size_t id) const;

private:
    friend class ClosureBuilder;

    uint64_t key_of(const uint16_t* t) const;
    std::optional<uint32_t> lookup(const uint16_t* t) const;

    int universe_ = 0;
    size_t len_ = 0;
    int key_bits_ = 0;                        // bits per entry when a tuple packs into one word, else 0
    std::vector<uint16_t> data_;              // len_ entries per element
    std::vector<int32_t> prov_op_;            // -1 for generator leaves
    std::vector<uint32_t> prov_begin_;        // into args pool; generator input index for leaves
    std::vector<uint8_t> prov_nargs_;         // argument count (0 for leaves)
    std::vector<uint32_t> args_pool_;
    std::vector<uint32_t> generator_ids_;
    // Dedup index: packed word or byte hash -> first id, with a rare overflow
    // chain for hash collisions.
    std::unordered_map<uint64_t, uint32_t> first_;
    std::unordered_map<uint64_t, std::vector<uint32_t>> more_;
};

enum class CloseStatus {
    Closed,       // full closure computed
    FoundTarget,  // stopped at first discovery of the target
    CapExceeded,  // closure would exceed the cap; result is partial
};

struct CloseOptions {
    uint64_t cap = kDefaultClosureCap;
    int threads = 1;       // frontier expansion may run in parallel; results are identical
    uint64_t work_cap = 0; // max operation applications, 0 = unlimited; exceeding it is CapExceeded
};

struct CloseOutcome {
    CloseStatus status = CloseStatus::Closed;
    ClosureResult closure;                      // full for Closed, partial otherwise
    std::optional<TermWitness> target_witness;  // set iff FoundTarget
};

/// Breadth-first closure of `generators` in A^N under coordinatewise
/// application of every operation. If `target` is given, stops at its first
/// discovery and returns a minimal-depth witness. Deterministic for any
/// thread count: candidates commit in a fixed enumeration order.
CloseOutcome close(const FiniteAlgebra& algebra, const std::vector<PowerTuple>& generators,
                   const std::optional<PowerTuple>& target = std::nullopt, const CloseOptions& options = {});

/// The free algebra on two generators, realized as the subalgebra of A^{A^2}
/// generated by the projections x, y: at coordinate (a, b) (index a*k + b),
/// x has value a and y has value b. Elements are exactly the binary term
/// operations. Throws CapExceeded if the closure exceeds the cap.
ClosureResult free_algebra_on_two(const FiniteAlgebra& algebra, const CloseOptions& options = {});

/// A generated subpower re-indexed as a finite algebra: element i of the
/// algebra is closure element i, with tables materialized by coordinatewise
/// application.
struct MaterializedSubpower {
    FiniteAlgebra algebra;
    ClosureResult closure;
    std::vector<uint32_t> generator_ids;
};

MaterializedSubpower materialize_subpower(const FiniteAlgebra& base, ClosureResult closure,
                                          uint64_t element_cap = 65536);

} // namespace cubeterm
