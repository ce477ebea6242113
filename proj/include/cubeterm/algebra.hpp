#pragma once

#include "cubeterm/errors.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace cubeterm {

/// Default ceiling for exhaustive subuniverse enumeration. The searches are
/// exponential in the universe size, so exceeding the cap is a loud error,
/// never silent truncation.
inline constexpr int kDefaultSubuniverseCap = 12;

struct OperationSymbol {
    std::string name;
    int arity = 0;

    bool operator==(const OperationSymbol&) const = default;
};

/// An ordered list of operation symbols, every arity >= 2 (suitable for
/// idempotent varieties). Names must be unique and nonempty.
class Signature {
public:
    Signature() = default;
    explicit Signature(std::vector<OperationSymbol> symbols);

    size_t size() const { return symbols_.size(); }
    const OperationSymbol& operator[](size_t i) const { return symbols_[i]; }
    const std::vector<OperationSymbol>& symbols() const { return symbols_; }

    std::optional<size_t> index_of(const std::string& name) const;

    bool operator==(const Signature&) const = default;

private:
    std::vector<OperationSymbol> symbols_;
};

struct SignatureStats {
    int max_arity = 0;   // largest arity across symbols
    int cube_bound = 0;  // 1 + sum of (arity - 1); upper bound on minimal cube dimension
};

SignatureStats signature_stats(const Signature& sig);

/// A subset of the universe {0..k-1} with bit-vector membership.
class Subset {
public:
    Subset() = default;
    explicit Subset(int universe_size);
    Subset(int universe_size, std::initializer_list<int> elements);
    static Subset full(int universe_size);
    static Subset of(int universe_size, const std::vector<int>& elements);
    static Subset single(int universe_size, int element);

    int universe_size() const { return universe_; }
    int size() const;  // popcount
    bool empty() const { return size() == 0; }
    bool is_full() const { return size() == universe_; }
    bool is_proper_nonempty() const { return !empty() && !is_full(); }

    bool contains(int e) const;
    void add(int e);
    void remove(int e);

    bool is_subset_of(const Subset& other) const;
    Subset intersect(const Subset& other) const;
    Subset unite(const Subset& other) const;
    Subset complement() const;

    std::vector<int> elements() const;  // ascending

    bool operator==(const Subset&) const = default;

    const std::vector<uint64_t>& words() const { return bits_; }

private:
    void check_element(int e) const;

    int universe_ = 0;
    std::vector<uint64_t> bits_;
};

/// Orders subsets by (size, numeric value of the bit pattern with element 0 as
/// the least significant bit). All enumeration orders in the library use this.
bool subset_less(const Subset& a, const Subset& b);

/// A finite algebra on {0..k-1} given by flat operation tables. Tables are
/// row-major with the first argument as the most significant digit in base k,
/// so f(a1,...,an) = table[((a1*k + a2)*k + ...)*k + an]. Construction
/// validates the tables (range and idempotence) and throws on violation.
class FiniteAlgebra {
public:
    FiniteAlgebra() = default;
    FiniteAlgebra(int size, Signature sig, std::vector<std::vector<int>> tables);

    int size() const { return size_; }
    const Signature& signature() const { return sig_; }
    const std::vector<int>& table(size_t op) const { return tables_[op]; }
    size_t op_count() const { return sig_.size(); }
    int arity(size_t op) const { return sig_[op].arity; }

    int apply(size_t op, std::span<const int> args) const;

    /// Row-major index of an argument tuple.
    size_t table_index(std::span<const int> args) const;

    bool operator==(const FiniteAlgebra&) const = default;

private:
    int size_ = 0;
    Signature sig_;
    std::vector<std::vector<int>> tables_;
};

/// Re-checks all FiniteAlgebra invariants (table range, idempotence). The
/// constructor runs this already; exposed for raw table data and tests.
void validate(int size, const Signature& sig, const std::vector<std::vector<int>>& tables);
void validate(const FiniteAlgebra& algebra);

/// A map between algebras of the same signature commuting with every
/// operation. Construction checks the commuting condition exhaustively.
class Homomorphism {
public:
    Homomorphism(FiniteAlgebra source, FiniteAlgebra target, std::vector<int> map);

    const FiniteAlgebra& source() const { return source_; }
    const FiniteAlgebra& target() const { return target_; }
    const std::vector<int>& map() const { return map_; }
    int operator()(int e) const { return map_[static_cast<size_t>(e)]; }

    bool is_surjective() const;

    /// Preimage of a subset of the target universe.
    Subset preimage(const Subset& of_target) const;
    /// Image of a subset of the source universe.
    Subset image(const Subset& of_source) const;

private:
    FiniteAlgebra source_;
    FiniteAlgebra target_;
    std::vector<int> map_;
};

/// Smallest subuniverse containing `seed`, by closing under all operations.
/// Idempotence makes every singleton closed.
Subset generate_subuniverse(const FiniteAlgebra& algebra, const Subset& seed);

/// Every nonempty subuniverse, sorted by (size, bit pattern). Exhaustive over
/// all 2^k - 1 nonempty subsets; throws SearchCapExceeded above `cap`.
std::vector<Subset> all_subuniverses(const FiniteAlgebra& algebra, int cap = kDefaultSubuniverseCap);

/// True iff `s` is closed under every operation of the algebra.
bool is_subuniverse(const FiniteAlgebra& algebra, const Subset& s);

struct ProductAlgebra {
    FiniteAlgebra algebra;           // universe size a.size * b.size
    Homomorphism first_projection;   // (x, y) -> x
    Homomorphism second_projection;  // (x, y) -> y
};

/// Direct product with coordinatewise operations. Element (x, y) is encoded as
/// x * b.size + y (first factor most significant).
ProductAlgebra product(const FiniteAlgebra& a, const FiniteAlgebra& b);

struct InducedSubalgebra {
    FiniteAlgebra algebra;           // universe renumbered 0..|B|-1
    std::vector<int> elements;       // new index -> original element, ascending
    std::vector<int> index_of;       // original element -> new index, -1 outside B
    Subset restrict(const Subset& of_parent) const;
};

/// The subalgebra on a subuniverse B, with tables materialized over the
/// renumbered universe. Throws if B is not closed.
InducedSubalgebra induced_subalgebra(const FiniteAlgebra& algebra, const Subset& b);

} // namespace cubeterm
