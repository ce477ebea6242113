#pragma once

#include "cubeterm/algebra.hpp"
#include "cubeterm/cross.hpp"

#include <optional>

namespace cubeterm {

/// A cube term blocker: subuniverses U ⊊ B (U nonempty) such that every
/// operation restricted to B has a U-absorbing variable. Equivalently, U is
/// the base of compatible symmetric crosses of the subalgebra on B in every
/// arity. The certificate records one absorbing variable per operation.
struct Blocker {
    Subset u;
    Subset b;
    std::vector<int> absorbing_variable;  // per operation, within op restricted to B
};

/// Builds a Blocker from candidate subuniverses, recomputing and verifying
/// the certificate. Throws if (U, B) is not a blocker.
Blocker make_blocker(const FiniteAlgebra& algebra, const Subset& u, const Subset& b);

/// Re-checks all Blocker invariants from scratch (subuniverse conditions,
/// U ⊊ B, per-operation absorption on the subalgebra induced on B).
bool verify_blocker(const FiniteAlgebra& algebra, const Blocker& blocker);

/// Exhaustive blocker search over subuniverse pairs, in (|B|, |U|, bit
/// pattern) order; the first hit is returned, so results are reproducible.
/// nullopt iff the algebra has no blocker, which for finite idempotent
/// algebras is equivalent to having a cube term.
std::optional<Blocker> find_blocker(const FiniteAlgebra& algebra, int cap = kDefaultSubuniverseCap);

/// Transfers a blocker of the target of a surjection back to the source:
/// (phi^{-1}(U), phi^{-1}(B)), with the certificate recomputed. Always
/// verifies when the input is a blocker and the map is surjective.
Blocker blocker_preimage(const Homomorphism& hom, const Blocker& of_target);

struct FactorBlocker {
    int factor = 0;      // 0 = first factor, 1 = second
    int fired_case = 0;  // 1: projections differ on U and B; 2: slice through {a} x C
    Blocker blocker;
};

/// Given a blocker of a product, produces a verified blocker of one factor.
/// Case 1 applies when the first projections of U and B differ; otherwise an
/// element a with (a, d) in U exists and the slice V = {a} x C yields a
/// blocker of the second factor.
FactorBlocker blocker_of_factor(const ProductAlgebra& prod, const Blocker& of_product);

/// A 2-element semilattice quotient of the subalgebra on B: U collapses to 0,
/// the least element of B \ U becomes 1, and every operation returns 1 exactly
/// on the all-1 input.
struct SemilatticeSection {
    FiniteAlgebra quotient;             // 2-element algebra in the original signature
    std::vector<int> section_elements;  // the subuniverse S = U ∪ {t}, ascending
    std::vector<int> class_of;          // per section element: 0 (U) or 1 (t)
    int top_element = 0;                // the chosen t in B \ U
};

/// Requires every operation restricted to B to be U-absorbing in every
/// variable (automatic for cyclic operations); throws NotFullyAbsorbing
/// otherwise. The returned quotient is verified exhaustively.
SemilatticeSection semilattice_section(const FiniteAlgebra& algebra, const Blocker& blocker);

} // namespace cubeterm
