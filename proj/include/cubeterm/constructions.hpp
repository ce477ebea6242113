#pragma once

#include "cubeterm/algebra.hpp"
#include "cubeterm/cross.hpp"

namespace cubeterm {

/// The sharpness fixture for the cube-dimension bound. For arities
/// (n_1,...,n_m) with n = sum(n_i - 1) >= 2, the universe is {0,1}^n and each
/// f_i acts coordinatewise: as the canonical n_i-ary near-unanimity operation
/// (binary case: meet) in its own block of coordinates, as the n_i-ary join
/// elsewhere. The algebra has an (n+1)-cube term but none of dimension <= n,
/// certified by the compatible cross over the bases U_j = "1 in coordinate j".
///
/// Coordinates are 0-based here; the j-th coordinate is bit j of the element
/// (bit 0 least significant). Cell i covers the coordinates of f_i.
struct Example51 {
    FiniteAlgebra algebra;
    std::vector<std::vector<int>> cells;  // per operation, its coordinates
    std::vector<Subset> bases;            // U_0..U_{n-1}
    Cross cross;                          // Cross(U_0,...,U_{n-1})
};

Example51 example_51(const std::vector<int>& arities);

/// The sharpness fixture for the symmetric-cross bound: the 2-element algebra
/// with f_1 the canonical n_1-ary near-unanimity operation (n_1 >= 3) and all
/// other symbols first projections. Its free algebra on two generators has a
/// compatible symmetric cross of arity n_1 - 1 and none higher.
struct Example52 {
    FiniteAlgebra algebra;
    int expected_symmetric_cross_arity = 0;  // n_1 - 1
};

Example52 example_52(const std::vector<int>& arities);

/// The all-binary variant: Z_3 with f_1(x,y) = 2x + 2y and any further binary
/// symbols as first projections. Has a Maltsev term, hence no compatible
/// symmetric crosses of arity >= 2.
FiniteAlgebra example_52_maltsev(int symbol_count);

/// The groupoid <Z_3; 2x + 2y>.
FiniteAlgebra z3_maltsev_groupoid();

/// The 2-element algebra with one d-ary operation returning 1 exactly on the
/// all-1 input. Has no cube term of any dimension; ({0},{0,1}) is a blocker.
FiniteAlgebra two_element_semilattice(int d);

} // namespace cubeterm
