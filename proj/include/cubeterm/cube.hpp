#pragma once

#include "cubeterm/algebra.hpp"
#include "cubeterm/blocker.hpp"
#include "cubeterm/cross.hpp"
#include "cubeterm/subpower.hpp"

#include <optional>
#include <string>
#include <vector>

namespace cubeterm {

struct CubeOptions {
    uint64_t closure_cap = kDefaultClosureCap;
    int threads = 1;
    int subuniverse_cap = kDefaultSubuniverseCap;
    uint64_t materialize_cap = 4096;  // free-algebra materialization bound (tables are guarded separately)
    uint64_t work_cap = 0;           // max closure applications, 0 = unlimited
};

/// The d-cube problem encoded for the closure engine: one generator per
/// column z in {x,y}^d minus the all-y column, living in A^(d*|A|^2) with
/// coordinates of identical generator columns merged. Column order is
/// ascending in sum over i of [z_i = y] * 2^i, so the all-x column comes
/// first; names spell the column, coordinate 0 first ("xy" = x at 0, y at 1).
struct CubeEncoding {
    int dimension = 0;
    size_t merged_length = 0;
    std::vector<PowerTuple> generators;
    PowerTuple target;  // the all-y point
    std::vector<std::string> column_names;
};

CubeEncoding encode_cube_problem(const FiniteAlgebra& algebra, int d);

struct CubeVerdict {
    enum class Status { HasCubeTerm, NoCubeTerm, Undecided };

    int dimension = 0;
    Status status = Status::Undecided;
    std::optional<TermWitness> witness;      // HasCubeTerm: re-verified against the d identities
    std::vector<std::string> column_names;   // leaf names for the witness
    std::optional<Blocker> blocker;          // NoCubeTerm: blocker of the input algebra, if found
    std::optional<Cross> free_cross;         // NoCubeTerm: compatible d-cross of the free algebra
    std::vector<std::string> free_elements;  // term names of the free algebra's elements
    uint64_t closure_size = 0;
};

/// Decides d-cube term existence by subpower closure with the all-y point as
/// target. A found witness is re-verified against every cube identity before
/// being returned. On exhaustion, the verdict carries a certificate: a
/// blocker when one exists, otherwise a compatible d-cross of the free
/// algebra when that search is feasible.
CubeVerdict has_cube_term(const FiniteAlgebra& algebra, int d, const CubeOptions& options = {});

struct MinCubeDimension {
    std::optional<int> dimension;      // nullopt: no cube term of any dimension
    std::optional<Blocker> blocker;    // certificate for the nullopt case
    std::optional<CubeVerdict> found;  // the verdict at the minimal dimension
    bool undecided = false;
    int undecided_at = 0;
};

/// Least d with a d-cube term, or none-with-blocker. Runs the cheap blocker
/// search first; only when no blocker exists does it scan d = 2 .. cube bound
/// (no cube term of the bound dimension means none at all).
MinCubeDimension min_cube_dimension(const FiniteAlgebra& algebra, const CubeOptions& options = {});

struct FoundCross {
    Cross cross;
    CompatibilityResult check;  // the passing compatibility result
};

/// First compatible d-ary cross in fixed enumeration order, with bases
/// ranging over proper nonempty subuniverses (bases of compatible crosses are
/// always subuniverses). Candidates are pruned by per-base absorption
/// deficiency before the full criterion runs. nullopt when no compatible
/// d-cross exists.
std::optional<FoundCross> find_compatible_cross(const FiniteAlgebra& algebra, int d,
                                                int subuniverse_cap = kDefaultSubuniverseCap);

struct CrossSequenceWitness {
    MaterializedSubpower free_algebra;
    uint32_t x_id = 0, y_id = 0;
    std::vector<Subset> bases;  // subuniverses of the free algebra, one per cross coordinate
};

/// The maximal-subuniverse construction at finite scale: grows each base from
/// {x} by adding the least element whose generated subuniverse keeps the all-y
/// point outside every extended cross closure. Requires the algebra to have
/// no d-cube term (throws HasCubeTerm otherwise); the returned bases contain
/// x, exclude y, and form a compatible cross of the free algebra.
CrossSequenceWitness build_cross_sequence_witness(const FiniteAlgebra& algebra, int d,
                                                  const CubeOptions& options = {});

} // namespace cubeterm
