#pragma once

#include "cubeterm/algebra.hpp"
#include "cubeterm/blocker.hpp"
#include "cubeterm/cross.hpp"
#include "cubeterm/cube.hpp"
#include "cubeterm/subpower.hpp"

#include <nlohmann/json_fwd.hpp>

#include <string>

namespace cubeterm {

/// Algebra files are JSON with fields `size` (universe size) and `ops`
/// (list of {name, arity, table}); `table` is the flat row-major list with
/// the first argument as the most significant digit in base `size`.
FiniteAlgebra parse_algebra(const std::string& text);
FiniteAlgebra load_algebra_file(const std::string& path);

/// Canonical serialization: fixed field order and layout, so identical
/// algebras produce byte-identical files.
std::string serialize_algebra(const FiniteAlgebra& algebra);

/// Parses a base list like "{0},{1,2}" over the given universe.
std::vector<Subset> parse_bases(const std::string& text, int universe_size);

std::string format_subset(const Subset& s);

// JSON report fragments (ordered_json keeps insertion order, so reports are
// byte-stable).
nlohmann::ordered_json subset_json(const Subset& s);
nlohmann::ordered_json cross_json(const Cross& c);
nlohmann::ordered_json violation_json(const FiniteAlgebra& algebra, const CrossViolation& v);
nlohmann::ordered_json blocker_json(const FiniteAlgebra& algebra, const Blocker& b);
nlohmann::ordered_json witness_json(const FiniteAlgebra& algebra, const TermWitness& w,
                                    const std::vector<std::string>& leaf_names);
nlohmann::ordered_json cube_verdict_json(const FiniteAlgebra& algebra, const CubeVerdict& v);

} // namespace cubeterm
