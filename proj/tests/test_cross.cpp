#include "doctest.h"

#include "cubeterm/constructions.hpp"
#include "cubeterm/cross.hpp"
#include "helpers.hpp"

#include <random>

using namespace cubeterm;
using namespace cubeterm::testing;

TEST_CASE("absorption checks run exhaustively") {
    auto meet = meet_semilattice();
    Subset zero(2, {0}), one(2, {1});
    CHECK(is_absorbing(meet, 0, 0, zero));
    CHECK(is_absorbing(meet, 0, 1, zero));
    CHECK_FALSE(is_absorbing(meet, 0, 0, one));  // meet(1,0) = 0

    auto maj = majority_on_two();
    for (int v = 0; v < 3; ++v) CHECK_FALSE(is_absorbing(maj, 0, v, one));  // maj(1,0,0) = 0
}

TEST_CASE("cross construction rejects improper bases") {
    CHECK_THROWS_AS(Cross({Subset(2)}), Error);                     // empty
    CHECK_THROWS_AS(Cross({Subset::full(2)}), Error);               // full
    CHECK_NOTHROW(Cross({Subset(2, {0}), Subset(2, {1})}));
}

TEST_CASE("compatibility: meet cross is preserved, majority thin cross is not") {
    auto meet = meet_semilattice();
    Cross c0 = Cross::symmetric(Subset(2, {0}), 2);
    CHECK(is_compatible_cross(meet, c0).compatible);

    auto maj = majority_on_two();
    Cross c1 = Cross::symmetric(Subset(2, {1}), 3);
    auto res = is_compatible_cross(maj, c1);
    REQUIRE_FALSE(res.compatible);
    REQUIRE(res.violation.has_value());
    const auto& v = *res.violation;
    CHECK(v.op == 0);
    CHECK(v.map_m == std::vector<int>{0, 1, 2});
    // the paper's matrix: columns (1,0,0),(0,1,0),(0,0,1) map to (0,0,0)
    CHECK(v.rows == std::vector<std::vector<int>>{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}});
    CHECK(v.violating_output == std::vector<int>{0, 0, 0});
}

TEST_CASE("the sharpness example's cross is compatible") {
    auto e51 = example_51({2, 2});
    CHECK(is_compatible_cross(e51.algebra, e51.cross).compatible);
    CHECK(is_compatible_cross_oracle(e51.algebra, e51.cross));
}

TEST_CASE("criterion and oracle agree on the worked examples") {
    auto meet = meet_semilattice();
    CHECK(is_compatible_cross_oracle(meet, Cross::symmetric(Subset(2, {0}), 2)));
    auto maj = majority_on_two();
    CHECK_FALSE(is_compatible_cross_oracle(maj, Cross::symmetric(Subset(2, {1}), 3)));
}

TEST_CASE("criterion and oracle agree on random instances") {
    std::mt19937 rng(831);
    int ran = 0;
    while (ran < 120) {
        int size = 2 + static_cast<int>(rng() % 3);   // |A| <= 4
        int arity = 2 + static_cast<int>(rng() % 2);  // op arity <= 3
        int d = 1 + static_cast<int>(rng() % 3);      // cross arity <= 3
        auto alg = random_idempotent_algebra(rng, size, {arity});
        std::vector<Subset> bases;
        for (int i = 0; i < d; ++i) {
            Subset b = random_proper_subset(rng, size);
            if (rng() % 2) {
                Subset grown = generate_subuniverse(alg, b);
                if (grown.is_proper_nonempty()) b = grown;
            }
            bases.push_back(std::move(b));
        }
        Cross cross{bases};
        CHECK(is_compatible_cross(alg, cross).compatible == is_compatible_cross_oracle(alg, cross));
        ++ran;
    }
}

TEST_CASE("permuting or deleting bases preserves compatibility") {
    std::mt19937 rng(832);
    for (int trial = 0; trial < 40; ++trial) {
        int size = 2 + static_cast<int>(rng() % 2);
        auto alg = random_idempotent_algebra(rng, size, {2});
        std::vector<Subset> bases;
        int d = 2 + static_cast<int>(rng() % 2);
        for (int i = 0; i < d; ++i) bases.push_back(random_proper_subset(rng, size));
        bool verdict = is_compatible_cross(alg, Cross{bases}).compatible;

        auto shuffled = bases;
        std::shuffle(shuffled.begin(), shuffled.end(), rng);
        CHECK(is_compatible_cross(alg, Cross{shuffled}).compatible == verdict);

        if (verdict) {
            auto shorter = bases;
            shorter.pop_back();
            CHECK(is_compatible_cross(alg, Cross{shorter}).compatible);
        }
    }
}

TEST_CASE("bases of compatible crosses are subuniverses") {
    std::mt19937 rng(833);
    int found = 0;
    for (int trial = 0; trial < 300 && found < 25; ++trial) {
        int size = 2 + static_cast<int>(rng() % 2);
        auto alg = random_idempotent_algebra(rng, size, {2});
        std::vector<Subset> bases{random_proper_subset(rng, size), random_proper_subset(rng, size)};
        Cross cross{bases};
        if (!is_compatible_cross(alg, cross).compatible) continue;
        ++found;
        for (const auto& b : bases) CHECK(generate_subuniverse(alg, b) == b);
    }
    CHECK(found > 0);
}

TEST_CASE("absorption deficiency matches the worked examples") {
    auto meet = meet_semilattice();
    auto def = absorption_deficiency(meet, Cross::symmetric(Subset(2, {0}), 2));
    REQUIRE(def.size() == 1);
    CHECK(def[0].empty());

    // e51(2,2): f1 is meet in coordinate 0, so U_0 (bit 0 set) is never
    // absorbed by f1; f2 mirrors this at U_1
    auto e51 = example_51({2, 2});
    auto d2 = absorption_deficiency(e51.algebra, e51.cross);
    REQUIRE(d2.size() == 2);
    CHECK(d2[0] == std::vector<int>{0});
    CHECK(d2[1] == std::vector<int>{1});

    auto maj = majority_on_two();
    auto d3 = absorption_deficiency(maj, Cross::symmetric(Subset(2, {1}), 3));
    CHECK(d3[0] == std::vector<int>{0, 1, 2});  // exceeds n-1 = 2: incompatible
}

TEST_CASE("deficiency of a compatible cross stays within the Lemma bound") {
    std::mt19937 rng(834);
    int found = 0;
    for (int trial = 0; trial < 400 && found < 30; ++trial) {
        int size = 2 + static_cast<int>(rng() % 3);
        int arity = 2 + static_cast<int>(rng() % 2);
        int d = arity + static_cast<int>(rng() % 2);  // n <= d
        auto alg = random_idempotent_algebra(rng, size, {arity});
        std::vector<Subset> bases;
        for (int i = 0; i < d; ++i) bases.push_back(random_proper_subset(rng, size));
        Cross cross{bases};
        if (!is_compatible_cross(alg, cross).compatible) continue;
        ++found;
        auto def = absorption_deficiency(alg, cross);
        CHECK(static_cast<int>(def[0].size()) <= arity - 1);
    }
    CHECK(found > 0);
}

TEST_CASE("hall matching saturates or produces a violator") {
    AbsorptionGraph complete;
    complete.left_size = 2;
    complete.right_size = 2;
    complete.adj = {{0, 1}, {0, 1}};
    auto r = hall_matching(complete);
    CHECK(r.saturating);

    AbsorptionGraph isolated;
    isolated.left_size = 2;
    isolated.right_size = 2;
    isolated.adj = {{0}, {}};
    auto v = hall_matching(isolated);
    REQUIRE_FALSE(v.saturating);
    CHECK(v.violator_y == std::vector<int>{1});
    CHECK(v.neighborhood_k.empty());

    // maj against three singleton bases: every variable fails to absorb, so
    // the graph is complete and a matching exists, consistent with the cross
    // being incompatible
    auto maj = majority_on_two();
    auto g = make_absorption_graph(maj, 0, Cross::symmetric(Subset(2, {1}), 3));
    CHECK(hall_matching(g).saturating);
}

TEST_CASE("hall violators satisfy |K| < |Y| on random graphs") {
    std::mt19937 rng(835);
    for (int trial = 0; trial < 60; ++trial) {
        AbsorptionGraph g;
        g.left_size = 1 + static_cast<int>(rng() % 5);
        g.right_size = 1 + static_cast<int>(rng() % 5);
        g.adj.resize(static_cast<size_t>(g.left_size));
        for (auto& row : g.adj)
            for (int j = 0; j < g.right_size; ++j)
                if (rng() % 3 == 0) row.push_back(j);
        auto r = hall_matching(g);
        if (!r.saturating) {
            CHECK(!r.violator_y.empty());
            CHECK(r.neighborhood_k.size() < r.violator_y.size());
            // K really is the whole neighbourhood of Y
            std::set<int> k(r.neighborhood_k.begin(), r.neighborhood_k.end());
            for (int yv : r.violator_y)
                for (int nb : g.adj[static_cast<size_t>(yv)]) CHECK(k.count(nb) == 1);
        }
    }
}

TEST_CASE("lemma 5: the three symmetric-cross legs agree") {
    std::mt19937 rng(836);
    for (int trial = 0; trial < 60; ++trial) {
        int size = 2 + static_cast<int>(rng() % 3);   // |A| <= 4
        int arity = 2 + static_cast<int>(rng() % 2);  // n <= 3
        auto alg = random_idempotent_algebra(rng, size, {arity});
        Subset u = random_proper_subset(rng, size);

        bool leg_ii = false;
        for (int v = 0; v < arity && !leg_ii; ++v) leg_ii = is_absorbing(alg, 0, v, u);
        bool leg_i = is_compatible_cross(alg, Cross::symmetric(u, arity)).compatible;  // one d >= n
        bool leg_iii = true;
        for (int d = 1; d <= 4; ++d)
            leg_iii = leg_iii && is_compatible_cross(alg, Cross::symmetric(u, d)).compatible;

        CHECK(leg_i == leg_ii);
        CHECK(leg_ii == leg_iii);
    }
}

TEST_CASE("symmetrize_cross extracts a blocker base") {
    auto meet = meet_semilattice();
    auto sym = symmetrize_cross(meet, Cross::symmetric(Subset(2, {0}), 2));
    CHECK(sym.base_index == 0);
    CHECK(sym.base == Subset(2, {0}));
    CHECK(sym.absorbing_variable == std::vector<int>{0});

    // arity 2 < signature bound 3: the sharpness example rejects, matching
    // the absence of any blocker there
    auto e51 = example_51({2, 2});
    try {
        symmetrize_cross(e51.algebra, e51.cross);
        FAIL("expected PreconditionArity");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::PreconditionArity);
    }
}

TEST_CASE("pullbacks of crosses stay compatible") {
    auto meet = meet_semilattice();
    // identity map
    std::vector<int> id{0, 1};
    Homomorphism ident(meet, meet, id);
    Cross c = Cross::symmetric(Subset(2, {0}), 2);
    CHECK(pullback_cross(ident, c) == c);

    // projection of a product: bases become cylinders
    auto prod = product(meet, meet);
    Cross pulled = pullback_cross(prod.first_projection, c);
    CHECK(pulled.base(0) == Subset(4, {0, 1}));
    CHECK(is_compatible_cross(prod.algebra, pulled).compatible);
}

TEST_CASE("pullback rejects empty or full preimages") {
    auto meet = meet_semilattice();
    auto prod = product(meet, meet);
    // constant-ish map onto the subalgebra {0}: not surjective onto {1}
    Homomorphism to_zero(prod.algebra, meet, {0, 0, 0, 0});
    CHECK_THROWS_AS(pullback_cross(to_zero, Cross::symmetric(Subset(2, {1}), 2)), Error);
}
