#include "doctest.h"

#include "cubeterm/constructions.hpp"
#include "cubeterm/subpower.hpp"
#include "helpers.hpp"

#include <algorithm>
#include <random>

using namespace cubeterm;
using namespace cubeterm::testing;

TEST_CASE("meet closure of the two projections has exactly one new tuple") {
    auto meet = meet_semilattice();
    PowerTuple x = PowerTuple::from({0, 0, 1, 1});
    PowerTuple y = PowerTuple::from({0, 1, 0, 1});
    auto out = close(meet, {x, y});
    REQUIRE(out.status == CloseStatus::Closed);
    auto got = closure_as_set(out.closure);
    std::set<std::vector<int>> want{{0, 0, 1, 1}, {0, 1, 0, 1}, {0, 0, 0, 1}};
    CHECK(got == want);
}

TEST_CASE("Z3 closure of the projections is {x, y, 2x+2y}") {
    auto z3 = z3_maltsev_groupoid();
    auto fa = free_algebra_on_two(z3);
    REQUIRE(fa.size() == 3);
    std::set<std::vector<int>> want{
        {0, 0, 0, 1, 1, 1, 2, 2, 2},  // x
        {0, 1, 2, 0, 1, 2, 0, 1, 2},  // y
        {0, 2, 1, 2, 1, 0, 1, 0, 2},  // 2x+2y coordinatewise
    };
    CHECK(closure_as_set(fa) == want);
}

TEST_CASE("a generator is its own witness") {
    auto meet = meet_semilattice();
    PowerTuple t = PowerTuple::from({0, 1});
    auto out = close(meet, {t}, t);
    REQUIRE(out.status == CloseStatus::FoundTarget);
    REQUIRE(out.target_witness.has_value());
    CHECK(out.target_witness->nodes().size() == 1);
    CHECK(out.target_witness->nodes()[0].op == -1);
    CHECK(out.target_witness->depth() == 0);
}

TEST_CASE("free algebra sizes match hand closures") {
    CHECK(free_algebra_on_two(meet_semilattice()).size() == 3);
    CHECK(free_algebra_on_two(z3_maltsev_groupoid()).size() == 3);
    // maj(x,x,y) = x and friends: nothing beyond the generators
    CHECK(free_algebra_on_two(majority_on_two()).size() == 2);
}

TEST_CASE("evaluate_witness on leaves and small terms") {
    auto meet = meet_semilattice();
    TermWitness leaf({TermNode{-1, 0, {}}}, 0);
    CHECK(evaluate_witness(leaf, meet, std::vector<int>{5}) == 5);

    TermWitness app({TermNode{-1, 0, {}}, TermNode{-1, 1, {}}, TermNode{0, 0, {0, 1}}}, 2);
    CHECK(evaluate_witness(app, meet, std::vector<int>{1, 0}) == 0);
    CHECK(app.to_string(meet, {"x", "y"}) == "meet(x,y)");

    // wrong argument count
    CHECK_THROWS_AS(evaluate_witness(app, meet, std::vector<int>{1}), Error);
}

TEST_CASE("the Maltsev term of the Z3 groupoid evaluates as x+2y+z") {
    auto z3 = z3_maltsev_groupoid();
    // f(f(x,z),y) as a witness DAG over leaves x=0, y=1, z=2
    TermWitness m(
        {
            TermNode{-1, 0, {}},      // x
            TermNode{-1, 1, {}},      // y
            TermNode{-1, 2, {}},      // z
            TermNode{0, 0, {0, 2}},   // f(x,z)
            TermNode{0, 0, {3, 1}},   // f(f(x,z),y)
        },
        4);
    CHECK(evaluate_witness(m, z3, std::vector<int>{1, 2, 0}) == 2);
    for (int x = 0; x < 3; ++x)
        for (int y = 0; y < 3; ++y)
            for (int z = 0; z < 3; ++z)
                CHECK(evaluate_witness(m, z3, std::vector<int>{x, y, z}) == (x + 2 * y + z) % 3);
}

TEST_CASE("every closure element re-evaluates from its witness") {
    std::mt19937 rng(821);
    for (int trial = 0; trial < 10; ++trial) {
        int size = 2 + static_cast<int>(rng() % 2);
        auto alg = random_idempotent_algebra(rng, size, {2});
        std::vector<PowerTuple> gens;
        for (int g = 0; g < 2; ++g) {
            std::vector<int> t(4);
            for (auto& v : t) v = static_cast<int>(rng() % size);
            gens.push_back(PowerTuple::from(t));
        }
        auto out = close(alg, gens);
        REQUIRE(out.status == CloseStatus::Closed);
        for (size_t e = 0; e < out.closure.size(); ++e) {
            auto w = out.closure.witness(e);
            CHECK(w.evaluate_tuples(alg, gens) == out.closure.element(e));
        }
    }
}

TEST_CASE("closure is independent of generator order") {
    std::mt19937 rng(822);
    for (int trial = 0; trial < 10; ++trial) {
        auto alg = random_idempotent_algebra(rng, 3, {2});
        std::vector<PowerTuple> gens;
        for (int g = 0; g < 3; ++g) {
            std::vector<int> t(5);
            for (auto& v : t) v = static_cast<int>(rng() % 3);
            gens.push_back(PowerTuple::from(t));
        }
        auto permuted = gens;
        std::shuffle(permuted.begin(), permuted.end(), rng);
        auto a = close(alg, gens);
        auto b = close(alg, permuted);
        CHECK(closure_as_set(a.closure) == closure_as_set(b.closure));
    }
}

TEST_CASE("closure agrees with the naive fixpoint oracle") {
    std::mt19937 rng(823);
    for (int trial = 0; trial < 15; ++trial) {
        int size = 2 + static_cast<int>(rng() % 2);  // |A| <= 3
        int len = 2 + static_cast<int>(rng() % 5);   // N <= 6
        auto alg = random_idempotent_algebra(rng, size, {2});
        std::vector<std::vector<int>> gens;
        for (int g = 0; g < 2; ++g) {
            std::vector<int> t(static_cast<size_t>(len));
            for (auto& v : t) v = static_cast<int>(rng() % size);
            gens.push_back(t);
        }
        std::vector<PowerTuple> pt;
        for (const auto& g : gens) pt.push_back(PowerTuple::from(g));
        auto out = close(alg, pt);
        REQUIRE(out.status == CloseStatus::Closed);
        CHECK(closure_as_set(out.closure) == naive_close(alg, gens));
    }
}

TEST_CASE("adding generators never shrinks the closure") {
    std::mt19937 rng(824);
    for (int trial = 0; trial < 10; ++trial) {
        auto alg = random_idempotent_algebra(rng, 3, {2});
        std::vector<PowerTuple> gens;
        for (int g = 0; g < 2; ++g) {
            std::vector<int> t(4);
            for (auto& v : t) v = static_cast<int>(rng() % 3);
            gens.push_back(PowerTuple::from(t));
        }
        auto base = closure_as_set(close(alg, gens).closure);
        std::vector<int> extra(4);
        for (auto& v : extra) v = static_cast<int>(rng() % 3);
        gens.push_back(PowerTuple::from(extra));
        auto bigger = closure_as_set(close(alg, gens).closure);
        CHECK(std::includes(bigger.begin(), bigger.end(), base.begin(), base.end()));
    }
}

TEST_CASE("thread count never changes the closure or its witnesses") {
    std::mt19937 rng(825);
    for (int trial = 0; trial < 3; ++trial) {
        auto alg = random_idempotent_algebra(rng, 3, {2, 3});
        std::vector<PowerTuple> gens;
        for (int g = 0; g < 3; ++g) {
            std::vector<int> t(5);
            for (auto& v : t) v = static_cast<int>(rng() % 3);
            gens.push_back(PowerTuple::from(t));
        }
        CloseOptions seq{kDefaultClosureCap, 1};
        CloseOptions par{kDefaultClosureCap, 4};
        auto a = close(alg, gens, std::nullopt, seq);
        auto b = close(alg, gens, std::nullopt, par);
        REQUIRE(a.closure.size() == b.closure.size());
        for (size_t e = 0; e < a.closure.size(); ++e) {
            CHECK(a.closure.element(e) == b.closure.element(e));
            CHECK(a.closure.witness(e).nodes().size() == b.closure.witness(e).nodes().size());
        }
    }
}

TEST_CASE("cap exhaustion is reported, not silently truncated") {
    auto meet = meet_semilattice();
    PowerTuple x = PowerTuple::from({0, 0, 1, 1});
    PowerTuple y = PowerTuple::from({0, 1, 0, 1});
    auto out = close(meet, {x, y}, std::nullopt, CloseOptions{2, 1});
    CHECK(out.status == CloseStatus::CapExceeded);
    CHECK_THROWS_AS(free_algebra_on_two(meet, CloseOptions{2, 1}), Error);
}

TEST_CASE("mismatched generator lengths are rejected") {
    auto meet = meet_semilattice();
    CHECK_THROWS_AS(close(meet, {PowerTuple::from({0, 1}), PowerTuple::from({0})}), Error);
    CHECK_THROWS_AS(close(meet, {PowerTuple::from({0, 1})}, PowerTuple::from({0})), Error);
}

TEST_CASE("materialized free algebras multiply out correctly") {
    auto meet = meet_semilattice();
    auto fa = materialize_subpower(meet, free_algebra_on_two(meet));
    REQUIRE(fa.algebra.size() == 3);
    uint32_t x = fa.generator_ids[0], y = fa.generator_ids[1];
    int xy = fa.algebra.apply(0, std::vector<int>{static_cast<int>(x), static_cast<int>(y)});
    CHECK(xy != static_cast<int>(x));
    CHECK(xy != static_cast<int>(y));
    // meet is commutative and absorbs: x /\ (x /\ y) = x /\ y
    CHECK(fa.algebra.apply(0, std::vector<int>{static_cast<int>(x), xy}) == xy);
}
