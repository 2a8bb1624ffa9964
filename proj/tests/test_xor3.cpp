#include <random>
#include <set>

#include "doctest.h"
#include "gapforge/errors.hpp"
#include "gapforge/xor3.hpp"

using namespace gapforge;
using namespace gapforge::xor3;

namespace {

// Independent oracle: plain enumeration, no Gray-code increments.
Rational naive_value(const Instance& inst) {
    long long best = 0;
    for (std::uint64_t a = 0; a < (1ull << inst.num_vars); ++a) {
        long long sat = 0;
        for (const auto& e : inst.equations) {
            int lhs = ((a >> e.x) ^ (a >> e.y) ^ (a >> e.z)) & 1;
            if (lhs == e.b) ++sat;
        }
        best = std::max(best, sat);
    }
    return Rational(BigInt(best), BigInt(static_cast<long long>(inst.equations.size())));
}

Instance random_instance(int n, int m, std::mt19937_64& rng) {
    Instance inst;
    inst.num_vars = n;
    for (int i = 0; i < m; ++i) {
        int x = static_cast<int>(rng() % n), y, z;
        do y = static_cast<int>(rng() % n);
        while (y == x);
        do z = static_cast<int>(rng() % n);
        while (z == x || z == y);
        inst.equations.push_back({x, y, z, static_cast<int>(rng() & 1)});
    }
    return inst;
}

long long satisfied_count(const Instance& inst, const std::vector<std::uint8_t>& a) {
    long long sat = 0;
    for (const auto& e : inst.equations)
        if ((a[e.x] ^ a[e.y] ^ a[e.z]) == e.b) ++sat;
    return sat;
}

}  // namespace

TEST_CASE("value_bruteforce basics") {
    Instance single{3, {{0, 1, 2, 0}}};
    CHECK(value_bruteforce(single) == Rational(1));
    Instance contra{3, {{0, 1, 2, 0}, {0, 1, 2, 1}}};
    CHECK(value_bruteforce(contra) == Rational(BigInt(1), BigInt(2)));
    Instance big{30, {{0, 1, 2, 0}}};
    CHECK_THROWS_AS(value_bruteforce(big), capacity_error);
}

TEST_CASE("value_bruteforce matches the naive enumerator") {
    std::mt19937_64 rng(5);
    for (int iter = 0; iter < 30; ++iter) {
        Instance inst = random_instance(5, 8, rng);
        CHECK(value_bruteforce(inst) == naive_value(inst));
    }
}

TEST_CASE("satisfiability by elimination") {
    std::mt19937_64 rng(17);
    for (int iter = 0; iter < 50; ++iter) {
        Instance inst = random_instance(6, 7, rng);
        CHECK(is_satisfiable(inst) == (value_bruteforce(inst) == Rational(1)));
        auto sol = solve(inst);
        CHECK(sol.has_value() == is_satisfiable(inst));
        if (sol) CHECK(satisfied_count(inst, *sol) == static_cast<long long>(inst.equations.size()));
    }
    Instance contra{3, {{0, 1, 2, 0}, {0, 1, 2, 1}}};
    CHECK_FALSE(is_satisfiable(contra));
}

TEST_CASE("planted instances are satisfiable") {
    std::mt19937_64 rng(23);
    Instance inst = random_instance(8, 10, rng);
    std::vector<std::uint8_t> s(8);
    for (auto& b : s) b = rng() & 1;
    for (auto& e : inst.equations) e.b = s[e.x] ^ s[e.y] ^ s[e.z];
    CHECK(is_satisfiable(inst));
}

TEST_CASE("homogeneous kernel spans the solution set") {
    std::mt19937_64 rng(29);
    Instance inst = random_instance(6, 4, rng);
    auto sol = solve(inst);
    if (sol) {
        auto kernel = homogeneous_kernel(inst);
        for (const auto& k : kernel) {
            auto shifted = *sol;
            for (int i = 0; i < inst.num_vars; ++i) shifted[i] ^= k[i];
            CHECK(satisfied_count(inst, shifted) ==
                  static_cast<long long>(inst.equations.size()));
        }
    }
}

TEST_CASE("g_transform shape and value relation") {
    Instance single{3, {{0, 1, 2, 1}}};
    Instance g = g_transform(single);
    CHECK(g.num_vars == 6);
    CHECK(g.equations.size() == 8);

    std::mt19937_64 rng(31);
    for (int iter = 0; iter < 10; ++iter) {
        Instance inst = random_instance(5, 5, rng);
        CHECK(is_satisfiable(g_transform(inst)) == is_satisfiable(inst));
    }

    // Satisfiable instance: value carries over exactly.
    Instance planted = random_instance(4, 4, rng);
    std::vector<std::uint8_t> s{1, 0, 1, 1};
    for (auto& e : planted.equations) e.b = s[e.x] ^ s[e.y] ^ s[e.z];
    CHECK(value_bruteforce(g_transform(planted)) == Rational(1));

    // value(I) = 1/2 pushes the transformed value to at most 3/4.
    Instance half{3, {{0, 1, 2, 0}, {0, 1, 2, 1}}};
    CHECK(value_bruteforce(half) == Rational(BigInt(1), BigInt(2)));
    CHECK(value_bruteforce(g_transform(half)) <= Rational(BigInt(3), BigInt(4)));
}

TEST_CASE("g_transform witness multiplies satisfied counts by 8") {
    std::mt19937_64 rng(37);
    for (int iter = 0; iter < 20; ++iter) {
        Instance inst = random_instance(5, 6, rng);
        std::vector<std::uint8_t> sigma(5);
        for (auto& b : sigma) b = rng() & 1;
        std::vector<std::uint8_t> witness(10);
        for (int x = 0; x < 5; ++x) {
            witness[2 * x] = sigma[x];
            witness[2 * x + 1] = sigma[x] ^ 1;
        }
        CHECK(satisfied_count(g_transform(inst), witness) == 8 * satisfied_count(inst, sigma));
    }
}

TEST_CASE("regularize shape, satisfiability and regularity") {
    Instance single{3, {{0, 1, 2, 1}}};
    Instance reg = regularize(single);
    CHECK(reg.num_vars == 6);
    CHECK(reg.equations.size() == 3);
    CHECK(check_regular(reg, 2));

    std::mt19937_64 rng(41);
    for (int iter = 0; iter < 20; ++iter) {
        Instance inst = random_instance(6, 6, rng);
        Instance out = regularize(inst);
        CHECK(check_regular(out, 6));
        // Occurrence bound: originals keep their count, fresh variables get 2.
        std::vector<int> occ(out.num_vars, 0);
        for (const auto& e : out.equations) {
            ++occ[e.x];
            ++occ[e.y];
            ++occ[e.z];
        }
        for (int v = inst.num_vars; v < out.num_vars; ++v) CHECK(occ[v] == 2);
        CHECK(is_satisfiable(out) == is_satisfiable(inst));
    }

    Instance half{3, {{0, 1, 2, 0}, {0, 1, 2, 1}}};
    Rational v = value_bruteforce(regularize(half));
    CHECK(v >= Rational(BigInt(2), BigInt(3)));
    CHECK(v <= Rational(1));
}

TEST_CASE("regularity predicates") {
    Instance single{3, {{0, 1, 2, 0}}};
    CHECK(check_half_regular(single, 1));
    CHECK(check_regular(single, 1));
    Instance sharing{4, {{0, 1, 2, 0}, {0, 1, 3, 0}}};
    CHECK(check_half_regular(sharing, 2));
    CHECK_FALSE(check_regular(sharing, 2));
}

TEST_CASE("expander generator output shape") {
    std::vector<std::uint8_t> assignment{1, 0, 0, 1};
    auto res = generate_expander_instance(4, 1, 99, Planted{assignment});
    CHECK(res.instance.equations.size() == 4);
    CHECK(is_satisfiable(res.instance));

    auto check_shape = [](const GeneratorResult& r, int n, int rr) {
        std::vector<int> ldeg(r.graph.left, 0), rdeg(r.graph.right, 0);
        for (auto [u, v] : r.graph.edges) {
            ++ldeg[u];
            ++rdeg[v];
        }
        for (int d : ldeg) CHECK(d == 3);
        for (int d : rdeg) CHECK(d == 3 * rr);
        // Decomposition: 3r perfect matchings, pairwise edge-disjoint, union = edges.
        CHECK(r.matchings.size() == static_cast<std::size_t>(3 * rr));
        std::set<std::pair<int, int>> all;
        for (const auto& m : r.matchings) {
            CHECK(m.size() == static_cast<std::size_t>(n));
            std::set<int> lefts, rights;
            for (auto [u, v] : m) {
                lefts.insert(u);
                rights.insert(v);
                CHECK(all.emplace(u, v).second);  // edge-disjoint
            }
            CHECK(rights.size() == static_cast<std::size_t>(n));
        }
        CHECK(all.size() == r.graph.edges.size());
    };
    check_shape(res, 4, 1);
    auto res2 = generate_expander_instance(6, 2, 123, RandomRhs{});
    check_shape(res2, 6, 2);
}

TEST_CASE("random rhs instances usually unsatisfiable at n=12 r=2") {
    int below_one = 0;
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
        auto res = generate_expander_instance(12, 2, seed, RandomRhs{});
        if (value_bruteforce(res.instance, 12) < Rational(1)) ++below_one;
    }
    CHECK(below_one > 4);
}

TEST_CASE("unique neighbour expansion checker") {
    // Perfect matching: all neighbours unique.
    BipartiteMultigraph pm{4, 4, {{0, 0}, {1, 1}, {2, 2}, {3, 3}}};
    CHECK(check_unique_neighbour_expansion(pm, 4, Rational(1)));

    // Two left nodes with identical neighbourhoods: zero unique neighbours.
    BipartiteMultigraph coll{2, 3, {{0, 0}, {0, 1}, {0, 2}, {1, 0}, {1, 1}, {1, 2}}};
    CHECK_FALSE(check_unique_neighbour_expansion(coll, 2, Rational(1)));
    CHECK_THROWS_AS(
        check_unique_neighbour_expansion(BipartiteMultigraph{64, 4, {}}, 32, Rational(1), 1000),
        capacity_error);
}

TEST_CASE("text format round-trips exactly") {
    std::mt19937_64 rng(53);
    Instance inst = random_instance(7, 9, rng);
    CHECK(from_text(to_text(inst)) == inst);
    CHECK(to_text(from_text("vars 3\n0 1 2 = 1\n")) == "vars 3\n0 1 2 = 1\n");
    CHECK_THROWS_AS(from_text("nope"), parse_error);
    CHECK_THROWS_AS(from_text("vars 3\n0 1 1 = 0\n"), precondition_error);
}
