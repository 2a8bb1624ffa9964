#include <functional>
#include <numeric>
#include <random>

#include "doctest.h"
#include "gapforge/errors.hpp"
#include "gapforge/games.hpp"

using namespace gapforge;
using namespace gapforge::games;

namespace {

Permutation identity(int q) {
    Permutation p(q);
    std::iota(p.begin(), p.end(), 0);
    return p;
}

Permutation random_perm(int q, std::mt19937_64& rng) {
    Permutation p = identity(q);
    std::shuffle(p.begin(), p.end(), rng);
    return p;
}

// Deranged partner of pi1: pointwise distinct permutation.
Permutation deranged(const Permutation& pi1, std::mt19937_64& rng) {
    int q = static_cast<int>(pi1.size());
    while (true) {
        Permutation pi2 = random_perm(q, rng);
        bool ok = true;
        for (int i = 0; i < q; ++i)
            if (pi1[i] == pi2[i]) ok = false;
        if (ok) return pi2;
    }
}

Game random_two_to_two_game(int n, int q, int m, std::mt19937_64& rng) {
    Game g{n, q, {}};
    for (int i = 0; i < m; ++i) {
        int u = static_cast<int>(rng() % n), v;
        do v = static_cast<int>(rng() % n);
        while (v == u);
        Permutation pi1 = random_perm(q, rng);
        g.edges.push_back({u, v, TwoToTwo{pi1, deranged(pi1, rng)}});
    }
    return g;
}

// Independent oracle: plain recursion over colourings.
Rational recursive_value(const Game& g) {
    std::vector<int> colour(g.num_vertices, 0);
    long long best = 0;
    auto count_sat = [&]() {
        long long sat = 0;
        for (const auto& e : g.edges) {
            Relation r = relation_of(e.c, g.q);
            if (std::binary_search(r.begin(), r.end(), std::pair{colour[e.u], colour[e.v]})) ++sat;
        }
        return sat;
    };
    std::function<void(int)> rec = [&](int v) {
        if (v == g.num_vertices) {
            best = std::max(best, count_sat());
            return;
        }
        for (int c = 0; c < g.q; ++c) {
            colour[v] = c;
            rec(v + 1);
        }
    };
    rec(0);
    if (g.edges.empty()) return Rational(1);
    return Rational(BigInt(best), BigInt(static_cast<long long>(g.edges.size())));
}

}  // namespace

TEST_CASE("relation_of basics") {
    CHECK(relation_of(OneToOne{identity(2)}, 2) == Relation{{0, 0}, {1, 1}});
    CHECK(relation_of(TwoToTwo{identity(2), {1, 0}}, 2) ==
          Relation{{0, 0}, {0, 1}, {1, 0}, {1, 1}});
    std::mt19937_64 rng(3);
    for (int iter = 0; iter < 20; ++iter) {
        int q = 2 + static_cast<int>(rng() % 5);
        Permutation pi1 = random_perm(q, rng);
        Relation r = relation_of(TwoToTwo{pi1, deranged(pi1, rng)}, q);
        std::vector<int> ldeg(q, 0), rdeg(q, 0);
        for (auto [a, b] : r) {
            ++ldeg[a];
            ++rdeg[b];
        }
        for (int d : ldeg) CHECK(d == 2);
        for (int d : rdeg) CHECK(d == 2);
    }
}

TEST_CASE("value basics") {
    Game one{2, 2, {{0, 1, TwoToTwo{identity(2), {1, 0}}}}};
    CHECK(value(one) == Rational(1));

    // Two parallel contradictory 1-to-1 edges.
    Game contra{2, 2, {{0, 1, OneToOne{identity(2)}}, {0, 1, OneToOne{{1, 0}}}}};
    CHECK(value(contra) == Rational(BigInt(1), BigInt(2)));

    CHECK_THROWS_AS(value(Game{40, 3, {{0, 1, OneToOne{identity(3)}}}}), capacity_error);
}

TEST_CASE("value matches the recursive oracle") {
    std::mt19937_64 rng(11);
    for (int iter = 0; iter < 25; ++iter) {
        Game g = random_two_to_two_game(4, 4, 6, rng);
        CHECK(value(g) == recursive_value(g));
    }
}

TEST_CASE("weighted value equals value under equal weights") {
    std::mt19937_64 rng(13);
    for (int iter = 0; iter < 10; ++iter) {
        Game g = random_two_to_two_game(4, 3, 5, rng);
        WeightedGame wg{g, std::vector<Rational>(g.edges.size(), Rational(BigInt(3), BigInt(7)))};
        CHECK(weighted_value(wg) == value(g));
    }
}

TEST_CASE("integer weights equal the expanded multigraph") {
    std::mt19937_64 rng(17);
    for (int iter = 0; iter < 10; ++iter) {
        Game g = random_two_to_two_game(4, 2, 4, rng);
        std::vector<Rational> w;
        for (std::size_t i = 0; i < g.edges.size(); ++i)
            w.emplace_back(1 + static_cast<long long>(rng() % 5));
        WeightedGame wg{g, w};
        CHECK(weighted_value(wg) == value(expand_multigraph(wg)));
    }
}

TEST_CASE("irregular value basics") {
    // Fully satisfiable game: X = V for any j.
    Game sat{3, 2, {{0, 1, OneToOne{identity(2)}}, {1, 2, OneToOne{identity(2)}}}};
    CHECK(irreg_value(sat, 1) == Rational(1));
    CHECK(irreg_value(sat, 2) == Rational(1));

    // j = q succeeds whenever every constraint is nonempty.
    std::mt19937_64 rng(19);
    Game g = random_two_to_two_game(4, 3, 5, rng);
    CHECK(irreg_value(g, 3) == Rational(1));
}

TEST_CASE("irregular value unchanged by simplify") {
    std::mt19937_64 rng(23);
    for (int iter = 0; iter < 10; ++iter) {
        Game g = random_two_to_two_game(3, 3, 5, rng);
        std::vector<Rational> w(g.edges.size(), Rational(1));
        Game s = simplify(WeightedGame{g, w});
        for (int j = 1; j <= 2; ++j) CHECK(irreg_value(g, j) == irreg_value(s, j));
    }
}

TEST_CASE("randomized rounding of set colourings") {
    // For any j-set colouring, picking one label per vertex uniformly
    // satisfies, in expectation, at least (satisfied weight)/j^2.
    std::mt19937_64 rng(97);
    for (int iter = 0; iter < 10; ++iter) {
        Game g = random_two_to_two_game(4, 4, 5, rng);
        std::vector<Rational> w;
        for (std::size_t i = 0; i < g.edges.size(); ++i)
            w.emplace_back(1 + static_cast<long long>(rng() % 4));
        const int j = 2;
        // Random j-subsets per vertex, as bitmasks.
        std::vector<std::uint32_t> sets(4);
        for (auto& s : sets) {
            s = 0;
            while (std::popcount(s) < j) s |= 1u << (rng() % 4);
        }
        Rational expected(0), satisfied(0), total(0);
        for (std::size_t i = 0; i < g.edges.size(); ++i) {
            const auto& e = g.edges[i];
            Relation rel = relation_of(e.c, g.q);
            long long hits = 0;
            for (auto [a, b] : rel)
                if (((sets[static_cast<std::size_t>(e.u)] >> a) & 1) &&
                    ((sets[static_cast<std::size_t>(e.v)] >> b) & 1))
                    ++hits;
            expected += w[i] * Rational(BigInt(hits), BigInt(static_cast<long long>(j) * j));
            if (hits > 0) satisfied += w[i];
            total += w[i];
        }
        CHECK(expected >= satisfied / Rational(static_cast<long long>(j) * j));
    }
}

TEST_CASE("structural predicates") {
    // Parallel edges carrying the same relation via different permutation pairs.
    Permutation pi1{0, 1, 2, 3}, pi2{1, 0, 3, 2};
    Game par{2, 4, {{0, 1, TwoToTwo{pi1, pi2}}, {0, 1, TwoToTwo{pi2, pi1}}}};
    CHECK(is_edge_consistent(par));
    CHECK_FALSE(is_edge_distinct(par));
    CHECK_FALSE(is_simple(par));

    CHECK(is_2bi2(TwoToTwo{identity(2), {1, 0}}, 2));
    CHECK_FALSE(is_2bi2(OneToOne{identity(2)}, 2));
    // A 2-to-2 union of two 4-cycles that is not a K_{2,2} union.
    CHECK_FALSE(is_2bi2(TwoToTwo{{0, 1, 2, 3}, {1, 2, 3, 0}}, 4));
    // Block union: {0,1}x{0,1} and {2,3}x{2,3}.
    CHECK(is_2bi2(TwoToTwo{{0, 1, 2, 3}, {1, 0, 3, 2}}, 4));
}

TEST_CASE("block representative reconstructs the relation") {
    std::mt19937_64 rng(27);
    for (int iter = 0; iter < 40; ++iter) {
        int half = 1 + static_cast<int>(rng() % 3);
        int q = 2 * half;
        // Random 2<->2 constraint: pair up left and right labels blockwise.
        Permutation lp = random_perm(q, rng), rp = random_perm(q, rng);
        Relation r;
        for (int blk = 0; blk < half; ++blk)
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j)
                    r.emplace_back(lp[2 * blk + i], rp[2 * blk + j]);
        std::sort(r.begin(), r.end());
        auto label = label_from_relation(r, q);
        REQUIRE(label.has_value());
        CHECK(is_2bi2(*label, q));
        auto rep = block_representative(*label, q);
        REQUIRE(rep.has_value());
        Relation rebuilt;
        for (int blk = 0; blk < half; ++blk)
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j)
                    rebuilt.emplace_back(rep->first[2 * blk + i], rep->second[2 * blk + j]);
        std::sort(rebuilt.begin(), rebuilt.end());
        CHECK(rebuilt == r);
    }
}

TEST_CASE("label_from_relation round-trips arbitrary labels") {
    std::mt19937_64 rng(29);
    for (int iter = 0; iter < 50; ++iter) {
        int q = 2 + static_cast<int>(rng() % 5);
        Permutation pi1 = random_perm(q, rng);
        ConstraintLabel c = (rng() & 1)
                                ? ConstraintLabel{TwoToTwo{pi1, deranged(pi1, rng)}}
                                : ConstraintLabel{OneToOne{pi1}};
        Relation r = relation_of(c, q);
        auto back = label_from_relation(r, q);
        REQUIRE(back.has_value());
        CHECK(relation_of(*back, q) == r);
    }
}

TEST_CASE("simplify drops duplicates and is idempotent") {
    Game dup{2, 2,
             {{0, 1, OneToOne{identity(2)}},
              {0, 1, OneToOne{identity(2)}},
              {1, 0, OneToOne{identity(2)}}}};
    std::vector<Rational> w(3, Rational(1));
    Game s = simplify(WeightedGame{dup, w});
    CHECK(s.edges.size() == 1);
    CHECK(simplify(s) == s);
}

TEST_CASE("check_transitive") {
    // Triangle of compatible 1-to-1 constraints.
    Permutation a{1, 0};
    Game tri{3, 2,
             {{0, 1, OneToOne{a}}, {1, 2, OneToOne{a}}, {0, 2, OneToOne{identity(2)}}}};
    CHECK(check_transitive(tri));

    // Missing composed edge.
    Game missing{3, 2, {{0, 1, OneToOne{a}}, {1, 2, OneToOne{a}}}};
    CHECK_FALSE(check_transitive(missing));

    // Wrong composed relation.
    Game wrong{3, 2, {{0, 1, OneToOne{a}}, {1, 2, OneToOne{a}}, {0, 2, OneToOne{a}}}};
    CHECK_FALSE(check_transitive(wrong));

    Game inconsistent{2, 2, {{0, 1, OneToOne{a}}, {0, 1, OneToOne{identity(2)}}}};
    CHECK_THROWS_AS(check_transitive(inconsistent), precondition_error);
}

TEST_CASE("value invariant under vertex relabelling and cut permutations") {
    std::mt19937_64 rng(31);
    for (int iter = 0; iter < 10; ++iter) {
        Game g = random_two_to_two_game(4, 3, 5, rng);
        Rational base = value(g);

        // Vertex relabelling.
        Permutation vp = random_perm(4, rng);
        Game relabelled = g;
        for (auto& e : relabelled.edges) {
            e.u = vp[e.u];
            e.v = vp[e.v];
        }
        CHECK(value(relabelled) == base);

        // Apply an alphabet permutation sigma on a vertex cut: for edges
        // crossing the cut, conjugate the relation on the cut side.
        Permutation sigma = random_perm(3, rng);
        std::vector<bool> in_cut(4);
        for (int v = 0; v < 4; ++v) in_cut[v] = rng() & 1;
        Game twisted = g;
        for (auto& e : twisted.edges) {
            Relation r = relation_of(e.c, g.q);
            Relation nr;
            for (auto [x, y] : r)
                nr.emplace_back(in_cut[e.u] ? sigma[x] : x, in_cut[e.v] ? sigma[y] : y);
            std::sort(nr.begin(), nr.end());
            auto lab = label_from_relation(nr, g.q);
            REQUIRE(lab.has_value());
            e.c = *lab;
        }
        CHECK(value(twisted) == base);
    }
}
