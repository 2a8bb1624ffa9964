#include <numeric>
#include <random>
#include <set>

#include "doctest.h"
#include "gapforge/derived.hpp"
#include "gapforge/errors.hpp"
#include "gapforge/serialize.hpp"

using namespace gapforge;
using namespace gapforge::derived;

namespace {

games::Permutation identity(int q) {
    games::Permutation p(q);
    std::iota(p.begin(), p.end(), 0);
    return p;
}

games::Game random_two_to_two(int n, int q, int m, std::mt19937_64& rng) {
    games::Game g{n, q, {}};
    auto random_perm = [&] {
        games::Permutation p = identity(q);
        std::shuffle(p.begin(), p.end(), rng);
        return p;
    };
    for (int i = 0; i < m; ++i) {
        int u = static_cast<int>(rng() % n), v;
        do v = static_cast<int>(rng() % n);
        while (v == u);
        games::Permutation pi1 = random_perm(), pi2;
        do pi2 = random_perm();
        while ([&] {
            for (int j = 0; j < q; ++j)
                if (pi1[j] == pi2[j]) return true;
            return false;
        }());
        g.edges.push_back({u, v, games::TwoToTwo{pi1, pi2}});
    }
    return g;
}

// Exhaustive independent-set oracle over all vertex subsets.
Rational is_oracle(const UndirectedGraph& g) {
    std::vector<std::uint32_t> adj(static_cast<std::size_t>(g.n), 0);
    for (auto [u, v] : g.edges) {
        adj[static_cast<std::size_t>(u)] |= 1u << v;
        adj[static_cast<std::size_t>(v)] |= 1u << u;
    }
    int best = 0;
    for (std::uint32_t s = 0; s < (1u << g.n); ++s) {
        bool ok = true;
        for (int v = 0; v < g.n && ok; ++v)
            if ((s >> v) & 1) ok = (adj[static_cast<std::size_t>(v)] & s) == 0;
        if (ok) best = std::max(best, std::popcount(s));
    }
    return Rational(best, g.n);
}

UndirectedGraph random_graph(int n, double density, std::mt19937_64& rng) {
    UndirectedGraph g;
    g.n = n;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
            if (std::uniform_real_distribution<double>(0, 1)(rng) < density)
                g.edges.emplace_back(u, v);
    return g;
}

DirectedGraph random_digraph(int n, double density, std::mt19937_64& rng) {
    DirectedGraph g;
    g.n = n;
    for (int u = 0; u < n; ++u)
        for (int v = 0; v < n; ++v)
            if (u != v && std::uniform_real_distribution<double>(0, 1)(rng) < density)
                g.arcs.emplace_back(u, v);
    return g;
}

}  // namespace

TEST_CASE("unique-games split halves the value exactly") {
    std::mt19937_64 rng(3);
    for (int iter = 0; iter < 20; ++iter) {
        games::Game g = random_two_to_two(4, 3, 5, rng);
        games::Game ug = to_unique_games(g);
        CHECK(ug.edges.size() == 2 * g.edges.size());
        CHECK(games::value(ug) == games::value(g) / Rational(2));
    }
    // Satisfiable input: unique-games value exactly one half.
    games::Game sat{2, 2, {{0, 1, games::TwoToTwo{{0, 1}, {1, 0}}}}};
    CHECK(games::value(sat) == Rational(1));
    CHECK(games::value(to_unique_games(sat)) == Rational(BigInt(1), BigInt(2)));

    games::Game mixed{2, 2, {{0, 1, games::OneToOne{{0, 1}}}}};
    CHECK_THROWS_AS(to_unique_games(mixed), precondition_error);
}

TEST_CASE("per-colouring halving invariant") {
    std::mt19937_64 rng(5);
    games::Game g = random_two_to_two(3, 2, 4, rng);
    games::Game ug = to_unique_games(g);
    for (int c0 = 0; c0 < 2; ++c0)
        for (int c1 = 0; c1 < 2; ++c1)
            for (int c2 = 0; c2 < 2; ++c2) {
                std::vector<int> chi{c0, c1, c2};
                auto satisfied = [&](const games::Game& game) {
                    long long s = 0;
                    for (const auto& e : game.edges) {
                        auto rel = games::relation_of(e.c, game.q);
                        if (std::binary_search(rel.begin(), rel.end(),
                                               std::pair{chi[static_cast<std::size_t>(e.u)],
                                                         chi[static_cast<std::size_t>(e.v)]}))
                            ++s;
                    }
                    return s;
                };
                CHECK(satisfied(ug) == satisfied(g));  // double edges, half rate
            }
}

TEST_CASE("independent-set reduction basics") {
    std::mt19937_64 rng(7);
    games::Game g = random_two_to_two(3, 2, 3, rng);
    auto wg = to_independent_set(g, 1, 3);
    CHECK(wg.graph.n == 3 * 4);

    // A fully satisfying labelling induces an independent set, with weighted
    // measure p per game vertex.
    Rational val = games::value(g);
    if (val == Rational(1)) {
        // find a satisfying colouring by brute force
        std::vector<int> chi(3, 0);
        bool found = false;
        for (int c0 = 0; c0 < 2 && !found; ++c0)
            for (int c1 = 0; c1 < 2 && !found; ++c1)
                for (int c2 = 0; c2 < 2 && !found; ++c2) {
                    chi = {c0, c1, c2};
                    bool all = true;
                    for (const auto& e : g.edges) {
                        auto rel = games::relation_of(e.c, g.q);
                        all = all && std::binary_search(
                                         rel.begin(), rel.end(),
                                         std::pair{chi[static_cast<std::size_t>(e.u)],
                                                   chi[static_cast<std::size_t>(e.v)]});
                    }
                    found = all;
                }
        REQUIRE(found);
        std::set<int> independent;
        for (int v = 0; v < 3; ++v)
            for (int a = 0; a < 4; ++a)
                if ((a >> chi[static_cast<std::size_t>(v)]) & 1) independent.insert(v * 4 + a);
        for (auto [u, v] : wg.graph.edges) {
            bool both_in = independent.count(u) > 0 && independent.count(v) > 0;
            CHECK_FALSE(both_in);
        }
        Rational p{BigInt(1), BigInt(3)};
        for (int v = 0; v < 3; ++v) {
            Rational measure(0);
            for (int a = 0; a < 4; ++a)
                if ((a >> chi[static_cast<std::size_t>(v)]) & 1)
                    measure += wg.weights[static_cast<std::size_t>(v * 4 + a)];
            CHECK(measure == p);
        }
    }
}

TEST_CASE("cloud expansion preserves the independent-set value") {
    std::mt19937_64 rng(11);
    for (int iter = 0; iter < 6; ++iter) {
        games::Game g = random_two_to_two(2, 2, 2, rng);
        for (long long q : {2, 3}) {
            auto wg = to_independent_set(g, 1, q);
            UndirectedGraph cloud = cloud_expand(wg);
            CHECK(weighted_is_value(wg) == is_value_bruteforce(cloud, 40));
        }
    }
}

TEST_CASE("independent set oracle basics") {
    UndirectedGraph k4{4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};
    CHECK(is_value_bruteforce(k4) == Rational(BigInt(1), BigInt(4)));
    UndirectedGraph empty{5, {}};
    CHECK(is_value_bruteforce(empty) == Rational(1));
    CHECK(vc_value(k4) == Rational(BigInt(3), BigInt(4)));
    CHECK_THROWS_AS(is_value_bruteforce(UndirectedGraph{40, {}}), capacity_error);

    std::mt19937_64 rng(13);
    for (int iter = 0; iter < 10; ++iter) {
        UndirectedGraph g = random_graph(10, 0.4, rng);
        CHECK(is_value_bruteforce(g) == is_oracle(g));
    }
}

TEST_CASE("t-matrix certificate") {
    TMatrix t = build_t();
    t.verify();
    CHECK(t.at(0, 1, 0, 2) == 0.0);  // shared coordinate 0
    CHECK(t.at(0, 1, 2, 3) > 0.0);
    CHECK(t.stochasticity_error <= 1e-9);
    CHECK(t.symmetry_error <= 1e-9);
    CHECK(t.lambda2 < 1 - 1e-6);
    CHECK(t.zero_pattern_ok);

    // Round-trips through its JSON certificate form.
    auto j = serialize::tmatrix_to_json(t);
    TMatrix back = serialize::tmatrix_from_json(j);
    back.verify();
    CHECK(back.at(1, 2, 3, 0) == t.at(1, 2, 3, 0));
}

TEST_CASE("colouring step 1: satisfying labellings give proper 4-colourings") {
    TMatrix t = build_t();
    games::Game sat{2, 2, {{0, 1, games::TwoToTwo{{0, 1}, {1, 0}}}}};
    Step1Graph s1 = to_colouring_step1(sat, t);
    CHECK(s1.graph.n == 2 * 16);

    std::vector<int> chi{0, 1};  // satisfies the full constraint
    // Colour (v, x) by x_{chi(v)}: proper on every edge.
    for (auto [a, b] : s1.graph.edges) {
        auto [va, xa] = s1.decode(a);
        auto [vb, xb] = s1.decode(b);
        CHECK(xa[static_cast<std::size_t>(chi[static_cast<std::size_t>(va)])] !=
              xb[static_cast<std::size_t>(chi[static_cast<std::size_t>(vb)])]);
    }
    CHECK_THROWS_AS(to_colouring_step1(games::Game{1, 1, {}}, t), precondition_error);
}

TEST_CASE("step-1 edges are independent of the block representative") {
    TMatrix t = build_t();
    std::mt19937_64 rng(17);
    for (int iter = 0; iter < 4; ++iter) {
        int q = (iter % 2 == 0) ? 2 : 4;
        // Random 2<->2 constraint as a block pairing.
        games::Permutation lp = identity(q), rp = identity(q);
        std::shuffle(lp.begin(), lp.end(), rng);
        std::shuffle(rp.begin(), rp.end(), rng);
        games::Relation rel;
        for (int blk = 0; blk < q / 2; ++blk)
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j)
                    rel.emplace_back(lp[static_cast<std::size_t>(2 * blk + i)],
                                     rp[static_cast<std::size_t>(2 * blk + j)]);
        std::sort(rel.begin(), rel.end());

        // All permutation pairs describing this relation as blocks.
        std::vector<std::pair<games::Permutation, games::Permutation>> reps;
        games::Permutation p1 = identity(q);
        do {
            games::Permutation p2 = identity(q);
            do {
                games::Relation r2;
                for (int blk = 0; blk < q / 2; ++blk)
                    for (int i = 0; i < 2; ++i)
                        for (int j = 0; j < 2; ++j)
                            r2.emplace_back(p1[static_cast<std::size_t>(2 * blk + i)],
                                            p2[static_cast<std::size_t>(2 * blk + j)]);
                std::sort(r2.begin(), r2.end());
                if (r2 == rel) reps.emplace_back(p1, p2);
            } while (std::next_permutation(p2.begin(), p2.end()));
        } while (std::next_permutation(p1.begin(), p1.end()));
        REQUIRE(reps.size() >= 2);

        // Edge predicate per representative over all tuple pairs.
        auto edge_set = [&](const games::Permutation& pi1, const games::Permutation& pi2) {
            std::set<std::pair<int, int>> out;
            int tuples = 1 << (2 * q);
            for (int cx = 0; cx < tuples; ++cx)
                for (int cy = 0; cy < tuples; ++cy) {
                    auto digit = [&](int code, int i) { return (code >> (2 * i)) & 3; };
                    bool ok = true;
                    for (int blk = 0; ok && blk < q / 2; ++blk)
                        ok = t.at(digit(cx, pi1[static_cast<std::size_t>(2 * blk)]),
                                  digit(cx, pi1[static_cast<std::size_t>(2 * blk + 1)]),
                                  digit(cy, pi2[static_cast<std::size_t>(2 * blk)]),
                                  digit(cy, pi2[static_cast<std::size_t>(2 * blk + 1)])) > 0;
                    if (ok) out.emplace(cx, cy);
                }
            return out;
        };
        auto base = edge_set(reps[0].first, reps[0].second);
        for (std::size_t i = 1; i < std::min<std::size_t>(reps.size(), 6); ++i)
            CHECK(edge_set(reps[i].first, reps[i].second) == base);
    }
}

TEST_CASE("dir, sym and arc") {
    std::mt19937_64 rng(19);
    UndirectedGraph g = random_graph(6, 0.5, rng);
    g.normalize();
    CHECK(sym(dir(g)) == g);
    CHECK(dir(g).arcs.size() == 2 * g.edges.size());

    // Arc of a directed 3-cycle is again a directed 3-cycle.
    DirectedGraph tri{3, {{0, 1}, {1, 2}, {2, 0}}};
    DirectedGraph a = arc(tri);
    CHECK(a.n == 3);
    CHECK(a.arcs.size() == 3);
    // Follow the unique successor around: a closed walk of length 3.
    std::map<int, int> next;
    for (auto [u, v] : a.arcs) next[u] = v;
    CHECK(next.at(next.at(next.at(0))) == 0);

    // arc(dir(K2)): two arc-vertices chasing each other.
    DirectedGraph k2 = dir(UndirectedGraph{2, {{0, 1}}});
    DirectedGraph ak2 = arc(k2);
    CHECK(ak2.n == 2);
    std::set<std::pair<int, int>> arcs(ak2.arcs.begin(), ak2.arcs.end());
    CHECK(arcs == std::set<std::pair<int, int>>{{0, 1}, {1, 0}});
}

TEST_CASE("chromatic oracle") {
    UndirectedGraph c5{5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 0}}};
    CHECK_FALSE(chromatic_leq(c5, 2));
    CHECK(chromatic_leq(c5, 3));
    UndirectedGraph k4{4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};
    CHECK(chromatic_leq(k4, 4));
    CHECK_FALSE(chromatic_leq(k4, 3));
}

TEST_CASE("arc-chain colourability implications") {
    std::mt19937_64 rng(23);
    for (int iter = 0; iter < 40; ++iter) {
        UndirectedGraph g = random_graph(5, 0.5, rng);
        if (chromatic_leq(sym(arc(dir(g))), 2)) CHECK(chromatic_leq(g, 4));
    }
    for (int iter = 0; iter < 25; ++iter) {
        DirectedGraph d = random_digraph(5, 0.4, rng);
        if (chromatic_leq(sym(d), 4)) {
            DirectedGraph aa = arc(arc(d));
            CHECK(chromatic_leq(sym(aa), 3));
        }
    }
}

TEST_CASE("full colouring chain on a tiny satisfiable game") {
    TMatrix t = build_t();
    games::Game sat{2, 2, {{0, 1, games::TwoToTwo{{0, 1}, {1, 0}}}}};
    UndirectedGraph g3 = to_3colouring(sat, t);
    CHECK(g3.n > 0);
    CHECK(chromatic_leq(g3, 3, 80'000'000));
}
