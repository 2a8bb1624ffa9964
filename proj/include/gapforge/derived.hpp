#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "gapforge/bigint.hpp"
#include "gapforge/games.hpp"

namespace gapforge::derived {

struct DirectedGraph {
    int n = 0;
    std::vector<std::pair<int, int>> arcs;
    bool operator==(const DirectedGraph&) const = default;
};

struct UndirectedGraph {
    int n = 0;
    std::vector<std::pair<int, int>> edges;
    bool operator==(const UndirectedGraph&) const = default;
    void normalize();  // orients u <= v, sorts, dedupes
};

// Splits every 2-to-2 constraint into its two 1-to-1 halves; any colouring
// satisfies exactly half as many constraints, so the value halves exactly.
games::Game to_unique_games(const games::Game& g);

// Vertex-weighted independent-set instance: vertices (v, A) for all label
// subsets A, weight p^|A| (1-p)^(q-|A|) with p = P/Q; vertices adjacent when
// some constraint on (u, v) has empty intersection with A_1 x A_2.
struct WeightedIsGraph {
    int game_vertices = 0;
    int q = 0;  // alphabet size; vertex (v, A) has index v * 2^q + A
    long long p_num = 0, p_den = 1;
    std::vector<Rational> weights;  // per vertex
    UndirectedGraph graph;
};

WeightedIsGraph to_independent_set(const games::WeightedGame& g, long long P, long long Q);
WeightedIsGraph to_independent_set(const games::Game& g, long long P, long long Q);

// Unweighted expansion: vertex (v, A) becomes a cloud of
// W(v,A) = P^|A| (Q-P)^(q-|A|) twins with inherited cross-cloud edges.
UndirectedGraph cloud_expand(const WeightedIsGraph& wg, std::uint64_t vertex_budget = 128);

// Exact maximum-weight independent set fraction (weight of the best set over
// the total weight); branch and bound.
Rational weighted_is_value(const WeightedIsGraph& wg, std::uint64_t node_budget = 50'000'000);

// Exact maximum independent set fraction; branch and bound, default cap 30
// vertices (budget-extensible).
Rational is_value_bruteforce(const UndirectedGraph& g, int vertex_cap = 30,
                             std::uint64_t node_budget = 50'000'000);
Rational vc_value(const UndirectedGraph& g, int vertex_cap = 30,
                  std::uint64_t node_budget = 50'000'000);

// Symmetric doubly stochastic 16x16 matrix over S = {0..3}^2, zero exactly on
// pairs with intersecting coordinate sets, second eigenvalue below 1;
// obtained by symmetric Sinkhorn scaling of the disjointness pattern.
struct TMatrix {
    std::array<std::array<double, 16>, 16> entries{};
    int iterations = 0;
    double stochasticity_error = 0;  // max |row sum - 1|
    double symmetry_error = 0;
    double lambda2 = 0;  // modulus of the second-largest eigenvalue
    bool zero_pattern_ok = false;

    static int index(int a, int b) { return 4 * a + b; }
    double at(int x1, int x2, int y1, int y2) const {
        return entries[static_cast<std::size_t>(index(x1, x2))]
                      [static_cast<std::size_t>(index(y1, y2))];
    }
    void verify() const;  // throws consistency_error when any certificate fails
};

TMatrix build_t(int max_iterations = 20000, double tolerance = 1e-13);

// First colouring step: vertices V x {0,1,2,3}^L for alphabet size L, edges
// where some constraint's block representative keeps T positive on every
// block.  Vertex (v, x) has index v * 4^L + sum x_i 4^i.
struct Step1Graph {
    int game_vertices = 0;
    int alphabet = 0;
    UndirectedGraph graph;

    int encode(int v, const std::vector<int>& x) const;
    std::pair<int, std::vector<int>> decode(int vertex) const;
};

Step1Graph to_colouring_step1(const games::Game& g, const TMatrix& t,
                              std::uint64_t vertex_budget = 4096);

DirectedGraph dir(const UndirectedGraph& g);
UndirectedGraph sym(const DirectedGraph& d);
DirectedGraph arc(const DirectedGraph& d);

// (sym . arc . arc . dir) applied to the step-1 output.
UndirectedGraph to_3colouring(const games::Game& g, const TMatrix& t,
                              std::uint64_t vertex_budget = 200'000);

// Exact t-colourability decision by saturation-ordered backtracking.
bool chromatic_leq(const UndirectedGraph& g, int t, std::uint64_t node_budget = 20'000'000);
std::optional<std::vector<int>> find_colouring(const UndirectedGraph& g, int t,
                                               std::uint64_t node_budget = 20'000'000);

}  // namespace gapforge::derived
