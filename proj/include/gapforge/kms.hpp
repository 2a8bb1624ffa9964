#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "gapforge/games.hpp"
#include "gapforge/gf2.hpp"
#include "gapforge/xor3.hpp"

namespace gapforge::kms {

struct Params {
    int k = 1;  // equations per tuple
    int l = 0;  // subspace dimension; alphabet size is 2^l
    int d = 5;  // regularity bound of the input instance

    int q() const { return 1 << l; }
    void validate() const;  // 3k <= 16, l <= 3k
};

// Game vertex (U, L*): an ordered tuple of equation indices together with a
// canonical-space subspace L* of F_2^{3k} meeting the fixed space H trivially.
struct Vertex {
    std::vector<int> equations;
    gf2::Subspace lstar;
    bool operator==(const Vertex&) const = default;
};

// Variable coordinates of U: equation j's variables map, in stored order, to
// coordinates 3j, 3j+1, 3j+2.
struct Embedding {
    std::vector<int> coord_to_var;  // size 3k
    std::map<int, int> var_to_coord;
};

// The fixed k-dimensional space H spanned by the per-equation indicator
// vectors e_{3j} + e_{3j+1} + e_{3j+2} in F_2^{3k}.
gf2::Subspace fixed_h(int k);

// All l-dimensional subspaces of F_2^{3k} with trivial intersection with H,
// in canonical enumeration order.
std::vector<gf2::Subspace> canonical_l_family(const Params& params);

// Ordered k-tuples U of pairwise variable-disjoint equations such that no
// equation of the instance joins variables from two distinct members of U.
std::vector<std::vector<int>> enumerate_u(const xor3::Instance& inst, int k);

// H_U inside F_2^X plus the pins (v_i, b_i) for the right-hand sides.
std::pair<gf2::Subspace, std::vector<gf2::Pin>> side_condition_space(
    const xor3::Instance& inst, const std::vector<int>& u);

Embedding canonical_embed(const xor3::Instance& inst, const std::vector<int>& u);

// The 2^l valid labels of a vertex: linear functionals on L* + H honouring
// the right-hand-side pins, ordered lexicographically by their values on the
// echelon basis of L* (first basis row most significant).
std::vector<gf2::Functional> labels_of(const Vertex& v, const xor3::Instance& inst,
                                       const Params& params);

// Constraint between two vertices, or nullopt when the dimension conditions
// select neither the 1-to-1 nor the 2-to-2 case.
std::optional<games::ConstraintLabel> constraint_between(const Vertex& a, const Vertex& b,
                                                         const xor3::Instance& inst,
                                                         const Params& params);

struct TransitiveGame {
    Params params;
    xor3::Instance instance;
    std::vector<Vertex> vertices;
    games::Game game;  // simple, edge consistent, transitive
};

TransitiveGame build_transitive_game(const xor3::Instance& inst, const Params& params);

struct CliqueDecomposition {
    std::vector<int> clique_id;             // vertex -> clique index
    std::vector<std::vector<int>> cliques;  // clique -> sorted vertex list
};

// Connected components of the 1-to-1 subgraph.  Verifies the component is a
// clique and that cross-clique pairs are uniformly all-2-to-2 or all-absent.
CliqueDecomposition clique_decomposition(const TransitiveGame& tg);

enum class WeightScheme { Exact, ApproxInteger };

struct WeightLedger {
    // Per vertex: nu[f] = number of equivalence classes in the vertex's
    // clique whose members have exactly f useful equations, f = 0..k.
    std::vector<std::vector<long long>> nu;
    long long psi = 0;    // max observed class count
    BigInt psi_bound;     // a-priori constant bound |L| * 4^k * (3kd)^k
    std::vector<BigInt> chi;        // per vertex: sum_f nu^f * |Eq|^(k-f)
    std::vector<Rational> exact_w;  // per weighted edge
    std::vector<BigInt> int_w;      // per weighted edge, positive
    Rational gamma;                 // measured single-scale distortion, >= 1
};

struct WeightedReduction {
    TransitiveGame transitive;
    CliqueDecomposition cliques;
    games::WeightedGame weighted;  // all cross-clique 2-to-2 pairs
    WeightLedger ledger;
    // Same-U 2-to-2 pair count (ordered), constant across U.
    long long pairs_per_u = 0;
};

WeightedReduction build_weighted_game(const xor3::Instance& inst, const Params& params,
                                      WeightScheme scheme);

// Per-vertex label indices induced by a satisfying assignment; throws
// precondition_error when s does not satisfy the instance, consistency_error
// if any game edge were left unsatisfied.
std::vector<int> planted_labelling(const xor3::Instance& inst,
                                   const std::vector<std::uint8_t>& s, const TransitiveGame& tg);

}  // namespace gapforge::kms
