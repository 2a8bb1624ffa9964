#pragma once

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "gapforge/bigint.hpp"

namespace gapforge::games {

// images[i] is the image of label i; bijective on [q].
using Permutation = std::vector<int>;

bool is_permutation(const Permutation& p, int q);
Permutation inverse(const Permutation& p);

struct OneToOne {
    Permutation pi;
    bool operator==(const OneToOne&) const = default;
};

// Union of the graphs of two pointwise-disjoint permutations: label i is
// related to exactly pi1[i] and pi2[i].
struct TwoToTwo {
    Permutation pi1;
    Permutation pi2;
    bool operator==(const TwoToTwo&) const = default;
};

using ConstraintLabel = std::variant<OneToOne, TwoToTwo>;

// A constraint relation as a sorted set of label pairs.  Constraints are
// stored as permutation representatives but always *compared* as relations:
// distinct permutation pairs can describe the same constraint.
using Relation = std::vector<std::pair<int, int>>;

Relation relation_of(const ConstraintLabel& c, int q);
Relation inverse_relation(const Relation& r);
Relation compose_relations(const Relation& a, const Relation& b);

// Decomposes a 1-to-1 or 2-to-2 relation back into permutation form
// (matching decomposition along alternating cycles).  nullopt when the
// relation is not exactly d-to-d for d in {1, 2}.
std::optional<ConstraintLabel> label_from_relation(const Relation& r, int q);

// Canonical label of the inverse relation.
ConstraintLabel inverse_label(const ConstraintLabel& c, int q);

struct Edge {
    int u = 0;
    int v = 0;
    ConstraintLabel c;
    bool operator==(const Edge&) const = default;
};

struct Game {
    int num_vertices = 0;
    int q = 0;  // alphabet size
    std::vector<Edge> edges;

    bool operator==(const Game&) const = default;
    void validate() const;
};

struct WeightedGame {
    Game game;
    std::vector<Rational> weights;  // positive, one per edge

    Rational total_weight() const;
    void validate() const;
};

// Exact optimum over all colourings V -> [q] of the satisfied fraction
// (weight fraction in the weighted case).  Capacity-guarded: q^V colourings.
Rational value(const Game& g, std::uint64_t budget = 20'000'000);
Rational weighted_value(const WeightedGame& g, std::uint64_t budget = 20'000'000);

// Largest |X|/|V| over all j-set colourings c: V -> (labels choose j) such
// that every edge inside X has some related pair in c(u) x c(v).
Rational irreg_value(const Game& g, int j, std::uint64_t budget = 20'000'000);

bool is_edge_consistent(const Game& g);
bool is_edge_distinct(const Game& g);
bool is_simple(const Game& g);

// True iff the constraint is a 2-to-2 relation that is a disjoint union of
// K_{2,2} blocks.
bool is_2bi2(const ConstraintLabel& c, int q);

// Block representative (pi1, pi2) of a 2<->2 constraint: block i has left
// labels pi1[2i], pi1[2i+1] and right labels pi2[2i], pi2[2i+1].  Blocks are
// ordered by smallest left label; nullopt when not 2<->2.
std::optional<std::pair<Permutation, Permutation>> block_representative(const ConstraintLabel& c,
                                                                        int q);

// Drops weights and multiplicities: at most one edge per (u, v, relation),
// with u <= v after orientation normalization.
Game simplify(const WeightedGame& g);
Game simplify(const Game& g);

// Every 1-to-1 edge (u,v) composes: for each edge (v,w) the edge (u,w) must
// exist and carry exactly the composed relation.  Requires edge consistency.
bool check_transitive(const Game& g);

// Integer-weighted game as an unweighted edge-consistent multigraph with
// w(e) parallel edges.  Requires integer weights; guarded by total edge count.
Game expand_multigraph(const WeightedGame& g, std::uint64_t budget = 1'000'000);

}  // namespace gapforge::games
