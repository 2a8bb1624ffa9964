#include "gapforge/games.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <set>
#include <tuple>

#include "gapforge/errors.hpp"

namespace gapforge::games {

bool is_permutation(const Permutation& p, int q) {
    if (static_cast<int>(p.size()) != q) return false;
    std::vector<bool> seen(q, false);
    for (int v : p) {
        if (v < 0 || v >= q || seen[v]) return false;
        seen[v] = true;
    }
    return true;
}

Permutation inverse(const Permutation& p) {
    Permutation out(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) out[p[i]] = static_cast<int>(i);
    return out;
}

Relation relation_of(const ConstraintLabel& c, int q) {
    Relation r;
    if (const auto* one = std::get_if<OneToOne>(&c)) {
        if (!is_permutation(one->pi, q)) throw precondition_error("OneToOne: not a permutation");
        for (int i = 0; i < q; ++i) r.emplace_back(i, one->pi[i]);
    } else {
        const auto& two = std::get<TwoToTwo>(c);
        if (!is_permutation(two.pi1, q) || !is_permutation(two.pi2, q))
            throw precondition_error("TwoToTwo: not a permutation pair");
        for (int i = 0; i < q; ++i) {
            if (two.pi1[i] == two.pi2[i])
                throw precondition_error("TwoToTwo: permutations must disagree everywhere");
            r.emplace_back(i, two.pi1[i]);
            r.emplace_back(i, two.pi2[i]);
        }
    }
    std::sort(r.begin(), r.end());
    return r;
}

Relation inverse_relation(const Relation& r) {
    Relation out;
    out.reserve(r.size());
    for (auto [a, b] : r) out.emplace_back(b, a);
    std::sort(out.begin(), out.end());
    return out;
}

Relation compose_relations(const Relation& a, const Relation& b) {
    std::set<std::pair<int, int>> out;
    for (auto [x, y] : a)
        for (auto [y2, z] : b)
            if (y == y2) out.emplace(x, z);
    return Relation(out.begin(), out.end());
}

std::optional<ConstraintLabel> label_from_relation(const Relation& r, int q) {
    std::vector<std::vector<int>> rows(q), cols(q);
    for (auto [a, b] : r) {
        if (a < 0 || a >= q || b < 0 || b >= q) return std::nullopt;
        rows[a].push_back(b);
        cols[b].push_back(a);
    }
    auto degree_is = [&](const std::vector<std::vector<int>>& side, std::size_t d) {
        return std::all_of(side.begin(), side.end(),
                           [&](const std::vector<int>& v) { return v.size() == d; });
    };
    if (degree_is(rows, 1) && degree_is(cols, 1)) {
        Permutation pi(q);
        for (int i = 0; i < q; ++i) pi[i] = rows[i][0];
        return ConstraintLabel{OneToOne{pi}};
    }
    if (!degree_is(rows, 2) || !degree_is(cols, 2)) return std::nullopt;

    // Walk the alternating cycles of the 2-regular bipartite graph, placing
    // alternate edges into the two matchings.
    Permutation pi1(q, -1), pi2(q, -1);
    std::vector<bool> left_done(q, false);
    for (int start = 0; start < q; ++start) {
        if (left_done[start]) continue;
        int a = start;
        int b = rows[a][0];
        while (true) {
            pi1[a] = b;
            left_done[a] = true;
            int a2 = cols[b][0] == a ? cols[b][1] : cols[b][0];
            pi2[a2] = b;
            if (a2 == start) break;
            b = rows[a2][0] == b ? rows[a2][1] : rows[a2][0];
            a = a2;
        }
    }
    if (!is_permutation(pi1, q) || !is_permutation(pi2, q)) return std::nullopt;
    for (int i = 0; i < q; ++i)
        if (pi1[i] == pi2[i]) return std::nullopt;
    return ConstraintLabel{TwoToTwo{pi1, pi2}};
}

ConstraintLabel inverse_label(const ConstraintLabel& c, int q) {
    auto inv = label_from_relation(inverse_relation(relation_of(c, q)), q);
    if (!inv) throw consistency_error("inverse_label: relation not invertible");
    return *inv;
}

void Game::validate() const {
    for (const auto& e : edges) {
        if (e.u < 0 || e.v < 0 || e.u >= num_vertices || e.v >= num_vertices)
            throw precondition_error("Game: vertex index out of range");
        if (e.u == e.v) throw precondition_error("Game: self-loops are not allowed");
        relation_of(e.c, q);  // validates the label
    }
}

void WeightedGame::validate() const {
    game.validate();
    if (weights.size() != game.edges.size())
        throw precondition_error("WeightedGame: one weight per edge required");
    for (const auto& w : weights)
        if (!(w > Rational(0))) throw precondition_error("WeightedGame: weights must be positive");
}

Rational WeightedGame::total_weight() const {
    Rational tot(0);
    for (const auto& w : weights) tot += w;
    return tot;
}

namespace {

std::uint64_t checked_pow(std::uint64_t base, int exp, std::uint64_t cap) {
    std::uint64_t out = 1;
    for (int i = 0; i < exp; ++i) {
        if (out > cap / std::max<std::uint64_t>(base, 1)) return cap + 1;
        out *= base;
    }
    return out;
}

// Satisfaction lookup: bit (cu * q + cv) of the edge's relation mask.
std::vector<std::uint64_t> relation_mask(const Relation& r, int q) {
    std::vector<std::uint64_t> mask((static_cast<std::size_t>(q) * q + 63) / 64, 0);
    for (auto [a, b] : r) {
        std::size_t bit = static_cast<std::size_t>(a) * q + b;
        mask[bit / 64] |= 1ull << (bit % 64);
    }
    return mask;
}

// Maximizes the satisfied weight over all colourings with a reflected
// mixed-radix Gray walk: each step recolours a single vertex.
template <typename Weight>
Weight max_satisfied(const Game& g, const std::vector<Weight>& w) {
    const int n = g.num_vertices;
    const int q = g.q;
    const auto m = g.edges.size();

    std::vector<std::vector<std::uint64_t>> masks;
    masks.reserve(m);
    for (const auto& e : g.edges) masks.push_back(relation_mask(relation_of(e.c, q), q));
    std::vector<std::vector<int>> incident(n);
    for (std::size_t i = 0; i < m; ++i) {
        incident[g.edges[i].u].push_back(static_cast<int>(i));
        incident[g.edges[i].v].push_back(static_cast<int>(i));
    }

    std::vector<int> colour(n, 0);
    std::vector<std::uint8_t> sat(m, 0);
    Weight cur{0};
    auto edge_sat = [&](std::size_t i) {
        std::size_t bit =
            static_cast<std::size_t>(colour[g.edges[i].u]) * q + colour[g.edges[i].v];
        return (masks[i][bit / 64] >> (bit % 64)) & 1;
    };
    for (std::size_t i = 0; i < m; ++i) {
        sat[i] = static_cast<std::uint8_t>(edge_sat(i));
        if (sat[i]) cur += w[i];
    }
    Weight best = cur;

    if (q < 2 || n == 0) return best;
    // Knuth 7.2.1.1 Algorithm H (loopless reflected mixed-radix Gray).
    std::vector<int> focus(n + 1), dir(n, 1);
    for (int j = 0; j <= n; ++j) focus[j] = j;
    while (true) {
        int j = focus[0];
        focus[0] = 0;
        if (j == n) break;
        colour[j] += dir[j];
        if (colour[j] == 0 || colour[j] == q - 1) {
            dir[j] = -dir[j];
            focus[j] = focus[j + 1];
            focus[j + 1] = j + 1;
        }
        for (int i : incident[j]) {
            auto now = static_cast<std::uint8_t>(edge_sat(static_cast<std::size_t>(i)));
            if (now == sat[i]) continue;
            if (now)
                cur += w[i];
            else
                cur -= w[i];
            sat[i] = now;
        }
        if (best < cur) best = cur;
    }
    return best;
}

// Scales rational weights to coprime integers.  Falls back to exact rational
// accumulation when they do not fit in int64.
Rational optimum_fraction(const Game& g, const std::vector<Rational>& weights,
                          std::uint64_t budget) {
    if (g.edges.empty()) return Rational(1);
    if (checked_pow(static_cast<std::uint64_t>(g.q), g.num_vertices, budget) > budget)
        throw capacity_error("game value: q^V colourings exceed the budget");

    BigInt lcm(1);
    for (const auto& w : weights) lcm = lcm / BigInt::gcd(lcm, w.den()) * w.den();
    std::vector<BigInt> scaled;
    scaled.reserve(weights.size());
    BigInt g0(0);
    for (const auto& w : weights) {
        scaled.push_back(w.num() * (lcm / w.den()));
        g0 = BigInt::gcd(g0, scaled.back());
    }
    BigInt total(0);
    for (auto& s : scaled) {
        s = s / g0;
        total += s;
    }

    if (total.fits_int64()) {
        std::vector<long long> w64;
        w64.reserve(scaled.size());
        for (const auto& s : scaled) w64.push_back(s.to_int64());
        long long best = max_satisfied<long long>(g, w64);
        return Rational(BigInt(best), total);
    }
    std::vector<Rational> wr;
    wr.reserve(scaled.size());
    for (const auto& s : scaled) wr.emplace_back(s, BigInt(1));
    Rational best = max_satisfied<Rational>(g, wr);
    return best / Rational(total, BigInt(1));
}

}  // namespace

Rational value(const Game& g, std::uint64_t budget) {
    g.validate();
    return optimum_fraction(g, std::vector<Rational>(g.edges.size(), Rational(1)), budget);
}

Rational weighted_value(const WeightedGame& g, std::uint64_t budget) {
    g.validate();
    return optimum_fraction(g.game, g.weights, budget);
}

namespace {

// Max independent set size over an adjacency-mask graph (n <= 32).
int mis_size(const std::vector<std::uint32_t>& adj, std::uint32_t candidates) {
    if (!candidates) return 0;
    int v = std::countr_zero(candidates);
    std::uint32_t without = candidates & ~(1u << v);
    int skip = mis_size(adj, without);
    int take = 1 + mis_size(adj, without & ~adj[v]);
    return std::max(skip, take);
}

}  // namespace

Rational irreg_value(const Game& g, int j, std::uint64_t budget) {
    g.validate();
    if (j < 1 || j > g.q) throw precondition_error("irreg_value: need 1 <= j <= q");
    if (g.num_vertices > 20) throw capacity_error("irreg_value: too many vertices");
    if (g.num_vertices == 0) return Rational(1);

    std::vector<std::uint32_t> subsets;  // all j-subsets of [q] as bitmasks
    for (std::uint32_t s = 0; s < (1u << g.q); ++s)
        if (std::popcount(s) == j) subsets.push_back(s);
    if (checked_pow(subsets.size(), g.num_vertices, budget) > budget)
        throw capacity_error("irreg_value: colouring budget exceeded");

    // Per edge: row masks of the relation for the "exists a related pair" test.
    std::vector<std::vector<std::uint32_t>> rows(g.edges.size(),
                                                 std::vector<std::uint32_t>(g.q, 0));
    for (std::size_t i = 0; i < g.edges.size(); ++i)
        for (auto [a, b] : relation_of(g.edges[i].c, g.q)) rows[i][a] |= 1u << b;

    const int n = g.num_vertices;
    std::vector<std::size_t> pick(n, 0);
    int best = 0;
    while (true) {
        std::vector<std::uint32_t> violated(n, 0);
        for (std::size_t i = 0; i < g.edges.size(); ++i) {
            std::uint32_t cu = subsets[pick[g.edges[i].u]];
            std::uint32_t cv = subsets[pick[g.edges[i].v]];
            bool sat = false;
            for (std::uint32_t rest = cu; rest && !sat; rest &= rest - 1)
                sat = (rows[i][std::countr_zero(rest)] & cv) != 0;
            if (!sat) {
                violated[g.edges[i].u] |= 1u << g.edges[i].v;
                violated[g.edges[i].v] |= 1u << g.edges[i].u;
            }
        }
        best = std::max(best, mis_size(violated, (n == 32) ? ~0u : ((1u << n) - 1)));
        if (best == n) break;
        int d = 0;
        while (d < n && ++pick[d] == subsets.size()) pick[d++] = 0;
        if (d == n) break;
    }
    return Rational(best, n);
}

namespace {

// Relations keyed by ordered vertex pair; throws if parallel edges disagree.
std::map<std::pair<int, int>, Relation> relation_map(const Game& g) {
    std::map<std::pair<int, int>, Relation> rel;
    for (const auto& e : g.edges) {
        Relation r = relation_of(e.c, g.q);
        auto put = [&](int a, int b, const Relation& rr) {
            auto [it, inserted] = rel.try_emplace({a, b}, rr);
            if (!inserted && it->second != rr)
                throw precondition_error("game is not edge consistent");
        };
        put(e.u, e.v, r);
        put(e.v, e.u, inverse_relation(r));
    }
    return rel;
}

}  // namespace

bool is_edge_consistent(const Game& g) {
    std::map<std::pair<int, int>, Relation> seen;
    for (const auto& e : g.edges) {
        Relation r = relation_of(e.c, g.q);
        if (e.u > e.v) r = inverse_relation(r);
        auto key = std::minmax(e.u, e.v);
        auto [it, inserted] = seen.try_emplace({key.first, key.second}, r);
        if (!inserted && it->second != r) return false;
    }
    return true;
}

bool is_edge_distinct(const Game& g) {
    std::set<std::tuple<int, int, Relation>> seen;
    for (const auto& e : g.edges) {
        Relation r = relation_of(e.c, g.q);
        if (e.u > e.v) r = inverse_relation(r);
        auto key = std::minmax(e.u, e.v);
        if (!seen.emplace(key.first, key.second, r).second) return false;
    }
    return true;
}

bool is_simple(const Game& g) {
    std::set<std::pair<int, int>> seen;
    for (const auto& e : g.edges) {
        auto key = std::minmax(e.u, e.v);
        if (!seen.emplace(key.first, key.second).second) return false;
    }
    return true;
}

bool is_2bi2(const ConstraintLabel& c, int q) {
    if (!std::holds_alternative<TwoToTwo>(c)) return false;
    if (q % 2 != 0) return false;
    Relation r = relation_of(c, q);
    std::vector<std::vector<int>> rows(q), cols(q);
    for (auto [a, b] : r) {
        rows[a].push_back(b);
        cols[b].push_back(a);
    }
    // Group left labels by their (two-element) neighbour set; each group must
    // be a K_{2,2} block.
    std::map<std::vector<int>, std::vector<int>> blocks;
    for (int a = 0; a < q; ++a) {
        auto nb = rows[a];
        std::sort(nb.begin(), nb.end());
        if (nb.size() != 2 || nb[0] == nb[1]) return false;
        blocks[nb].push_back(a);
    }
    for (const auto& [nb, lefts] : blocks) {
        if (lefts.size() != 2) return false;
        for (int b : nb) {
            auto cs = cols[b];
            std::sort(cs.begin(), cs.end());
            if (cs != lefts) return false;
        }
    }
    return true;
}

std::optional<std::pair<Permutation, Permutation>> block_representative(const ConstraintLabel& c,
                                                                        int q) {
    if (!is_2bi2(c, q)) return std::nullopt;
    Relation r = relation_of(c, q);
    std::vector<std::vector<int>> rows(q);
    for (auto [a, b] : r) rows[a].push_back(b);

    Permutation pi1, pi2;
    std::vector<bool> placed(q, false);
    for (int a = 0; a < q; ++a) {
        if (placed[a]) continue;
        auto nb = rows[a];
        std::sort(nb.begin(), nb.end());
        int partner = -1;
        for (int a2 = a + 1; a2 < q; ++a2) {
            auto nb2 = rows[a2];
            std::sort(nb2.begin(), nb2.end());
            if (nb2 == nb) {
                partner = a2;
                break;
            }
        }
        placed[a] = placed[partner] = true;
        pi1.push_back(a);
        pi1.push_back(partner);
        pi2.push_back(nb[0]);
        pi2.push_back(nb[1]);
    }
    return std::make_pair(pi1, pi2);
}

Game simplify(const Game& g) {
    g.validate();
    Game out;
    out.num_vertices = g.num_vertices;
    out.q = g.q;
    std::set<std::tuple<int, int, Relation>> seen;
    for (const auto& e : g.edges) {
        int u = e.u, v = e.v;
        Relation r = relation_of(e.c, g.q);
        if (u > v) {
            std::swap(u, v);
            r = inverse_relation(r);
        }
        if (!seen.emplace(u, v, r).second) continue;
        auto label = label_from_relation(r, g.q);
        if (!label) throw consistency_error("simplify: relation lost its d-to-d shape");
        out.edges.push_back({u, v, *label});
    }
    return out;
}

Game simplify(const WeightedGame& g) { return simplify(g.game); }

bool check_transitive(const Game& g) {
    if (!is_edge_consistent(g)) throw precondition_error("check_transitive: game not edge consistent");
    auto rel = relation_map(g);
    std::vector<std::vector<int>> out_neigh(g.num_vertices);
    for (const auto& [key, r] : rel) out_neigh[key.first].push_back(key.second);

    auto is_one_to_one = [&](const Relation& r) {
        std::vector<int> deg(g.q, 0);
        for (auto [a, b] : r) ++deg[a];
        return static_cast<int>(r.size()) == g.q &&
               std::all_of(deg.begin(), deg.end(), [](int d) { return d == 1; });
    };

    for (const auto& [key, r_uv] : rel) {
        if (!is_one_to_one(r_uv)) continue;
        auto [u, v] = key;
        for (int w : out_neigh[v]) {
            if (w == u) continue;
            auto it = rel.find({u, w});
            if (it == rel.end()) return false;
            if (it->second != compose_relations(r_uv, rel.at({v, w}))) return false;
        }
    }
    return true;
}

Game expand_multigraph(const WeightedGame& g, std::uint64_t budget) {
    g.validate();
    BigInt total(0);
    for (const auto& w : g.weights) {
        if (w.den() != BigInt(1))
            throw precondition_error("expand_multigraph: weights must be integers");
        total += w.num();
    }
    if (!total.fits_int64() || static_cast<std::uint64_t>(total.to_int64()) > budget)
        throw capacity_error("expand_multigraph: total multiplicity exceeds the budget");

    Game out;
    out.num_vertices = g.game.num_vertices;
    out.q = g.game.q;
    for (std::size_t i = 0; i < g.game.edges.size(); ++i) {
        long long reps = g.weights[i].num().to_int64();
        for (long long k = 0; k < reps; ++k) out.edges.push_back(g.game.edges[i]);
    }
    return out;
}

}  // namespace gapforge::games
