#include "gapforge/derived.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <map>
#include <random>
#include <set>

#include "gapforge/errors.hpp"

namespace gapforge::derived {

void UndirectedGraph::normalize() {
    for (auto& [u, v] : edges)
        if (u > v) std::swap(u, v);
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
}

games::Game to_unique_games(const games::Game& g) {
    g.validate();
    games::Game out;
    out.num_vertices = g.num_vertices;
    out.q = g.q;
    for (const auto& e : g.edges) {
        const auto* two = std::get_if<games::TwoToTwo>(&e.c);
        if (!two) throw precondition_error("to_unique_games: all constraints must be 2-to-2");
        out.edges.push_back({e.u, e.v, games::OneToOne{two->pi1}});
        out.edges.push_back({e.u, e.v, games::OneToOne{two->pi2}});
    }
    return out;
}

WeightedIsGraph to_independent_set(const games::Game& g, long long P, long long Q) {
    g.validate();
    if (P <= 0 || Q <= P) throw precondition_error("to_independent_set: need 0 < P/Q < 1");
    if (g.q > 8) throw capacity_error("to_independent_set: alphabet too large");

    WeightedIsGraph out;
    out.game_vertices = g.num_vertices;
    out.q = g.q;
    out.p_num = P;
    out.p_den = Q;
    const int subsets = 1 << g.q;
    out.graph.n = g.num_vertices * subsets;

    Rational p{BigInt(P), BigInt(Q)};
    Rational pc = Rational(1) - p;
    for (int v = 0; v < g.num_vertices; ++v) {
        for (int a = 0; a < subsets; ++a) {
            int size = std::popcount(static_cast<unsigned>(a));
            Rational w(1);
            for (int i = 0; i < size; ++i) w *= p;
            for (int i = 0; i < g.q - size; ++i) w *= pc;
            out.weights.push_back(w);
        }
    }

    // Per ordered game pair, the relation rows of every parallel constraint.
    std::map<std::pair<int, int>, std::vector<std::vector<std::uint32_t>>> rows;
    for (const auto& e : g.edges) {
        games::Relation rel = games::relation_of(e.c, g.q);
        std::vector<std::uint32_t> fwd(static_cast<std::size_t>(g.q), 0);
        for (auto [a, b] : rel) fwd[static_cast<std::size_t>(a)] |= 1u << b;
        rows[{e.u, e.v}].push_back(fwd);
        std::vector<std::uint32_t> bwd(static_cast<std::size_t>(g.q), 0);
        for (auto [a, b] : rel) bwd[static_cast<std::size_t>(b)] |= 1u << a;
        rows[{e.v, e.u}].push_back(bwd);
    }
    auto empty_meet = [&](const std::vector<std::uint32_t>& r, unsigned a1, unsigned a2) {
        for (unsigned rest = a1; rest; rest &= rest - 1)
            if (r[static_cast<std::size_t>(std::countr_zero(rest))] & a2) return false;
        return true;
    };
    for (const auto& [pair, rels] : rows) {
        auto [u, v] = pair;
        if (u > v) continue;  // the undirected edge set is built once per pair
        for (int a1 = 0; a1 < subsets; ++a1)
            for (int a2 = 0; a2 < subsets; ++a2) {
                bool adjacent = false;
                for (const auto& r : rels)
                    adjacent = adjacent || empty_meet(r, static_cast<unsigned>(a1),
                                                      static_cast<unsigned>(a2));
                if (adjacent)
                    out.graph.edges.emplace_back(u * subsets + a1, v * subsets + a2);
            }
    }
    out.graph.normalize();
    return out;
}

WeightedIsGraph to_independent_set(const games::WeightedGame& g, long long P, long long Q) {
    return to_independent_set(g.game, P, Q);
}

UndirectedGraph cloud_expand(const WeightedIsGraph& wg, std::uint64_t vertex_budget) {
    const int subsets = 1 << wg.q;
    // Integer cloud sizes W(v,A) = P^|A| (Q-P)^(q-|A|).
    std::vector<long long> cloud(wg.weights.size(), 0);
    long long total = 0;
    for (int v = 0; v < wg.game_vertices; ++v) {
        for (int a = 0; a < subsets; ++a) {
            int size = std::popcount(static_cast<unsigned>(a));
            long long w = 1;
            for (int i = 0; i < size; ++i) w *= wg.p_num;
            for (int i = 0; i < wg.q - size; ++i) w *= wg.p_den - wg.p_num;
            cloud[static_cast<std::size_t>(v * subsets + a)] = w;
            total += w;
        }
    }
    if (static_cast<std::uint64_t>(total) > vertex_budget)
        throw capacity_error("cloud_expand: cloud total exceeds the vertex budget");

    std::vector<int> base(cloud.size() + 1, 0);
    for (std::size_t i = 0; i < cloud.size(); ++i)
        base[i + 1] = base[i] + static_cast<int>(cloud[i]);

    UndirectedGraph out;
    out.n = static_cast<int>(total);
    for (auto [u, v] : wg.graph.edges)
        for (long long i = 0; i < cloud[static_cast<std::size_t>(u)]; ++i)
            for (long long j = 0; j < cloud[static_cast<std::size_t>(v)]; ++j)
                out.edges.emplace_back(base[static_cast<std::size_t>(u)] + static_cast<int>(i),
                                       base[static_cast<std::size_t>(v)] + static_cast<int>(j));
    out.normalize();
    return out;
}

namespace {

struct MisContext {
    std::vector<std::vector<int>> adj;
    std::uint64_t budget;
    std::uint64_t spent = 0;

    void charge() {
        if (++spent > budget) throw capacity_error("independent set: search budget exhausted");
    }
};

// Branch and bound for maximum-weight independent sets; weights are exact.
Rational best_weight(MisContext& ctx, std::vector<int>& alive, const std::vector<Rational>& w) {
    ctx.charge();
    if (alive.empty()) return Rational(0);
    // Bound: everything alive could be taken.
    // Branch on the highest-degree alive vertex.
    int pick = alive[0];
    std::size_t best_deg = 0;
    std::vector<int> alive_set = alive;
    std::sort(alive_set.begin(), alive_set.end());
    auto is_alive = [&](int v) {
        return std::binary_search(alive_set.begin(), alive_set.end(), v);
    };
    for (int v : alive) {
        std::size_t deg = 0;
        for (int u : ctx.adj[static_cast<std::size_t>(v)])
            if (is_alive(u)) ++deg;
        if (deg >= best_deg) {
            best_deg = deg;
            pick = v;
        }
    }
    if (best_deg == 0) {
        Rational sum(0);
        for (int v : alive) sum += w[static_cast<std::size_t>(v)];
        return sum;
    }
    // Take pick.
    std::vector<int> without_nbhd;
    for (int v : alive)
        if (v != pick && std::find(ctx.adj[static_cast<std::size_t>(pick)].begin(),
                                   ctx.adj[static_cast<std::size_t>(pick)].end(),
                                   v) == ctx.adj[static_cast<std::size_t>(pick)].end())
            without_nbhd.push_back(v);
    Rational take = w[static_cast<std::size_t>(pick)] + best_weight(ctx, without_nbhd, w);
    // Skip pick.
    std::vector<int> without_pick;
    for (int v : alive)
        if (v != pick) without_pick.push_back(v);
    Rational skip = best_weight(ctx, without_pick, w);
    return std::max(take, skip);
}

}  // namespace

Rational weighted_is_value(const WeightedIsGraph& wg, std::uint64_t node_budget) {
    MisContext ctx;
    ctx.budget = node_budget;
    ctx.adj.assign(static_cast<std::size_t>(wg.graph.n), {});
    for (auto [u, v] : wg.graph.edges) {
        ctx.adj[static_cast<std::size_t>(u)].push_back(v);
        ctx.adj[static_cast<std::size_t>(v)].push_back(u);
    }
    std::vector<int> alive(static_cast<std::size_t>(wg.graph.n));
    for (int i = 0; i < wg.graph.n; ++i) alive[static_cast<std::size_t>(i)] = i;
    Rational best = best_weight(ctx, alive, wg.weights);
    Rational total(0);
    for (const auto& w : wg.weights) total += w;
    return best / total;
}

namespace {

int mis_size_masks(const std::vector<std::uint64_t>& adj, std::uint64_t candidates,
                   MisContext& ctx) {
    ctx.charge();
    if (!candidates) return 0;
    // Branch on the candidate of max degree within candidates.
    int pick = -1, deg = -1;
    for (std::uint64_t rest = candidates; rest; rest &= rest - 1) {
        int v = std::countr_zero(rest);
        int d = std::popcount(adj[static_cast<std::size_t>(v)] & candidates);
        if (d > deg) {
            deg = d;
            pick = v;
        }
    }
    if (deg == 0) return std::popcount(candidates);
    std::uint64_t without = candidates & ~(1ull << pick);
    int take = 1 + mis_size_masks(adj, without & ~adj[static_cast<std::size_t>(pick)], ctx);
    int skip = mis_size_masks(adj, without, ctx);
    return std::max(take, skip);
}

}  // namespace

Rational is_value_bruteforce(const UndirectedGraph& g, int vertex_cap,
                             std::uint64_t node_budget) {
    if (g.n > vertex_cap || g.n > 63)
        throw capacity_error("is_value_bruteforce: graph over the vertex cap");
    if (g.n == 0) return Rational(1);
    std::vector<std::uint64_t> adj(static_cast<std::size_t>(g.n), 0);
    for (auto [u, v] : g.edges) {
        if (u == v) throw precondition_error("is_value_bruteforce: self-loop");
        adj[static_cast<std::size_t>(u)] |= 1ull << v;
        adj[static_cast<std::size_t>(v)] |= 1ull << u;
    }
    MisContext ctx;
    ctx.budget = node_budget;
    std::uint64_t all = g.n == 63 ? ~0ull >> 1 : (1ull << g.n) - 1;
    int best = mis_size_masks(adj, all, ctx);
    return Rational(best, g.n);
}

Rational vc_value(const UndirectedGraph& g, int vertex_cap, std::uint64_t node_budget) {
    return Rational(1) - is_value_bruteforce(g, vertex_cap, node_budget);
}

void TMatrix::verify() const {
    if (!zero_pattern_ok) throw consistency_error("TMatrix: zero pattern violated");
    if (stochasticity_error > 1e-9) throw consistency_error("TMatrix: rows/columns not stochastic");
    if (symmetry_error > 1e-9) throw consistency_error("TMatrix: not symmetric");
    if (!(lambda2 < 1 - 1e-6)) throw consistency_error("TMatrix: second eigenvalue too large");
}

TMatrix build_t(int max_iterations, double tolerance) {
    TMatrix t;
    // Disjointness pattern on S = {0..3}^2.
    std::array<std::array<double, 16>, 16> m{};
    for (int x1 = 0; x1 < 4; ++x1)
        for (int x2 = 0; x2 < 4; ++x2)
            for (int y1 = 0; y1 < 4; ++y1)
                for (int y2 = 0; y2 < 4; ++y2) {
                    bool meet = x1 == y1 || x1 == y2 || x2 == y1 || x2 == y2;
                    m[static_cast<std::size_t>(TMatrix::index(x1, x2))]
                     [static_cast<std::size_t>(TMatrix::index(y1, y2))] = meet ? 0.0 : 1.0;
                }

    // Symmetric Sinkhorn: divide symmetrically by sqrt of the row sums.
    double err = 1;
    int iter = 0;
    for (; iter < max_iterations; ++iter) {
        std::array<double, 16> row{};
        for (int i = 0; i < 16; ++i)
            for (int j = 0; j < 16; ++j) row[static_cast<std::size_t>(i)] += m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        err = 0;
        for (int i = 0; i < 16; ++i) err = std::max(err, std::abs(row[static_cast<std::size_t>(i)] - 1.0));
        if (err <= tolerance) break;
        for (int i = 0; i < 16; ++i)
            for (int j = 0; j < 16; ++j)
                m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] /=
                    std::sqrt(row[static_cast<std::size_t>(i)]) * std::sqrt(row[static_cast<std::size_t>(j)]);
    }
    if (err > tolerance) throw generation_error("build_t: balancing did not converge");
    t.entries = m;
    t.iterations = iter;

    double sto = 0, symm = 0;
    bool zeros = true;
    for (int i = 0; i < 16; ++i) {
        double row = 0, col = 0;
        for (int j = 0; j < 16; ++j) {
            row += m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
            col += m[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)];
            symm = std::max(symm, std::abs(m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] -
                                           m[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)]));
        }
        sto = std::max({sto, std::abs(row - 1.0), std::abs(col - 1.0)});
    }
    for (int x1 = 0; x1 < 4; ++x1)
        for (int x2 = 0; x2 < 4; ++x2)
            for (int y1 = 0; y1 < 4; ++y1)
                for (int y2 = 0; y2 < 4; ++y2) {
                    bool meet = x1 == y1 || x1 == y2 || x2 == y1 || x2 == y2;
                    double v = t.at(x1, x2, y1, y2);
                    if (meet && v != 0.0) zeros = false;
                    if (!meet && v <= 0.0) zeros = false;
                }
    t.stochasticity_error = sto;
    t.symmetry_error = symm;
    t.zero_pattern_ok = zeros;

    // Power iteration on the deflated matrix (top eigenpair is (1, uniform)).
    std::array<double, 16> v{};
    std::mt19937_64 rng(12345);
    for (auto& x : v) x = std::uniform_real_distribution<double>(-1, 1)(rng);
    double lambda = 0;
    for (int it = 0; it < 20000; ++it) {
        double mean = 0;
        for (double x : v) mean += x / 16.0;
        for (auto& x : v) x -= mean;  // deflate the uniform eigenvector
        std::array<double, 16> next{};
        for (int i = 0; i < 16; ++i)
            for (int j = 0; j < 16; ++j)
                next[static_cast<std::size_t>(i)] +=
                    m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] * v[static_cast<std::size_t>(j)];
        double norm = 0;
        for (double x : next) norm += x * x;
        norm = std::sqrt(norm);
        if (norm == 0) break;
        for (auto& x : next) x /= norm;
        lambda = norm;
        v = next;
    }
    t.lambda2 = lambda;
    return t;
}

int Step1Graph::encode(int v, const std::vector<int>& x) const {
    int code = 0;
    for (std::size_t i = x.size(); i-- > 0;) code = code * 4 + x[i];
    return v * (1 << (2 * alphabet)) + code;
}

std::pair<int, std::vector<int>> Step1Graph::decode(int vertex) const {
    int tuples = 1 << (2 * alphabet);
    int v = vertex / tuples;
    int code = vertex % tuples;
    std::vector<int> x(static_cast<std::size_t>(alphabet));
    for (int i = 0; i < alphabet; ++i) {
        x[static_cast<std::size_t>(i)] = code % 4;
        code /= 4;
    }
    return {v, x};
}

Step1Graph to_colouring_step1(const games::Game& g, const TMatrix& t,
                              std::uint64_t vertex_budget) {
    g.validate();
    t.verify();
    if (g.q % 2 != 0) throw precondition_error("to_colouring_step1: alphabet must be even");
    const int L = g.q;
    const std::uint64_t tuples = 1ull << (2 * L);
    if (static_cast<std::uint64_t>(g.num_vertices) * tuples > vertex_budget)
        throw capacity_error("to_colouring_step1: vertex budget exceeded");

    Step1Graph out;
    out.game_vertices = g.num_vertices;
    out.alphabet = L;
    out.graph.n = static_cast<int>(g.num_vertices * tuples);

    // Block representatives per edge; all constraints must be 2<->2.
    std::vector<std::pair<games::Permutation, games::Permutation>> reps;
    for (const auto& e : g.edges) {
        auto rep = games::block_representative(e.c, g.q);
        if (!rep) throw precondition_error("to_colouring_step1: constraint is not 2<->2");
        reps.push_back(*rep);
    }

    auto digits = [&](std::uint64_t code) {
        std::vector<int> x(static_cast<std::size_t>(L));
        for (int i = 0; i < L; ++i) {
            x[static_cast<std::size_t>(i)] = static_cast<int>(code & 3);
            code >>= 2;
        }
        return x;
    };

    std::set<std::pair<int, int>> edges;
    for (std::size_t ei = 0; ei < g.edges.size(); ++ei) {
        const auto& e = g.edges[ei];
        const auto& [pi1, pi2] = reps[ei];
        for (std::uint64_t cx = 0; cx < tuples; ++cx) {
            auto x = digits(cx);
            for (std::uint64_t cy = 0; cy < tuples; ++cy) {
                auto y = digits(cy);
                bool ok = true;
                for (int blk = 0; ok && blk < L / 2; ++blk) {
                    double val = t.at(x[static_cast<std::size_t>(pi1[static_cast<std::size_t>(2 * blk)])],
                                      x[static_cast<std::size_t>(pi1[static_cast<std::size_t>(2 * blk + 1)])],
                                      y[static_cast<std::size_t>(pi2[static_cast<std::size_t>(2 * blk)])],
                                      y[static_cast<std::size_t>(pi2[static_cast<std::size_t>(2 * blk + 1)])]);
                    ok = val > 0;
                }
                if (!ok) continue;
                int a = static_cast<int>(e.u * tuples + cx);
                int b = static_cast<int>(e.v * tuples + cy);
                edges.emplace(std::min(a, b), std::max(a, b));
            }
        }
    }
    out.graph.edges.assign(edges.begin(), edges.end());
    return out;
}

DirectedGraph dir(const UndirectedGraph& g) {
    DirectedGraph out;
    out.n = g.n;
    UndirectedGraph norm = g;
    norm.normalize();
    for (auto [u, v] : norm.edges) {
        out.arcs.emplace_back(u, v);
        out.arcs.emplace_back(v, u);
    }
    return out;
}

UndirectedGraph sym(const DirectedGraph& d) {
    UndirectedGraph out;
    out.n = d.n;
    for (auto [u, v] : d.arcs) {
        if (u == v) throw precondition_error("sym: self-loop arc");
        out.edges.emplace_back(u, v);
    }
    out.normalize();
    return out;
}

DirectedGraph arc(const DirectedGraph& d) {
    DirectedGraph out;
    out.n = static_cast<int>(d.arcs.size());
    // Arcs of the arc graph: consecutive arcs (a,b),(b,c).
    std::vector<std::vector<int>> arcs_from(static_cast<std::size_t>(d.n));
    for (std::size_t i = 0; i < d.arcs.size(); ++i)
        arcs_from[static_cast<std::size_t>(d.arcs[i].first)].push_back(static_cast<int>(i));
    for (std::size_t i = 0; i < d.arcs.size(); ++i)
        for (int j : arcs_from[static_cast<std::size_t>(d.arcs[i].second)])
            if (static_cast<int>(i) != j || d.arcs[i].first == d.arcs[i].second)
                out.arcs.emplace_back(static_cast<int>(i), j);
    return out;
}

UndirectedGraph to_3colouring(const games::Game& g, const TMatrix& t,
                              std::uint64_t vertex_budget) {
    Step1Graph s1 = to_colouring_step1(g, t);
    DirectedGraph d0 = dir(s1.graph);
    if (d0.arcs.size() > vertex_budget)
        throw capacity_error("to_3colouring: arc graph exceeds the budget");
    DirectedGraph a1 = arc(d0);
    if (a1.arcs.size() > vertex_budget)
        throw capacity_error("to_3colouring: second arc graph exceeds the budget");
    // The second arc step multiplies sizes again; bound it before building.
    std::vector<std::uint64_t> indeg(static_cast<std::size_t>(a1.n), 0),
        outdeg(static_cast<std::size_t>(a1.n), 0);
    for (auto [u, v] : a1.arcs) {
        ++outdeg[static_cast<std::size_t>(u)];
        ++indeg[static_cast<std::size_t>(v)];
    }
    std::uint64_t final_arcs = 0;
    for (auto [u, v] : a1.arcs) final_arcs += outdeg[static_cast<std::size_t>(v)];
    if (final_arcs > 8 * vertex_budget)
        throw capacity_error("to_3colouring: final arc graph exceeds the budget");
    DirectedGraph a2 = arc(a1);
    return sym(a2);
}

std::optional<std::vector<int>> find_colouring(const UndirectedGraph& g, int t,
                                               std::uint64_t node_budget) {
    if (t < 1) return std::nullopt;
    if (g.n == 0) return std::vector<int>{};
    std::vector<std::vector<int>> adj(static_cast<std::size_t>(g.n));
    for (auto [u, v] : g.edges) {
        if (u == v) return std::nullopt;  // self-loop: never colourable
        adj[static_cast<std::size_t>(u)].push_back(v);
        adj[static_cast<std::size_t>(v)].push_back(u);
    }

    // Saturation-ordered backtracking with an explicit stack; graphs from the
    // arc chain run to thousands of vertices.
    std::vector<int> colour(static_cast<std::size_t>(g.n), -1);
    std::vector<std::vector<int>> forbid_count(static_cast<std::size_t>(g.n),
                                               std::vector<int>(static_cast<std::size_t>(t), 0));
    std::vector<int> sat(static_cast<std::size_t>(g.n), 0);
    std::vector<int> palette_use(static_cast<std::size_t>(t), 0);
    int palette = 0;  // number of colours in use, for symmetry breaking

    struct Frame {
        int vertex;
        int next_colour;
    };
    std::vector<Frame> stack;
    std::uint64_t nodes = 0;

    auto pick = [&]() {
        int best = -1;
        std::pair<int, std::size_t> score{-1, 0};
        for (int v = 0; v < g.n; ++v) {
            if (colour[static_cast<std::size_t>(v)] != -1) continue;
            std::pair<int, std::size_t> s{sat[static_cast<std::size_t>(v)],
                                          adj[static_cast<std::size_t>(v)].size()};
            if (s > score) {
                score = s;
                best = v;
            }
        }
        return best;
    };
    auto assign = [&](int v, int c) {
        colour[static_cast<std::size_t>(v)] = c;
        if (palette_use[static_cast<std::size_t>(c)]++ == 0) ++palette;
        for (int u : adj[static_cast<std::size_t>(v)]) {
            if (colour[static_cast<std::size_t>(u)] != -1) continue;
            if (forbid_count[static_cast<std::size_t>(u)][static_cast<std::size_t>(c)]++ == 0)
                ++sat[static_cast<std::size_t>(u)];
        }
    };
    auto unassign = [&](int v) {
        int c = colour[static_cast<std::size_t>(v)];
        colour[static_cast<std::size_t>(v)] = -1;
        if (--palette_use[static_cast<std::size_t>(c)] == 0) --palette;
        for (int u : adj[static_cast<std::size_t>(v)]) {
            if (colour[static_cast<std::size_t>(u)] != -1) continue;
            if (--forbid_count[static_cast<std::size_t>(u)][static_cast<std::size_t>(c)] == 0)
                --sat[static_cast<std::size_t>(u)];
        }
    };

    stack.push_back({pick(), 0});
    while (true) {
        if (++nodes > node_budget) throw capacity_error("chromatic: search budget exhausted");
        Frame& top = stack.back();
        // Next admissible colour; at most one brand-new colour index.
        int limit = std::min(t, palette + 1);
        int c = top.next_colour;
        while (c < limit &&
               forbid_count[static_cast<std::size_t>(top.vertex)][static_cast<std::size_t>(c)] > 0)
            ++c;
        if (c >= limit) {
            stack.pop_back();
            if (stack.empty()) return std::nullopt;
            unassign(stack.back().vertex);
            continue;
        }
        top.next_colour = c + 1;
        assign(top.vertex, c);
        if (static_cast<int>(stack.size()) == g.n) return colour;
        stack.push_back({pick(), 0});
    }
}

bool chromatic_leq(const UndirectedGraph& g, int t, std::uint64_t node_budget) {
    return find_colouring(g, t, node_budget).has_value();
}

}  // namespace gapforge::derived
