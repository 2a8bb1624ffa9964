#include "gapforge/kms.hpp"

#include <algorithm>
#include <array>
#include <functional>
#include <map>
#include <set>
#include <tuple>

#include "gapforge/errors.hpp"

namespace gapforge::kms {

void Params::validate() const {
    if (k < 1) throw precondition_error("kms: k must be positive");
    if (l < 0 || l > 3 * k) throw precondition_error("kms: need 0 <= l <= 3k");
    if (3 * k > 16) throw capacity_error("kms: 3k exceeds the ambient guard of 16");
    if (d < 1) throw precondition_error("kms: d must be positive");
}

gf2::Subspace fixed_h(int k) {
    std::vector<gf2::Vector> rows;
    for (int j = 0; j < k; ++j) {
        gf2::Vector h(static_cast<std::size_t>(3 * k));
        h.set(static_cast<std::size_t>(3 * j), true);
        h.set(static_cast<std::size_t>(3 * j + 1), true);
        h.set(static_cast<std::size_t>(3 * j + 2), true);
        rows.push_back(h);
    }
    return gf2::Subspace::span(rows, static_cast<std::size_t>(3 * k));
}

std::vector<gf2::Subspace> canonical_l_family(const Params& params) {
    params.validate();
    gf2::Subspace h = fixed_h(params.k);
    std::vector<gf2::Subspace> out;
    gf2::enumerate_subspaces(static_cast<std::size_t>(3 * params.k),
                             static_cast<std::size_t>(params.l), [&](const gf2::Subspace& s) {
                                 if (gf2::trivially_intersects(s, h)) out.push_back(s);
                             });
    return out;
}

namespace {

std::array<int, 3> vars_of(const xor3::Equation& e) { return {e.x, e.y, e.z}; }

bool equations_share_var(const xor3::Equation& a, const xor3::Equation& b) {
    for (int va : vars_of(a))
        for (int vb : vars_of(b))
            if (va == vb) return true;
    return false;
}

}  // namespace

std::vector<std::vector<int>> enumerate_u(const xor3::Instance& inst, int k) {
    inst.validate();
    const int m = static_cast<int>(inst.equations.size());

    // compat[i][j]: i and j are variable-disjoint and no equation of the
    // instance contains one variable from each.
    std::vector<std::vector<bool>> compat(m, std::vector<bool>(m, false));
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            if (i == j) continue;
            const auto& a = inst.equations[static_cast<std::size_t>(i)];
            const auto& b = inst.equations[static_cast<std::size_t>(j)];
            if (equations_share_var(a, b)) continue;
            bool joined = false;
            for (const auto& e : inst.equations) {
                bool hits_a = false, hits_b = false;
                for (int v : vars_of(e)) {
                    for (int va : vars_of(a)) hits_a |= v == va;
                    for (int vb : vars_of(b)) hits_b |= v == vb;
                }
                if (hits_a && hits_b) {
                    joined = true;
                    break;
                }
            }
            compat[i][j] = !joined;
        }
    }

    std::vector<std::vector<int>> out;
    std::vector<int> cur;
    std::function<void()> rec = [&]() {
        if (static_cast<int>(cur.size()) == k) {
            out.push_back(cur);
            return;
        }
        for (int next = 0; next < m; ++next) {
            bool ok = true;
            for (int prev : cur) ok = ok && prev != next && compat[prev][next];
            if (!ok) continue;
            cur.push_back(next);
            rec();
            cur.pop_back();
        }
    };
    rec();
    return out;
}

std::pair<gf2::Subspace, std::vector<gf2::Pin>> side_condition_space(
    const xor3::Instance& inst, const std::vector<int>& u) {
    std::vector<gf2::Vector> rows;
    std::vector<gf2::Pin> pins;
    for (int eq : u) {
        gf2::Vector v = xor3::lhs_vector(inst, eq);
        pins.push_back({v, inst.equations[static_cast<std::size_t>(eq)].b != 0});
        rows.push_back(std::move(v));
    }
    gf2::Subspace h_u = gf2::Subspace::span(rows, static_cast<std::size_t>(inst.num_vars));
    if (h_u.dim() != u.size())
        throw consistency_error("side_condition_space: side conditions not independent");
    return {std::move(h_u), std::move(pins)};
}

Embedding canonical_embed(const xor3::Instance& inst, const std::vector<int>& u) {
    Embedding emb;
    for (int eq : u)
        for (int var : vars_of(inst.equations[static_cast<std::size_t>(eq)])) {
            emb.var_to_coord[var] = static_cast<int>(emb.coord_to_var.size());
            emb.coord_to_var.push_back(var);
        }
    if (emb.var_to_coord.size() != emb.coord_to_var.size())
        throw precondition_error("canonical_embed: tuple reuses a variable");
    return emb;
}

namespace {

// Canonical-space pins (h_j, b_j) over F_2^{3k}.
std::vector<gf2::Pin> canonical_pins(const xor3::Instance& inst, const std::vector<int>& u) {
    int k = static_cast<int>(u.size());
    std::vector<gf2::Pin> pins;
    for (int j = 0; j < k; ++j) {
        gf2::Vector h(static_cast<std::size_t>(3 * k));
        h.set(static_cast<std::size_t>(3 * j), true);
        h.set(static_cast<std::size_t>(3 * j + 1), true);
        h.set(static_cast<std::size_t>(3 * j + 2), true);
        pins.push_back({h, inst.equations[static_cast<std::size_t>(u[j])].b != 0});
    }
    return pins;
}

}  // namespace

std::vector<gf2::Functional> labels_of(const Vertex& v, const xor3::Instance& inst,
                                       const Params& params) {
    params.validate();
    const int l = params.l;
    gf2::Subspace domain = gf2::subspace_sum(v.lstar, fixed_h(params.k));
    auto pins = canonical_pins(inst, v.equations);

    std::vector<gf2::Functional> out;
    out.reserve(std::size_t{1} << l);
    for (int t = 0; t < (1 << l); ++t) {
        std::vector<std::uint8_t> values(static_cast<std::size_t>(l));
        for (int j = 0; j < l; ++j) values[static_cast<std::size_t>(j)] = (t >> (l - 1 - j)) & 1;
        auto exts = gf2::extend_functional(gf2::Functional(v.lstar, values), domain, pins);
        if (exts.size() != 1) throw consistency_error("labels_of: label extension not unique");
        out.push_back(std::move(exts[0]));
    }
    return out;
}

namespace {

// Per-vertex data in F_2^X used by the pairwise constraint computation.
struct VertexCtx {
    gf2::Subspace h_u;                      // side-condition space
    std::vector<gf2::Pin> pins;             // right-hand-side pins in F_2^X
    gf2::Subspace l_x;                      // pull-back of lstar
    gf2::Subspace lh;                       // l_x + h_u
    std::vector<gf2::Functional> labels_x;  // canonical label order, domain lh
};

VertexCtx make_ctx(const Vertex& v, const xor3::Instance& inst, const Params& params) {
    VertexCtx ctx;
    std::tie(ctx.h_u, ctx.pins) = side_condition_space(inst, v.equations);
    Embedding emb = canonical_embed(inst, v.equations);

    std::vector<gf2::Vector> pulled;
    for (const auto& row : v.lstar.basis()) {
        gf2::Vector w(static_cast<std::size_t>(inst.num_vars));
        for (std::size_t c = 0; c < row.size(); ++c)
            if (row.get(c)) w.set(static_cast<std::size_t>(emb.coord_to_var[c]), true);
        pulled.push_back(std::move(w));
    }
    ctx.l_x = gf2::Subspace::span(pulled, static_cast<std::size_t>(inst.num_vars));
    if (ctx.l_x.dim() != v.lstar.dim())
        throw consistency_error("kms: lstar pull-back lost dimension");
    ctx.lh = gf2::subspace_sum(ctx.l_x, ctx.h_u);

    // Transport the canonical labels through the embedding: the value on a
    // basis row w of lh is the canonical functional's value on its image.
    auto canonical = labels_of(v, inst, params);
    for (const auto& f : canonical) {
        std::vector<std::uint8_t> values;
        for (const auto& w : ctx.lh.basis()) {
            gf2::Vector img(static_cast<std::size_t>(3 * params.k));
            for (std::size_t c = 0; c < w.size(); ++c)
                if (w.get(c)) {
                    auto it = emb.var_to_coord.find(static_cast<int>(c));
                    if (it == emb.var_to_coord.end())
                        throw consistency_error("kms: lh vector leaves the tuple support");
                    img.set(static_cast<std::size_t>(it->second), true);
                }
            values.push_back(f.evaluate(img) ? 1 : 0);
        }
        ctx.labels_x.emplace_back(ctx.lh, std::move(values));
    }
    return ctx;
}

std::optional<games::ConstraintLabel> constraint_from_ctx(const VertexCtx& a, const VertexCtx& b,
                                                          int q) {
    gf2::Subspace s_a = gf2::subspace_sum(a.lh, b.h_u);
    gf2::Subspace s_b = gf2::subspace_sum(b.lh, a.h_u);
    if (s_a.dim() != s_b.dim()) return std::nullopt;
    gf2::Subspace s_ab = gf2::subspace_sum(s_a, b.l_x);

    bool one_to_one = s_ab.dim() == s_a.dim();
    bool two_to_two = s_ab.dim() == s_a.dim() + 1;
    if (!one_to_one && !two_to_two) return std::nullopt;

    auto extend_all = [&](const VertexCtx& side, const gf2::Subspace& target,
                          const std::vector<gf2::Pin>& other_pins) {
        std::vector<gf2::Functional> out;
        for (const auto& f : side.labels_x) {
            auto exts = gf2::extend_functional(f, target, other_pins);
            if (exts.size() != 1)
                throw consistency_error("kms: label extension across tuples not unique");
            out.push_back(std::move(exts[0]));
        }
        return out;
    };
    auto ext_a = extend_all(a, s_a, b.pins);
    auto ext_b = extend_all(b, s_b, a.pins);

    games::Relation rel;
    for (int i = 0; i < q; ++i) {
        for (int j = 0; j < q; ++j) {
            // Related iff the two extensions agree on the intersection of
            // their domains, i.e. a common extension to the join exists.
            std::vector<gf2::Pin> want;
            for (std::size_t r = 0; r < s_b.dim(); ++r)
                want.push_back(
                    {s_b.basis()[r], ext_b[static_cast<std::size_t>(j)].values()[r] != 0});
            if (!gf2::extend_functional(ext_a[static_cast<std::size_t>(i)], s_ab, want).empty())
                rel.emplace_back(i, j);
        }
    }
    std::sort(rel.begin(), rel.end());

    const std::size_t expected = static_cast<std::size_t>(q) * (one_to_one ? 1 : 2);
    if (rel.size() != expected)
        throw consistency_error("kms: constraint relation is not exactly d-to-d");
    auto label = games::label_from_relation(rel, q);
    if (!label) throw consistency_error("kms: relation does not decompose into permutations");
    if (one_to_one != std::holds_alternative<games::OneToOne>(*label))
        throw consistency_error("kms: relation type disagrees with the dimension case");
    if (two_to_two && !games::is_2bi2(*label, q))
        throw consistency_error("kms: 2-to-2 constraint is not a union of K_{2,2} blocks");
    return label;
}

}  // namespace

std::optional<games::ConstraintLabel> constraint_between(const Vertex& a, const Vertex& b,
                                                         const xor3::Instance& inst,
                                                         const Params& params) {
    params.validate();
    return constraint_from_ctx(make_ctx(a, inst, params), make_ctx(b, inst, params), params.q());
}

TransitiveGame build_transitive_game(const xor3::Instance& inst, const Params& params) {
    params.validate();
    inst.validate();
    if (!xor3::check_regular(inst, params.d))
        throw precondition_error("kms: instance is not " + std::to_string(params.d) + "-regular");

    TransitiveGame tg;
    tg.params = params;
    tg.instance = inst;

    auto tuples = enumerate_u(inst, params.k);
    auto family = canonical_l_family(params);
    for (const auto& u : tuples)
        for (const auto& lstar : family) tg.vertices.push_back({u, lstar});

    std::vector<VertexCtx> ctxs;
    ctxs.reserve(tg.vertices.size());
    for (const auto& v : tg.vertices) ctxs.push_back(make_ctx(v, inst, params));

    tg.game.num_vertices = static_cast<int>(tg.vertices.size());
    tg.game.q = params.q();
    for (std::size_t i = 0; i < ctxs.size(); ++i)
        for (std::size_t j = i + 1; j < ctxs.size(); ++j)
            if (auto label = constraint_from_ctx(ctxs[i], ctxs[j], params.q()))
                tg.game.edges.push_back(
                    {static_cast<int>(i), static_cast<int>(j), std::move(*label)});
    return tg;
}

CliqueDecomposition clique_decomposition(const TransitiveGame& tg) {
    const int n = tg.game.num_vertices;
    std::vector<int> parent(n);
    for (int i = 0; i < n; ++i) parent[i] = i;
    std::function<int(int)> find = [&](int x) {
        return parent[x] == x ? x : parent[x] = find(parent[x]);
    };

    std::set<std::pair<int, int>> one_edges, two_edges;
    for (const auto& e : tg.game.edges) {
        auto key = std::minmax(e.u, e.v);
        if (std::holds_alternative<games::OneToOne>(e.c)) {
            one_edges.insert({key.first, key.second});
            parent[find(e.u)] = find(e.v);
        } else {
            two_edges.insert({key.first, key.second});
        }
    }

    CliqueDecomposition dec;
    dec.clique_id.assign(static_cast<std::size_t>(n), -1);
    std::map<int, int> root_to_clique;
    for (int v = 0; v < n; ++v) {
        int root = find(v);
        auto [it, inserted] =
            root_to_clique.try_emplace(root, static_cast<int>(dec.cliques.size()));
        if (inserted) dec.cliques.emplace_back();
        dec.clique_id[static_cast<std::size_t>(v)] = it->second;
        dec.cliques[static_cast<std::size_t>(it->second)].push_back(v);
    }

    // Each component must be a clique under 1-to-1 edges, with no internal
    // 2-to-2 edge and no 1-to-1 edge leaving it.
    for (const auto& clique : dec.cliques) {
        for (std::size_t i = 0; i < clique.size(); ++i) {
            for (std::size_t j = i + 1; j < clique.size(); ++j) {
                std::pair<int, int> key{clique[i], clique[j]};
                if (!one_edges.count(key))
                    throw consistency_error("clique_decomposition: component is not a clique");
                if (two_edges.count(key))
                    throw consistency_error("clique_decomposition: 2-to-2 edge inside a clique");
            }
        }
    }
    std::map<std::pair<int, int>, long long> cross_count;
    for (auto [u, v] : two_edges) {
        auto key = std::minmax(dec.clique_id[static_cast<std::size_t>(u)],
                               dec.clique_id[static_cast<std::size_t>(v)]);
        ++cross_count[{key.first, key.second}];
    }
    for (const auto& [key, count] : cross_count) {
        long long full =
            static_cast<long long>(dec.cliques[static_cast<std::size_t>(key.first)].size()) *
            static_cast<long long>(dec.cliques[static_cast<std::size_t>(key.second)].size());
        if (count != full)
            throw consistency_error("clique_decomposition: cross-clique pairs not uniform");
    }
    return dec;
}

namespace {

// chi(v) = sum_f v_f * m^(k-f).
BigInt chi_of(const std::vector<long long>& nu, long long m, int k) {
    BigInt out(0);
    for (int f = 0; f <= k; ++f)
        out += BigInt(nu[static_cast<std::size_t>(f)]) *
               BigInt::pow(BigInt(m), static_cast<unsigned>(k - f));
    return out;
}

}  // namespace

WeightedReduction build_weighted_game(const xor3::Instance& inst, const Params& params,
                                      WeightScheme scheme) {
    WeightedReduction red;
    red.transitive = build_transitive_game(inst, params);
    red.cliques = clique_decomposition(red.transitive);
    const auto& tg = red.transitive;
    const auto& dec = red.cliques;
    const int k = params.k;
    const long long m = static_cast<long long>(inst.equations.size());

    // Same-U 2-to-2 pair count in canonical coordinates; the same for every U,
    // which justifies dropping it from the relative weights.
    {
        auto family = canonical_l_family(params);
        gf2::Subspace h = fixed_h(k);
        long long pairs = 0;
        for (const auto& l1 : family)
            for (const auto& l2 : family) {
                gf2::Subspace lh = gf2::subspace_sum(l1, h);
                gf2::Subspace both = gf2::subspace_sum(gf2::subspace_sum(l1, l2), h);
                if (both.dim() == lh.dim() + 1) ++pairs;
            }
        red.pairs_per_u = pairs;
    }

    // Per-vertex class counts nu^f over the vertex's clique.  A clique member
    // (U', L') is keyed by its lstar, its useful equations with positions, and
    // all right-hand sides.
    auto& ledger = red.ledger;
    const auto n = tg.vertices.size();
    ledger.nu.assign(n, std::vector<long long>(static_cast<std::size_t>(k + 1), 0));
    std::vector<std::set<int>> tuple_vars(n);
    for (std::size_t i = 0; i < n; ++i)
        for (int eq : tg.vertices[i].equations)
            for (int v : vars_of(inst.equations[static_cast<std::size_t>(eq)]))
                tuple_vars[i].insert(v);

    for (std::size_t x = 0; x < n; ++x) {
        const auto& clique = dec.cliques[static_cast<std::size_t>(dec.clique_id[x])];
        std::set<std::tuple<gf2::Subspace, std::vector<std::pair<int, int>>, std::vector<int>>>
            classes;
        for (int member : clique) {
            const auto& w = tg.vertices[static_cast<std::size_t>(member)];
            std::vector<std::pair<int, int>> useful;
            std::vector<int> rhs;
            for (int j = 0; j < k; ++j) {
                int eq = w.equations[static_cast<std::size_t>(j)];
                rhs.push_back(inst.equations[static_cast<std::size_t>(eq)].b);
                bool shares = false;
                for (int v : vars_of(inst.equations[static_cast<std::size_t>(eq)]))
                    shares = shares || tuple_vars[x].count(v) > 0;
                if (shares) useful.emplace_back(j, eq);
            }
            int f = static_cast<int>(useful.size());
            if (classes.emplace(w.lstar, std::move(useful), std::move(rhs)).second)
                ++ledger.nu[x][static_cast<std::size_t>(f)];
        }
    }
    for (const auto& nu : ledger.nu)
        for (long long c : nu) ledger.psi = std::max(ledger.psi, c);
    ledger.psi_bound = BigInt(static_cast<long long>(canonical_l_family(params).size())) *
                       BigInt::pow(BigInt(4), static_cast<unsigned>(k)) *
                       BigInt::pow(BigInt(3ll * k * params.d), static_cast<unsigned>(k));
    for (const auto& nu : ledger.nu)
        for (long long c : nu)
            if (BigInt(c) > ledger.psi_bound)
                throw consistency_error("approx weights: class count exceeds the a-priori bound");
    for (std::size_t x = 0; x < n; ++x) ledger.chi.push_back(chi_of(ledger.nu[x], m, k));

    // Eq-style numerator per clique pair: ordered same-U vertex pairs across
    // the two cliques; the double loop counts each unordered pair twice.
    red.weighted.game.num_vertices = tg.game.num_vertices;
    red.weighted.game.q = params.q();
    std::map<std::pair<int, int>, long long> numerator;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            int ci = dec.clique_id[i], cj = dec.clique_id[j];
            if (ci == cj) continue;
            if (tg.vertices[i].equations != tg.vertices[j].equations) continue;
            auto key = std::minmax(ci, cj);
            ++numerator[{key.first, key.second}];
        }
    }
    for (auto& [key, count] : numerator) count /= 2;

    // Per-vertex product of chi over every nu-vector except the vertex's own.
    // The all-zero vector has chi = 0 and is skipped; including it would zero
    // every weight.
    std::vector<BigInt> endpoint_product;
    if (scheme == WeightScheme::ApproxInteger) {
        std::vector<std::vector<long long>> all_vectors;
        std::vector<long long> cur(static_cast<std::size_t>(k + 1), 0);
        std::function<void(int)> gen = [&](int pos) {
            if (pos == k + 1) {
                all_vectors.push_back(cur);
                return;
            }
            for (long long v = 0; v <= ledger.psi; ++v) {
                cur[static_cast<std::size_t>(pos)] = v;
                gen(pos + 1);
            }
        };
        gen(0);
        for (std::size_t x = 0; x < n; ++x) {
            BigInt prod(1);
            for (const auto& vec : all_vectors) {
                if (vec == ledger.nu[x]) continue;  // own factor replaced by 1
                BigInt c = chi_of(vec, m, k);
                if (c.is_zero()) continue;
                prod *= c;
            }
            endpoint_product.push_back(std::move(prod));
        }
    }

    for (const auto& e : tg.game.edges) {
        if (dec.clique_id[static_cast<std::size_t>(e.u)] ==
            dec.clique_id[static_cast<std::size_t>(e.v)])
            continue;
        auto key = std::minmax(dec.clique_id[static_cast<std::size_t>(e.u)],
                               dec.clique_id[static_cast<std::size_t>(e.v)]);
        auto num_it = numerator.find({key.first, key.second});
        if (num_it == numerator.end()) continue;  // sampling weight zero: pair omitted
        long long num = num_it->second;
        long long ci =
            static_cast<long long>(dec.cliques[static_cast<std::size_t>(key.first)].size());
        long long cj =
            static_cast<long long>(dec.cliques[static_cast<std::size_t>(key.second)].size());

        red.weighted.game.edges.push_back(e);
        ledger.exact_w.emplace_back(BigInt(num), BigInt(ci * cj));
        if (scheme == WeightScheme::ApproxInteger) {
            BigInt w = BigInt(num) * endpoint_product[static_cast<std::size_t>(e.u)] *
                       endpoint_product[static_cast<std::size_t>(e.v)];
            if (!(w > BigInt(0))) throw consistency_error("weights: non-positive integer weight");
            ledger.int_w.push_back(std::move(w));
        }
    }

    // Measured distortion between exact and integer weights under the best
    // single scale: gamma is sqrt(max ratio / min ratio) rounded outward, so
    // the pointwise band is certified.
    ledger.gamma = Rational(1);
    if (scheme == WeightScheme::ApproxInteger && !ledger.int_w.empty()) {
        std::optional<Rational> rmin, rmax;
        for (std::size_t i = 0; i < ledger.int_w.size(); ++i) {
            Rational ratio = ledger.exact_w[i] / Rational(ledger.int_w[i], BigInt(1));
            if (!rmin || ratio < *rmin) rmin = ratio;
            if (!rmax || ratio > *rmax) rmax = ratio;
        }
        Rational big_r = *rmax / *rmin;
        BigInt num_floor = BigInt::isqrt_floor(big_r.num());
        BigInt den_floor = BigInt::isqrt_floor(big_r.den());
        BigInt num_ceil =
            num_floor * num_floor == big_r.num() ? num_floor : num_floor + BigInt(1);
        ledger.gamma = Rational(num_ceil, den_floor);
    }

    if (scheme == WeightScheme::Exact) {
        red.weighted.weights = ledger.exact_w;
    } else {
        for (const auto& v : ledger.int_w) red.weighted.weights.emplace_back(v, BigInt(1));
    }
    red.weighted.validate();
    return red;
}

std::vector<int> planted_labelling(const xor3::Instance& inst,
                                   const std::vector<std::uint8_t>& s, const TransitiveGame& tg) {
    if (static_cast<int>(s.size()) != inst.num_vars)
        throw precondition_error("planted_labelling: assignment size mismatch");
    for (const auto& e : inst.equations)
        if ((s[static_cast<std::size_t>(e.x)] ^ s[static_cast<std::size_t>(e.y)] ^
             s[static_cast<std::size_t>(e.z)]) != e.b)
            throw precondition_error("planted_labelling: assignment does not satisfy the instance");

    const int l = tg.params.l;
    std::vector<int> labels;
    labels.reserve(tg.vertices.size());
    for (const auto& v : tg.vertices) {
        Embedding emb = canonical_embed(tg.instance, v.equations);
        int index = 0;
        for (int j = 0; j < l; ++j) {
            const auto& row = v.lstar.basis()[static_cast<std::size_t>(j)];
            int bit = 0;
            for (std::size_t c = 0; c < row.size(); ++c)
                if (row.get(c)) bit ^= s[static_cast<std::size_t>(emb.coord_to_var[c])];
            index |= bit << (l - 1 - j);
        }
        labels.push_back(index);
    }

    for (const auto& e : tg.game.edges) {
        games::Relation r = games::relation_of(e.c, tg.game.q);
        if (!std::binary_search(r.begin(), r.end(),
                                std::pair{labels[static_cast<std::size_t>(e.u)],
                                          labels[static_cast<std::size_t>(e.v)]}))
            throw consistency_error("planted_labelling: edge left unsatisfied");
    }
    return labels;
}

}  // namespace gapforge::kms
