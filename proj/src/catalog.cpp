#include "gapforge/catalog.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <set>

#include "gapforge/errors.hpp"

namespace gapforge::fo {

namespace {

FormulaPtr all_equal(const std::vector<std::string>& vars) {
    std::vector<FormulaPtr> eqs;
    for (std::size_t i = 1; i < vars.size(); ++i) eqs.push_back(eq(vars[0], vars[i]));
    return conj(std::move(eqs));
}

FormulaPtr tuple_equal(const std::vector<std::string>& a, const std::vector<std::string>& b) {
    std::vector<FormulaPtr> eqs;
    for (std::size_t i = 0; i < a.size(); ++i) eqs.push_back(eq(a[i], b[i]));
    return conj(std::move(eqs));
}

// Canonical-space vector with index `code`: coordinate c set iff bit c.
gf2::Vector index_vector(int code, int dim3k) {
    gf2::Vector v(static_cast<std::size_t>(dim3k));
    for (int c = 0; c < dim3k; ++c)
        if ((code >> c) & 1) v.set(static_cast<std::size_t>(c), true);
    return v;
}

}  // namespace

FormulaPtr kms_universe_formula(const kms::Params& params, const std::vector<std::string>& vars) {
    params.validate();
    const int k = params.k;
    const int n3k = 3 * k;
    const int nb = 1 << n3k;
    if (static_cast<int>(vars.size()) != 4 * k + nb)
        throw precondition_error("kms_universe_formula: wrong variable count");
    auto u = [&](int i) { return vars[static_cast<std::size_t>(i)]; };
    auto r = [&](int i) { return vars[static_cast<std::size_t>(n3k + i)]; };
    auto b = [&](int i) { return vars[static_cast<std::size_t>(4 * k + i)]; };

    std::vector<FormulaPtr> conjuncts;
    // Each block is an equation, its right-hand side coded by the first two
    // tuple elements.
    for (int i = 0; i < k; ++i) {
        conjuncts.push_back(disj({conj({atom("Eq0", {u(3 * i), u(3 * i + 1), u(3 * i + 2)}),
                                        eq(r(i), u(0))}),
                                  conj({atom("Eq1", {u(3 * i), u(3 * i + 1), u(3 * i + 2)}),
                                        eq(r(i), u(1))})}));
    }
    for (int p = 0; p < n3k; ++p)
        for (int q2 = p + 1; q2 < n3k; ++q2) conjuncts.push_back(neg(eq(u(p), u(q2))));
    // No equation of the instance joins variables of two distinct blocks.
    int fresh = 0;
    for (int a = 0; a < k; ++a) {
        for (int bq = a + 1; bq < k; ++bq) {
            for (int i = 0; i < 3; ++i) {
                for (int j = 0; j < 3; ++j) {
                    std::string w = "pux" + std::to_string(fresh++);
                    std::string va = u(3 * a + i), vb = u(3 * bq + j);
                    std::vector<FormulaPtr> hits;
                    const std::array<std::array<std::string, 3>, 6> orders{{{va, vb, w},
                                                                            {va, w, vb},
                                                                            {vb, va, w},
                                                                            {vb, w, va},
                                                                            {w, va, vb},
                                                                            {w, vb, va}}};
                    for (const auto& o : orders) {
                        hits.push_back(atom("Eq0", {o[0], o[1], o[2]}));
                        hits.push_back(atom("Eq1", {o[0], o[1], o[2]}));
                    }
                    conjuncts.push_back(neg(exists(w, disj(std::move(hits)))));
                }
            }
        }
    }
    // The bit block must spell a member of the canonical subspace family.
    std::vector<FormulaPtr> family;
    for (const auto& lstar : kms::canonical_l_family(params)) {
        std::vector<FormulaPtr> bits;
        for (int i = 0; i < nb; ++i)
            bits.push_back(eq(b(i), lstar.contains(index_vector(i, n3k)) ? u(1) : u(0)));
        family.push_back(conj(std::move(bits)));
    }
    conjuncts.push_back(disj(std::move(family)));
    return conj(std::move(conjuncts));
}

kms::Vertex decode_kms_tuple(const std::vector<int>& tuple, const kms::Params& params,
                             const xor3::Instance& inst) {
    const int k = params.k;
    const int n3k = 3 * k;
    const int nb = 1 << n3k;
    if (static_cast<int>(tuple.size()) != 4 * k + nb)
        throw precondition_error("decode_kms_tuple: wrong tuple size");
    const int zero = tuple[0], one = tuple[1];

    kms::Vertex v;
    for (int i = 0; i < k; ++i) {
        int x = tuple[static_cast<std::size_t>(3 * i)];
        int y = tuple[static_cast<std::size_t>(3 * i + 1)];
        int z = tuple[static_cast<std::size_t>(3 * i + 2)];
        int found = -1;
        for (std::size_t e = 0; e < inst.equations.size(); ++e)
            if (inst.equations[e].x == x && inst.equations[e].y == y && inst.equations[e].z == z)
                found = static_cast<int>(e);
        if (found < 0) throw precondition_error("decode_kms_tuple: block is not a stored equation");
        int rbit = tuple[static_cast<std::size_t>(n3k + i)];
        if (rbit != (inst.equations[static_cast<std::size_t>(found)].b ? one : zero))
            throw precondition_error("decode_kms_tuple: right-hand-side bit mismatch");
        v.equations.push_back(found);
    }
    std::vector<gf2::Vector> members;
    for (int i = 0; i < nb; ++i) {
        int bit = tuple[static_cast<std::size_t>(4 * k + i)];
        if (bit != zero && bit != one)
            throw precondition_error("decode_kms_tuple: bit outside the code pair");
        if (bit == one) members.push_back(index_vector(i, n3k));
    }
    v.lstar = gf2::Subspace::span(members, static_cast<std::size_t>(n3k));
    if (v.lstar.dim() != static_cast<std::size_t>(params.l) ||
        members.size() != (std::size_t{1} << params.l))
        throw precondition_error("decode_kms_tuple: bits do not spell an l-dimensional subspace");
    return v;
}

std::vector<int> code_kms_vertex(const kms::Vertex& v, const kms::Params& params,
                                 const xor3::Instance& inst) {
    const int k = params.k;
    const int n3k = 3 * k;
    const int nb = 1 << n3k;
    kms::Embedding emb = kms::canonical_embed(inst, v.equations);
    std::vector<int> tuple;
    tuple.reserve(static_cast<std::size_t>(4 * k + nb));
    for (int c = 0; c < n3k; ++c) tuple.push_back(emb.coord_to_var[static_cast<std::size_t>(c)]);
    const int zero = tuple[0], one = tuple[1];
    for (int i = 0; i < k; ++i)
        tuple.push_back(inst.equations[static_cast<std::size_t>(v.equations[static_cast<std::size_t>(i)])].b
                            ? one
                            : zero);
    for (int i = 0; i < nb; ++i)
        tuple.push_back(v.lstar.contains(index_vector(i, n3k)) ? one : zero);
    return tuple;
}

Structure extended_game_structure(const kms::TransitiveGame& tg) {
    Structure s = xor3_structure(tg.instance);
    const int d = 4 * tg.params.k + (1 << (3 * tg.params.k));
    std::vector<std::vector<int>> codes;
    for (const auto& v : tg.vertices) codes.push_back(code_kms_vertex(v, tg.params, tg.instance));

    auto ensure = [&](const std::string& name) {
        if (s.vocab.relation_index(name) >= 0) return;
        s.vocab.relations.push_back({name, 2 * d});
        s.relations.emplace_back();
    };
    for (const auto& e : tg.game.edges) {
        std::string fwd = label_symbol(e.c);
        std::string bwd = label_symbol(games::inverse_label(e.c, tg.game.q));
        ensure(fwd);
        ensure(bwd);
        std::vector<int> t = codes[static_cast<std::size_t>(e.u)];
        t.insert(t.end(), codes[static_cast<std::size_t>(e.v)].begin(),
                 codes[static_cast<std::size_t>(e.v)].end());
        s.relations[static_cast<std::size_t>(s.vocab.relation_index(fwd))].push_back(t);
        std::vector<int> rt = codes[static_cast<std::size_t>(e.v)];
        rt.insert(rt.end(), codes[static_cast<std::size_t>(e.u)].begin(),
                  codes[static_cast<std::size_t>(e.u)].end());
        s.relations[static_cast<std::size_t>(s.vocab.relation_index(bwd))].push_back(rt);
    }
    s.normalize();
    s.validate();
    return s;
}

Interpretation regularization_interpretation() {
    Interpretation theta;
    theta.dimension = 4;
    theta.target.relations = {{"Eq0", 3}, {"Eq1", 3}};

    std::vector<std::string> xs;
    for (int i = 0; i < 4; ++i) xs.push_back(var_x(i));
    // Original variables are coded (x,x,x,x); a fresh variable of an equation
    // is coded by the variable followed by the equation's triple.
    theta.delta = disj(
        {conj({disj({eq(xs[0], xs[1]), eq(xs[0], xs[2]), eq(xs[0], xs[3])}),
               disj({atom("Eq0", {xs[1], xs[2], xs[3]}), atom("Eq1", {xs[1], xs[2], xs[3]})})}),
         all_equal(xs)});

    std::vector<std::string> ys;
    for (int i = 0; i < 4; ++i) ys.push_back(var_y(i));
    theta.eps = tuple_equal(xs, ys);

    for (const char* rel : {"Eq0", "Eq1"}) {
        std::vector<std::string> t0, t1, t2;
        for (int i = 0; i < 4; ++i) {
            t0.push_back(var_t(0, i));
            t1.push_back(var_t(1, i));
            t2.push_back(var_t(2, i));
        }
        const std::array<std::vector<std::string>, 3> tuples{t0, t1, t2};
        auto pinned_fresh = [&](int g) {
            return conj({neg(all_equal(tuples[static_cast<std::size_t>(g)])),
                         eq(tuples[static_cast<std::size_t>(g)][1], t0[0]),
                         eq(tuples[static_cast<std::size_t>(g)][2], t1[0]),
                         eq(tuples[static_cast<std::size_t>(g)][3], t2[0])});
        };
        std::vector<FormulaPtr> cases;
        for (int orig = 0; orig < 3; ++orig) {
            std::vector<FormulaPtr> parts{all_equal(tuples[static_cast<std::size_t>(orig)])};
            for (int g = 0; g < 3; ++g)
                if (g != orig) parts.push_back(pinned_fresh(g));
            cases.push_back(conj(std::move(parts)));
        }
        theta.relation_formulas.push_back(
            conj({atom(rel, {t0[0], t1[0], t2[0]}), disj(std::move(cases))}));
    }
    return theta;
}

Interpretation kms_universe_interpretation(const kms::Params& params) {
    const int d = 4 * params.k + (1 << (3 * params.k));
    Interpretation theta;
    theta.dimension = d;
    theta.target.relations = {{"V", 1}};

    std::vector<std::string> xs, ys;
    for (int i = 0; i < d; ++i) {
        xs.push_back(var_x(i));
        ys.push_back(var_y(i));
    }
    theta.delta = kms_universe_formula(params, xs);
    theta.eps = tuple_equal(xs, ys);
    theta.relation_formulas.push_back(truth(true));
    return theta;
}

namespace {

games::Permutation parse_perm(const std::string& digits) {
    games::Permutation p;
    for (char c : digits) p.push_back(c - '0');
    return p;
}

// Phi_<pi1>_<pi2> relation names present in a weighted-game vocabulary.
std::vector<std::pair<games::Permutation, games::Permutation>> pair_symbols(
    const Vocabulary& vocab) {
    std::vector<std::pair<games::Permutation, games::Permutation>> out;
    for (const auto& rel : vocab.relations) {
        if (rel.name.rfind("Phi_", 0) != 0) continue;
        auto rest = rel.name.substr(4);
        auto underscore = rest.find('_');
        if (underscore == std::string::npos) continue;
        out.emplace_back(parse_perm(rest.substr(0, underscore)),
                         parse_perm(rest.substr(underscore + 1)));
    }
    return out;
}

}  // namespace

Interpretation ug_split_interpretation(int q, const Vocabulary& input_vocab) {
    auto pairs = pair_symbols(input_vocab);
    std::set<std::string> half_names;
    for (const auto& [pi1, pi2] : pairs) {
        half_names.insert(perm_name(pi1));
        half_names.insert(perm_name(pi2));
    }
    (void)q;

    Interpretation theta;
    theta.dimension = 2;
    theta.target.relations.push_back({"C", 1});
    for (const auto& name : half_names) theta.target.relations.push_back({"Phi_" + name, 3});

    std::string x0 = var_x(0), x1 = var_x(1), y0 = var_y(0), y1 = var_y(1);
    // A vertex is (v, v); the two halves of a constraint c are (c, c) and
    // (c, w) for w != c, the latter merged by eps.
    theta.delta = disj({conj({neg(atom("C", {x0})), eq(x0, x1)}), atom("C", {x0})});
    theta.eps = conj({eq(x0, y0), disj({conj({eq(x1, x0), eq(y1, y0)}),
                                        conj({neg(eq(x1, x0)), neg(eq(y1, y0))})})});

    theta.relation_formulas.push_back(atom("C", {var_t(0, 0)}));  // target C
    for (const auto& name : half_names) {
        std::string u0 = var_t(0, 0), v0 = var_t(1, 0), c0 = var_t(2, 0), c1 = var_t(2, 1);
        std::vector<FormulaPtr> first_half, second_half;
        for (const auto& [pi1, pi2] : pairs) {
            std::string sym = "Phi_" + perm_name(pi1) + "_" + perm_name(pi2);
            if (perm_name(pi1) == name) first_half.push_back(atom(sym, {u0, v0, c0}));
            if (perm_name(pi2) == name) second_half.push_back(atom(sym, {u0, v0, c0}));
        }
        theta.relation_formulas.push_back(
            conj({neg(atom("C", {u0})), neg(atom("C", {v0})), atom("C", {c0}),
                  disj({conj({eq(c1, c0), disj(std::move(first_half))}),
                        conj({neg(eq(c1, c0)), disj(std::move(second_half))})})}));
    }
    return theta;
}

Interpretation is_reduction_interpretation(int q, long long P, long long Q,
                                           const Vocabulary& input_vocab) {
    if (P <= 0 || Q <= P) throw precondition_error("is_reduction: need 0 < P/Q < 1");
    long long id_len = 1;
    for (int i = 0; i < q; ++i) {
        id_len *= Q;
        if (id_len > 64) throw capacity_error("is_reduction: Q^q identifier block too long");
    }
    const int d = 3 + q + static_cast<int>(id_len);

    Interpretation theta;
    theta.dimension = d;
    theta.target.relations = {{"E", 2}};

    std::vector<std::string> xs, ys;
    for (int i = 0; i < d; ++i) {
        xs.push_back(var_x(i));
        ys.push_back(var_y(i));
    }
    auto bit1 = [](const std::vector<std::string>& t, int pos) { return eq(t[static_cast<std::size_t>(pos)], t[1]); };
    auto bit0 = [](const std::vector<std::string>& t, int pos) { return eq(t[static_cast<std::size_t>(pos)], t[0]); };

    // id value (little-endian bits at positions 3+q ..) strictly below c.
    auto id_less = [&](const std::vector<std::string>& t, long long c) -> FormulaPtr {
        std::vector<FormulaPtr> cases;
        for (int i = 0; i < static_cast<int>(id_len); ++i) {
            if (!((c >> i) & 1)) continue;
            std::vector<FormulaPtr> parts{bit0(t, 3 + q + i)};
            for (int j = i + 1; j < static_cast<int>(id_len); ++j)
                parts.push_back(((c >> j) & 1) ? bit1(t, 3 + q + j) : bit0(t, 3 + q + j));
            cases.push_back(conj(std::move(parts)));
        }
        return disj(std::move(cases));
    };
    auto cloud_size = [&](int a) {
        long long w = 1;
        for (int i = 0; i < a; ++i) w *= P;
        for (int i = 0; i < q - a; ++i) w *= Q - P;
        return w;
    };

    std::vector<FormulaPtr> w_vc_cases;
    for (int a = 0; a <= q; ++a) {
        std::vector<FormulaPtr> size_cases;
        for (int mask = 0; mask < (1 << q); ++mask) {
            if (std::popcount(static_cast<unsigned>(mask)) != a) continue;
            std::vector<FormulaPtr> bits;
            for (int i = 0; i < q; ++i)
                bits.push_back(((mask >> i) & 1) ? bit1(xs, 3 + i) : bit0(xs, 3 + i));
            size_cases.push_back(conj(std::move(bits)));
        }
        w_vc_cases.push_back(conj({disj(std::move(size_cases)), id_less(xs, cloud_size(a))}));
    }
    std::vector<FormulaPtr> delta_parts{neg(eq(xs[0], xs[1])), neg(atom("C", {xs[2]}))};
    for (int i = 3; i < d; ++i)
        delta_parts.push_back(disj({eq(xs[static_cast<std::size_t>(i)], xs[0]),
                                    eq(xs[static_cast<std::size_t>(i)], xs[1])}));
    delta_parts.push_back(disj(std::move(w_vc_cases)));
    theta.delta = conj(std::move(delta_parts));

    std::vector<FormulaPtr> eps_parts{eq(xs[2], ys[2])};
    for (int i = 3; i < d; ++i)
        eps_parts.push_back(disj({conj({bit0(xs, i), bit0(ys, i)}), conj({bit1(xs, i), bit1(ys, i)})}));
    theta.eps = conj(std::move(eps_parts));

    // Edge: some constraint between the underlying vertices whose relation
    // misses A_x x A_y entirely.
    auto pairs = pair_symbols(input_vocab);
    std::vector<std::string> t0, t1;
    for (int i = 0; i < d; ++i) {
        t0.push_back(var_t(0, i));
        t1.push_back(var_t(1, i));
    }
    std::string z = "edgewitness";
    std::vector<FormulaPtr> alternatives;
    for (const auto& [pi1, pi2] : pairs) {
        std::string sym = "Phi_" + perm_name(pi1) + "_" + perm_name(pi2);
        games::Relation rel = games::relation_of(games::TwoToTwo{pi1, pi2}, q);
        std::vector<FormulaPtr> fwd_meet, bwd_meet;
        for (auto [i, j] : rel) {
            fwd_meet.push_back(conj({bit1(t0, 3 + i), bit1(t1, 3 + j)}));
            bwd_meet.push_back(conj({bit1(t1, 3 + i), bit1(t0, 3 + j)}));
        }
        alternatives.push_back(
            conj({atom(sym, {t0[2], t1[2], z}), neg(disj(std::move(fwd_meet)))}));
        alternatives.push_back(
            conj({atom(sym, {t1[2], t0[2], z}), neg(disj(std::move(bwd_meet)))}));
    }
    theta.relation_formulas.push_back(
        exists(z, conj({atom("C", {z}), disj(std::move(alternatives))})));
    return theta;
}

std::vector<CatalogEntry> builtin_interpretations(const CatalogParams& p) {
    std::vector<CatalogEntry> out;
    out.push_back({"regularization", regularization_interpretation()});
    out.push_back({"kms-universe", kms_universe_interpretation(p.kms_params)});
    out.push_back({"ug-split", ug_split_interpretation(p.kms_params.q(), p.game_vocab)});
    out.push_back({"independent-set",
                   is_reduction_interpretation(p.kms_params.q(), p.p_num, p.p_den, p.game_vocab)});
    return out;
}

}  // namespace gapforge::fo
