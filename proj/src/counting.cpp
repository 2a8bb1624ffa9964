#include "gapforge/counting.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <functional>
#include <set>

#include "gapforge/errors.hpp"

namespace gapforge::fo {

namespace {

CountingPtr make(CountingExpr e) { return std::make_shared<CountingExpr>(std::move(e)); }

}  // namespace

CountingPtr c_one() { return make({CountingExpr::Kind::One, nullptr, nullptr, nullptr, 0, 0, ""}); }

CountingPtr c_indicator(FormulaPtr phi) {
    CountingExpr e;
    e.kind = CountingExpr::Kind::Indicator;
    e.phi = std::move(phi);
    return make(std::move(e));
}

CountingPtr c_sum(CountingPtr a, CountingPtr b) {
    CountingExpr e;
    e.kind = CountingExpr::Kind::Sum;
    e.lhs = std::move(a);
    e.rhs = std::move(b);
    return make(std::move(e));
}

CountingPtr c_product(CountingPtr a, CountingPtr b) {
    CountingExpr e;
    e.kind = CountingExpr::Kind::Product;
    e.lhs = std::move(a);
    e.rhs = std::move(b);
    return make(std::move(e));
}

CountingPtr c_card_eq() {
    CountingExpr e;
    e.kind = CountingExpr::Kind::CardEq;
    return make(std::move(e));
}

CountingPtr c_nu_count(int f, int r, std::string anchor) {
    CountingExpr e;
    e.kind = CountingExpr::Kind::NuCount;
    e.f = f;
    e.r = r;
    e.anchor = std::move(anchor);
    return make(std::move(e));
}

CountingPtr c_pair_class_count() {
    CountingExpr e;
    e.kind = CountingExpr::Kind::PairClassCount;
    return make(std::move(e));
}

CountingPtr c_constant(long long value) {
    if (value < 1) throw precondition_error("c_constant: constants are positive");
    if (value == 1) return c_one();
    if (value % 2 == 0) return c_product(c_sum(c_one(), c_one()), c_constant(value / 2));
    return c_sum(c_one(), c_constant(value - 1));
}

GameFormulaContext make_game_formula_context(const kms::TransitiveGame& tg, long long psi) {
    GameFormulaContext ctx;
    ctx.params = tg.params;
    ctx.psi = psi;
    std::set<std::string> ones, twos;
    for (const auto& e : tg.game.edges) {
        auto insert = [&](const games::ConstraintLabel& c) {
            (std::holds_alternative<games::OneToOne>(c) ? ones : twos).insert(label_symbol(c));
        };
        insert(e.c);
        insert(games::inverse_label(e.c, tg.game.q));
    }
    ctx.one_to_one_relations.assign(ones.begin(), ones.end());
    ctx.two_to_two_relations.assign(twos.begin(), twos.end());
    return ctx;
}

namespace {

int tuple_width(const kms::Params& p) { return 4 * p.k + (1 << (3 * p.k)); }

std::vector<std::string> named_tuple(const std::string& prefix, int width) {
    std::vector<std::string> out;
    for (int i = 0; i < width; ++i) out.push_back(prefix + std::to_string(i));
    return out;
}

// Bit of a coded vertex tuple: position p equals the tuple's second element.
FormulaPtr tuple_bit1(const std::vector<std::string>& t, int pos) {
    return eq(t[static_cast<std::size_t>(pos)], t[1]);
}

FormulaPtr iff(FormulaPtr a, FormulaPtr b) {
    return disj({conj({a, b}), conj({neg(a), neg(b)})});
}

// Position j of member tuple m holds a useful equation: one of its variables
// occurs among the anchor's variables.
FormulaPtr useful_formula(const kms::Params& p, const std::vector<std::string>& anchor,
                          const std::vector<std::string>& m, int j) {
    std::vector<FormulaPtr> hits;
    for (int i = 0; i < 3 * p.k; ++i)
        for (int pos = 3 * j; pos < 3 * j + 3; ++pos)
            hits.push_back(eq(m[static_cast<std::size_t>(pos)], anchor[static_cast<std::size_t>(i)]));
    return disj(std::move(hits));
}

// The two members differ at position j: different variables or a different
// right-hand-side bit.
FormulaPtr diff_formula(const kms::Params& p, const std::vector<std::string>& a,
                        const std::vector<std::string>& b, int j) {
    std::vector<FormulaPtr> parts;
    for (int pos = 3 * j; pos < 3 * j + 3; ++pos)
        parts.push_back(neg(eq(a[static_cast<std::size_t>(pos)], b[static_cast<std::size_t>(pos)])));
    parts.push_back(neg(iff(tuple_bit1(a, 3 * p.k + j), tuple_bit1(b, 3 * p.k + j))));
    return disj(std::move(parts));
}

FormulaPtr same_clique_formula(const GameFormulaContext& ctx,
                               const std::vector<std::string>& anchor,
                               const std::vector<std::string>& m) {
    std::vector<std::string> both = anchor;
    both.insert(both.end(), m.begin(), m.end());
    std::vector<FormulaPtr> options;
    for (const auto& rel : ctx.one_to_one_relations) options.push_back(atom(rel, both));
    // A vertex belongs to its own clique although it has no self-edge.
    std::vector<FormulaPtr> same;
    for (std::size_t i = 0; i < anchor.size(); ++i) same.push_back(eq(anchor[i], m[i]));
    options.push_back(conj(std::move(same)));
    return disj(std::move(options));
}

}  // namespace

FormulaPtr nu_geq_formula(const GameFormulaContext& ctx, int f, int r) {
    const kms::Params& p = ctx.params;
    if (f < 0 || f > p.k) throw precondition_error("nu_geq_formula: bad useful count");
    if (r <= 0) return truth(true);
    const int d = tuple_width(p);
    auto anchor = named_tuple("x", d);

    std::vector<std::vector<std::string>> members;
    for (int i = 0; i < r; ++i) members.push_back(named_tuple("m" + std::to_string(i) + "_", d));

    std::vector<FormulaPtr> body;
    for (int i = 0; i < r; ++i) {
        body.push_back(kms_universe_formula(p, members[static_cast<std::size_t>(i)]));
        body.push_back(same_clique_formula(ctx, anchor, members[static_cast<std::size_t>(i)]));
        // Exactly f useful positions.
        std::vector<FormulaPtr> size_cases;
        for (int mask = 0; mask < (1 << p.k); ++mask) {
            if (std::popcount(static_cast<unsigned>(mask)) != f) continue;
            std::vector<FormulaPtr> parts;
            for (int j = 0; j < p.k; ++j) {
                FormulaPtr uf = useful_formula(p, anchor, members[static_cast<std::size_t>(i)], j);
                parts.push_back(((mask >> j) & 1) ? uf : neg(uf));
            }
            size_cases.push_back(conj(std::move(parts)));
        }
        body.push_back(disj(std::move(size_cases)));
    }
    // Pairwise inequivalent: different subspace bits, or a useful position
    // that differs, or any right-hand-side bit mismatch.
    for (int i = 0; i < r; ++i) {
        for (int j = i + 1; j < r; ++j) {
            const auto& mi = members[static_cast<std::size_t>(i)];
            const auto& mj = members[static_cast<std::size_t>(j)];
            std::vector<FormulaPtr> distinct;
            for (int pos = 4 * p.k; pos < d; ++pos)
                distinct.push_back(neg(iff(tuple_bit1(mi, pos), tuple_bit1(mj, pos))));
            for (int o = 0; o < p.k; ++o)
                distinct.push_back(conj({useful_formula(p, anchor, mi, o), diff_formula(p, mi, mj, o)}));
            for (int o = 0; o < p.k; ++o)
                distinct.push_back(neg(iff(tuple_bit1(mi, 3 * p.k + o), tuple_bit1(mj, 3 * p.k + o))));
            body.push_back(disj(std::move(distinct)));
        }
    }

    FormulaPtr out = conj(std::move(body));
    for (int i = r; i-- > 0;)
        for (int pidx = d; pidx-- > 0;)
            out = exists(members[static_cast<std::size_t>(i)][static_cast<std::size_t>(pidx)],
                         std::move(out));
    return out;
}

FormulaPtr nu_exact_formula(const GameFormulaContext& ctx, int f, int r) {
    return conj({nu_geq_formula(ctx, f, r), neg(nu_geq_formula(ctx, f, r + 1))});
}

namespace {

std::map<std::string, std::string> shift_renaming(int width, int offset) {
    std::map<std::string, std::string> out;
    for (int i = 0; i < width; ++i)
        out.emplace("z" + std::to_string(i), "z" + std::to_string(i + offset));
    return out;
}

FormulaPtr pair_class_formula(const GameFormulaContext& ctx) {
    const kms::Params& p = ctx.params;
    const int k = p.k;
    const int nb = 1 << (3 * k);
    const int d = tuple_width(p);
    // z = (shared U block with right-hand sides, first subspace bits, second
    // subspace bits).
    std::vector<std::string> zu = named_tuple("z", 4 * k);
    std::vector<std::string> z2, z3;
    for (int i = 0; i < nb; ++i) z2.push_back("z" + std::to_string(4 * k + i));
    for (int i = 0; i < nb; ++i) z3.push_back("z" + std::to_string(4 * k + nb + i));
    std::vector<std::string> first = zu, second = zu;
    first.insert(first.end(), z2.begin(), z2.end());
    second.insert(second.end(), z3.begin(), z3.end());
    auto anchor_x = named_tuple("x", d);
    auto anchor_y = named_tuple("y", d);

    std::vector<FormulaPtr> body{kms_universe_formula(p, first), kms_universe_formula(p, second)};
    std::vector<std::string> pair = first;
    pair.insert(pair.end(), second.begin(), second.end());
    std::vector<FormulaPtr> connected;
    for (const auto& rel : ctx.two_to_two_relations) connected.push_back(atom(rel, pair));
    body.push_back(disj(std::move(connected)));
    body.push_back(same_clique_formula(ctx, anchor_x, first));
    body.push_back(same_clique_formula(ctx, anchor_y, second));
    return conj(std::move(body));
}

}  // namespace

CompiledCounting compile_counting(const CountingPtr& e,
                                  const std::optional<GameFormulaContext>& ctx) {
    CompiledCounting out;
    switch (e->kind) {
        case CountingExpr::Kind::One:
            out.width = 1;
            out.formula = eq("z0", "zero");
            break;
        case CountingExpr::Kind::Indicator:
            out.width = 1;
            out.formula = conj({eq("z0", "zero"), e->phi});
            break;
        case CountingExpr::Kind::CardEq:
            out.width = 4;
            out.formula = disj({conj({eq("z0", "zero"), atom("Eq0", {"z1", "z2", "z3"})}),
                                conj({eq("z0", "one"), atom("Eq1", {"z1", "z2", "z3"})})});
            break;
        case CountingExpr::Kind::Product: {
            CompiledCounting a = compile_counting(e->lhs, ctx);
            CompiledCounting b = compile_counting(e->rhs, ctx);
            out.width = a.width + b.width;
            out.formula = conj({a.formula, substitute(b.formula, shift_renaming(b.width, a.width))});
            break;
        }
        case CountingExpr::Kind::Sum: {
            CompiledCounting a = compile_counting(e->lhs, ctx);
            CompiledCounting b = compile_counting(e->rhs, ctx);
            if (a.width > b.width) std::swap(a, b);  // pad the shorter branch
            out.width = 1 + b.width;
            std::vector<FormulaPtr> left{eq("z0", "zero"),
                                         substitute(a.formula, shift_renaming(a.width, 1))};
            for (int i = a.width + 1; i <= b.width; ++i)
                left.push_back(eq("z" + std::to_string(i), "zero"));
            out.formula = disj({conj(std::move(left)),
                                conj({eq("z0", "one"),
                                      substitute(b.formula, shift_renaming(b.width, 1))})});
            break;
        }
        case CountingExpr::Kind::NuCount: {
            if (!ctx) throw precondition_error("compile_counting: NuCount needs a game context");
            if (e->r > ctx->psi + 1)
                throw precondition_error("compile_counting: NuCount beyond the psi ceiling");
            FormulaPtr phi = nu_exact_formula(*ctx, e->f, e->r);
            if (e->anchor != "x") {
                std::map<std::string, std::string> ren;
                for (int i = 0; i < tuple_width(ctx->params); ++i)
                    ren.emplace("x" + std::to_string(i), e->anchor + std::to_string(i));
                phi = substitute(phi, ren);
            }
            out.width = 1;
            out.formula = conj({eq("z0", "zero"), phi});
            break;
        }
        case CountingExpr::Kind::PairClassCount: {
            if (!ctx)
                throw precondition_error("compile_counting: PairClassCount needs a game context");
            out.width = 4 * ctx->params.k + 2 * (1 << (3 * ctx->params.k));
            out.formula = pair_class_formula(*ctx);
            break;
        }
    }
    for (int i = 0; i < out.width; ++i) out.z_vars.push_back("z" + std::to_string(i));
    return out;
}

BigInt eval_arith(const CountingPtr& e, const ArithContext& ctx) {
    switch (e->kind) {
        case CountingExpr::Kind::One:
            return BigInt(1);
        case CountingExpr::Kind::Indicator:
            if (!ctx.structure) throw precondition_error("eval_arith: indicator needs a structure");
            return BigInt(eval(*ctx.structure, e->phi, ctx.anchors) ? 1 : 0);
        case CountingExpr::Kind::CardEq: {
            if (!ctx.structure) throw precondition_error("eval_arith: |Eq| needs a structure");
            int eq0 = ctx.structure->vocab.relation_index("Eq0");
            int eq1 = ctx.structure->vocab.relation_index("Eq1");
            if (eq0 < 0 || eq1 < 0) throw precondition_error("eval_arith: no Eq relations");
            return BigInt(
                static_cast<long long>(ctx.structure->relations[static_cast<std::size_t>(eq0)].size() +
                                       ctx.structure->relations[static_cast<std::size_t>(eq1)].size()));
        }
        case CountingExpr::Kind::Sum:
            return eval_arith(e->lhs, ctx) + eval_arith(e->rhs, ctx);
        case CountingExpr::Kind::Product:
            return eval_arith(e->lhs, ctx) * eval_arith(e->rhs, ctx);
        case CountingExpr::Kind::NuCount: {
            auto it = ctx.nu.find(e->anchor);
            if (it == ctx.nu.end()) throw precondition_error("eval_arith: missing nu vector");
            return BigInt(it->second.at(static_cast<std::size_t>(e->f)) == e->r ? 1 : 0);
        }
        case CountingExpr::Kind::PairClassCount:
            return ctx.pair_count;
    }
    return BigInt(0);
}

CountingPtr weight_expr(const GameFormulaContext& ctx, long long num_equations) {
    const int k = ctx.params.k;
    auto chi_of = [&](const std::vector<long long>& v) {
        long long out = 0;
        for (int f = 0; f <= k; ++f) {
            long long pw = 1;
            for (int i = 0; i < k - f; ++i) pw *= num_equations;
            out += v[static_cast<std::size_t>(f)] * pw;
        }
        return out;
    };

    std::vector<std::vector<long long>> vectors;
    std::vector<long long> cur(static_cast<std::size_t>(k + 1), 0);
    std::function<void(int)> gen = [&](int pos) {
        if (pos == k + 1) {
            vectors.push_back(cur);
            return;
        }
        for (long long v = 0; v <= ctx.psi; ++v) {
            cur[static_cast<std::size_t>(pos)] = v;
            gen(pos + 1);
        }
    };
    gen(0);

    // 1_{nu^f != c} as a sum of NuCount indicators: nu^f never exceeds psi.
    auto nu_differs = [&](int f, long long c, const std::string& anchor) {
        CountingPtr sum;
        for (long long other = 0; other <= ctx.psi; ++other) {
            if (other == c) continue;
            auto term = c_nu_count(f, static_cast<int>(other), anchor);
            sum = sum ? c_sum(sum, term) : term;
        }
        return sum;  // null when psi == 0 and c == 0: nu difference impossible
    };
    auto endpoint = [&](const std::string& anchor) {
        CountingPtr prod = c_one();
        for (const auto& vec : vectors) {
            long long chi = chi_of(vec);
            if (chi == 0) continue;  // the all-zero vector, excluded from the product
            // match = prod_f 1_{nu^f = v_f}; mismatch decomposed by the first
            // coordinate that differs, so exactly one branch fires.
            CountingPtr match = c_one();
            for (int f = 0; f <= k; ++f)
                match = c_product(
                    match, c_nu_count(f, static_cast<int>(vec[static_cast<std::size_t>(f)]), anchor));
            CountingPtr mismatch;
            CountingPtr prefix = c_one();
            for (int f = 0; f <= k; ++f) {
                CountingPtr diff = nu_differs(f, vec[static_cast<std::size_t>(f)], anchor);
                if (diff) {
                    CountingPtr term = c_product(prefix, diff);
                    mismatch = mismatch ? c_sum(mismatch, term) : term;
                }
                prefix = c_product(
                    prefix, c_nu_count(f, static_cast<int>(vec[static_cast<std::size_t>(f)]), anchor));
            }
            CountingPtr factor = mismatch
                                     ? c_sum(c_product(c_constant(chi), mismatch), match)
                                     : match;
            prod = c_product(prod, factor);
        }
        return prod;
    };
    return c_product(c_pair_class_count(), c_product(endpoint("x"), endpoint("y")));
}

}  // namespace gapforge::fo
