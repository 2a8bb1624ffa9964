#include <random>

#include "doctest.h"
#include "gapforge/counting.hpp"
#include "gapforge/errors.hpp"
#include "test_util.hpp"

using namespace gapforge;
using namespace gapforge::fo;

namespace {

// Compiled satisfying-assignment count with the bit anchors fixed.
BigInt compiled_count(const Structure& s, const CompiledCounting& cc, Assignment anchors) {
    anchors["zero"] = 0;
    anchors["one"] = 1;
    return count_satisfying(s, cc.formula, cc.z_vars, anchors);
}

}  // namespace

TEST_CASE("core composition rules compile to exact counts") {
    std::mt19937_64 rng(7);
    xor3::Instance inst = testutil::random_regular_planted(8, 3, 2, 7);
    Structure s = xor3_structure(inst);
    const long long m = static_cast<long long>(inst.equations.size());

    auto check = [&](const CountingPtr& e, const BigInt& expected) {
        auto cc = compile_counting(e);
        ArithContext ctx;
        ctx.structure = &s;
        ctx.anchors = {{"zero", 0}, {"one", 1}};
        CHECK(eval_arith(e, ctx) == expected);
        CHECK(compiled_count(s, cc, {}) == expected);
    };

    check(c_one(), BigInt(1));
    check(c_card_eq(), BigInt(m));
    check(c_sum(c_one(), c_card_eq()), BigInt(1 + m));
    check(c_product(c_card_eq(), c_card_eq()), BigInt(m * m));
    check(c_sum(c_card_eq(), c_product(c_one(), c_one())), BigInt(m + 1));
    check(c_constant(7), BigInt(7));
    check(c_constant(12), BigInt(12));

    // Indicator over an anchored formula.
    FormulaPtr phi = atom("Eq0", {"a0", "a1", "a2"});
    const auto& e0 = inst.equations[0];
    auto ind = c_indicator(phi);
    auto cc = compile_counting(ind);
    Assignment anchors{{"a0", e0.x}, {"a1", e0.y}, {"a2", e0.z}};
    BigInt expected(e0.b == 0 ? 1 : 0);
    CHECK(compiled_count(s, cc, anchors) == expected);

    // Widths follow the composition rules.
    CHECK(compile_counting(c_product(c_card_eq(), c_one())).width == 5);
    CHECK(compile_counting(c_sum(c_one(), c_card_eq())).width == 5);
    CHECK(compile_counting(c_sum(c_card_eq(), c_one())).width == 5);
}

TEST_CASE("random expression trees: compiled count equals arithmetic value") {
    std::mt19937_64 rng(11);
    xor3::Instance inst = testutil::random_regular_planted(7, 2, 2, 11);
    Structure s = xor3_structure(inst);

    std::function<CountingPtr(int)> gen = [&](int depth) -> CountingPtr {
        if (depth == 0) {
            switch (rng() % 3) {
                case 0:
                    return c_one();
                case 1:
                    return c_card_eq();
                default:
                    return c_indicator(rng() % 2 ? truth(true) : truth(false));
            }
        }
        if (rng() % 2) return c_sum(gen(depth - 1), gen(depth - 1));
        return c_product(gen(depth - 1), gen(depth - 1));
    };
    for (int iter = 0; iter < 12; ++iter) {
        CountingPtr e = gen(3);
        ArithContext ctx;
        ctx.structure = &s;
        ctx.anchors = {{"zero", 0}, {"one", 1}};
        BigInt value = eval_arith(e, ctx);
        auto cc = compile_counting(e);
        if (cc.width <= 6) CHECK(compiled_count(s, cc, {}) == value);
    }
}

TEST_CASE("nu formulas count clique classes on a desk game") {
    xor3::Instance inst = testutil::random_regular_planted(9, 3, 2, 13);
    kms::Params params{1, 1, 5};
    auto red = kms::build_weighted_game(inst, params, kms::WeightScheme::ApproxInteger);
    const auto& tg = red.transitive;
    Structure ext = extended_game_structure(tg);
    GameFormulaContext ctx = make_game_formula_context(tg, red.ledger.psi);

    for (std::size_t vi = 0; vi < tg.vertices.size(); ++vi) {
        Assignment anchors{{"zero", 0}, {"one", 1}};
        auto code = code_kms_vertex(tg.vertices[vi], params, inst);
        for (std::size_t i = 0; i < code.size(); ++i)
            anchors["x" + std::to_string(i)] = code[i];

        for (int f = 0; f <= params.k; ++f) {
            long long expected = red.ledger.nu[vi][static_cast<std::size_t>(f)];
            // nu^{f,r} holds exactly for r = expected.
            for (long long r = 0; r <= red.ledger.psi; ++r) {
                auto e = c_nu_count(f, static_cast<int>(r));
                ArithContext actx;
                actx.structure = &ext;
                actx.anchors = anchors;
                actx.nu["x"] = red.ledger.nu[vi];
                CHECK(eval_arith(e, actx) == BigInt(r == expected ? 1 : 0));
                auto cc = compile_counting(e, ctx);
                CHECK(compiled_count(ext, cc, anchors) == BigInt(r == expected ? 1 : 0));
            }
        }
    }
}

TEST_CASE("pair class count matches the ledger numerator") {
    xor3::Instance inst = testutil::random_regular_planted(9, 3, 2, 17);
    kms::Params params{1, 1, 5};
    auto red = kms::build_weighted_game(inst, params, kms::WeightScheme::Exact);
    const auto& tg = red.transitive;
    Structure ext = extended_game_structure(tg);
    GameFormulaContext ctx = make_game_formula_context(tg, red.ledger.psi);
    auto cc = compile_counting(c_pair_class_count(), ctx);

    for (std::size_t ei = 0; ei < red.weighted.game.edges.size() && ei < 4; ++ei) {
        const auto& e = red.weighted.game.edges[ei];
        Assignment anchors{{"zero", 0}, {"one", 1}};
        auto cu = code_kms_vertex(tg.vertices[static_cast<std::size_t>(e.u)], params, inst);
        auto cv = code_kms_vertex(tg.vertices[static_cast<std::size_t>(e.v)], params, inst);
        for (std::size_t i = 0; i < cu.size(); ++i) {
            anchors["x" + std::to_string(i)] = cu[i];
            anchors["y" + std::to_string(i)] = cv[i];
        }
        // Exact weight = numerator / (|C_i| |C_j|): recover the numerator.
        int ci = red.cliques.clique_id[static_cast<std::size_t>(e.u)];
        int cj = red.cliques.clique_id[static_cast<std::size_t>(e.v)];
        BigInt expected =
            red.ledger.exact_w[ei].num() *
            (BigInt(static_cast<long long>(red.cliques.cliques[static_cast<std::size_t>(ci)].size())) *
             BigInt(static_cast<long long>(red.cliques.cliques[static_cast<std::size_t>(cj)].size()))) /
            red.ledger.exact_w[ei].den();
        CHECK(compiled_count(ext, cc, anchors) == expected);
    }
}

TEST_CASE("weight expression evaluates to the ledger integer weight") {
    xor3::Instance inst = testutil::random_regular_planted(9, 3, 2, 19);
    kms::Params params{1, 1, 5};
    auto red = kms::build_weighted_game(inst, params, kms::WeightScheme::ApproxInteger);
    const auto& tg = red.transitive;
    GameFormulaContext ctx = make_game_formula_context(tg, red.ledger.psi);
    CountingPtr w = weight_expr(ctx, static_cast<long long>(inst.equations.size()));

    for (std::size_t ei = 0; ei < red.weighted.game.edges.size() && ei < 6; ++ei) {
        const auto& e = red.weighted.game.edges[ei];
        int ci = red.cliques.clique_id[static_cast<std::size_t>(e.u)];
        int cj = red.cliques.clique_id[static_cast<std::size_t>(e.v)];
        BigInt numerator =
            red.ledger.exact_w[ei].num() *
            (BigInt(static_cast<long long>(red.cliques.cliques[static_cast<std::size_t>(ci)].size())) *
             BigInt(static_cast<long long>(red.cliques.cliques[static_cast<std::size_t>(cj)].size()))) /
            red.ledger.exact_w[ei].den();

        ArithContext actx;
        actx.nu["x"] = red.ledger.nu[static_cast<std::size_t>(e.u)];
        actx.nu["y"] = red.ledger.nu[static_cast<std::size_t>(e.v)];
        actx.pair_count = numerator;
        CHECK(eval_arith(w, actx) == red.ledger.int_w[ei]);
    }

    // The compiled W exists and has the expected width arithmetic: the sum of
    // the widths of its factors.
    auto cc = compile_counting(w, ctx);
    CHECK(cc.width >= 4 * params.k + 2 * (1 << (3 * params.k)));
}

TEST_CASE("nu count compile guards") {
    xor3::Instance inst = testutil::random_regular_planted(9, 3, 2, 23);
    kms::Params params{1, 0, 5};
    auto red = kms::build_weighted_game(inst, params, kms::WeightScheme::ApproxInteger);
    GameFormulaContext ctx = make_game_formula_context(red.transitive, red.ledger.psi);
    CHECK_THROWS_AS(compile_counting(c_nu_count(0, static_cast<int>(red.ledger.psi) + 5), ctx),
                    precondition_error);
    CHECK_THROWS_AS(compile_counting(c_nu_count(0, 1)), precondition_error);
}
