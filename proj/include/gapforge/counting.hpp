#pragma once

#include <functional>
#include <memory>
#include <optional>

#include "gapforge/bigint.hpp"
#include "gapforge/catalog.hpp"
#include "gapforge/fo.hpp"

namespace gapforge::fo {

// Counting expressions: each compiles to a formula whose satisfying
// z-assignments number exactly the expression's arithmetic value.  Compiled
// formulas use the distinguished free variables "zero" and "one" for bit
// coding; NuCount and PairClassCount additionally anchor on the x (and y)
// vertex tuples.
struct CountingExpr;
using CountingPtr = std::shared_ptr<const CountingExpr>;

struct CountingExpr {
    enum class Kind { One, Indicator, Sum, Product, CardEq, NuCount, PairClassCount };
    Kind kind = Kind::One;
    FormulaPtr phi;          // Indicator
    CountingPtr lhs, rhs;    // Sum / Product
    int f = 0;               // NuCount: useful-equation count
    int r = 0;               // NuCount: class count being tested
    std::string anchor = "x";  // NuCount: which vertex tuple it speaks about
};

CountingPtr c_one();
CountingPtr c_indicator(FormulaPtr phi);
CountingPtr c_sum(CountingPtr a, CountingPtr b);
CountingPtr c_product(CountingPtr a, CountingPtr b);
CountingPtr c_card_eq();
CountingPtr c_nu_count(int f, int r, std::string anchor = "x");
CountingPtr c_pair_class_count();
// Positive constant via binary decomposition into sums and products of ones.
CountingPtr c_constant(long long value);

// Game context needed to compile NuCount / PairClassCount: the reduction
// parameters, the measured class-count ceiling, and the constraint relation
// names of the extended structure.
struct GameFormulaContext {
    kms::Params params;
    long long psi = 0;
    std::vector<std::string> one_to_one_relations;
    std::vector<std::string> two_to_two_relations;
};

GameFormulaContext make_game_formula_context(const kms::TransitiveGame& tg, long long psi);

// nu^{f,>=r}(x): at least r pairwise inequivalent clique members with f
// useful equations; nu^{f,r} fixes the count exactly.
FormulaPtr nu_geq_formula(const GameFormulaContext& ctx, int f, int r);
FormulaPtr nu_exact_formula(const GameFormulaContext& ctx, int f, int r);

struct CompiledCounting {
    FormulaPtr formula;
    int width = 0;
    std::vector<std::string> z_vars;  // z0 .. z{width-1}
};

CompiledCounting compile_counting(const CountingPtr& e,
                                  const std::optional<GameFormulaContext>& ctx = std::nullopt);

// Arithmetic evaluation contexts: the structure serves CardEq and Indicator;
// nu vectors are per anchor name; pair_count is the same-tuple cross-clique
// numerator for the anchored pair.
struct ArithContext {
    const Structure* structure = nullptr;
    Assignment anchors;
    std::map<std::string, std::vector<long long>> nu;
    BigInt pair_count;
};

BigInt eval_arith(const CountingPtr& e, const ArithContext& ctx);

// The full integer-weight expression for a weighted edge: the pair-class
// numerator times both endpoint products of chi over every nu-vector other
// than the endpoint's own.
CountingPtr weight_expr(const GameFormulaContext& ctx, long long num_equations);

}  // namespace gapforge::fo
