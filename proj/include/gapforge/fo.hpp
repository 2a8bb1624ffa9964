#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "gapforge/bigint.hpp"
#include "gapforge/games.hpp"
#include "gapforge/structure.hpp"
#include "gapforge/xor3.hpp"

namespace gapforge::fo {

// First-order formula tree with named variables; no function symbols.
struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

struct Formula {
    enum class Kind { True, False, Atom, Eq, Not, And, Or, Exists, Forall };
    Kind kind = Kind::True;
    std::string rel;                 // Atom
    std::vector<std::string> vars;   // Atom arguments, or the two Eq sides
    std::string bound;               // quantified variable
    std::vector<FormulaPtr> children;
};

FormulaPtr truth(bool value);
FormulaPtr atom(std::string rel, std::vector<std::string> vars);
FormulaPtr eq(std::string a, std::string b);
FormulaPtr neg(FormulaPtr f);
FormulaPtr conj(std::vector<FormulaPtr> fs);   // empty -> true
FormulaPtr disj(std::vector<FormulaPtr> fs);   // empty -> false
FormulaPtr exists(std::string var, FormulaPtr f);
FormulaPtr forall(std::string var, FormulaPtr f);

// Free variables in first-appearance order.
std::vector<std::string> free_variables(const FormulaPtr& f);
// Renames free variables (capture is the caller's responsibility; the
// toolkit's generated names never collide with bound ones).
FormulaPtr substitute(const FormulaPtr& f, const std::map<std::string, std::string>& renaming);

using Assignment = std::map<std::string, int>;

// Standard semantics; throws precondition_error on an unbound free variable.
bool eval(const Structure& a, const FormulaPtr& f, const Assignment& assignment);

// Enumerates assignments of `vars` (in order) satisfying f, given fixed
// values for the remaining free variables.  Prunes with three-valued
// evaluation after each assigned variable, so formulas whose conjuncts bind
// prefixes early enumerate far below |A|^|vars|.  `budget` caps search nodes.
void enumerate_satisfying(const Structure& a, const FormulaPtr& f,
                          const std::vector<std::string>& vars, const Assignment& fixed,
                          const std::function<void(const std::vector<int>&)>& fn,
                          std::uint64_t budget = 50'000'000);

BigInt count_satisfying(const Structure& a, const FormulaPtr& f,
                        const std::vector<std::string>& vars, const Assignment& fixed = {},
                        std::uint64_t budget = 50'000'000);

// d-ary interpretation.  Variable naming convention: delta speaks about
// x0..x{d-1}; eps about x0.. and y0..; the formula for a relation of arity r
// about t0_0..t0_{d-1}, ..., t{r-1}_0..; constants about x0..x{d-1}.
struct Interpretation {
    int dimension = 1;
    Vocabulary target;
    FormulaPtr delta;
    FormulaPtr eps;
    std::vector<FormulaPtr> relation_formulas;  // one per target relation
    std::vector<FormulaPtr> constant_formulas;  // one per target constant
};

std::string var_x(int i);
std::string var_y(int i);
std::string var_t(int arg, int i);

struct AppliedInterpretation {
    Structure output;
    // One representative delta-tuple per output element, in element order.
    std::vector<std::vector<int>> representatives;
};

// Materializes delta-tuples lazily, quotients by eps eagerly, and verifies
// that eps is an equivalence that the relation formulas respect; throws
// precondition_error when it is not.
AppliedInterpretation apply_interpretation(const Interpretation& theta, const Structure& a,
                                           std::uint64_t budget = 50'000'000);

// Exact isomorphism by colour-refined backtracking.  `node_budget` caps the
// search; universes beyond a few thousand elements are rejected outright.
bool isomorphic(const Structure& a, const Structure& b, std::uint64_t node_budget = 20'000'000);

// --- Vocabulary adapters ---------------------------------------------------

// tau_3XOR: two ternary relations Eq0, Eq1 over the variables, tuples in
// stored order.
Structure xor3_structure(const xor3::Instance& inst);

// Transitive-game vocabulary: one binary relation per stored constraint
// label ("C1_<pi>" / "C2_<pi1>_<pi2>"); both edge orientations are stored,
// the reverse one under the inverse label.
Structure transitive_game_structure(const games::Game& g);

// Weighted/multi-edge vocabulary: universe = vertices + one element per
// edge, unary "C" marking constraints, ternary "Phi_<pi1>_<pi2>" under the
// stored representative.
Structure weighted_game_structure(const games::Game& g);

// Unique-games vocabulary: unary "C" plus ternary "Phi_<pi>".
Structure unique_game_structure(const games::Game& g);

// Plain (di)graph vocabulary: one binary relation "E"; undirected graphs are
// stored symmetrically.
Structure graph_structure(int n, const std::vector<std::pair<int, int>>& edges, bool directed);

// Extends both structures to the union vocabulary (relations sorted by name,
// missing ones empty); throws on arity clashes.
void harmonize_vocabularies(Structure& a, Structure& b);

std::string perm_name(const games::Permutation& p);
// "C1_<pi>" or "C2_<pi1>_<pi2>" from the stored representative.
std::string label_symbol(const games::ConstraintLabel& c);

// --- S-expression text format ----------------------------------------------
//
// formula   := (true) | (false) | (= VAR VAR) | (rel NAME VAR*)
//            | (not f) | (and f*) | (or f*) | (exists VAR f) | (forall VAR f)
// interp    := (interpretation DIM
//                (target (rel NAME ARITY)* (const NAME)*)
//                (delta f) (eps f) (rel NAME f)* (const NAME f)*)
std::string to_sexpr(const FormulaPtr& f);
FormulaPtr formula_from_sexpr(const std::string& text);
std::string to_sexpr(const Interpretation& theta);
Interpretation interpretation_from_sexpr(const std::string& text);

}  // namespace gapforge::fo
