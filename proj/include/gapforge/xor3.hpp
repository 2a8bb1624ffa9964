#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "gapforge/bigint.hpp"
#include "gapforge/gf2.hpp"

namespace gapforge::xor3 {

// One equation x + y + z = b over F_2; x, y, z are pairwise distinct
// variable indices.
struct Equation {
    int x = 0, y = 0, z = 0;
    int b = 0;
    bool operator==(const Equation&) const = default;
};

// Equation order is part of instance identity: downstream constructions
// enumerate ordered tuples of equations.
struct Instance {
    int num_vars = 0;
    std::vector<Equation> equations;

    bool operator==(const Instance&) const = default;
    // Throws precondition_error on out-of-range or repeated indices.
    void validate() const;
};

struct BipartiteMultigraph {
    int left = 0;
    int right = 0;
    std::vector<std::pair<int, int>> edges;
};

struct GapConfig {
    Rational completeness;
    Rational soundness;
    void validate() const;  // requires 0 <= s < c <= 1
};

// Exact optimum fraction of satisfiable equations, by enumeration of all
// 2^n assignments (Gray-code incremental).  Guarded by `cap` on num_vars.
Rational value_bruteforce(const Instance& inst, int cap = 22);

// Gaussian elimination; agrees with value_bruteforce == 1 on small instances.
bool is_satisfiable(const Instance& inst);

// A satisfying assignment if one exists.
std::optional<std::vector<std::uint8_t>> solve(const Instance& inst);

// Basis of the homogeneous solution space (solutions of the system with all
// right-hand sides zeroed).  Together with solve() this spans all solutions.
std::vector<std::vector<std::uint8_t>> homogeneous_kernel(const Instance& inst);

// Doubles every variable and expands every equation into 8: variable x
// becomes x0, x1 and equation x+y+z=b becomes x_i+y_j+z_k = b+i+j+k over all
// (i,j,k) in {0,1}^3.
Instance g_transform(const Instance& inst);

// Replaces each equation x+y+z=b with three equations over fresh variables
//   x + y_e + z_e = b,  x_e + y + z_e = b,  x_e + y_e + z = b
// so that no two equations of the output share more than one variable.
Instance regularize(const Instance& inst);

// Every variable appears in at most d equations.
bool check_half_regular(const Instance& inst, int d);
// Half-regular and no two equations share more than one variable.
bool check_regular(const Instance& inst, int d);

struct Planted {
    std::vector<std::uint8_t> assignment;  // one bit per right-side variable
};
struct RandomRhs {};
using RhsMode = std::variant<Planted, RandomRhs>;

struct GeneratorResult {
    Instance instance;
    BipartiteMultigraph graph;
    // The 3r edge-disjoint perfect matchings the graph decomposes into;
    // matchings[round] lists (left, right) pairs.
    std::vector<std::vector<std::pair<int, int>>> matchings;
};

// Random 3-left-regular, 3r-right-regular instance on r*n equations over n
// variables, built as a union of 3r edge-disjoint perfect matchings.
// Rejection-samples each matching; throws generation_error after
// `retry_limit` failed draws in one round.
GeneratorResult generate_expander_instance(int n, int r, std::uint64_t seed, const RhsMode& rhs,
                                           int retry_limit = 1000);

// True iff every left subset S with |S| <= s_max has at least beta * |S|
// unique neighbours.  `budget` caps the number of subsets examined.
bool check_unique_neighbour_expansion(const BipartiteMultigraph& g, int s_max,
                                      const Rational& beta, std::uint64_t budget = 4'000'000);

// Text format, round-trips exactly (order preserved):
//   vars N
//   x y z = b
std::string to_text(const Instance& inst);
Instance from_text(const std::string& text);

// The left-hand-side indicator vector of an equation in F_2^{num_vars}.
gf2::Vector lhs_vector(const Instance& inst, int equation_index);

}  // namespace gapforge::xor3
