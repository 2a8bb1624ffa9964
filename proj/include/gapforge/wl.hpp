#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "gapforge/structure.hpp"

namespace gapforge::wl {

// Convention used throughout the toolkit: equivalence in k-variable counting
// logic is tested with (k-1)-dimensional refinement; `dim` below is the
// refinement dimension.  Colour ids are canonical (assigned in sorted
// signature order from exact keys, never hashes), so they are independent of
// element order.
struct Partition {
    int dim = 1;
    int universe_size = 0;
    int rounds = 0;                 // rounds until stabilization
    std::vector<int> colour;        // tuple rank (base-n digits) -> colour id
    int num_colours = 0;

    int rank(const std::vector<int>& tuple) const;
    std::map<int, long long> histogram() const;
};

// Stable dim-dimensional refinement.  Initial colours are the atomic types of
// tuples (equality pattern, constants, and every relation atom over tuple
// positions); each round refines by the multiset of substituted-colour
// vectors.  Guarded by n^dim <= budget.
Partition refine(const fo::Structure& a, int dim, std::uint64_t budget = 8'000'000);

struct EquivalenceReport {
    int dim = 1;
    bool equivalent = false;
    int rounds = 0;
    // Per colour id: tuple counts in the two structures.
    std::map<int, std::pair<long long, long long>> class_histograms;
};

// Joint refinement on the disjoint union; the structures are equivalent when
// every colour class holds equally many tuples from both sides.
EquivalenceReport compare(const fo::Structure& a, const fo::Structure& b, int dim,
                          std::uint64_t budget = 8'000'000);

bool equivalent(const fo::Structure& a, const fo::Structure& b, int dim,
                std::uint64_t budget = 8'000'000);

}  // namespace gapforge::wl
