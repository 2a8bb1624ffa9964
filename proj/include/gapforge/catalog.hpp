#pragma once

#include <string>
#include <vector>

#include "gapforge/fo.hpp"
#include "gapforge/kms.hpp"

namespace gapforge::fo {

// Universe formula for the game reduction: the variable tuple is
// (u_0..u_{3k-1}, r_0..r_{k-1}, b_0..b_{2^{3k}-1}), bits coded by equality
// with the tuple's first two elements.  `vars` supplies the 4k + 2^{3k}
// variable names in that order.
FormulaPtr kms_universe_formula(const kms::Params& params, const std::vector<std::string>& vars);

// Decodes a satisfying universe tuple back into a game vertex.
kms::Vertex decode_kms_tuple(const std::vector<int>& tuple, const kms::Params& params,
                             const xor3::Instance& inst);

// Element coding of a vertex as a universe tuple (variables of the instance).
std::vector<int> code_kms_vertex(const kms::Vertex& v, const kms::Params& params,
                                 const xor3::Instance& inst);

// tau_3XOR extended with the transitive game's constraint relations over
// coded vertex tuples: "C1_<pi>" / "C2_<pi1>_<pi2>" of arity 2(4k + 2^{3k}),
// both orientations stored.
Structure extended_game_structure(const kms::TransitiveGame& tg);

// The instance-to-instance regularization as a 4-ary interpretation.
Interpretation regularization_interpretation();

// Universe-only interpretation of the game reduction (relations left to the
// pairwise construction); dimension 4k + 2^{3k}.
Interpretation kms_universe_interpretation(const kms::Params& params);

// Constraint splitting into unique games, dimension 2.  `input_vocab` is the
// vocabulary of the weighted-game structure the interpretation will run on.
Interpretation ug_split_interpretation(int q, const Vocabulary& input_vocab);

// The independent-set reduction with clouds, dimension 3 + q + Q^q.
Interpretation is_reduction_interpretation(int q, long long P, long long Q,
                                           const Vocabulary& input_vocab);

struct CatalogEntry {
    std::string name;
    Interpretation interp;
};

struct CatalogParams {
    kms::Params kms_params;
    Vocabulary game_vocab;  // weighted-game structure vocabulary for the split/IS entries
    long long p_num = 1;
    long long p_den = 2;
};

std::vector<CatalogEntry> builtin_interpretations(const CatalogParams& p);

}  // namespace gapforge::fo
