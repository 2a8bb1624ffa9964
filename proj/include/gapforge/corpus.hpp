#pragma once

#include <string>
#include <vector>

#include "gapforge/games.hpp"
#include "gapforge/kms.hpp"
#include "gapforge/xor3.hpp"

namespace gapforge::corpus {

// Every regular instance with at most `max_equations` equations, in canonical
// form: variables numbered by first appearance, fresh variables ascending
// within their equation, equation list strictly increasing.  Up to variable
// renaming this covers all small regular instances once.
std::vector<xor3::Instance> canonical_regular_instances(int max_equations);

struct FidelityReport {
    int cases = 0;
    int failures = 0;
    std::string first_failure;

    bool ok() const { return failures == 0; }
};

// Interpretation output vs the directly computed reduction, up to structure
// isomorphism, instance by instance.
FidelityReport check_regularization_fidelity(const std::vector<xor3::Instance>& corpus);
FidelityReport check_kms_universe_fidelity(const std::vector<xor3::Instance>& corpus,
                                           const kms::Params& params);
FidelityReport check_ug_split_fidelity(const std::vector<games::Game>& corpus);
FidelityReport check_is_fidelity(const std::vector<games::Game>& corpus, long long P, long long Q);

// All-2-to-2 desk games produced by the reduction on the instance corpus,
// simplified; used as inputs for the split and independent-set checks.
std::vector<games::Game> reduction_games(const std::vector<xor3::Instance>& corpus,
                                         const kms::Params& params);

}  // namespace gapforge::corpus
