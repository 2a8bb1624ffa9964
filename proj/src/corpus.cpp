#include "gapforge/corpus.hpp"

#include <algorithm>
#include <functional>
#include <set>

#include "gapforge/catalog.hpp"
#include "gapforge/derived.hpp"
#include "gapforge/errors.hpp"
#include "gapforge/fo.hpp"

namespace gapforge::corpus {

namespace {

using Triple = std::array<int, 3>;

int shared_count(const Triple& a, const Triple& b) {
    int shared = 0;
    for (int x : a)
        for (int y : b)
            if (x == y) ++shared;
    return shared;
}

}  // namespace

std::vector<xor3::Instance> canonical_regular_instances(int max_equations) {
    std::vector<xor3::Instance> out;
    std::vector<Triple> triples;
    std::vector<int> rhs;

    std::function<void(int)> emit = [&](int used_vars) {
        if (!triples.empty()) {
            xor3::Instance inst;
            inst.num_vars = used_vars;
            for (std::size_t i = 0; i < triples.size(); ++i)
                inst.equations.push_back({triples[i][0], triples[i][1], triples[i][2],
                                          rhs[i]});
            out.push_back(std::move(inst));
        }
        if (static_cast<int>(triples.size()) == max_equations) return;

        // Candidate next equations: ordered triples over existing variables
        // plus fresh ones (introduced in ascending order, left to right).
        std::set<Triple> cands;
        std::function<void(Triple, int, int, int)> build = [&](Triple cur, int pos, int fresh,
                                                               int base_fresh) {
            if (pos == 3) {
                cands.insert(cur);
                return;
            }
            for (int v = 0; v < used_vars; ++v) {
                if (std::find(cur.begin(), cur.begin() + pos, v) != cur.begin() + pos) continue;
                Triple next = cur;
                next[static_cast<std::size_t>(pos)] = v;
                build(next, pos + 1, fresh, base_fresh);
            }
            Triple next = cur;
            next[static_cast<std::size_t>(pos)] = fresh;
            build(next, pos + 1, fresh + 1, base_fresh);
        };
        build(Triple{-1, -1, -1}, 0, used_vars, used_vars);

        for (const Triple& cand : cands) {
            bool ok = true;
            for (const Triple& prev : triples) ok = ok && shared_count(prev, cand) <= 1;
            if (!ok) continue;
            if (!triples.empty() && !(triples.back() < cand)) continue;  // canonical order
            int next_vars = used_vars;
            for (int v : cand) next_vars = std::max(next_vars, v + 1);
            triples.push_back(cand);
            for (int b = 0; b < 2; ++b) {
                rhs.push_back(b);
                emit(next_vars);
                rhs.pop_back();
            }
            triples.pop_back();
        }
    };
    emit(0);
    return out;
}

FidelityReport check_regularization_fidelity(const std::vector<xor3::Instance>& corpus) {
    FidelityReport rep;
    fo::Interpretation theta = fo::regularization_interpretation();
    for (const auto& inst : corpus) {
        ++rep.cases;
        fo::Structure in = fo::xor3_structure(inst);
        fo::Structure direct = fo::xor3_structure(xor3::regularize(inst));
        auto applied = fo::apply_interpretation(theta, in);
        if (!fo::isomorphic(applied.output, direct)) {
            ++rep.failures;
            if (rep.first_failure.empty()) rep.first_failure = xor3::to_text(inst);
        }
    }
    return rep;
}

FidelityReport check_kms_universe_fidelity(const std::vector<xor3::Instance>& corpus,
                                           const kms::Params& params) {
    FidelityReport rep;
    fo::Interpretation theta = fo::kms_universe_interpretation(params);
    for (const auto& inst : corpus) {
        ++rep.cases;
        auto applied = fo::apply_interpretation(theta, fo::xor3_structure(inst));
        kms::TransitiveGame tg = kms::build_transitive_game(inst, params);
        bool ok = applied.representatives.size() == tg.vertices.size();
        if (ok) {
            std::set<std::pair<std::vector<int>, gf2::Subspace>> direct, interpreted;
            for (const auto& v : tg.vertices) direct.insert({v.equations, v.lstar});
            for (const auto& tuple : applied.representatives) {
                kms::Vertex v = fo::decode_kms_tuple(tuple, params, inst);
                interpreted.insert({v.equations, v.lstar});
            }
            ok = direct == interpreted;
        }
        if (!ok) {
            ++rep.failures;
            if (rep.first_failure.empty()) rep.first_failure = xor3::to_text(inst);
        }
    }
    return rep;
}

std::vector<games::Game> reduction_games(const std::vector<xor3::Instance>& corpus,
                                         const kms::Params& params) {
    std::vector<games::Game> out;
    for (const auto& inst : corpus) {
        auto red = kms::build_weighted_game(inst, params, kms::WeightScheme::Exact);
        if (red.weighted.game.edges.empty()) continue;
        out.push_back(games::simplify(red.weighted.game));
    }
    return out;
}

FidelityReport check_ug_split_fidelity(const std::vector<games::Game>& corpus) {
    FidelityReport rep;
    for (const auto& g : corpus) {
        ++rep.cases;
        fo::Structure in = fo::weighted_game_structure(g);
        fo::Interpretation theta = fo::ug_split_interpretation(g.q, in.vocab);
        fo::Structure produced = fo::apply_interpretation(theta, in).output;
        fo::Structure direct = fo::unique_game_structure(derived::to_unique_games(g));
        fo::harmonize_vocabularies(produced, direct);
        if (!fo::isomorphic(produced, direct)) {
            ++rep.failures;
            if (rep.first_failure.empty())
                rep.first_failure = "ug-split mismatch on a game with " +
                                    std::to_string(g.edges.size()) + " edges";
        }
    }
    return rep;
}

FidelityReport check_is_fidelity(const std::vector<games::Game>& corpus, long long P,
                                 long long Q) {
    FidelityReport rep;
    for (const auto& g : corpus) {
        ++rep.cases;
        fo::Structure in = fo::weighted_game_structure(g);
        fo::Interpretation theta = fo::is_reduction_interpretation(g.q, P, Q, in.vocab);
        fo::Structure produced = fo::apply_interpretation(theta, in).output;
        derived::UndirectedGraph cloud =
            derived::cloud_expand(derived::to_independent_set(g, P, Q), 4096);
        fo::Structure direct = fo::graph_structure(cloud.n, cloud.edges, false);
        if (!fo::isomorphic(produced, direct)) {
            ++rep.failures;
            if (rep.first_failure.empty())
                rep.first_failure = "independent-set mismatch on a game with " +
                                    std::to_string(g.edges.size()) + " edges";
        }
    }
    return rep;
}

}  // namespace gapforge::corpus
