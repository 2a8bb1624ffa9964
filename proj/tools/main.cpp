// gapforge: generate 3XOR instances, run the game reductions, and verify the
// constructions' invariants with exact desk-scale oracles.
//
// Exit codes: 0 success, 1 verification failure, 2 capacity limit, 3 usage.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "gapforge/catalog.hpp"
#include "gapforge/corpus.hpp"
#include "gapforge/counting.hpp"
#include "gapforge/derived.hpp"
#include "gapforge/errors.hpp"
#include "gapforge/fo.hpp"
#include "gapforge/kms.hpp"
#include "gapforge/rng.hpp"
#include "gapforge/serialize.hpp"
#include "gapforge/wl.hpp"
#include "gapforge/xor3.hpp"

namespace {

using namespace gapforge;
using serialize::json;

// GAPFORGE_BUDGET scales every default enumeration cap.
double budget_scale() {
    const char* env = std::getenv("GAPFORGE_BUDGET");
    if (!env) return 1.0;
    try {
        double v = std::stod(env);
        return v > 0 ? v : 1.0;
    } catch (...) {
        return 1.0;
    }
}

std::uint64_t scaled(std::uint64_t base) {
    return static_cast<std::uint64_t>(static_cast<double>(base) * budget_scale());
}

xor3::Instance load_xor(const std::string& path) {
    return xor3::from_text(serialize::read_file(path));
}

serialize::ParsedGame load_game(const std::string& path) {
    return serialize::game_from_json(json::parse(serialize::read_file(path)));
}

games::WeightedGame load_weighted(const std::string& path) {
    auto parsed = load_game(path);
    games::WeightedGame wg;
    wg.game = parsed.game;
    wg.weights = parsed.weights ? *parsed.weights
                                : std::vector<Rational>(parsed.game.edges.size(), Rational(1));
    return wg;
}

void dump(const std::string& path, const json& j) {
    serialize::write_file_atomic(path, j.dump(2) + "\n");
}

int run(int argc, char** argv) {
    CLI::App app{"gap reduction toolkit"};
    app.require_subcommand(1);
    bool as_json = false;
    app.add_flag("--json", as_json, "machine-readable reports on stdout");

    // --- gen-xor -------------------------------------------------------
    auto* gen = app.add_subcommand("gen-xor", "generate a random regular-degree 3XOR instance");
    int gen_n = 4, gen_r = 1, gen_smax = 3;
    std::uint64_t gen_seed = 0;
    bool gen_planted = false;
    std::string gen_out, gen_report;
    gen->add_option("--n", gen_n, "right-side variables");
    gen->add_option("--r", gen_r, "left nodes per variable group");
    gen->add_option("--seed", gen_seed, "generator seed");
    gen->add_flag("--planted", gen_planted, "plant a satisfying assignment");
    gen->add_option("--s-max", gen_smax, "expansion subset bound in the report");
    gen->add_option("-o,--out", gen_out, "instance file")->required();
    gen->add_option("--expansion-report", gen_report, "write the expansion report here");

    // --- xfm -----------------------------------------------------------
    auto* xfm = app.add_subcommand("xfm", "instance transformations");
    std::string xfm_kind, xfm_in, xfm_out;
    xfm->add_option("kind", xfm_kind, "g | regularize")->required();
    xfm->add_option("input", xfm_in)->required();
    xfm->add_option("output", xfm_out)->required();

    // --- reduce ----------------------------------------------------------
    auto* reduce = app.add_subcommand("reduce", "run a reduction");
    std::string red_kind, red_in, red_out, red_ledger, red_tmatrix;
    int red_k = 1, red_l = 1, red_d = 5;
    long long red_pn = 29, red_pd = 100;
    bool red_cloud = false, red_three = false;
    std::string red_scheme = "exact";
    reduce->add_option("kind", red_kind, "kms | ug | is | colour")->required();
    reduce->add_option("input", red_in)->required();
    reduce->add_option("output", red_out)->required();
    reduce->add_option("--k", red_k, "equations per tuple");
    reduce->add_option("--l", red_l, "subspace dimension");
    reduce->add_option("--d", red_d, "regularity bound");
    reduce->add_option("--scheme", red_scheme, "exact | approx-integer");
    reduce->add_option("--ledger", red_ledger, "weight ledger output (kms)");
    reduce->add_option("--p-num", red_pn, "numerator of p (is)");
    reduce->add_option("--p-den", red_pd, "denominator of p (is)");
    reduce->add_flag("--cloud", red_cloud, "expand vertex weights into clouds (is)");
    reduce->add_option("--tmatrix", red_tmatrix, "cache file for the balancing matrix (colour)");
    reduce->add_flag("--three", red_three, "apply the full 3-colouring chain (colour)");

    // --- value -----------------------------------------------------------
    auto* value = app.add_subcommand("value", "exact value oracles");
    std::string val_kind, val_in;
    int val_t = 3, val_j = 0;
    value->add_option("kind", val_kind, "xor | game | is | chroma")->required();
    value->add_option("input", val_in)->required();
    value->add_option("--t", val_t, "colour count (chroma)");
    value->add_option("--j", val_j, "set size for the irregular value (game, 0 = plain)");

    // --- wl-compare --------------------------------------------------------
    auto* wlc = app.add_subcommand("wl-compare", "counting-logic equivalence via refinement");
    std::string wl_a, wl_b, wl_vocab = "xor";
    int wl_k = 2;
    wlc->add_option("a", wl_a)->required();
    wlc->add_option("b", wl_b)->required();
    wlc->add_option("--k", wl_k, "refinement dimension");
    wlc->add_option("--vocab", wl_vocab, "xor | game | graph");

    // --- fo-apply ----------------------------------------------------------
    auto* foa = app.add_subcommand("fo-apply", "apply an interpretation to an input structure");
    std::string foa_entry, foa_in, foa_out, foa_file;
    int foa_k = 1, foa_l = 0;
    long long foa_pn = 1, foa_pd = 2;
    foa->add_option("--entry", foa_entry,
                    "regularization | kms-universe | ug-split | independent-set");
    foa->add_option("--file", foa_file, "interpretation in s-expression form");
    foa->add_option("input", foa_in)->required();
    foa->add_option("output", foa_out)->required();
    foa->add_option("--k", foa_k);
    foa->add_option("--l", foa_l);
    foa->add_option("--p-num", foa_pn);
    foa->add_option("--p-den", foa_pd);

    // --- fo-check ----------------------------------------------------------
    auto* foc = app.add_subcommand("fo-check", "catalog interpretations vs direct reductions");
    int foc_m = 2;
    foc->add_option("--max-equations", foc_m, "instance corpus bound");

    // --- verify -------------------------------------------------------------
    auto* verify = app.add_subcommand("verify", "structural checks");
    std::string ver_kind, ver_in;
    int ver_k = 1, ver_l = 1, ver_n = 4, ver_r = 1;
    std::uint64_t ver_seed = 0;
    bool ver_planted = true;
    verify->add_option("kind", ver_kind, "game | pipeline")->required();
    verify->add_option("input", ver_in, "game file (game)");
    verify->add_option("--k", ver_k);
    verify->add_option("--l", ver_l);
    verify->add_option("--n", ver_n);
    verify->add_option("--r", ver_r);
    verify->add_option("--seed", ver_seed);
    verify->add_flag("--planted,!--random", ver_planted);

    // --- report --------------------------------------------------------------
    auto* report = app.add_subcommand("report", "summarize an artifact file");
    std::string rep_kind, rep_in;
    report->add_option("kind", rep_kind, "xor | game | graph | ledger")->required();
    report->add_option("input", rep_in)->required();

    CLI11_PARSE(app, argc, argv);

    if (gen->parsed()) {
        xor3::RhsMode mode = xor3::RandomRhs{};
        std::vector<std::uint8_t> assignment;
        if (gen_planted) {
            auto rng = make_rng(gen_seed, "cli/planted");
            assignment.resize(static_cast<std::size_t>(gen_n));
            for (auto& b : assignment) b = rng() & 1;
            mode = xor3::Planted{assignment};
        }
        auto res = xor3::generate_expander_instance(gen_n, gen_r, gen_seed, mode);
        serialize::write_file_atomic(gen_out, xor3::to_text(res.instance));
        json rep;
        rep["section_ref"] = "4.3";
        rep["left"] = res.graph.left;
        rep["right"] = res.graph.right;
        rep["matchings"] = res.matchings.size();
        bool expands = xor3::check_unique_neighbour_expansion(res.graph, gen_smax, Rational(1),
                                                              scaled(4'000'000));
        rep["unique_neighbour_expansion"] = {{"s_max", gen_smax}, {"beta", "1"}, {"pass", expands}};
        if (!gen_report.empty()) dump(gen_report, rep);
        if (as_json) std::cout << rep.dump(2) << "\n";
        return 0;
    }

    if (xfm->parsed()) {
        xor3::Instance inst = load_xor(xfm_in);
        xor3::Instance out;
        if (xfm_kind == "g")
            out = xor3::g_transform(inst);
        else if (xfm_kind == "regularize")
            out = xor3::regularize(inst);
        else
            throw precondition_error("xfm: unknown kind " + xfm_kind);
        serialize::write_file_atomic(xfm_out, xor3::to_text(out));
        return 0;
    }

    if (reduce->parsed()) {
        if (red_kind == "kms") {
            xor3::Instance inst = load_xor(red_in);
            kms::Params params{red_k, red_l, red_d};
            auto scheme = red_scheme == "approx-integer" ? kms::WeightScheme::ApproxInteger
                                                         : kms::WeightScheme::Exact;
            auto red = kms::build_weighted_game(inst, params, scheme);
            dump(red_out, serialize::weighted_game_to_json(red.weighted));
            if (!red_ledger.empty()) dump(red_ledger, serialize::ledger_to_json(red.ledger));
            return 0;
        }
        if (red_kind == "ug") {
            auto g = load_game(red_in).game;
            dump(red_out, serialize::game_to_json(derived::to_unique_games(g)));
            return 0;
        }
        if (red_kind == "is") {
            auto g = load_weighted(red_in);
            auto wg = derived::to_independent_set(g, red_pn, red_pd);
            if (red_cloud) {
                dump(red_out, serialize::graph_to_json(derived::cloud_expand(wg, scaled(128))));
            } else {
                json j = serialize::graph_to_json(wg.graph);
                j["p"] = json::array({red_pn, red_pd});
                j["weights"] = json::array();
                for (const auto& w : wg.weights) j["weights"].push_back(serialize::rational_to_json(w));
                dump(red_out, j);
            }
            return 0;
        }
        if (red_kind == "colour") {
            auto g = load_game(red_in).game;
            derived::TMatrix t;
            bool cached = false;
            if (!red_tmatrix.empty()) {
                try {
                    t = serialize::tmatrix_from_json(json::parse(serialize::read_file(red_tmatrix)));
                    t.verify();
                    cached = true;
                } catch (...) {
                    cached = false;
                }
            }
            if (!cached) {
                t = derived::build_t();
                if (!red_tmatrix.empty()) dump(red_tmatrix, serialize::tmatrix_to_json(t));
            }
            if (red_three) {
                dump(red_out, serialize::graph_to_json(derived::to_3colouring(g, t, scaled(200'000))));
            } else {
                dump(red_out, serialize::graph_to_json(derived::to_colouring_step1(g, t).graph));
            }
            return 0;
        }
        throw precondition_error("reduce: unknown kind " + red_kind);
    }

    if (value->parsed()) {
        json out;
        if (val_kind == "xor") {
            auto inst = load_xor(val_in);
            out["value"] = xor3::value_bruteforce(inst, static_cast<int>(scaled(22))).to_string();
            out["satisfiable"] = xor3::is_satisfiable(inst);
        } else if (val_kind == "game") {
            auto wg = load_weighted(val_in);
            out["value"] = (val_j > 0 ? games::irreg_value(wg.game, val_j, scaled(20'000'000))
                                      : games::weighted_value(wg, scaled(20'000'000)))
                               .to_string();
        } else if (val_kind == "is") {
            auto g = serialize::graph_from_json(json::parse(serialize::read_file(val_in)));
            Rational is = derived::is_value_bruteforce(g.undirected(), 30, scaled(50'000'000));
            out["independent_set"] = is.to_string();
            out["vertex_cover"] = (Rational(1) - is).to_string();
        } else if (val_kind == "chroma") {
            auto g = serialize::graph_from_json(json::parse(serialize::read_file(val_in)));
            out["t"] = val_t;
            out["colourable"] = derived::chromatic_leq(g.undirected(), val_t, scaled(20'000'000));
        } else {
            throw precondition_error("value: unknown kind " + val_kind);
        }
        std::cout << out.dump(2) << "\n";
        return 0;
    }

    if (wlc->parsed()) {
        auto to_structure = [&](const std::string& path) {
            if (wl_vocab == "xor") return fo::xor3_structure(load_xor(path));
            if (wl_vocab == "game") return fo::weighted_game_structure(load_game(path).game);
            auto g = serialize::graph_from_json(json::parse(serialize::read_file(path)));
            return fo::graph_structure(g.n, g.edges, g.directed);
        };
        fo::Structure a = to_structure(wl_a), b = to_structure(wl_b);
        fo::harmonize_vocabularies(a, b);
        auto rep = wl::compare(a, b, wl_k, scaled(8'000'000));
        std::cout << serialize::wl_report_to_json(rep).dump(2) << "\n";
        return rep.equivalent ? 0 : 1;
    }

    if (foa->parsed()) {
        fo::Structure input;
        std::optional<fo::Interpretation> theta;
        kms::Params params{foa_k, foa_l, 5};
        if (!foa_file.empty()) {
            theta = fo::interpretation_from_sexpr(serialize::read_file(foa_file));
            input = fo::xor3_structure(load_xor(foa_in));
        } else if (foa_entry == "regularization") {
            theta = fo::regularization_interpretation();
            input = fo::xor3_structure(load_xor(foa_in));
        } else if (foa_entry == "kms-universe") {
            theta = fo::kms_universe_interpretation(params);
            input = fo::xor3_structure(load_xor(foa_in));
        } else if (foa_entry == "ug-split") {
            input = fo::weighted_game_structure(load_game(foa_in).game);
            theta = fo::ug_split_interpretation(params.q(), input.vocab);
        } else if (foa_entry == "independent-set") {
            input = fo::weighted_game_structure(load_game(foa_in).game);
            theta = fo::is_reduction_interpretation(params.q(), foa_pn, foa_pd, input.vocab);
        } else {
            throw precondition_error("fo-apply: no --entry or --file given");
        }
        auto applied = fo::apply_interpretation(*theta, input, scaled(50'000'000));
        json out;
        out["universe"] = applied.output.universe_size;
        out["relations"] = json::object();
        for (std::size_t r = 0; r < applied.output.vocab.relations.size(); ++r)
            out["relations"][applied.output.vocab.relations[r].name] = applied.output.relations[r];
        dump(foa_out, out);
        return 0;
    }

    if (foc->parsed()) {
        auto corpus_instances = corpus::canonical_regular_instances(foc_m);
        json out;
        int failures = 0;
        auto record = [&](const std::string& name, const corpus::FidelityReport& rep,
                          const std::string& section) {
            out[name] = {{"section_ref", section},
                         {"cases", rep.cases},
                         {"failures", rep.failures}};
            failures += rep.failures;
        };
        record("regularization", corpus::check_regularization_fidelity(corpus_instances), "4.3");
        record("kms_universe",
               corpus::check_kms_universe_fidelity(corpus_instances, kms::Params{1, 0, 5}), "4.5");
        auto small = corpus::canonical_regular_instances(std::min(foc_m, 2));
        auto games_corpus = corpus::reduction_games(small, kms::Params{1, 1, 5});
        record("ug_split", corpus::check_ug_split_fidelity(games_corpus), "5.1");
        auto tiny = corpus::canonical_regular_instances(1);
        auto tiny_games = corpus::reduction_games(tiny, kms::Params{1, 1, 5});
        record("independent_set", corpus::check_is_fidelity(tiny_games, 1, 3), "5.2");
        std::cout << out.dump(2) << "\n";
        return failures == 0 ? 0 : 1;
    }

    if (verify->parsed()) {
        json out;
        bool ok = true;
        if (ver_kind == "game") {
            if (ver_in.empty()) throw precondition_error("verify game: input required");
            auto wg = load_weighted(ver_in);
            bool two = true;
            for (const auto& e : wg.game.edges)
                if (std::holds_alternative<games::TwoToTwo>(e.c))
                    two = two && games::is_2bi2(e.c, wg.game.q);
            bool consistent = games::is_edge_consistent(wg.game);
            bool transitive = consistent && games::check_transitive(wg.game);
            out["checks"] = {{"two_by_two_blocks", two},
                             {"edge_consistent", consistent},
                             {"transitive", transitive}};
            out["section_refs"] = json::array({"3.2", "3.4"});
            ok = two && consistent && transitive;
        } else if (ver_kind == "pipeline") {
            auto rng = make_rng(ver_seed, "cli/planted");
            std::vector<std::uint8_t> assignment(static_cast<std::size_t>(ver_n));
            for (auto& b : assignment) b = rng() & 1;
            xor3::RhsMode mode =
                ver_planted ? xor3::RhsMode{xor3::Planted{assignment}} : xor3::RhsMode{xor3::RandomRhs{}};
            auto res = xor3::generate_expander_instance(ver_n, ver_r, ver_seed, mode);
            xor3::Instance reg = xor3::regularize(res.instance);
            kms::Params params{ver_k, ver_l, 3 * ver_r};
            auto red = kms::build_weighted_game(reg, params, kms::WeightScheme::Exact);
            auto dec = red.cliques;  // construction already verified the decomposition
            out["vertices"] = red.transitive.vertices.size();
            out["edges"] = red.weighted.game.edges.size();
            out["cliques"] = dec.cliques.size();
            bool blocks = true;
            for (const auto& e : red.weighted.game.edges) blocks = blocks && games::is_2bi2(e.c, params.q());
            out["two_by_two_blocks"] = blocks;
            bool transitive = games::check_transitive(red.transitive.game);
            out["transitive"] = transitive;
            ok = blocks && transitive;
            if (ver_planted) {
                auto labels = kms::planted_labelling(reg, [&] {
                    auto s = xor3::solve(reg);
                    return *s;
                }(), red.transitive);
                Rational satisfied(0);
                for (std::size_t i = 0; i < red.weighted.game.edges.size(); ++i) {
                    const auto& e = red.weighted.game.edges[i];
                    auto rel = games::relation_of(e.c, red.weighted.game.q);
                    if (std::binary_search(rel.begin(), rel.end(),
                                           std::pair{labels[static_cast<std::size_t>(e.u)],
                                                     labels[static_cast<std::size_t>(e.v)]}))
                        satisfied += red.weighted.weights[i];
                }
                bool complete = red.weighted.game.edges.empty() ||
                                satisfied == red.weighted.total_weight();
                out["weighted_value"] = complete ? "1" : "<1";
                out["completeness_ref_4_1"] = complete;
                ok = ok && complete;
            }
        } else {
            throw precondition_error("verify: unknown kind " + ver_kind);
        }
        out["pass"] = ok;
        std::cout << out.dump(2) << "\n";
        return ok ? 0 : 1;
    }

    if (report->parsed()) {
        json out;
        if (rep_kind == "xor") {
            auto inst = load_xor(rep_in);
            out["vars"] = inst.num_vars;
            out["equations"] = inst.equations.size();
            out["regular_d5"] = xor3::check_regular(inst, 5);
        } else if (rep_kind == "game") {
            auto wg = load_weighted(rep_in);
            out["q"] = wg.game.q;
            out["vertices"] = wg.game.num_vertices;
            out["edges"] = wg.game.edges.size();
            out["edge_consistent"] = games::is_edge_consistent(wg.game);
            out["simple"] = games::is_simple(wg.game);
            out["total_weight"] = wg.total_weight().to_string();
        } else if (rep_kind == "graph") {
            auto g = serialize::graph_from_json(json::parse(serialize::read_file(rep_in)));
            out["directed"] = g.directed;
            out["n"] = g.n;
            out["edges"] = g.edges.size();
        } else if (rep_kind == "ledger") {
            out = json::parse(serialize::read_file(rep_in));
        } else {
            throw precondition_error("report: unknown kind " + rep_kind);
        }
        std::cout << out.dump(2) << "\n";
        return 0;
    }
    return 3;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const capacity_error& e) {
        std::cerr << "capacity: " << e.what() << "\n";
        return 2;
    } catch (const parse_error& e) {
        std::cerr << "input: " << e.what() << "\n";
        return 3;
    } catch (const precondition_error& e) {
        std::cerr << "usage: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "verification: " << e.what() << "\n";
        return 1;
    }
}
