#pragma once

#include <optional>
#include <string>

#include "json.hpp"

#include "gapforge/derived.hpp"
#include "gapforge/games.hpp"
#include "gapforge/kms.hpp"
#include "gapforge/wl.hpp"

namespace gapforge::serialize {

// Canonical field order everywhere; rationals as ["num", "den"] digit strings
// so integer weights of any size round-trip exactly.
using json = nlohmann::ordered_json;

json rational_to_json(const Rational& r);
Rational rational_from_json(const json& j);

json game_to_json(const games::Game& g);
json weighted_game_to_json(const games::WeightedGame& g);

struct ParsedGame {
    games::Game game;
    std::optional<std::vector<Rational>> weights;
};
ParsedGame game_from_json(const json& j);

json ledger_to_json(const kms::WeightLedger& ledger);

json graph_to_json(const derived::UndirectedGraph& g);
json graph_to_json(const derived::DirectedGraph& g);

struct ParsedGraph {
    bool directed = false;
    int n = 0;
    std::vector<std::pair<int, int>> edges;

    derived::UndirectedGraph undirected() const;
    derived::DirectedGraph directed_graph() const;
};
ParsedGraph graph_from_json(const json& j);

json tmatrix_to_json(const derived::TMatrix& t);
derived::TMatrix tmatrix_from_json(const json& j);

json wl_report_to_json(const wl::EquivalenceReport& rep);

std::string read_file(const std::string& path);
// Writes through a temp file and renames, so readers never see partial data.
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace gapforge::serialize
