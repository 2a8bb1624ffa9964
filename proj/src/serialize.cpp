#include "gapforge/serialize.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "gapforge/errors.hpp"
#include "gapforge/fo.hpp"

namespace gapforge::serialize {

json rational_to_json(const Rational& r) {
    return json::array({r.num().to_string(), r.den().to_string()});
}

Rational rational_from_json(const json& j) {
    if (!j.is_array() || j.size() != 2) throw parse_error("rational: expected [num, den]");
    auto read = [](const json& v) {
        if (v.is_string()) return BigInt::from_string(v.get<std::string>());
        return BigInt(v.get<long long>());
    };
    return Rational(read(j[0]), read(j[1]));
}

json game_to_json(const games::Game& g) {
    json out;
    out["q"] = g.q;
    out["vertices"] = g.num_vertices;
    out["edges"] = json::array();
    for (const auto& e : g.edges) {
        json je;
        je["u"] = e.u;
        je["v"] = e.v;
        if (const auto* one = std::get_if<games::OneToOne>(&e.c)) {
            je["kind"] = "1to1";
            je["pi1"] = one->pi;
            je["pi2"] = json::array();
        } else {
            const auto& two = std::get<games::TwoToTwo>(e.c);
            je["kind"] = "2to2";
            je["pi1"] = two.pi1;
            je["pi2"] = two.pi2;
        }
        out["edges"].push_back(std::move(je));
    }
    return out;
}

json weighted_game_to_json(const games::WeightedGame& g) {
    json out = game_to_json(g.game);
    out["weights"] = json::array();
    for (const auto& w : g.weights) out["weights"].push_back(rational_to_json(w));
    return out;
}

ParsedGame game_from_json(const json& j) {
    ParsedGame out;
    try {
        out.game.q = j.at("q").get<int>();
        out.game.num_vertices = j.at("vertices").get<int>();
        for (const auto& je : j.at("edges")) {
            games::Edge e;
            e.u = je.at("u").get<int>();
            e.v = je.at("v").get<int>();
            auto kind = je.at("kind").get<std::string>();
            auto pi1 = je.at("pi1").get<games::Permutation>();
            if (kind == "1to1") {
                e.c = games::OneToOne{pi1};
            } else if (kind == "2to2") {
                e.c = games::TwoToTwo{pi1, je.at("pi2").get<games::Permutation>()};
            } else {
                throw parse_error("game: unknown edge kind '" + kind + "'");
            }
            out.game.edges.push_back(std::move(e));
        }
        if (j.contains("weights")) {
            std::vector<Rational> w;
            for (const auto& jw : j.at("weights")) w.push_back(rational_from_json(jw));
            out.weights = std::move(w);
        }
    } catch (const json::exception& ex) {
        throw parse_error(std::string("game json: ") + ex.what());
    }
    out.game.validate();
    return out;
}

json ledger_to_json(const kms::WeightLedger& ledger) {
    json out;
    out["nu"] = json::object();
    for (std::size_t v = 0; v < ledger.nu.size(); ++v)
        out["nu"][std::to_string(v)] = ledger.nu[v];
    out["psi"] = ledger.psi;
    out["psi_bound"] = ledger.psi_bound.to_string();
    out["chi"] = json::object();
    for (std::size_t v = 0; v < ledger.chi.size(); ++v)
        out["chi"][std::to_string(v)] = ledger.chi[v].to_string();
    out["exact_w"] = json::array();
    for (const auto& w : ledger.exact_w) out["exact_w"].push_back(rational_to_json(w));
    out["int_w"] = json::array();
    for (const auto& w : ledger.int_w) out["int_w"].push_back(w.to_string());
    out["gamma"] = rational_to_json(ledger.gamma);
    return out;
}

json graph_to_json(const derived::UndirectedGraph& g) {
    json out;
    out["directed"] = false;
    out["n"] = g.n;
    out["edges"] = json::array();
    for (auto [u, v] : g.edges) out["edges"].push_back(json::array({u, v}));
    return out;
}

json graph_to_json(const derived::DirectedGraph& g) {
    json out;
    out["directed"] = true;
    out["n"] = g.n;
    out["edges"] = json::array();
    for (auto [u, v] : g.arcs) out["edges"].push_back(json::array({u, v}));
    return out;
}

ParsedGraph graph_from_json(const json& j) {
    ParsedGraph out;
    try {
        out.directed = j.at("directed").get<bool>();
        out.n = j.at("n").get<int>();
        for (const auto& je : j.at("edges"))
            out.edges.emplace_back(je.at(0).get<int>(), je.at(1).get<int>());
    } catch (const json::exception& ex) {
        throw parse_error(std::string("graph json: ") + ex.what());
    }
    return out;
}

derived::UndirectedGraph ParsedGraph::undirected() const {
    if (directed) throw parse_error("graph: expected an undirected graph");
    return {n, edges};
}

derived::DirectedGraph ParsedGraph::directed_graph() const {
    if (!directed) throw parse_error("graph: expected a directed graph");
    return {n, edges};
}

json tmatrix_to_json(const derived::TMatrix& t) {
    json out;
    out["s"] = 16;
    out["entries"] = json::array();
    for (const auto& row : t.entries) {
        json jr = json::array();
        for (double v : row) jr.push_back(v);
        out["entries"].push_back(std::move(jr));
    }
    out["certificate"] = {{"iterations", t.iterations},
                          {"stochasticity_error", t.stochasticity_error},
                          {"symmetry_error", t.symmetry_error},
                          {"lambda2", t.lambda2},
                          {"zero_pattern_ok", t.zero_pattern_ok}};
    return out;
}

derived::TMatrix tmatrix_from_json(const json& j) {
    derived::TMatrix t;
    try {
        for (int i = 0; i < 16; ++i)
            for (int k = 0; k < 16; ++k)
                t.entries[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] =
                    j.at("entries").at(static_cast<std::size_t>(i)).at(static_cast<std::size_t>(k)).get<double>();
        const auto& cert = j.at("certificate");
        t.iterations = cert.at("iterations").get<int>();
        t.stochasticity_error = cert.at("stochasticity_error").get<double>();
        t.symmetry_error = cert.at("symmetry_error").get<double>();
        t.lambda2 = cert.at("lambda2").get<double>();
        t.zero_pattern_ok = cert.at("zero_pattern_ok").get<bool>();
    } catch (const json::exception& ex) {
        throw parse_error(std::string("tmatrix json: ") + ex.what());
    }
    return t;
}

json wl_report_to_json(const wl::EquivalenceReport& rep) {
    json out;
    out["k"] = rep.dim;
    out["equivalent"] = rep.equivalent;
    out["rounds"] = rep.rounds;
    out["class_histograms"] = json::object();
    for (const auto& [colour, counts] : rep.class_histograms)
        out["class_histograms"][std::to_string(colour)] =
            json::array({counts.first, counts.second});
    return out;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw parse_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file_atomic(const std::string& path, const std::string& content) {
    std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw parse_error("cannot write " + tmp);
        out << content;
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw parse_error("cannot rename " + tmp + " to " + path);
}

}  // namespace gapforge::serialize

// --- S-expression formats ---------------------------------------------------

namespace gapforge::fo {

namespace {

struct Tokens {
    std::vector<std::string> items;
    std::size_t pos = 0;

    const std::string& peek() const {
        if (pos >= items.size()) throw parse_error("sexpr: unexpected end of input");
        return items[pos];
    }
    std::string next() {
        auto t = peek();
        ++pos;
        return t;
    }
    void expect(const std::string& t) {
        if (next() != t) throw parse_error("sexpr: expected '" + t + "'");
    }
};

Tokens tokenize(const std::string& text) {
    Tokens out;
    std::string cur;
    for (char c : text) {
        if (c == '(' || c == ')') {
            if (!cur.empty()) {
                out.items.push_back(cur);
                cur.clear();
            }
            out.items.push_back(std::string(1, c));
        } else if (std::isspace(static_cast<unsigned char>(c))) {
            if (!cur.empty()) {
                out.items.push_back(cur);
                cur.clear();
            }
        } else {
            cur.push_back(c);
        }
    }
    if (!cur.empty()) out.items.push_back(cur);
    return out;
}

FormulaPtr parse_formula(Tokens& ts) {
    ts.expect("(");
    std::string head = ts.next();
    FormulaPtr out;
    if (head == "true" || head == "false") {
        out = truth(head == "true");
    } else if (head == "=") {
        std::string a = ts.next(), b = ts.next();
        out = eq(a, b);
    } else if (head == "rel") {
        std::string name = ts.next();
        std::vector<std::string> vars;
        while (ts.peek() != ")") vars.push_back(ts.next());
        out = atom(name, vars);
    } else if (head == "not") {
        out = neg(parse_formula(ts));
    } else if (head == "and" || head == "or") {
        std::vector<FormulaPtr> children;
        while (ts.peek() != ")") children.push_back(parse_formula(ts));
        out = head == "and" ? conj(std::move(children)) : disj(std::move(children));
    } else if (head == "exists" || head == "forall") {
        std::string var = ts.next();
        FormulaPtr body = parse_formula(ts);
        out = head == "exists" ? exists(var, body) : forall(var, body);
    } else {
        throw parse_error("sexpr: unknown head '" + head + "'");
    }
    ts.expect(")");
    return out;
}

void print_formula(const FormulaPtr& f, std::string& out) {
    switch (f->kind) {
        case Formula::Kind::True:
            out += "(true)";
            break;
        case Formula::Kind::False:
            out += "(false)";
            break;
        case Formula::Kind::Eq:
            out += "(= " + f->vars[0] + " " + f->vars[1] + ")";
            break;
        case Formula::Kind::Atom:
            out += "(rel " + f->rel;
            for (const auto& v : f->vars) out += " " + v;
            out += ")";
            break;
        case Formula::Kind::Not:
            out += "(not ";
            print_formula(f->children[0], out);
            out += ")";
            break;
        case Formula::Kind::And:
        case Formula::Kind::Or:
            out += f->kind == Formula::Kind::And ? "(and" : "(or";
            for (const auto& c : f->children) {
                out += " ";
                print_formula(c, out);
            }
            out += ")";
            break;
        case Formula::Kind::Exists:
        case Formula::Kind::Forall:
            out += f->kind == Formula::Kind::Exists ? "(exists " : "(forall ";
            out += f->bound + " ";
            print_formula(f->children[0], out);
            out += ")";
            break;
    }
}

}  // namespace

std::string to_sexpr(const FormulaPtr& f) {
    std::string out;
    print_formula(f, out);
    return out;
}

FormulaPtr formula_from_sexpr(const std::string& text) {
    Tokens ts = tokenize(text);
    FormulaPtr out = parse_formula(ts);
    if (ts.pos != ts.items.size()) throw parse_error("sexpr: trailing tokens");
    return out;
}

std::string to_sexpr(const Interpretation& theta) {
    std::string out = "(interpretation " + std::to_string(theta.dimension) + "\n  (target";
    for (const auto& r : theta.target.relations)
        out += " (rel " + r.name + " " + std::to_string(r.arity) + ")";
    for (const auto& c : theta.target.constants) out += " (const " + c + ")";
    out += ")\n  (delta " + to_sexpr(theta.delta) + ")\n  (eps " + to_sexpr(theta.eps) + ")";
    for (std::size_t r = 0; r < theta.target.relations.size(); ++r)
        out += "\n  (rel " + theta.target.relations[r].name + " " +
               to_sexpr(theta.relation_formulas[r]) + ")";
    for (std::size_t c = 0; c < theta.target.constants.size(); ++c)
        out += "\n  (const " + theta.target.constants[c] + " " +
               to_sexpr(theta.constant_formulas[c]) + ")";
    out += ")\n";
    return out;
}

Interpretation interpretation_from_sexpr(const std::string& text) {
    Tokens ts = tokenize(text);
    Interpretation theta;
    ts.expect("(");
    if (ts.next() != "interpretation") throw parse_error("sexpr: expected interpretation");
    theta.dimension = std::stoi(ts.next());

    ts.expect("(");
    if (ts.next() != "target") throw parse_error("sexpr: expected target block");
    while (ts.peek() != ")") {
        ts.expect("(");
        std::string kind = ts.next();
        if (kind == "rel") {
            std::string name = ts.next();
            int arity = std::stoi(ts.next());
            theta.target.relations.push_back({name, arity});
        } else if (kind == "const") {
            theta.target.constants.push_back(ts.next());
        } else {
            throw parse_error("sexpr: bad target entry");
        }
        ts.expect(")");
    }
    ts.expect(")");

    ts.expect("(");
    if (ts.next() != "delta") throw parse_error("sexpr: expected delta");
    theta.delta = parse_formula(ts);
    ts.expect(")");
    ts.expect("(");
    if (ts.next() != "eps") throw parse_error("sexpr: expected eps");
    theta.eps = parse_formula(ts);
    ts.expect(")");

    std::map<std::string, FormulaPtr> rels, consts;
    while (ts.peek() != ")") {
        ts.expect("(");
        std::string kind = ts.next();
        std::string name = ts.next();
        FormulaPtr phi = parse_formula(ts);
        ts.expect(")");
        if (kind == "rel")
            rels[name] = phi;
        else if (kind == "const")
            consts[name] = phi;
        else
            throw parse_error("sexpr: bad interpretation entry");
    }
    ts.expect(")");
    for (const auto& r : theta.target.relations) {
        auto it = rels.find(r.name);
        if (it == rels.end()) throw parse_error("sexpr: missing formula for " + r.name);
        theta.relation_formulas.push_back(it->second);
    }
    for (const auto& c : theta.target.constants) {
        auto it = consts.find(c);
        if (it == consts.end()) throw parse_error("sexpr: missing formula for " + c);
        theta.constant_formulas.push_back(it->second);
    }
    return theta;
}

}  // namespace gapforge::fo
