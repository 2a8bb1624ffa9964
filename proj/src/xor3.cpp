#include "gapforge/xor3.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <sstream>

#include "gapforge/errors.hpp"
#include "gapforge/rng.hpp"

namespace gapforge::xor3 {

void Instance::validate() const {
    for (const auto& e : equations) {
        if (e.x < 0 || e.y < 0 || e.z < 0 || e.x >= num_vars || e.y >= num_vars ||
            e.z >= num_vars)
            throw precondition_error("xor3: variable index out of range");
        if (e.x == e.y || e.y == e.z || e.x == e.z)
            throw precondition_error("xor3: equation with repeated variable");
        if (e.b != 0 && e.b != 1) throw precondition_error("xor3: right-hand side must be a bit");
    }
}

void GapConfig::validate() const {
    if (!(Rational(0) <= soundness && soundness < completeness && completeness <= Rational(1)))
        throw precondition_error("GapConfig: need 0 <= s < c <= 1");
}

Rational value_bruteforce(const Instance& inst, int cap) {
    inst.validate();
    if (inst.num_vars > cap)
        throw capacity_error("value_bruteforce: " + std::to_string(inst.num_vars) +
                             " variables over the cap of " + std::to_string(cap));
    const auto m = inst.equations.size();
    if (m == 0) return Rational(1);

    std::vector<std::vector<int>> occ(inst.num_vars);
    for (std::size_t i = 0; i < m; ++i) {
        occ[inst.equations[i].x].push_back(static_cast<int>(i));
        occ[inst.equations[i].y].push_back(static_cast<int>(i));
        occ[inst.equations[i].z].push_back(static_cast<int>(i));
    }
    // parity[i] = current XOR of the three variables of equation i; all-zero start.
    std::vector<std::uint8_t> parity(m, 0);
    long long sat = 0;
    for (std::size_t i = 0; i < m; ++i) sat += inst.equations[i].b == 0;
    long long best = sat;

    const std::uint64_t total = 1ull << inst.num_vars;
    for (std::uint64_t g = 1; g < total; ++g) {
        int flip = std::countr_zero(g);  // Gray code: step g flips this variable
        for (int i : occ[flip]) {
            parity[i] ^= 1;
            sat += (parity[i] == inst.equations[i].b) ? 1 : -1;
        }
        best = std::max(best, sat);
        if (best == static_cast<long long>(m)) break;
    }
    return Rational(BigInt(best), BigInt(static_cast<long long>(m)));
}

namespace {

// Row-reduces the system; returns echelon rows (lhs, rhs) keyed by pivot, or
// nullopt when inconsistent.
std::optional<std::vector<std::pair<gf2::Vector, std::uint8_t>>> eliminate(const Instance& inst) {
    std::vector<std::optional<std::pair<gf2::Vector, std::uint8_t>>> by_pivot(inst.num_vars);
    for (std::size_t i = 0; i < inst.equations.size(); ++i) {
        gf2::Vector row = lhs_vector(inst, static_cast<int>(i));
        std::uint8_t rhs = static_cast<std::uint8_t>(inst.equations[i].b);
        for (int p = row.lowest_set(); p >= 0; p = row.lowest_set()) {
            if (!by_pivot[p]) break;
            row ^= by_pivot[p]->first;
            rhs ^= by_pivot[p]->second;
        }
        int p = row.lowest_set();
        if (p < 0) {
            if (rhs) return std::nullopt;
            continue;
        }
        by_pivot[p] = {std::move(row), rhs};
    }
    std::vector<std::pair<gf2::Vector, std::uint8_t>> out;
    for (auto& r : by_pivot)
        if (r) out.push_back(std::move(*r));
    return out;
}

}  // namespace

bool is_satisfiable(const Instance& inst) {
    inst.validate();
    return eliminate(inst).has_value();
}

std::optional<std::vector<std::uint8_t>> solve(const Instance& inst) {
    inst.validate();
    auto rows = eliminate(inst);
    if (!rows) return std::nullopt;
    std::vector<std::uint8_t> assign(inst.num_vars, 0);
    // Back-substitute from the highest pivot; free variables stay zero.
    for (auto it = rows->rbegin(); it != rows->rend(); ++it) {
        int p = it->first.lowest_set();
        std::uint8_t v = it->second;
        for (int j = p + 1; j < inst.num_vars; ++j)
            if (it->first.get(static_cast<std::size_t>(j))) v ^= assign[j];
        assign[static_cast<std::size_t>(p)] = v;
    }
    return assign;
}

std::vector<std::vector<std::uint8_t>> homogeneous_kernel(const Instance& inst) {
    inst.validate();
    Instance zeroed = inst;
    for (auto& e : zeroed.equations) e.b = 0;
    auto rows = eliminate(zeroed);
    std::vector<bool> is_pivot(inst.num_vars, false);
    for (const auto& [row, rhs] : *rows) is_pivot[row.lowest_set()] = true;

    std::vector<std::vector<std::uint8_t>> kernel;
    for (int free = 0; free < inst.num_vars; ++free) {
        if (is_pivot[free]) continue;
        std::vector<std::uint8_t> v(inst.num_vars, 0);
        v[free] = 1;
        for (auto it = rows->rbegin(); it != rows->rend(); ++it) {
            int p = it->first.lowest_set();
            std::uint8_t val = 0;
            for (int j = p + 1; j < inst.num_vars; ++j)
                if (it->first.get(static_cast<std::size_t>(j))) val ^= v[j];
            v[static_cast<std::size_t>(p)] = val;
        }
        kernel.push_back(std::move(v));
    }
    return kernel;
}

Instance g_transform(const Instance& inst) {
    inst.validate();
    Instance out;
    out.num_vars = 2 * inst.num_vars;
    out.equations.reserve(8 * inst.equations.size());
    for (const auto& e : inst.equations)
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                for (int k = 0; k < 2; ++k)
                    out.equations.push_back(
                        {2 * e.x + i, 2 * e.y + j, 2 * e.z + k, (e.b + i + j + k) & 1});
    return out;
}

Instance regularize(const Instance& inst) {
    inst.validate();
    Instance out;
    out.num_vars = inst.num_vars + 3 * static_cast<int>(inst.equations.size());
    for (std::size_t i = 0; i < inst.equations.size(); ++i) {
        const auto& e = inst.equations[i];
        int xe = inst.num_vars + 3 * static_cast<int>(i);
        int ye = xe + 1, ze = xe + 2;
        out.equations.push_back({e.x, ye, ze, e.b});
        out.equations.push_back({xe, e.y, ze, e.b});
        out.equations.push_back({xe, ye, e.z, e.b});
    }
    return out;
}

bool check_half_regular(const Instance& inst, int d) {
    std::vector<int> count(inst.num_vars, 0);
    for (const auto& e : inst.equations) {
        ++count[e.x];
        ++count[e.y];
        ++count[e.z];
    }
    return std::all_of(count.begin(), count.end(), [&](int c) { return c <= d; });
}

bool check_regular(const Instance& inst, int d) {
    if (!check_half_regular(inst, d)) return false;
    for (std::size_t i = 0; i < inst.equations.size(); ++i) {
        for (std::size_t j = i + 1; j < inst.equations.size(); ++j) {
            const auto& a = inst.equations[i];
            const auto& b = inst.equations[j];
            int shared = 0;
            for (int va : {a.x, a.y, a.z})
                for (int vb : {b.x, b.y, b.z})
                    if (va == vb) ++shared;
            if (shared > 1) return false;
        }
    }
    return true;
}

GeneratorResult generate_expander_instance(int n, int r, std::uint64_t seed, const RhsMode& rhs,
                                           int retry_limit) {
    if (n < 3) throw precondition_error("generate_expander_instance: need n >= 3");
    if (r < 1) throw precondition_error("generate_expander_instance: need r >= 1");
    auto rng = make_rng(seed, "xor3/expander");

    int left = r * n;
    std::vector<int> shuffled(left);
    std::iota(shuffled.begin(), shuffled.end(), 0);
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    // groups[g] holds the n left nodes of group g.
    std::vector<std::vector<int>> groups(r);
    for (int g = 0; g < r; ++g)
        groups[g].assign(shuffled.begin() + g * n, shuffled.begin() + (g + 1) * n);

    std::vector<std::vector<int>> neighbours(left);   // per left node, in round order
    std::vector<std::vector<bool>> used(left, std::vector<bool>(n, false));
    std::vector<std::vector<std::pair<int, int>>> matchings;

    std::vector<int> perm(n);
    for (int round = 0; round < 3 * r; ++round) {
        const auto& group = groups[round % r];
        bool placed = false;
        for (int attempt = 0; attempt < retry_limit && !placed; ++attempt) {
            std::iota(perm.begin(), perm.end(), 0);
            std::shuffle(perm.begin(), perm.end(), rng);
            bool collision = false;
            for (int i = 0; i < n; ++i)
                if (used[group[i]][perm[i]]) {
                    collision = true;
                    break;
                }
            if (collision) continue;
            std::vector<std::pair<int, int>> matching;
            matching.reserve(n);
            for (int i = 0; i < n; ++i) {
                used[group[i]][perm[i]] = true;
                neighbours[group[i]].push_back(perm[i]);
                matching.emplace_back(group[i], perm[i]);
            }
            matchings.push_back(std::move(matching));
            placed = true;
        }
        if (!placed)
            throw generation_error("generate_expander_instance: matching rejection budget exhausted");
    }

    GeneratorResult out;
    out.graph.left = left;
    out.graph.right = n;
    out.instance.num_vars = n;
    for (int ell = 0; ell < left; ++ell) {
        const auto& nb = neighbours[ell];
        for (int v : nb) out.graph.edges.emplace_back(ell, v);
        Equation e{nb[0], nb[1], nb[2], 0};
        if (const auto* planted = std::get_if<Planted>(&rhs)) {
            if (static_cast<int>(planted->assignment.size()) != n)
                throw precondition_error("generate_expander_instance: planted assignment size != n");
            e.b = planted->assignment[e.x] ^ planted->assignment[e.y] ^ planted->assignment[e.z];
        } else {
            e.b = static_cast<int>(rng() & 1);
        }
        out.instance.equations.push_back(e);
    }
    out.matchings = std::move(matchings);
    return out;
}

bool check_unique_neighbour_expansion(const BipartiteMultigraph& g, int s_max,
                                      const Rational& beta, std::uint64_t budget) {
    std::vector<std::vector<int>> adj(g.left);
    for (auto [u, v] : g.edges) adj[u].push_back(v);

    // Budget check: sum of binomials.
    std::uint64_t subsets = 0;
    for (int s = 1; s <= s_max; ++s) {
        std::uint64_t c = 1;
        for (int i = 0; i < s; ++i) c = c * static_cast<std::uint64_t>(g.left - i) / (i + 1);
        subsets += c;
        if (subsets > budget)
            throw capacity_error("check_unique_neighbour_expansion: subset budget exceeded");
    }

    std::vector<int> incidence(g.right, 0);
    std::vector<int> chosen;
    // Depth-first over subsets of size <= s_max.
    std::function<bool(int)> walk = [&](int start) -> bool {
        if (!chosen.empty()) {
            int unique = 0;
            for (int v = 0; v < g.right; ++v)
                if (incidence[v] == 1) ++unique;
            // unique >= beta * |S|
            if (Rational(unique) < beta * Rational(static_cast<int>(chosen.size()))) return false;
        }
        if (static_cast<int>(chosen.size()) == s_max) return true;
        for (int u = start; u < g.left; ++u) {
            chosen.push_back(u);
            std::vector<int> distinct(adj[u]);
            std::sort(distinct.begin(), distinct.end());
            distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
            for (int v : distinct) ++incidence[v];
            bool ok = walk(u + 1);
            for (int v : distinct) --incidence[v];
            chosen.pop_back();
            if (!ok) return false;
        }
        return true;
    };
    return walk(0);
}

std::string to_text(const Instance& inst) {
    std::ostringstream os;
    os << "vars " << inst.num_vars << "\n";
    for (const auto& e : inst.equations)
        os << e.x << " " << e.y << " " << e.z << " = " << e.b << "\n";
    return os.str();
}

Instance from_text(const std::string& text) {
    std::istringstream is(text);
    std::string word;
    if (!(is >> word) || word != "vars") throw parse_error("xor3 text: expected 'vars N' header");
    Instance inst;
    if (!(is >> inst.num_vars)) throw parse_error("xor3 text: bad variable count");
    Equation e;
    std::string eq;
    while (is >> e.x >> e.y >> e.z >> eq >> e.b) {
        if (eq != "=") throw parse_error("xor3 text: expected '=' in equation line");
        inst.equations.push_back(e);
    }
    if (!is.eof() && is.fail()) {
        is.clear();
        std::string rest;
        std::getline(is, rest);
        if (rest.find_first_not_of(" \t\r\n") != std::string::npos)
            throw parse_error("xor3 text: trailing garbage");
    }
    inst.validate();
    return inst;
}

gf2::Vector lhs_vector(const Instance& inst, int equation_index) {
    const auto& e = inst.equations.at(static_cast<std::size_t>(equation_index));
    gf2::Vector v(static_cast<std::size_t>(inst.num_vars));
    v.set(static_cast<std::size_t>(e.x), true);
    v.set(static_cast<std::size_t>(e.y), true);
    v.set(static_cast<std::size_t>(e.z), true);
    return v;
}

}  // namespace gapforge::xor3
