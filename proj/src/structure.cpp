#include "gapforge/structure.hpp"

#include <algorithm>
#include <set>

#include "gapforge/errors.hpp"

namespace gapforge::fo {

int Vocabulary::relation_index(const std::string& name) const {
    for (std::size_t i = 0; i < relations.size(); ++i)
        if (relations[i].name == name) return static_cast<int>(i);
    return -1;
}

void Vocabulary::validate() const {
    std::set<std::string> names;
    for (const auto& r : relations) {
        if (r.arity < 1) throw precondition_error("vocabulary: relation arity must be positive");
        if (!names.insert(r.name).second)
            throw precondition_error("vocabulary: duplicate symbol " + r.name);
    }
    for (const auto& c : constants)
        if (!names.insert(c).second) throw precondition_error("vocabulary: duplicate symbol " + c);
}

void Structure::normalize() {
    for (auto& tuples : relations) {
        std::sort(tuples.begin(), tuples.end());
        tuples.erase(std::unique(tuples.begin(), tuples.end()), tuples.end());
    }
}

void Structure::validate() const {
    vocab.validate();
    if (relations.size() != vocab.relations.size())
        throw precondition_error("structure: one tuple set per relation symbol required");
    if (constants.size() != vocab.constants.size())
        throw precondition_error("structure: one interpretation per constant required");
    for (std::size_t r = 0; r < relations.size(); ++r)
        for (const auto& t : relations[r]) {
            if (static_cast<int>(t.size()) != vocab.relations[r].arity)
                throw precondition_error("structure: tuple arity mismatch in " +
                                         vocab.relations[r].name);
            for (int e : t)
                if (e < 0 || e >= universe_size)
                    throw precondition_error("structure: tuple element outside the universe");
        }
    for (int c : constants)
        if (c < 0 || c >= universe_size)
            throw precondition_error("structure: constant outside the universe");
}

bool Structure::holds(int rel, const std::vector<int>& tuple) const {
    const auto& tuples = relations[static_cast<std::size_t>(rel)];
    return std::binary_search(tuples.begin(), tuples.end(), tuple);
}

Structure relabel(const Structure& a, const std::vector<int>& perm) {
    Structure out = a;
    for (auto& tuples : out.relations)
        for (auto& t : tuples)
            for (auto& e : t) e = perm[static_cast<std::size_t>(e)];
    for (auto& c : out.constants) c = perm[static_cast<std::size_t>(c)];
    out.normalize();
    return out;
}

Structure disjoint_union(const Structure& a, const Structure& b) {
    if (!(a.vocab == b.vocab)) throw precondition_error("disjoint_union: vocabulary mismatch");
    if (!a.constants.empty())
        throw precondition_error("disjoint_union: constants cannot be unioned");
    Structure out = a;
    out.universe_size += b.universe_size;
    for (std::size_t r = 0; r < b.relations.size(); ++r)
        for (const auto& t : b.relations[r]) {
            std::vector<int> shifted = t;
            for (auto& e : shifted) e += a.universe_size;
            out.relations[r].push_back(std::move(shifted));
        }
    out.normalize();
    return out;
}

}  // namespace gapforge::fo
