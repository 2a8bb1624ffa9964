#pragma once

#include <string>
#include <vector>

namespace gapforge::fo {

struct RelationSymbol {
    std::string name;
    int arity = 0;
    bool operator==(const RelationSymbol&) const = default;
};

struct Vocabulary {
    std::vector<RelationSymbol> relations;
    std::vector<std::string> constants;

    bool operator==(const Vocabulary&) const = default;
    int relation_index(const std::string& name) const;  // -1 when absent
    void validate() const;                               // unique names
};

// Finite relational structure over elements 0 .. universe_size-1.  Relation
// tuples are kept sorted for binary-search membership tests.
struct Structure {
    Vocabulary vocab;
    int universe_size = 0;
    std::vector<std::vector<std::vector<int>>> relations;  // per symbol, sorted
    std::vector<int> constants;                            // per constant symbol

    bool operator==(const Structure&) const = default;
    void normalize();  // sorts and dedupes relation tuples
    void validate() const;
    bool holds(int rel, const std::vector<int>& tuple) const;
};

// Structure with the universe relabelled through a bijection perm
// (element e becomes perm[e]).
Structure relabel(const Structure& a, const std::vector<int>& perm);

// Disjoint union; elements of b are shifted by a.universe_size.
Structure disjoint_union(const Structure& a, const Structure& b);

}  // namespace gapforge::fo
