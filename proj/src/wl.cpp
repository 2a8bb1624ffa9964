#include "gapforge/wl.hpp"

#include <algorithm>
#include <set>
#include <unordered_set>

#include "gapforge/errors.hpp"

namespace gapforge::wl {

namespace {

std::uint64_t tuple_count(int n, int dim, std::uint64_t budget) {
    std::uint64_t total = 1;
    for (int i = 0; i < dim; ++i) {
        if (n > 0 && total > budget / static_cast<std::uint64_t>(n))
            throw capacity_error("wl: n^dim exceeds the budget");
        total *= static_cast<std::uint64_t>(n);
    }
    return total;
}

using Signature = std::vector<long long>;

// Membership oracle with O(1) tuple lookups: tuples packed base-n.
struct AtomIndex {
    const fo::Structure* a;
    long long base;
    std::vector<std::unordered_set<long long>> packed;

    explicit AtomIndex(const fo::Structure& s) : a(&s), base(std::max(s.universe_size, 1)) {
        packed.resize(s.relations.size());
        for (std::size_t r = 0; r < s.relations.size(); ++r)
            for (const auto& t : s.relations[r]) {
                long long key = 0;
                for (int e : t) key = key * base + e;
                packed[r].insert(key);
            }
    }
    bool holds(std::size_t r, const std::vector<int>& args) const {
        long long key = 0;
        for (int e : args) key = key * base + e;
        return packed[r].count(key) > 0;
    }
};

// Atomic type, packed bitwise: equality pattern, constant hits, and every
// relation atom whose arguments are tuple positions (with repetition).
Signature atomic_signature(const AtomIndex& idx, const std::vector<int>& t) {
    const fo::Structure& a = *idx.a;
    Signature sig;
    long long word = 0;
    int bits = 0;
    auto push_bit = [&](bool b) {
        word = (word << 1) | (b ? 1 : 0);
        if (++bits == 62) {
            sig.push_back(word);
            word = 0;
            bits = 0;
        }
    };
    const int dim = static_cast<int>(t.size());
    for (int i = 0; i < dim; ++i)
        for (int j = i + 1; j < dim; ++j) push_bit(t[i] == t[j]);
    for (std::size_t c = 0; c < a.constants.size(); ++c)
        for (int i = 0; i < dim; ++i) push_bit(t[i] == a.constants[c]);
    std::vector<int> args;
    for (std::size_t r = 0; r < a.relations.size(); ++r) {
        const int ar = a.vocab.relations[r].arity;
        std::vector<int> index(static_cast<std::size_t>(ar), 0);
        while (true) {
            args.clear();
            for (int pos : index) args.push_back(t[static_cast<std::size_t>(pos)]);
            push_bit(idx.holds(r, args));
            int d = 0;
            while (d < ar && ++index[static_cast<std::size_t>(d)] == dim)
                index[static_cast<std::size_t>(d++)] = 0;
            if (d == ar) break;
        }
    }
    if (bits) sig.push_back(word);
    return sig;
}

// Atoms of the extended tuple that involve its last position.  The rest are
// functionally determined by the base tuple's colour, which accompanies the
// signature anyway, so dropping them never changes the partition.
Signature extension_signature(const AtomIndex& idx, const std::vector<int>& t) {
    const fo::Structure& a = *idx.a;
    Signature sig;
    long long word = 0;
    int bits = 0;
    auto push_bit = [&](bool b) {
        word = (word << 1) | (b ? 1 : 0);
        if (++bits == 62) {
            sig.push_back(word);
            word = 0;
            bits = 0;
        }
    };
    const int width = static_cast<int>(t.size());
    const int last = width - 1;
    for (int i = 0; i < last; ++i) push_bit(t[static_cast<std::size_t>(i)] == t[static_cast<std::size_t>(last)]);
    for (std::size_t c = 0; c < a.constants.size(); ++c)
        push_bit(t[static_cast<std::size_t>(last)] == a.constants[c]);
    std::vector<int> args;
    for (std::size_t r = 0; r < a.relations.size(); ++r) {
        const int ar = a.vocab.relations[r].arity;
        std::vector<int> index(static_cast<std::size_t>(ar), 0);
        while (true) {
            bool uses_last = false;
            for (int pos : index) uses_last = uses_last || pos == last;
            if (uses_last) {
                args.clear();
                for (int pos : index) args.push_back(t[static_cast<std::size_t>(pos)]);
                push_bit(idx.holds(r, args));
            }
            int d = 0;
            while (d < ar && ++index[static_cast<std::size_t>(d)] == width)
                index[static_cast<std::size_t>(d++)] = 0;
            if (d == ar) break;
        }
    }
    if (bits) sig.push_back(word);
    return sig;
}

// Canonical ids: signatures sorted, ids assigned in sorted order.  Exact keys
// throughout, never hashes, so classes cannot merge silently.
int canonicalize(const std::vector<Signature>& sigs, std::vector<int>& colour) {
    std::map<Signature, int> ids;
    for (const auto& s : sigs) ids[s] = 0;
    int next = 0;
    for (auto& [sig, id] : ids) id = next++;
    for (std::size_t i = 0; i < sigs.size(); ++i) colour[i] = ids.at(sigs[i]);
    return next;
}

}  // namespace

int Partition::rank(const std::vector<int>& tuple) const {
    long long r = 0;
    for (std::size_t i = tuple.size(); i-- > 0;) r = r * universe_size + tuple[i];
    return static_cast<int>(r);
}

std::map<int, long long> Partition::histogram() const {
    std::map<int, long long> h;
    for (int c : colour) ++h[c];
    return h;
}

Partition refine(const fo::Structure& a, int dim, std::uint64_t budget) {
    a.validate();
    if (dim < 1) throw precondition_error("wl: dimension must be at least 1");
    const int n = a.universe_size;
    const std::uint64_t total = tuple_count(n, dim, budget);

    Partition part;
    part.dim = dim;
    part.universe_size = n;
    part.colour.assign(static_cast<std::size_t>(total), 0);
    if (total == 0) return part;

    std::vector<long long> pow(static_cast<std::size_t>(dim), 1);
    for (int i = 1; i < dim; ++i)
        pow[static_cast<std::size_t>(i)] = pow[static_cast<std::size_t>(i - 1)] * n;

    AtomIndex index(a);
    {
        std::vector<Signature> sigs(static_cast<std::size_t>(total));
        std::vector<int> t(static_cast<std::size_t>(dim), 0);
        for (std::uint64_t r = 0; r < total; ++r) {
            sigs[r] = atomic_signature(index, t);
            int d = 0;
            while (d < dim && ++t[static_cast<std::size_t>(d)] == n)
                t[static_cast<std::size_t>(d++)] = 0;
        }
        part.num_colours = canonicalize(sigs, part.colour);
    }

    // Refinement rounds: the multiset over w of the substituted-tuple colours
    // together with the atomic type of the extended tuple (t, w).  The
    // extended type is what lets a width-dim refinement see relation atoms
    // with dim+1 distinct elements; without it, ternary relations would be
    // invisible at dimension 2.  Old colour included, so rounds only split.
    //
    // Entries are deduplicated through a dictionary and ids assigned in
    // sorted order, keeping both memory and ids canonical.
    std::vector<int> extended(static_cast<std::size_t>(dim + 1), 0);
    while (true) {
        std::map<Signature, int> dict;
        std::vector<const std::pair<const Signature, int>*> refs(
            static_cast<std::size_t>(total) * static_cast<std::size_t>(n));
        std::vector<int> t(static_cast<std::size_t>(dim), 0);
        Signature entry;
        for (std::uint64_t r = 0; r < total; ++r) {
            for (int i = 0; i < dim; ++i)
                extended[static_cast<std::size_t>(i)] = t[static_cast<std::size_t>(i)];
            for (int w = 0; w < n; ++w) {
                entry.clear();
                for (int i = 0; i < dim; ++i) {
                    long long r2 =
                        static_cast<long long>(r) +
                        (w - t[static_cast<std::size_t>(i)]) * pow[static_cast<std::size_t>(i)];
                    entry.push_back(part.colour[static_cast<std::size_t>(r2)]);
                }
                extended[static_cast<std::size_t>(dim)] = w;
                Signature atp = extension_signature(index, extended);
                entry.insert(entry.end(), atp.begin(), atp.end());
                auto it = dict.try_emplace(entry, 0).first;
                refs[r * static_cast<std::uint64_t>(n) + static_cast<std::uint64_t>(w)] = &*it;
            }
            int d = 0;
            while (d < dim && ++t[static_cast<std::size_t>(d)] == n)
                t[static_cast<std::size_t>(d++)] = 0;
        }
        int next_id = 0;
        for (auto& [key, id] : dict) id = next_id++;

        std::vector<Signature> sigs(static_cast<std::size_t>(total));
        std::vector<int> sorted_ids(static_cast<std::size_t>(n));
        for (std::uint64_t r = 0; r < total; ++r) {
            for (int w = 0; w < n; ++w)
                sorted_ids[static_cast<std::size_t>(w)] =
                    refs[r * static_cast<std::uint64_t>(n) + static_cast<std::uint64_t>(w)]->second;
            std::sort(sorted_ids.begin(), sorted_ids.end());
            Signature sig;
            sig.reserve(sorted_ids.size() + 1);
            sig.push_back(part.colour[r]);
            sig.insert(sig.end(), sorted_ids.begin(), sorted_ids.end());
            sigs[r] = std::move(sig);
        }
        std::vector<int> next(part.colour.size(), 0);
        int count = canonicalize(sigs, next);
        if (count == part.num_colours) break;
        part.colour = std::move(next);
        part.num_colours = count;
        ++part.rounds;
    }
    return part;
}

EquivalenceReport compare(const fo::Structure& a, const fo::Structure& b, int dim,
                          std::uint64_t budget) {
    if (!(a.vocab == b.vocab)) throw precondition_error("wl::compare: vocabulary mismatch");
    fo::Structure joint = disjoint_union(a, b);
    Partition part = refine(joint, dim, budget);

    EquivalenceReport rep;
    rep.dim = dim;
    rep.rounds = part.rounds;

    const int n = joint.universe_size;
    std::vector<int> t(static_cast<std::size_t>(dim), 0);
    const std::uint64_t total = part.colour.size();
    for (std::uint64_t r = 0; r < total; ++r) {
        bool pure_a = true, pure_b = true;
        for (int e : t) {
            pure_a = pure_a && e < a.universe_size;
            pure_b = pure_b && e >= a.universe_size;
        }
        if (pure_a) ++rep.class_histograms[part.colour[r]].first;
        if (pure_b) ++rep.class_histograms[part.colour[r]].second;
        int d = 0;
        while (d < dim && ++t[static_cast<std::size_t>(d)] == n)
            t[static_cast<std::size_t>(d++)] = 0;
    }
    rep.equivalent = true;
    for (const auto& [c, counts] : rep.class_histograms)
        rep.equivalent = rep.equivalent && counts.first == counts.second;
    return rep;
}

bool equivalent(const fo::Structure& a, const fo::Structure& b, int dim, std::uint64_t budget) {
    return compare(a, b, dim, budget).equivalent;
}

}  // namespace gapforge::wl
