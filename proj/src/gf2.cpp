#include "gapforge/gf2.hpp"

#include <algorithm>
#include <bit>

#include "gapforge/errors.hpp"

namespace gapforge::gf2 {

Vector Vector::unit(std::size_t n, std::size_t i) {
    Vector v(n);
    v.set(i, true);
    return v;
}

void Vector::set(std::size_t i, bool v) {
    if (v)
        words_[i / 64] |= 1ull << (i % 64);
    else
        words_[i / 64] &= ~(1ull << (i % 64));
}

bool Vector::is_zero() const {
    for (auto w : words_)
        if (w) return false;
    return true;
}

int Vector::lowest_set() const {
    for (std::size_t k = 0; k < words_.size(); ++k)
        if (words_[k]) return static_cast<int>(k * 64 + std::countr_zero(words_[k]));
    return -1;
}

Vector& Vector::operator^=(const Vector& o) {
    if (n_ != o.n_) throw dimension_error("gf2::Vector: xor with mismatched length");
    for (std::size_t k = 0; k < words_.size(); ++k) words_[k] ^= o.words_[k];
    return *this;
}

Vector Vector::operator^(const Vector& o) const {
    Vector out = *this;
    out ^= o;
    return out;
}

std::strong_ordering Vector::operator<=>(const Vector& o) const {
    if (n_ != o.n_) return n_ <=> o.n_;
    for (std::size_t k = words_.size(); k-- > 0;)
        if (words_[k] != o.words_[k]) return words_[k] <=> o.words_[k];
    return std::strong_ordering::equal;
}

Vector Subspace::reduce(const Vector& v, std::uint32_t* coeffs) const {
    if (v.size() != ambient_) throw dimension_error("gf2::Subspace: vector/ambient mismatch");
    Vector cur = v;
    if (coeffs) *coeffs = 0;
    for (std::size_t r = 0; r < basis_.size(); ++r) {
        int p = basis_[r].lowest_set();
        if (p >= 0 && cur.get(static_cast<std::size_t>(p))) {
            cur ^= basis_[r];
            if (coeffs) *coeffs |= 1u << r;
        }
    }
    return cur;
}

bool Subspace::contains(const Vector& v) const { return reduce(v).is_zero(); }

bool Subspace::insert(const Vector& v) {
    Vector residue = reduce(v);
    int p = residue.lowest_set();
    if (p < 0) return false;
    // Clear the new pivot from existing rows, then place the row by pivot.
    for (auto& row : basis_)
        if (row.get(static_cast<std::size_t>(p))) row ^= residue;
    auto pos = std::find_if(basis_.begin(), basis_.end(), [&](const Vector& row) {
        return row.lowest_set() > p;
    });
    basis_.insert(pos, residue);
    return true;
}

Subspace Subspace::span(const std::vector<Vector>& vectors, std::size_t n) {
    Subspace s(n);
    for (const auto& v : vectors) {
        if (v.size() != n) throw dimension_error("gf2::span: vector length != ambient dimension");
        s.insert(v);
    }
    return s;
}

std::strong_ordering Subspace::operator<=>(const Subspace& o) const {
    if (ambient_ != o.ambient_) return ambient_ <=> o.ambient_;
    if (basis_.size() != o.basis_.size()) return basis_.size() <=> o.basis_.size();
    for (std::size_t i = 0; i < basis_.size(); ++i)
        if (auto c = basis_[i] <=> o.basis_[i]; c != 0) return c;
    return std::strong_ordering::equal;
}

Subspace subspace_sum(const Subspace& a, const Subspace& b) {
    if (a.ambient_dim() != b.ambient_dim())
        throw dimension_error("gf2::subspace_sum: ambient dimensions differ");
    Subspace s = a;
    for (const auto& v : b.basis()) s.insert(v);
    return s;
}

bool trivially_intersects(const Subspace& a, const Subspace& b) {
    return a.dim() + b.dim() == subspace_sum(a, b).dim();
}

namespace {

void enumerate_with_pivots(std::size_t n, const std::vector<std::size_t>& pivots,
                           const std::function<void(const Subspace&)>& fn) {
    std::size_t l = pivots.size();
    // Free slots: positions (row, col) with col > pivot(row) and col not a pivot.
    std::vector<std::pair<std::size_t, std::size_t>> free_slots;
    std::vector<bool> is_pivot(n, false);
    for (auto p : pivots) is_pivot[p] = true;
    for (std::size_t r = 0; r < l; ++r)
        for (std::size_t c = pivots[r] + 1; c < n; ++c)
            if (!is_pivot[c]) free_slots.emplace_back(r, c);

    std::uint64_t count = 1ull << free_slots.size();
    for (std::uint64_t bits = 0; bits < count; ++bits) {
        std::vector<Vector> rows;
        rows.reserve(l);
        for (std::size_t r = 0; r < l; ++r) rows.push_back(Vector::unit(n, pivots[r]));
        for (std::size_t i = 0; i < free_slots.size(); ++i)
            if ((bits >> i) & 1) rows[free_slots[i].first].set(free_slots[i].second, true);
        Subspace s(n);
        for (const auto& row : rows) s.insert(row);
        fn(s);
    }
}

void pivot_sets(std::size_t n, std::size_t l, std::vector<std::size_t>& cur, std::size_t start,
                const std::function<void(const Subspace&)>& fn) {
    if (cur.size() == l) {
        enumerate_with_pivots(n, cur, fn);
        return;
    }
    for (std::size_t c = start; c + (l - cur.size()) <= n; ++c) {
        cur.push_back(c);
        pivot_sets(n, l, cur, c + 1, fn);
        cur.pop_back();
    }
}

}  // namespace

void enumerate_subspaces(std::size_t n, std::size_t l,
                         const std::function<void(const Subspace&)>& fn) {
    if (n > 16) throw capacity_error("enumerate_subspaces: ambient dimension over the guard (16)");
    if (l > n) throw dimension_error("enumerate_subspaces: l exceeds n");
    if (l == 0) {
        fn(Subspace(n));
        return;
    }
    std::vector<std::size_t> cur;
    pivot_sets(n, l, cur, 0, fn);
}

std::vector<Subspace> all_subspaces(std::size_t n, std::size_t l) {
    std::vector<Subspace> out;
    enumerate_subspaces(n, l, [&](const Subspace& s) { out.push_back(s); });
    return out;
}

Functional::Functional(Subspace domain, std::vector<std::uint8_t> values)
    : domain_(std::move(domain)), values_(std::move(values)) {
    if (values_.size() != domain_.dim())
        throw dimension_error("gf2::Functional: one value per basis row required");
}

bool Functional::evaluate(const Vector& v) const {
    std::uint32_t coeffs = 0;
    Vector residue = domain_.reduce(v, &coeffs);
    if (!residue.is_zero())
        throw dimension_error("gf2::Functional: vector outside the domain");
    bool out = false;
    for (std::size_t r = 0; r < values_.size(); ++r)
        if ((coeffs >> r) & 1) out ^= values_[r] != 0;
    return out;
}

std::strong_ordering Functional::operator<=>(const Functional& o) const {
    if (auto c = domain_ <=> o.domain_; c != 0) return c;
    for (std::size_t i = 0; i < values_.size(); ++i)
        if (values_[i] != o.values_[i]) return values_[i] <=> o.values_[i];
    return std::strong_ordering::equal;
}

std::vector<Functional> extend_functional(const Functional& f, const Subspace& target,
                                          const std::vector<Pin>& pins) {
    std::size_t m = target.dim();
    if (m > 31) throw capacity_error("extend_functional: target dimension over 31");

    // Unknowns: the functional's values on target's echelon basis.  Each
    // condition (vector v, bit b) becomes the XOR equation <coeffs, y> = b.
    std::vector<std::pair<std::uint32_t, std::uint8_t>> rows;
    auto add_condition = [&](const Vector& v, bool bit, const char* who) {
        std::uint32_t coeffs = 0;
        if (!target.reduce(v, &coeffs).is_zero())
            throw precondition_error(std::string("extend_functional: ") + who +
                                     " vector outside the target space");
        rows.emplace_back(coeffs, bit ? 1 : 0);
    };
    for (std::size_t r = 0; r < f.domain().dim(); ++r)
        add_condition(f.domain().basis()[r], f.values()[r] != 0, "domain");
    for (const auto& pin : pins) add_condition(pin.vector, pin.bit, "pinned");

    // Forward elimination: pivot = lowest set bit, so one ascending pass
    // reduces a row completely.
    struct Row {
        std::uint32_t coeffs = 0;
        std::uint8_t rhs = 0;
        bool used = false;
    };
    std::vector<Row> pivot_map(m);
    for (auto [coeffs, rhs] : rows) {
        for (std::size_t c = 0; c < m && coeffs; ++c) {
            if (!((coeffs >> c) & 1) || !pivot_map[c].used) continue;
            coeffs ^= pivot_map[c].coeffs;
            rhs ^= pivot_map[c].rhs;
        }
        if (coeffs == 0) {
            if (rhs) return {};  // contradictory pins: empty, not an error
            continue;
        }
        std::size_t c = static_cast<std::size_t>(std::countr_zero(coeffs));
        pivot_map[c] = Row{coeffs, rhs, true};
    }

    std::vector<std::size_t> free_cols;
    for (std::size_t c = 0; c < m; ++c)
        if (!pivot_map[c].used) free_cols.push_back(c);

    std::vector<Functional> out;
    out.reserve(std::size_t{1} << free_cols.size());
    for (std::uint64_t bits = 0; bits < (1ull << free_cols.size()); ++bits) {
        std::vector<std::uint8_t> y(m, 0);
        for (std::size_t i = 0; i < free_cols.size(); ++i) y[free_cols[i]] = (bits >> i) & 1;
        // Back-substitute pivots from the highest column down; a pivot row only
        // involves columns at or above its pivot.
        for (std::size_t c = m; c-- > 0;) {
            if (!pivot_map[c].used) continue;
            std::uint8_t v = pivot_map[c].rhs;
            for (std::size_t j = c + 1; j < m; ++j)
                if ((pivot_map[c].coeffs >> j) & 1) v ^= y[j];
            y[c] = v;
        }
        out.emplace_back(target, std::move(y));
    }
    return out;
}

}  // namespace gapforge::gf2
