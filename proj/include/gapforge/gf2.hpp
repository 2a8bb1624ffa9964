#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <vector>

namespace gapforge::gf2 {

// Bit vector in F_2^n.  Addition is coordinatewise XOR.
class Vector {
  public:
    Vector() = default;
    explicit Vector(std::size_t n) : n_(n), words_((n + 63) / 64, 0) {}
    static Vector unit(std::size_t n, std::size_t i);

    std::size_t size() const { return n_; }
    bool get(std::size_t i) const { return (words_[i / 64] >> (i % 64)) & 1; }
    void set(std::size_t i, bool v);
    bool is_zero() const;
    // Smallest set coordinate, or -1 when zero.
    int lowest_set() const;

    Vector& operator^=(const Vector& o);
    Vector operator^(const Vector& o) const;

    bool operator==(const Vector& o) const = default;
    std::strong_ordering operator<=>(const Vector& o) const;

  private:
    std::size_t n_ = 0;
    std::vector<std::uint64_t> words_;
};

// Subspace of F_2^n held as a reduced row-echelon basis: rows ordered by
// pivot, each pivot column cleared everywhere else.  Equal subspaces have
// identical basis lists, so equality is structural.
class Subspace {
  public:
    Subspace() = default;
    explicit Subspace(std::size_t ambient) : ambient_(ambient) {}
    static Subspace span(const std::vector<Vector>& vectors, std::size_t n);

    std::size_t ambient_dim() const { return ambient_; }
    std::size_t dim() const { return basis_.size(); }
    const std::vector<Vector>& basis() const { return basis_; }

    bool contains(const Vector& v) const;
    // Reduces v by the basis; sets coeffs to the basis rows used.  Returns the
    // residue (zero iff v is in the subspace).
    Vector reduce(const Vector& v, std::uint32_t* coeffs = nullptr) const;

    // Inserts a vector, keeping reduced echelon form.  Returns false if the
    // vector was already in the span.
    bool insert(const Vector& v);

    bool operator==(const Subspace& o) const = default;
    std::strong_ordering operator<=>(const Subspace& o) const;

  private:
    std::size_t ambient_ = 0;
    std::vector<Vector> basis_;
};

Subspace subspace_sum(const Subspace& a, const Subspace& b);

// dim(A) + dim(B) == dim(A + B), i.e. A and B meet only in the origin.
bool trivially_intersects(const Subspace& a, const Subspace& b);

// Streams every l-dimensional subspace of F_2^n exactly once, in a canonical
// order (pivot sets ascending, then free entries in binary order).  The count
// is the Gaussian binomial coefficient.  Guarded at n <= 16.
void enumerate_subspaces(std::size_t n, std::size_t l,
                         const std::function<void(const Subspace&)>& fn);
std::vector<Subspace> all_subspaces(std::size_t n, std::size_t l);

// Linear map domain -> F_2, stored as one bit per canonical basis row.
class Functional {
  public:
    Functional() = default;
    Functional(Subspace domain, std::vector<std::uint8_t> values);

    const Subspace& domain() const { return domain_; }
    const std::vector<std::uint8_t>& values() const { return values_; }
    // Requires v in the domain.
    bool evaluate(const Vector& v) const;

    bool operator==(const Functional& o) const = default;
    std::strong_ordering operator<=>(const Functional& o) const;

  private:
    Subspace domain_;
    std::vector<std::uint8_t> values_;
};

struct Pin {
    Vector vector;
    bool bit;
};

// All linear extensions of f to `target` agreeing with every pin.  Requires
// domain(f) and all pinned vectors inside target.  Contradictory pins are not
// an error: the result is simply empty.
std::vector<Functional> extend_functional(const Functional& f, const Subspace& target,
                                          const std::vector<Pin>& pins);

}  // namespace gapforge::gf2
