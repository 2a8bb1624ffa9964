#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace gapforge {

// Arbitrary-precision signed integer, sign-magnitude with 32-bit limbs.
// The integer weights of the reductions overflow any fixed-width type, so
// exact arithmetic has to be home-grown; schoolbook algorithms are plenty at
// the instance sizes the toolkit targets.
class BigInt {
  public:
    BigInt() = default;
    BigInt(std::int64_t v);  // NOLINT: implicit by design, mirrors built-in ints
    static BigInt from_string(const std::string& digits);

    bool is_zero() const { return mag_.empty(); }
    bool is_negative() const { return neg_; }
    int sign() const { return mag_.empty() ? 0 : (neg_ ? -1 : 1); }

    BigInt operator-() const;
    BigInt operator+(const BigInt& o) const;
    BigInt operator-(const BigInt& o) const;
    BigInt operator*(const BigInt& o) const;
    BigInt operator/(const BigInt& o) const;  // truncates toward zero
    BigInt operator%(const BigInt& o) const;  // sign follows dividend
    BigInt& operator+=(const BigInt& o) { return *this = *this + o; }
    BigInt& operator-=(const BigInt& o) { return *this = *this - o; }
    BigInt& operator*=(const BigInt& o) { return *this = *this * o; }

    std::strong_ordering operator<=>(const BigInt& o) const;
    bool operator==(const BigInt& o) const = default;

    std::string to_string() const;
    // Value clamped into int64 range? Throws consistency_error if it does not fit.
    std::int64_t to_int64() const;
    bool fits_int64() const;
    double to_double() const;

    static BigInt gcd(BigInt a, BigInt b);
    static BigInt pow(const BigInt& base, unsigned exp);
    // Largest s with s*s <= v (v >= 0).
    static BigInt isqrt_floor(const BigInt& v);

  private:
    static int cmp_mag(const std::vector<std::uint32_t>& a, const std::vector<std::uint32_t>& b);
    static std::vector<std::uint32_t> add_mag(const std::vector<std::uint32_t>& a,
                                              const std::vector<std::uint32_t>& b);
    // Requires |a| >= |b|.
    static std::vector<std::uint32_t> sub_mag(const std::vector<std::uint32_t>& a,
                                              const std::vector<std::uint32_t>& b);
    static std::vector<std::uint32_t> mul_mag(const std::vector<std::uint32_t>& a,
                                              const std::vector<std::uint32_t>& b);
    static void divmod_mag(const std::vector<std::uint32_t>& a, const std::vector<std::uint32_t>& b,
                           std::vector<std::uint32_t>& q, std::vector<std::uint32_t>& r);
    void trim();

    bool neg_ = false;
    std::vector<std::uint32_t> mag_;  // little-endian limbs, no leading zeros
};

// Exact rational with normalized representation: den > 0, gcd(num, den) = 1.
class Rational {
  public:
    Rational() : num_(0), den_(1) {}
    Rational(std::int64_t v) : num_(v), den_(1) {}  // NOLINT: implicit by design
    Rational(BigInt num, BigInt den);

    const BigInt& num() const { return num_; }
    const BigInt& den() const { return den_; }
    bool is_zero() const { return num_.is_zero(); }

    Rational operator+(const Rational& o) const;
    Rational operator-(const Rational& o) const;
    Rational operator*(const Rational& o) const;
    Rational operator/(const Rational& o) const;
    Rational& operator+=(const Rational& o) { return *this = *this + o; }
    Rational& operator-=(const Rational& o) { return *this = *this - o; }
    Rational& operator*=(const Rational& o) { return *this = *this * o; }

    std::strong_ordering operator<=>(const Rational& o) const;
    bool operator==(const Rational& o) const = default;

    std::string to_string() const;  // "num/den", or "num" when den == 1
    static Rational from_string(const std::string& text);
    double to_double() const;

  private:
    BigInt num_;
    BigInt den_;
};

}  // namespace gapforge
