#include "gapforge/bigint.hpp"

#include <algorithm>
#include <cmath>

#include "gapforge/errors.hpp"

namespace gapforge {

namespace {
constexpr std::uint64_t kBase = 1ull << 32;
}

BigInt::BigInt(std::int64_t v) {
    neg_ = v < 0;
    std::uint64_t u = neg_ ? (~static_cast<std::uint64_t>(v) + 1) : static_cast<std::uint64_t>(v);
    while (u) {
        mag_.push_back(static_cast<std::uint32_t>(u & 0xffffffffu));
        u >>= 32;
    }
}

BigInt BigInt::from_string(const std::string& digits) {
    BigInt out;
    std::size_t i = 0;
    bool neg = false;
    if (i < digits.size() && (digits[i] == '-' || digits[i] == '+')) {
        neg = digits[i] == '-';
        ++i;
    }
    if (i >= digits.size()) throw parse_error("BigInt: empty digit string");
    for (; i < digits.size(); ++i) {
        char c = digits[i];
        if (c < '0' || c > '9') throw parse_error("BigInt: bad digit in '" + digits + "'");
        out = out * BigInt(10) + BigInt(c - '0');
    }
    out.neg_ = neg && !out.mag_.empty();
    return out;
}

void BigInt::trim() {
    while (!mag_.empty() && mag_.back() == 0) mag_.pop_back();
    if (mag_.empty()) neg_ = false;
}

int BigInt::cmp_mag(const std::vector<std::uint32_t>& a, const std::vector<std::uint32_t>& b) {
    if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
    for (std::size_t i = a.size(); i-- > 0;)
        if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
    return 0;
}

std::vector<std::uint32_t> BigInt::add_mag(const std::vector<std::uint32_t>& a,
                                           const std::vector<std::uint32_t>& b) {
    std::vector<std::uint32_t> out(std::max(a.size(), b.size()) + 1, 0);
    std::uint64_t carry = 0;
    for (std::size_t i = 0; i < out.size(); ++i) {
        std::uint64_t s = carry;
        if (i < a.size()) s += a[i];
        if (i < b.size()) s += b[i];
        out[i] = static_cast<std::uint32_t>(s & 0xffffffffu);
        carry = s >> 32;
    }
    while (!out.empty() && out.back() == 0) out.pop_back();
    return out;
}

std::vector<std::uint32_t> BigInt::sub_mag(const std::vector<std::uint32_t>& a,
                                           const std::vector<std::uint32_t>& b) {
    std::vector<std::uint32_t> out(a.size(), 0);
    std::int64_t borrow = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        std::int64_t s = static_cast<std::int64_t>(a[i]) - borrow - (i < b.size() ? b[i] : 0);
        if (s < 0) {
            s += static_cast<std::int64_t>(kBase);
            borrow = 1;
        } else {
            borrow = 0;
        }
        out[i] = static_cast<std::uint32_t>(s);
    }
    while (!out.empty() && out.back() == 0) out.pop_back();
    return out;
}

std::vector<std::uint32_t> BigInt::mul_mag(const std::vector<std::uint32_t>& a,
                                           const std::vector<std::uint32_t>& b) {
    if (a.empty() || b.empty()) return {};
    std::vector<std::uint32_t> out(a.size() + b.size(), 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        std::uint64_t carry = 0;
        for (std::size_t j = 0; j < b.size(); ++j) {
            std::uint64_t cur = out[i + j] + static_cast<std::uint64_t>(a[i]) * b[j] + carry;
            out[i + j] = static_cast<std::uint32_t>(cur & 0xffffffffu);
            carry = cur >> 32;
        }
        std::size_t k = i + b.size();
        while (carry) {
            std::uint64_t cur = out[k] + carry;
            out[k] = static_cast<std::uint32_t>(cur & 0xffffffffu);
            carry = cur >> 32;
            ++k;
        }
    }
    while (!out.empty() && out.back() == 0) out.pop_back();
    return out;
}

// Knuth algorithm D, simplified: long division limb by limb with a normalized
// divisor.  r ends with the remainder, q with the quotient.
void BigInt::divmod_mag(const std::vector<std::uint32_t>& a, const std::vector<std::uint32_t>& b,
                        std::vector<std::uint32_t>& q, std::vector<std::uint32_t>& r) {
    if (b.empty()) throw dimension_error("BigInt: division by zero");
    q.clear();
    r.clear();
    if (cmp_mag(a, b) < 0) {
        r = a;
        return;
    }
    if (b.size() == 1) {
        std::uint64_t d = b[0], rem = 0;
        q.assign(a.size(), 0);
        for (std::size_t i = a.size(); i-- > 0;) {
            std::uint64_t cur = (rem << 32) | a[i];
            q[i] = static_cast<std::uint32_t>(cur / d);
            rem = cur % d;
        }
        while (!q.empty() && q.back() == 0) q.pop_back();
        if (rem) r.push_back(static_cast<std::uint32_t>(rem));
        return;
    }

    // Normalize so the top divisor limb has its high bit set.
    int shift = 0;
    for (std::uint32_t top = b.back(); !(top & 0x80000000u); top <<= 1) ++shift;
    auto shl = [&](const std::vector<std::uint32_t>& v) {
        std::vector<std::uint32_t> out(v.size() + 1, 0);
        for (std::size_t i = 0; i < v.size(); ++i) {
            out[i] |= shift ? (v[i] << shift) : v[i];
            if (shift) out[i + 1] = v[i] >> (32 - shift);
        }
        while (!out.empty() && out.back() == 0) out.pop_back();
        return out;
    };
    std::vector<std::uint32_t> u = shl(a), v = shl(b);
    std::size_t n = v.size(), m = u.size() - n;
    u.resize(u.size() + 1, 0);
    q.assign(m + 1, 0);

    for (std::size_t j = m + 1; j-- > 0;) {
        std::uint64_t num = (static_cast<std::uint64_t>(u[j + n]) << 32) | u[j + n - 1];
        std::uint64_t qhat = num / v[n - 1];
        std::uint64_t rhat = num % v[n - 1];
        while (qhat >= kBase ||
               qhat * v[n - 2] > ((rhat << 32) | u[j + n - 2])) {
            --qhat;
            rhat += v[n - 1];
            if (rhat >= kBase) break;
        }
        // Multiply-subtract qhat * v from u[j..j+n].
        std::int64_t borrow = 0;
        std::uint64_t carry = 0;
        for (std::size_t i = 0; i < n; ++i) {
            std::uint64_t p = qhat * v[i] + carry;
            carry = p >> 32;
            std::int64_t t = static_cast<std::int64_t>(u[i + j]) -
                             static_cast<std::int64_t>(p & 0xffffffffu) - borrow;
            if (t < 0) {
                t += static_cast<std::int64_t>(kBase);
                borrow = 1;
            } else {
                borrow = 0;
            }
            u[i + j] = static_cast<std::uint32_t>(t);
        }
        std::int64_t t = static_cast<std::int64_t>(u[j + n]) - static_cast<std::int64_t>(carry) - borrow;
        if (t < 0) {
            // qhat was one too large: add v back.
            t += static_cast<std::int64_t>(kBase);
            --qhat;
            std::uint64_t c2 = 0;
            for (std::size_t i = 0; i < n; ++i) {
                std::uint64_t s = static_cast<std::uint64_t>(u[i + j]) + v[i] + c2;
                u[i + j] = static_cast<std::uint32_t>(s & 0xffffffffu);
                c2 = s >> 32;
            }
            t += static_cast<std::int64_t>(c2);
            t &= 0xffffffff;
        }
        u[j + n] = static_cast<std::uint32_t>(t);
        q[j] = static_cast<std::uint32_t>(qhat);
    }
    while (!q.empty() && q.back() == 0) q.pop_back();
    u.resize(n);
    // Undo normalization of the remainder.
    if (shift) {
        for (std::size_t i = 0; i < u.size(); ++i) {
            u[i] >>= shift;
            if (i + 1 < u.size()) u[i] |= u[i + 1] << (32 - shift);
        }
    }
    while (!u.empty() && u.back() == 0) u.pop_back();
    r = u;
}

BigInt BigInt::operator-() const {
    BigInt out = *this;
    if (!out.mag_.empty()) out.neg_ = !out.neg_;
    return out;
}

BigInt BigInt::operator+(const BigInt& o) const {
    BigInt out;
    if (neg_ == o.neg_) {
        out.mag_ = add_mag(mag_, o.mag_);
        out.neg_ = neg_;
    } else if (cmp_mag(mag_, o.mag_) >= 0) {
        out.mag_ = sub_mag(mag_, o.mag_);
        out.neg_ = neg_;
    } else {
        out.mag_ = sub_mag(o.mag_, mag_);
        out.neg_ = o.neg_;
    }
    out.trim();
    return out;
}

BigInt BigInt::operator-(const BigInt& o) const { return *this + (-o); }

BigInt BigInt::operator*(const BigInt& o) const {
    BigInt out;
    out.mag_ = mul_mag(mag_, o.mag_);
    out.neg_ = !out.mag_.empty() && (neg_ != o.neg_);
    return out;
}

BigInt BigInt::operator/(const BigInt& o) const {
    BigInt out;
    std::vector<std::uint32_t> r;
    divmod_mag(mag_, o.mag_, out.mag_, r);
    out.neg_ = !out.mag_.empty() && (neg_ != o.neg_);
    return out;
}

BigInt BigInt::operator%(const BigInt& o) const {
    BigInt out;
    std::vector<std::uint32_t> q;
    divmod_mag(mag_, o.mag_, q, out.mag_);
    out.neg_ = !out.mag_.empty() && neg_;
    return out;
}

std::strong_ordering BigInt::operator<=>(const BigInt& o) const {
    if (sign() != o.sign()) return sign() <=> o.sign();
    int c = cmp_mag(mag_, o.mag_);
    if (neg_) c = -c;
    return c <=> 0;
}

std::string BigInt::to_string() const {
    if (mag_.empty()) return "0";
    std::vector<std::uint32_t> cur = mag_;
    std::string digits;
    while (!cur.empty()) {
        std::uint64_t rem = 0;
        for (std::size_t i = cur.size(); i-- > 0;) {
            std::uint64_t x = (rem << 32) | cur[i];
            cur[i] = static_cast<std::uint32_t>(x / 1000000000ull);
            rem = x % 1000000000ull;
        }
        while (!cur.empty() && cur.back() == 0) cur.pop_back();
        for (int i = 0; i < 9; ++i) {
            digits.push_back(static_cast<char>('0' + rem % 10));
            rem /= 10;
        }
    }
    while (digits.size() > 1 && digits.back() == '0') digits.pop_back();
    if (neg_) digits.push_back('-');
    std::reverse(digits.begin(), digits.end());
    return digits;
}

bool BigInt::fits_int64() const {
    if (mag_.size() > 2) return false;
    std::uint64_t v = 0;
    if (mag_.size() >= 1) v |= mag_[0];
    if (mag_.size() == 2) v |= static_cast<std::uint64_t>(mag_[1]) << 32;
    return neg_ ? v <= (1ull << 63) : v < (1ull << 63);
}

std::int64_t BigInt::to_int64() const {
    if (!fits_int64()) throw consistency_error("BigInt: value does not fit in int64");
    std::uint64_t v = 0;
    if (mag_.size() >= 1) v |= mag_[0];
    if (mag_.size() == 2) v |= static_cast<std::uint64_t>(mag_[1]) << 32;
    return neg_ ? -static_cast<std::int64_t>(v) : static_cast<std::int64_t>(v);
}

double BigInt::to_double() const {
    double out = 0;
    for (std::size_t i = mag_.size(); i-- > 0;) out = out * 4294967296.0 + mag_[i];
    return neg_ ? -out : out;
}

BigInt BigInt::gcd(BigInt a, BigInt b) {
    a.neg_ = false;
    b.neg_ = false;
    while (!b.is_zero()) {
        BigInt r = a % b;
        a = b;
        b = r;
    }
    return a;
}

BigInt BigInt::pow(const BigInt& base, unsigned exp) {
    BigInt out(1), b = base;
    while (exp) {
        if (exp & 1) out *= b;
        b *= b;
        exp >>= 1;
    }
    return out;
}

BigInt BigInt::isqrt_floor(const BigInt& v) {
    if (v.is_negative()) throw dimension_error("isqrt of negative value");
    if (v.is_zero()) return 0;
    // Newton iteration from an over-estimate; monotone decreasing to floor.
    BigInt x = v, prev(0);
    std::size_t bits = v.mag_.size() * 32;
    BigInt est = BigInt::pow(2, static_cast<unsigned>(bits / 2 + 1));
    x = est;
    while (true) {
        BigInt next = (x + v / x) / 2;
        if (next >= x) break;
        x = next;
    }
    return x;
}

Rational::Rational(BigInt num, BigInt den) : num_(std::move(num)), den_(std::move(den)) {
    if (den_.is_zero()) throw dimension_error("Rational: zero denominator");
    if (den_.is_negative()) {
        num_ = -num_;
        den_ = -den_;
    }
    BigInt g = BigInt::gcd(num_, den_);
    if (!g.is_zero() && g != BigInt(1)) {
        num_ = num_ / g;
        den_ = den_ / g;
    }
    if (num_.is_zero()) den_ = 1;
}

Rational Rational::operator+(const Rational& o) const {
    return Rational(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
}
Rational Rational::operator-(const Rational& o) const {
    return Rational(num_ * o.den_ - o.num_ * den_, den_ * o.den_);
}
Rational Rational::operator*(const Rational& o) const {
    return Rational(num_ * o.num_, den_ * o.den_);
}
Rational Rational::operator/(const Rational& o) const {
    if (o.num_.is_zero()) throw dimension_error("Rational: division by zero");
    return Rational(num_ * o.den_, den_ * o.num_);
}

std::strong_ordering Rational::operator<=>(const Rational& o) const {
    return (num_ * o.den_) <=> (o.num_ * den_);
}

std::string Rational::to_string() const {
    if (den_ == BigInt(1)) return num_.to_string();
    return num_.to_string() + "/" + den_.to_string();
}

Rational Rational::from_string(const std::string& text) {
    auto slash = text.find('/');
    if (slash == std::string::npos) return Rational(BigInt::from_string(text), 1);
    return Rational(BigInt::from_string(text.substr(0, slash)),
                    BigInt::from_string(text.substr(slash + 1)));
}

double Rational::to_double() const { return num_.to_double() / den_.to_double(); }

}  // namespace gapforge
