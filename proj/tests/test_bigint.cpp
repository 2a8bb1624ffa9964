#include <random>

#include "doctest.h"
#include "gapforge/bigint.hpp"

using gapforge::BigInt;
using gapforge::Rational;

TEST_CASE("bigint arithmetic agrees with int64 on random small values") {
    std::mt19937_64 rng(12345);
    for (int iter = 0; iter < 2000; ++iter) {
        long long a = static_cast<long long>(rng() % 2000001) - 1000000;
        long long b = static_cast<long long>(rng() % 2000001) - 1000000;
        BigInt A(a), B(b);
        CHECK((A + B).to_int64() == a + b);
        CHECK((A - B).to_int64() == a - b);
        CHECK((A * B).to_int64() == a * b);
        if (b != 0) {
            CHECK((A / B).to_int64() == a / b);
            CHECK((A % B).to_int64() == a % b);
        }
        CHECK((A < B) == (a < b));
    }
}

TEST_CASE("bigint long division round-trips") {
    std::mt19937_64 rng(99);
    for (int iter = 0; iter < 300; ++iter) {
        BigInt a(1), b(1);
        int la = 1 + static_cast<int>(rng() % 6), lb = 1 + static_cast<int>(rng() % 4);
        for (int i = 0; i < la; ++i) a = a * BigInt(static_cast<long long>(rng() % 1000000 + 1));
        for (int i = 0; i < lb; ++i) b = b * BigInt(static_cast<long long>(rng() % 1000000 + 1));
        BigInt q = a / b, r = a % b;
        CHECK(q * b + r == a);
        CHECK(r >= BigInt(0));
        CHECK(r < b);
    }
}

TEST_CASE("bigint string round-trip and power") {
    BigInt v = BigInt::pow(BigInt(10), 40) + BigInt(7);
    CHECK(v.to_string() == "10000000000000000000000000000000000000007");
    CHECK(BigInt::from_string(v.to_string()) == v);
    CHECK(BigInt::from_string("-123").to_int64() == -123);
}

TEST_CASE("bigint isqrt floor") {
    std::mt19937_64 rng(7);
    for (int iter = 0; iter < 200; ++iter) {
        BigInt v(static_cast<long long>(rng() % 1000000000));
        BigInt s = BigInt::isqrt_floor(v);
        CHECK(s * s <= v);
        CHECK((s + BigInt(1)) * (s + BigInt(1)) > v);
    }
    CHECK(BigInt::isqrt_floor(BigInt(0)) == BigInt(0));
    CHECK(BigInt::isqrt_floor(BigInt(1)) == BigInt(1));
}

TEST_CASE("rational normalization and comparison") {
    Rational a(BigInt(2), BigInt(4));
    CHECK(a == Rational(BigInt(1), BigInt(2)));
    CHECK(a.to_string() == "1/2");
    CHECK(Rational(BigInt(-2), BigInt(-4)) == a);
    CHECK(Rational(BigInt(1), BigInt(-2)) < Rational(0));
    CHECK(Rational(1) / Rational(3) + Rational(2) / Rational(3) == Rational(1));
    CHECK(Rational::from_string("6/8") == Rational(BigInt(3), BigInt(4)));
}
