#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "wwnf/numbers.hpp"
#include "wwnf/sqrt_rational.hpp"

using namespace wwnf;

TEST_CASE("sqrt_of extracts square factors") {
    auto one = SqrtRational::sqrt_of(1);
    CHECK(one.terms().size() == 1);
    CHECK(one.terms().at(1) == 1);

    auto r8 = SqrtRational::sqrt_of(8); // 2 sqrt 2
    CHECK(r8.terms().at(2) == 2);

    auto r12 = SqrtRational::sqrt_of(12); // 2 sqrt 3
    CHECK(r12.terms().at(3) == 2);

    CHECK_THROWS_AS(SqrtRational::sqrt_of(0), std::domain_error);
    CHECK_THROWS_AS(SqrtRational::sqrt_of(-4), std::domain_error);
}

TEST_CASE("exact zero tests") {
    // sqrt1 - sqrt4 + sqrt9 - sqrt4 = 0: the lambda=1, b=1 Benjamin-Feir sum
    auto x = SqrtRational::sqrt_of(1) - SqrtRational::sqrt_of(4) +
             SqrtRational::sqrt_of(9) - SqrtRational::sqrt_of(4);
    CHECK(x.is_zero());

    auto y = SqrtRational::sqrt_of(2) + SqrtRational::sqrt_of(3);
    CHECK(!y.is_zero());

    auto z = SqrtRational::sqrt_of(2).scaled(2) - SqrtRational::sqrt_of(8);
    CHECK(z.is_zero());
}

TEST_CASE("float evaluation agrees with the symbolic value") {
    for (std::int64_t n : {1, 2, 3, 8, 12, 49, 360, 9801}) {
        auto r = SqrtRational::sqrt_of(n);
        double v = r.to_double();
        CHECK(std::abs(v * v - double(n)) <= 1e-12 * double(n));
    }
}

TEST_CASE("vector space laws on random triples") {
    auto rnd = [](std::uint64_t i, std::uint64_t s) {
        SqrtRational r;
        for (int t = 0; t < 4; ++t) {
            std::int64_t n = 1 + std::int64_t(counter_rng_u64(42, s, 4 * i + t) % 10000);
            std::int64_t num = std::int64_t(counter_rng_u64(43, s, 4 * i + t) % 19) - 9;
            std::int64_t den = 1 + std::int64_t(counter_rng_u64(44, s, 4 * i + t) % 9);
            r += SqrtRational::sqrt_of(n, Rational(num, den));
        }
        return r;
    };
    for (int i = 0; i < 200; ++i) {
        auto a = rnd(i, 0), b = rnd(i, 1), c = rnd(i, 2);
        CHECK((a + b) + c == a + (b + c));
        CHECK(a + b == b + a);
        Rational q(3, 7);
        CHECK((a + b).scaled(q) == a.scaled(q) + b.scaled(q));
        CHECK((a - a).is_zero());
    }
}

TEST_CASE("high-precision consistency: no false or missed zeros") {
    // randomized identities built to cancel exactly, plus noise terms
    int checked = 0;
    for (int i = 0; i < 2000; ++i) {
        std::int64_t n = 1 + std::int64_t(counter_rng_u64(7, 0, i) % 10000);
        std::int64_t s = 1 + std::int64_t(counter_rng_u64(7, 1, i) % 9);
        // s^2 * n has sqrt s*sqrt(n): build s*sqrt(n) - sqrt(s^2 n) = 0
        auto zero = SqrtRational::sqrt_of(n, s) - SqrtRational::sqrt_of(s * s * n);
        CHECK(zero.is_zero());
        CHECK(abs(zero.to_highfloat()) < HighFloat("1e-30"));

        auto nonzero = SqrtRational::sqrt_of(n, s) + SqrtRational::sqrt_of(s * s * n);
        CHECK(!nonzero.is_zero());
        CHECK(abs(nonzero.to_highfloat()) > 0);
        ++checked;
    }
    CHECK(checked == 2000);
}
