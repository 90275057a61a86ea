#pragma once

#include "wwnf/numbers.hpp"

#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>

namespace wwnf {

/// Exact element of the Q-vector space spanned by { sqrt(m) : m squarefree }.
///
/// Radicand 1 carries the rational part. Since square roots of distinct
/// squarefree integers are linearly independent over Q, a value is zero
/// iff its term map is empty, which makes is_zero() an exact test for
/// resonance sums  sum_i sigma_i sqrt(|j_i|).
class SqrtRational {
public:
    SqrtRational() = default;

    /// q * sqrt(n) with n reduced to squarefree form (n = m * s^2 -> q*s*sqrt(m)).
    static SqrtRational sqrt_of(std::int64_t n, const Rational& q = 1) {
        if (n <= 0) throw std::domain_error("SqrtRational::sqrt_of: n must be >= 1");
        std::int64_t m = n, s = 1;
        for (std::int64_t d = 2; d * d <= m; ++d) {
            while (m % (d * d) == 0) {
                m /= d * d;
                s *= d;
            }
        }
        SqrtRational r;
        if (q != 0) r.terms_[m] = q * s;
        return r;
    }

    static SqrtRational rational(const Rational& q) {
        SqrtRational r;
        if (q != 0) r.terms_[1] = q;
        return r;
    }

    bool is_zero() const { return terms_.empty(); }

    SqrtRational& operator+=(const SqrtRational& o) {
        for (const auto& [rad, c] : o.terms_) {
            auto it = terms_.find(rad);
            if (it == terms_.end()) {
                terms_.emplace(rad, c);
            } else {
                it->second += c;
                if (it->second == 0) terms_.erase(it);
            }
        }
        return *this;
    }

    friend SqrtRational operator+(SqrtRational a, const SqrtRational& b) {
        a += b;
        return a;
    }

    friend SqrtRational operator-(SqrtRational a, const SqrtRational& b) {
        a += b.scaled(-1);
        return a;
    }

    SqrtRational scaled(const Rational& q) const {
        SqrtRational r;
        if (q == 0) return r;
        for (const auto& [rad, c] : terms_) r.terms_[rad] = c * q;
        return r;
    }

    bool operator==(const SqrtRational& o) const { return terms_ == o.terms_; }

    double to_double() const {
        double v = 0;
        for (const auto& [rad, c] : terms_)
            v += static_cast<double>(c) * std::sqrt(static_cast<double>(rad));
        return v;
    }

    HighFloat to_highfloat() const {
        HighFloat v = 0;
        for (const auto& [rad, c] : terms_)
            v += HighFloat(Rational(c)) * sqrt(HighFloat(rad));
        return v;
    }

    const std::map<std::int64_t, Rational>& terms() const { return terms_; }

    std::string str() const {
        if (terms_.empty()) return "0";
        std::string s;
        for (const auto& [rad, c] : terms_) {
            if (!s.empty()) s += " + ";
            s += c.str();
            if (rad != 1) s += "*sqrt(" + std::to_string(rad) + ")";
        }
        return s;
    }

private:
    // invariant: radicands squarefree and >= 1, no zero coefficients
    std::map<std::int64_t, Rational> terms_;
};

/// sum_i sigma_i sqrt(|j_i|) for a list of (j, sigma) pairs.
template <class Pairs>
SqrtRational resonance_sum(const Pairs& pairs) {
    SqrtRational r;
    for (const auto& [j, sigma] : pairs) {
        if (j == 0) throw std::domain_error("resonance_sum: zero wavenumber");
        r += SqrtRational::sqrt_of(std::llabs(j), sigma > 0 ? 1 : -1);
    }
    return r;
}

} // namespace wwnf
