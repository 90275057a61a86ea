#pragma once

#include "wwnf/sites.hpp"
#include "wwnf/sqrt_rational.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace wwnf {

/// Candidate n-wave resonance: pairs (j_i, sigma_i) with the derived exact
/// momentum sum M = sum sigma_i j_i and frequency sum R = sum sigma_i sqrt|j_i|.
struct ResonanceTuple {
    std::vector<std::pair<std::int64_t, int>> pairs; // (j, sigma in {+1,-1})

    std::int64_t momentum() const {
        std::int64_t m = 0;
        for (auto& [j, s] : pairs) m += s * j;
        return m;
    }
    SqrtRational frequency_sum() const { return resonance_sum(pairs); }

    int order() const { return static_cast<int>(pairs.size()); }

    /// canonical form: pairs sorted by (j, sigma); used for dedup and baselines
    void canonicalize();
    std::string str() const;

    friend bool operator==(const ResonanceTuple& a, const ResonanceTuple& b) {
        return a.pairs == b.pairs;
    }
    friend bool operator<(const ResonanceTuple& a, const ResonanceTuple& b) {
        return a.pairs < b.pairs;
    }
};

enum class ResonanceClass { NotResonant, Trivial, NonTrivial };

std::string to_string(ResonanceClass c);

/// Resonant iff momentum = 0 and the frequency sum vanishes exactly.
/// Trivial iff the order is even, half the signs are +, and the +-indexed
/// multiset of wavenumbers equals the --indexed one.
ResonanceClass classify(const ResonanceTuple& t);

/// Two-parameter Benjamin-Feir family
///   (-lambda b^2, lambda (b+1)^2, lambda (b^2+b+1)^2, lambda (b+1)^2 b^2)
/// with signs (+,-,+,-); every member is a non-trivial 4-wave resonance.
std::vector<ResonanceTuple> benjamin_feir(std::int64_t lambda_min, std::int64_t lambda_max,
                                          std::int64_t b_min, std::int64_t b_max);

/// All non-trivial resonances of the given order with at most one index
/// outside S. Momentum fixes the last index, so the search over the ball
/// |j| <= (order-1) max|S| is exhaustive and exact.
std::vector<ResonanceTuple> enumerate_low_outside(int order, const TangentialSet& S);

struct GenericityReport {
    bool generic = false;
    std::optional<ResonanceTuple> certificate; // first offending tuple
    std::int64_t bis_violation = 0;            // j with both j and -j in S
    double min_nonresonant_abs = 0;            // min |R| over non-resonant tuples scanned
};

/// Operational genericity: the bis condition k != -j holds and
/// enumerate_low_outside is empty for 3 <= n <= n_max.
GenericityReport is_generic(const TangentialSet& S, int n_max = 8);

} // namespace wwnf
