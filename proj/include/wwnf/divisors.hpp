#pragma once

#include "wwnf/sites.hpp"
#include "wwnf/spectrum.hpp"
#include "wwnf/sqrt_rational.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace wwnf {

/// Frequency-parameter box and the derived diophantine constants:
/// b = 1 + a/2, gamma = eps^{2b}, gamma* = gamma^3, tau = 3 nu + 7;
/// Omega_eps = { omega : zeta(omega) in [1,2]^nu }.
struct FrequencyBox {
    TangentialSet S;
    double eps;
    double a;

    FrequencyBox(TangentialSet S_, double eps_, double a_)
        : S(std::move(S_)), eps(eps_), a(a_) {
        if (eps <= 0 || eps >= 1 || a <= 0 || a >= 1)
            throw std::domain_error("FrequencyBox: need eps in (0,1), a in (0,1)");
        // gamma = eps^{2b} < eps^2 and tau = 3nu+7 > nu+1 then hold
    }

    double b() const { return 1 + a / 2; }
    double gamma() const { return std::pow(eps, 2 * b()); }
    double gamma_star() const { return std::pow(gamma(), 3); }
    int tau() const { return 3 * S.nu() + 7; }
};

/// One momentum-constrained divisor delta^(p) = omega_bar . l + sigma sqrt|j|
/// - sigma' sqrt|k|. Exact value alongside the float shadow.
struct DivisorRecord {
    std::vector<std::int64_t> l;
    std::int64_t j = 0, k = 0;
    int sigma = +1, sigma_prime = +1;
    double value = 0;
    SqrtRational exact;
    bool constraint_ok = false; // v.l + j - k = 0
    bool trivial = false;       // sigma = sigma', j = k, l = 0

    std::string str() const;
};

/// evaluate one divisor; momentum violation is flagged, not an error
DivisorRecord delta(const TangentialSet& S, const std::vector<std::int64_t>& l, int sigma,
                    std::int64_t j, int sigma_prime, std::int64_t k);

struct DivisorMin {
    double min_abs = 0;
    DivisorRecord argmin;
    double min_abs_opposite_branch = 0; // sigma = -sigma', |l|=1, j* = max(1) branch
    bool opposite_branch_seen = false;
    long long scanned = 0;
    // records whose value vanishes identically because the combined tuple
    // (sites carried by l, (j, sigma), (k, -sigma')) cancels pairwise - a
    // trivial resonance pattern; excluded from the minimum like the
    // sigma = sigma', j = k, l = 0 case
    long long trivial_pattern_skipped = 0;
    // stability probe: relative change of the min when the range doubles
    double doubled_range_change = 0;
};

/// Exhaustive scan over nontrivial momentum-constrained divisors with
/// |l|_1 <= p and |j|, |k| <= j_max. The momentum law k = v.l + j eliminates
/// one index, so the scan is complete.
DivisorMin divisor_min(const TangentialSet& S, int p, std::int64_t j_max,
                       bool stability_probe = true, int threads = 1);

enum class MelnikovFamily {
    G0_0,   // |omega . l| >= gamma <l>^-tau
    G0_1,   // |(omega_bar - eps^2 m1 v) . l + eps^2 A zeta . l| >= gamma <l>^-tau
    G0_2,   // + sigma sqrt|j| - sigma' sqrt|k| with v.l + j - k = 0
    Lambda0, // |omega.l + eps^2 m1 j| >= 2 gamma <l>^-tau, v.l + j = 0
    P,      // |omega.l + sigma d_{sigma j}| >= 2 gamma <l>^-tau, v.l + j = 0
    Rplus,  // |omega.l + sigma(d_{sigma j} + d_{-sigma k})| >= 2 gamma <l>^-tau
    Rminus  // |omega.l + sigma(d_{sigma j} - d_{sigma k})| >= 2 gamma^3 <l>^-tau
};

std::string to_string(MelnikovFamily f);
std::optional<MelnikovFamily> melnikov_family_from_string(const std::string& s);

struct MelnikovResult {
    bool pass = true;
    DivisorRecord worst;          // smallest margin divisor
    double worst_margin = 0;      // |divisor| - threshold at the worst record
    long long checked = 0;
    bool truncated = false;       // for R-: scan capped at j_max
    std::string coverage_note;
    // constructive check of the necessary condition for nonempty resonant
    // sets: every failing R+/P/Lambda0 record satisfied
    // |l| >= C (sqrt|j| + sqrt|k|) resp. C |j| for the computed C
    bool brexit_ok = true;
    double brexit_constant = 0;
};

/// Membership test of omega in the chosen non-resonant set. The eigenvalue
/// model is the leading d_j from the spectrum module. For the R+/Q/P
/// families the scan over (j,k) per l is complete: a failing divisor forces
/// sqrt|j| + sqrt|k| <= |omega|_inf |l|_1 + 1. For R- with sign j = sign k
/// the scan is exhaustive up to j_max and the tail is covered by the
/// Lambda0/Q test; the truncation is reported.
MelnikovResult melnikov_member(const FrequencyBox& box, const std::vector<double>& omega,
                               MelnikovFamily family, int l_max, std::int64_t j_max);

struct MeasureRow {
    double eps;
    double fraction;
    double ci_lo, ci_hi; // 95% binomial (normal approximation)
    long long excluded;
    long long samples;
};

struct MeasureTable {
    std::vector<MeasureRow> rows;
    double slope = 0;      // log-log fit of fraction vs eps over positive rows
    bool slope_defined = false;
    double predicted_slope = 0; // a, from gamma/eps^2 = eps^a
};

/// Monte-Carlo estimate of the excluded fraction of Omega_eps: samples zeta
/// uniformly on [1,2]^nu with the counter RNG (bit-reproducible for any
/// shard count), maps omega = freq_amp(zeta, eps), tests membership.
/// tau_override/gamma_scale exist for diagnostics only; defaults follow the
/// standard thresholds.
MeasureTable measure_estimate(const TangentialSet& S, double a, MelnikovFamily family,
                              const std::vector<double>& eps_list, long long samples,
                              std::uint64_t seed, int l_max, std::int64_t j_max,
                              int threads = 1, double tau_override = -1,
                              double gamma_scale = 1.0);

} // namespace wwnf
