#pragma once

#include "wwnf/polynomial.hpp"
#include "wwnf/resonance.hpp"
#include "wwnf/sites.hpp"
#include "wwnf/zakharov.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>

namespace wwnf {

/// Exact kernel test for the adjoint action of H^(2):
/// a monomial is resonant iff sum sigma_i sqrt|j_i| = 0 exactly.
inline bool in_kernel_h2(const Monomial& m) {
    SqrtRational r;
    for (const Mode& md : m)
        r += SqrtRational::sqrt_of(std::abs(md.j), md.sigma > 0 ? 1 : -1);
    return r.is_zero();
}

/// trivial resonance pattern: even degree pairing off as {(j,+),(j,-)} multisets
inline bool is_trivial_monomial(const Monomial& m) {
    if (m.degree() % 2 != 0) return false;
    std::multiset<std::int32_t> plus, minus;
    for (const Mode& md : m) (md.sigma > 0 ? plus : minus).insert(md.j);
    return plus == minus;
}

/// number of modes outside S
inline int dz_count(const Monomial& m, const TangentialSet& S) {
    int c = 0;
    for (const Mode& md : m)
        if (!S.contains(md.j)) ++c;
    return c;
}

enum class Projector { DzLe, DzEq, KerH2, RgH2, Trivial };

/// Projections used by the normal-form pipelines. k is only meaningful for
/// the dz projectors; S only for those counting modes outside S.
template <class T>
Polynomial<T> project(const Polynomial<T>& H, Projector which, const TangentialSet& S,
                      int k = 0) {
    switch (which) {
        case Projector::DzLe:
            return H.filtered([&](const Monomial& m) { return dz_count(m, S) <= k; });
        case Projector::DzEq:
            return H.filtered([&](const Monomial& m) { return dz_count(m, S) == k; });
        case Projector::KerH2:
            return H.filtered([](const Monomial& m) { return in_kernel_h2(m); });
        case Projector::RgH2:
            return H.filtered([](const Monomial& m) { return !in_kernel_h2(m); });
        default:
            return H.filtered([](const Monomial& m) { return is_trivial_monomial(m); });
    }
}

/// Solve {H^(2), F} = Pi_Rg B for F: on a non-kernel monomial with divisor
/// R = sum sigma_i sqrt|j_i| the coefficient is c / (-i R) = i c / R; kernel
/// monomials are never divided. Kernel membership is exact.
template <class T>
Polynomial<T> solve_homological_t(const Polynomial<T>& B) {
    using std::sqrt;
    Polynomial<T> F;
    F.momentum_conserving = B.momentum_conserving;
    B.for_each([&](const Monomial& m, const Cx<T>& c) {
        SqrtRational rs;
        for (const Mode& md : m)
            rs += SqrtRational::sqrt_of(std::abs(md.j), md.sigma > 0 ? 1 : -1);
        if (rs.is_zero()) return;
        T r(0);
        for (const auto& [rad, q] : rs.terms())
            r += T(Rational(q).convert_to<long double>()) * sqrt(T(rad));
        F.add(m, Cx<T>(T(0), T(1) / r) * c);
    });
    return F;
}

inline Poly solve_homological(const Poly& B) { return solve_homological_t<double>(B); }

/// Full Birkhoff normal form at degree 4:
///   F3 = ad^{-1} H3,  H1 = exp(ad_F3) H,
///   F4 = ad^{-1} Pi_Rg (degree-4 of H1),  H2 = exp(ad_F4) H1.
/// Returns the transformed Hamiltonian truncated at degree 4. The degree-4
/// kernel part equals Pi_Ker (H4 + 1/2 {F3, H3}).
template <class T>
struct FullBnfResult {
    Polynomial<T> transformed; // degree <= 4 normal form
    Polynomial<T> F3, F4;      // generators
    T degree3_residual{};      // max |coeff| of the degree-3 part (expect 0)
    TruncationAudit audit;     // degree blocks discarded by the Lie series
};

template <class T>
FullBnfResult<T> full_bnf_core(const Polynomial<T>& H) {
    FullBnfResult<T> out;
    Polynomial<T> H3 = H.degree_slice(3, 3);
    out.F3 = solve_homological_t<T>(H3);
    Polynomial<T> H1 = lie_transform(out.F3, H, 4, &out.audit);
    out.degree3_residual = H1.max_abs(3);
    Polynomial<T> B4 = H1.degree_slice(4, 4).filtered(
        [](const Monomial& m) { return !in_kernel_h2(m); });
    out.F4 = solve_homological_t<T>(B4);
    out.transformed = lie_transform(out.F4, H1, 4, &out.audit);
    out.degree3_residual = std::max(out.degree3_residual, out.transformed.max_abs(3));
    return out;
}

/// Report of a normal-form run; see the io module for the JSON layout.
struct BnfReport {
    std::string mode;          // "full", "weak", "constant", "corrections"
    int cutoff = 0;            // requested cutoff (monomials kept up to here)
    int internal_cutoff = 0;   // build cutoff used so all kept coefficients
                               // are closure-exact
    std::uint64_t input_hash = 0;
    double tolerance = 1e-9;

    Poly F3, F4;               // generators at the internal cutoff
    Poly normalized;           // normal-form degree-4 term (or weak (4,0))

    double degree3_residual = 0;
    TruncationAudit audit;                  // Lie-series by-products discarded
    double max_action = 0;                  // largest action-term coefficient
    double max_nontrivial_kernel = 0;       // expect ~0: null condition
    double max_action_error = 0;            // vs the integrable-form prediction
    int action_terms_checked = 0;
    bool degenerate = false;                // cutoff too small for any BF quadruple
    std::vector<std::pair<std::string, double>> offending; // monomial, |coeff|

    // weak mode
    std::optional<GenericityReport> genericity;
    bool refused = false;

    // constant-of-motion mode
    double hk_residual_deg2 = 0, hk_residual_deg3 = 0, hk_residual_deg4 = 0;
    double hk_scale = 1;

    // corrections mode
    double m1 = 0;                          // (1/pi) sum n|n| zeta_n
    double m1_integer_normalization = 0;    // sum n|n| zeta_n (no 1/pi)
    std::string m1_convention_matched;      // which normalization the BNF matches
    std::vector<std::pair<std::int64_t, double>> kappa; // (j, kappa_j) closure-safe
    double kappa_max_error = 0;
};

/// Null-condition verification of the Zakharov quartic normal form.
/// The Hamiltonian is built at internal cutoff 2K so every degree-4
/// coefficient with modes inside |j| <= K is closure-exact; the report
/// checks that nontrivial-kernel (Benjamin-Feir) coefficients vanish and
/// that the action terms match the integrable form
///   sum_k |k|^3/(4 pi) |z_k|^4  - sum_k |k|^3/(2 pi) |z_k|^2 |z_{-k}|^2
///   + sum_{sign k1 = sign k2, |k2|<|k1|} |k1||k2|^2/pi |z_k1|^2 |z_k2|^2
/// (per-index normalization; the canonical {k,-k} monomial carries twice the
/// per-index value since both k and -k index it).
BnfReport full_bnf_degree4(int cutoff);

/// Same pipeline at 256-bit precision, checking cancellation at 1e-20.
struct ExtendedNullCondition {
    double max_nontrivial_rel = 0; // relative to the largest action term
    int bf_monomials_checked = 0;
};
ExtendedNullCondition full_bnf_null_condition_extended(int cutoff);

/// Weak Birkhoff normal form (up to 2 steps). Refuses non-generic S with the
/// genericity certificate in the report. The normalized (4,0) term is
/// compared against the integrable form restricted to S.
BnfReport weak_bnf(int cutoff, const TangentialSet& S, int steps = 2);

/// transformed Hamiltonian of the weak BNF (degree <= 4), for the Floquet
/// linearization; throws on non-generic S
Poly weak_bnf_transformed(int cutoff, const TangentialSet& S, int steps = 2);

/// Approximate constant of motion K = K2 + K3 + K4 with
///   K2 = sum j^2 |u_j|^2, K3 = ad_{K2} F3, K4 = ad_{K2} F4 + 1/2 {ad_{K2} F3, F3}.
/// Verifies that {H, K} has no coefficients below degree 5.
BnfReport approx_constant(int cutoff);
/// the K polynomial itself
Poly approx_constant_polynomial(int cutoff);

/// Diagonal corrections kappa_j extracted from Pi_triv Pi^{dz=2} H_FB^(4)
/// with tangential actions frozen at zeta, cross-checked against
/// (m1 + c_j) j from the spectrum module. Only closure-safe |j| <= K - max|S|
/// are reported.
BnfReport linear_corrections(int cutoff, const TangentialSet& S,
                             const std::vector<double>& zeta);

} // namespace wwnf
