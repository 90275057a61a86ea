#pragma once

#include "wwnf/numbers.hpp"
#include "wwnf/sites.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <vector>

namespace wwnf {

/// Twist matrix A of the frequency-amplitude map and the rank-one momentum
/// matrix V = v w^T. 4 pi A has integer entries, which gives the exact
/// determinant certificates.
struct TwistData {
    Eigen::MatrixXd A;           // nu x nu symmetric
    Eigen::MatrixXd V;           // v w^T (integer entries, w_j = |j| j)
    double det_A = 0;
    double det_A_minus_V = 0;    // V taken in the integer normalization
    double det_A_minus_V_over_pi = 0; // V/pi, matching m1 = (1/pi) sum n|n| zeta
    Int int_cert = 0;            // det(4 pi A), exact
    // det(4 pi (A - V)) = pi_poly_c0 + pi * pi_poly_c1 exactly
    Int pi_poly_c0 = 0;
    Int pi_poly_c1 = 0;
    Int int_cert_over_pi = 0;    // det(4 pi A - 4 V), exact (V/pi convention)
};

/// A_ii = |s_i|^3 / (2 pi); A_ik = |s_i| |s_k|^2 / pi for same-sign pairs with
/// |s_k| < |s_i| (symmetrized), 0 for opposite signs.
TwistData twist_matrix(const TangentialSet& S);

struct TwistCheck {
    bool det_A_nonzero = false;         // |det(4 pi A)| >= 1
    bool det_A_minus_V_nonzero = false; // certificate (c0, c1) != (0, 0)
    Int int_cert = 0;
    Int pi_poly_c0 = 0, pi_poly_c1 = 0;
    Int int_cert_over_pi = 0;
    double numeric_A_minus_V = 0;       // fallback evaluation
};

/// Exact certificates: det(4 pi A) as an integer and det(4 pi (A - V)) as a
/// degree-1 polynomial in pi with integer coefficients (V has rank one).
/// A nonzero polynomial cannot vanish at pi, so (c0, c1) != (0, 0) certifies
/// det(A - V) != 0.
TwistCheck twist_check(const TangentialSet& S);

/// omega = omega_bar + eps^2 A zeta (leading order of the frequency-amplitude map)
std::vector<double> freq_amp(const TangentialSet& S, const std::vector<double>& zeta,
                             double eps);
/// exact linear inverse zeta = eps^{-2} A^{-1} (omega - omega_bar);
/// throws domain_error with the certificate when A is singular
std::vector<double> amp_freq(const TangentialSet& S, const std::vector<double>& omega,
                             double eps);

/// c_j = (1/pi) sum_{k in S, |k|>|j|} k (|j| - |k|) zeta_k for |j| < max|S|, else 0
double c_correction(const TangentialSet& S, const std::vector<double>& zeta,
                    std::int64_t j);

struct Corrections {
    double m1 = 0;        // (1/pi) sum n |n| zeta_n   (primary normalization)
    double m1_no_pi = 0;  // sum n |n| zeta_n          (the integer-matrix variant)
    std::vector<std::int64_t> js;
    std::vector<double> c;          // c_j
    std::vector<double> d_leading;  // sqrt|j| + eps^2 (m1 + c_j) j
    // rotating phases alpha_j = v_perp c_j j / (omega . v_perp); empty for nu = 1
    bool alpha_available = false;
    std::vector<std::int64_t> v_perp;
    std::vector<double> alpha_scale; // alpha_j = alpha_scale[j] * v_perp
};

/// first-order eigenvalue data for normal modes |j| <= j_max
Corrections corrections(const TangentialSet& S, const std::vector<double>& zeta,
                        double eps, std::int64_t j_max = 32);

} // namespace wwnf
