#include "wwnf/spectrum.hpp"

#include <cmath>
#include <stdexcept>

namespace wwnf {

namespace {

constexpr double kPi = 3.14159265358979323846;

/// exact determinant by fraction-free Gaussian elimination (Bareiss)
Int int_det(std::vector<std::vector<Int>> m) {
    const int n = static_cast<int>(m.size());
    if (n == 0) return 1;
    Int prev = 1;
    int sign = 1;
    for (int k = 0; k < n - 1; ++k) {
        if (m[k][k] == 0) {
            int p = -1;
            for (int r = k + 1; r < n; ++r)
                if (m[r][k] != 0) { p = r; break; }
            if (p < 0) return 0;
            std::swap(m[k], m[p]);
            sign = -sign;
        }
        for (int i = k + 1; i < n; ++i)
            for (int j = k + 1; j < n; ++j)
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
        prev = m[k][k];
    }
    return sign > 0 ? m[n - 1][n - 1] : -m[n - 1][n - 1];
}

/// adjugate via exact cofactors (nu <= ~6 at desk scale)
std::vector<std::vector<Int>> int_adjugate(const std::vector<std::vector<Int>>& m) {
    const int n = static_cast<int>(m.size());
    std::vector<std::vector<Int>> adj(n, std::vector<Int>(n, 0));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            std::vector<std::vector<Int>> minor;
            for (int r = 0; r < n; ++r) {
                if (r == i) continue;
                std::vector<Int> row;
                for (int c = 0; c < n; ++c)
                    if (c != j) row.push_back(m[r][c]);
                minor.push_back(std::move(row));
            }
            Int cof = minor.empty() ? Int(1) : int_det(minor);
            if ((i + j) % 2) cof = -cof;
            adj[j][i] = cof; // transpose of cofactor matrix
        }
    }
    return adj;
}

std::vector<std::vector<Int>> four_pi_A_int(const TangentialSet& S) {
    const int nu = S.nu();
    std::vector<std::vector<Int>> A(nu, std::vector<Int>(nu, 0));
    for (int i = 0; i < nu; ++i) {
        Int ai = std::llabs(S.site(i));
        A[i][i] = 2 * ai * ai * ai; // 4 pi * |s|^3/(2 pi)
        for (int k = 0; k < nu; ++k) {
            if (k == i) continue;
            std::int64_t si = S.site(i), sk = S.site(k);
            if ((si > 0) != (sk > 0)) continue;
            std::int64_t hi = std::llabs(si) > std::llabs(sk) ? si : sk;
            std::int64_t lo = std::llabs(si) > std::llabs(sk) ? sk : si;
            if (std::llabs(hi) == std::llabs(lo)) continue; // cannot happen, sites distinct
            A[i][k] = 4 * Int(std::llabs(hi)) * Int(std::llabs(lo)) * Int(std::llabs(lo));
        }
    }
    return A;
}

} // namespace

TwistData twist_matrix(const TangentialSet& S) {
    S.require_bis();
    const int nu = S.nu();
    TwistData td;
    auto A4 = four_pi_A_int(S);
    td.A.resize(nu, nu);
    for (int i = 0; i < nu; ++i)
        for (int k = 0; k < nu; ++k)
            td.A(i, k) = A4[i][k].convert_to<double>() / (4 * kPi);

    auto v = S.velocity();
    auto w = S.w_vector();
    td.V.resize(nu, nu);
    for (int i = 0; i < nu; ++i)
        for (int k = 0; k < nu; ++k) td.V(i, k) = double(v[i]) * double(w[k]);

    td.int_cert = int_det(A4);
    td.det_A = td.int_cert.convert_to<double>() / std::pow(4 * kPi, nu);
    td.det_A_minus_V = (td.A - td.V).determinant();
    td.det_A_minus_V_over_pi = (td.A - td.V / kPi).determinant();

    // det(4 pi (A - V)) = det(A4 - 4 pi V_int) = det(A4) - 4 pi w^T adj(A4) v
    auto adj = int_adjugate(A4);
    Int quad = 0;
    for (int i = 0; i < nu; ++i)
        for (int k = 0; k < nu; ++k) quad += Int(w[i]) * adj[i][k] * Int(v[k]);
    td.pi_poly_c0 = td.int_cert;
    td.pi_poly_c1 = -4 * quad;

    // V/pi convention: det(4 pi A - 4 V) is a plain integer
    auto m = A4;
    for (int i = 0; i < nu; ++i)
        for (int k = 0; k < nu; ++k) m[i][k] -= 4 * Int(v[i]) * Int(w[k]);
    td.int_cert_over_pi = int_det(m);
    return td;
}

TwistCheck twist_check(const TangentialSet& S) {
    TwistData td = twist_matrix(S);
    TwistCheck c;
    c.int_cert = td.int_cert;
    c.pi_poly_c0 = td.pi_poly_c0;
    c.pi_poly_c1 = td.pi_poly_c1;
    c.int_cert_over_pi = td.int_cert_over_pi;
    c.det_A_nonzero = td.int_cert != 0;
    c.det_A_minus_V_nonzero = !(td.pi_poly_c0 == 0 && td.pi_poly_c1 == 0);
    c.numeric_A_minus_V = td.det_A_minus_V;
    return c;
}

std::vector<double> freq_amp(const TangentialSet& S, const std::vector<double>& zeta,
                             double eps) {
    S.require_bis();
    if (int(zeta.size()) != S.nu()) throw std::invalid_argument("freq_amp: zeta size");
    TwistData td = twist_matrix(S);
    Eigen::Map<const Eigen::VectorXd> z(zeta.data(), zeta.size());
    Eigen::VectorXd om = td.A * z * (eps * eps);
    auto wb = S.omega_bar();
    std::vector<double> out(S.nu());
    for (int i = 0; i < S.nu(); ++i) out[i] = wb[i] + om(i);
    return out;
}

std::vector<double> amp_freq(const TangentialSet& S, const std::vector<double>& omega,
                             double eps) {
    S.require_bis();
    if (int(omega.size()) != S.nu()) throw std::invalid_argument("amp_freq: omega size");
    if (eps <= 0) throw std::domain_error("amp_freq: eps > 0 required");
    TwistData td = twist_matrix(S);
    if (td.int_cert == 0)
        throw std::domain_error("amp_freq: singular twist matrix, det(4 pi A) = 0");
    auto wb = S.omega_bar();
    Eigen::VectorXd rhs(S.nu());
    for (int i = 0; i < S.nu(); ++i) rhs(i) = omega[i] - wb[i];
    Eigen::VectorXd z = td.A.partialPivLu().solve(rhs) / (eps * eps);
    return {z.data(), z.data() + z.size()};
}

double c_correction(const TangentialSet& S, const std::vector<double>& zeta,
                    std::int64_t j) {
    if (std::llabs(j) >= S.max_abs()) return 0.0;
    double c = 0;
    for (int i = 0; i < S.nu(); ++i) {
        std::int64_t k = S.site(i);
        if (std::llabs(k) > std::llabs(j))
            c += double(k) * double(std::llabs(j) - std::llabs(k)) * zeta[i];
    }
    return c / kPi;
}

Corrections corrections(const TangentialSet& S, const std::vector<double>& zeta,
                        double eps, std::int64_t j_max) {
    S.require_bis();
    if (int(zeta.size()) != S.nu()) throw std::invalid_argument("corrections: zeta size");
    Corrections out;
    for (int i = 0; i < S.nu(); ++i) {
        double n = double(S.site(i));
        out.m1 += n * std::abs(n) * zeta[i] / kPi;
        out.m1_no_pi += n * std::abs(n) * zeta[i];
    }
    for (std::int64_t j = -j_max; j <= j_max; ++j) {
        if (j == 0 || S.contains(j)) continue;
        out.js.push_back(j);
        double cj = c_correction(S, zeta, j);
        out.c.push_back(cj);
        out.d_leading.push_back(std::sqrt(double(std::llabs(j))) +
                                eps * eps * (out.m1 + cj) * double(j));
    }
    if (S.nu() >= 2) {
        out.alpha_available = true;
        out.v_perp.assign(S.nu(), 0);
        out.v_perp[0] = S.site(1);
        out.v_perp[1] = -S.site(0);
        auto om = freq_amp(S, zeta, eps);
        double omvp = 0;
        for (int i = 0; i < S.nu(); ++i) omvp += om[i] * double(out.v_perp[i]);
        for (std::size_t idx = 0; idx < out.js.size(); ++idx)
            out.alpha_scale.push_back(out.c[idx] * double(out.js[idx]) / omvp);
    }
    return out;
}

} // namespace wwnf
