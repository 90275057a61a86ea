#include <doctest.h>

#include "wwnf/bnf.hpp"
#include "wwnf/numbers.hpp"
#include "wwnf/polynomial.hpp"
#include "wwnf/zakharov.hpp"

#include <complex>
#include <vector>

using namespace wwnf;

namespace {

constexpr double kPi = 3.14159265358979323846;

Poly h2(int K) { return dispersion_hamiltonian(K); }

/// random real field supported on |j| <= jmax: returns Fourier coefficients
/// f_j with f_{-j} = conj(f_j), f_0 = 0
std::vector<std::complex<double>> random_real_field(int jmax, std::uint64_t stream) {
    std::vector<std::complex<double>> f(2 * jmax + 1);
    for (int j = 1; j <= jmax; ++j) {
        double re = counter_rng_uniform(11, stream, 2 * j) - 0.5;
        double im = counter_rng_uniform(11, stream, 2 * j + 1) - 0.5;
        f[jmax + j] = {re, im};
        f[jmax - j] = {re, -im};
    }
    return f;
}

} // namespace

TEST_CASE("quadratic part is the dispersion law") {
    Poly H = build_zakharov(8, 4);
    for (int j = -8; j <= 8; ++j) {
        if (j == 0) continue;
        Cxd c = H.coeff(Monomial{{j, +1}, {j, -1}});
        CHECK(c.re == doctest::Approx(std::sqrt(std::abs(double(j)))).epsilon(1e-13));
        CHECK(std::abs(c.im) < 1e-14);
    }
    // degree-2 block is diagonal
    H.degree_slice(2, 2).for_each([&](const Monomial& m, const Cxd&) {
        CHECK(m.degree() == 2);
        CHECK(m[0].j == m[1].j);
        CHECK(m[0].sigma == -m[1].sigma);
    });
}

TEST_CASE("momentum and reality of the Zakharov expansion") {
    Poly H = build_zakharov(10, 4);
    CHECK(H.check_momentum() == 0);
    CHECK(H.check_reality() < 1e-11);
}

TEST_CASE("momentum hamiltonian is the diagonal -j") {
    Poly M = momentum_hamiltonian(6);
    for (int j = -6; j <= 6; ++j) {
        if (j == 0) continue;
        CHECK(M.coeff(Monomial{{j, +1}, {j, -1}}).re == doctest::Approx(-double(j)));
    }
    CHECK(M.check_reality() == 0);

    // {M, H^(3)} = 0: momentum conservation of the cubic term
    Poly H3 = build_zakharov(6, 3).degree_slice(3, 3);
    Poly br = poisson_bracket(M, H3);
    CHECK(br.max_abs() < 1e-12);
}

TEST_CASE("bracket of H2 with a monomial gives -i R") {
    // {H2, u_4 ubar_1} = -i (sqrt4 - sqrt1) u_4 ubar_1 = -i u_4 ubar_1
    Poly m;
    m.add(Monomial{{4, +1}, {1, -1}}, Cxd(1.0));
    Poly br = poisson_bracket(h2(8), m);
    Cxd c = br.coeff(Monomial{{4, +1}, {1, -1}});
    CHECK(c.re == doctest::Approx(0.0));
    CHECK(c.im == doctest::Approx(-1.0));
    CHECK(br.term_count() == 1);
}

TEST_CASE("bracket antisymmetry and momentum-zero kernel") {
    Poly H = build_zakharov(5, 4);
    Poly FF = poisson_bracket(H, H);
    CHECK(FF.max_abs() < 1e-10);

    // {M, u_j ubar_j} = 0
    Poly m;
    m.add(Monomial{{3, +1}, {3, -1}}, Cxd(1.0));
    CHECK(poisson_bracket(momentum_hamiltonian(5), m).max_abs() < 1e-14);
}

TEST_CASE("Jacobi identity on random low-degree polynomials") {
    auto rnd_poly = [&](std::uint64_t stream) {
        Poly p;
        for (int t = 0; t < 6; ++t) {
            int deg = 2 + int(counter_rng_u64(5, stream, 3 * t) % 2);
            Monomial m;
            std::int64_t msum = 0;
            for (int q = 0; q + 1 < deg; ++q) {
                int j = 1 + int(counter_rng_u64(5, stream, 7 * t + q) % 4);
                int s = counter_rng_u64(6, stream, 7 * t + q) & 1 ? 1 : -1;
                m.push({j, s});
                msum += s * j;
            }
            if (msum == 0) continue;
            int last_s = msum > 0 ? -1 : 1;
            m.push({int(std::llabs(msum)), last_s});
            m.canonicalize();
            double re = counter_rng_uniform(8, stream, t) - 0.5;
            p.add(m, Cxd(re));
        }
        return p;
    };
    for (int i = 0; i < 12; ++i) {
        Poly A = rnd_poly(3 * i), B = rnd_poly(3 * i + 1), C = rnd_poly(3 * i + 2);
        Poly jac = poisson_bracket(A, poisson_bracket(B, C)) +
                   poisson_bracket(B, poisson_bracket(C, A)) +
                   poisson_bracket(C, poisson_bracket(A, B));
        double scale = std::max({A.max_abs(), B.max_abs(), C.max_abs(), 1.0});
        CHECK(jac.max_abs() <= 1e-10 * scale * scale * scale);
    }
}

TEST_CASE("reality is preserved by brackets of real polynomials") {
    Poly H = build_zakharov(5, 4);
    Poly K;
    for (int j = -5; j <= 5; ++j)
        if (j != 0) K.add(Monomial{{j, +1}, {j, -1}}, Cxd(double(j) * j));
    Poly br = poisson_bracket(H, K);
    CHECK(br.check_reality() < 1e-11);
}

TEST_CASE("cubic term matches the grid quadrature oracle") {
    // independent oracle: evaluate 1/2 int psi G1(eta) psi dx on a 512-point
    // grid for random low-mode real (eta, psi) and compare with the
    // polynomial evaluated at u_j = (|j|^{-1/4} eta_j + i |j|^{1/4} psi_j)/sqrt2
    const int K = 12, jmax = 5, N = 512;
    Poly H3 = build_zakharov(K, 3).degree_slice(3, 3);

    for (int trial = 0; trial < 5; ++trial) {
        auto eta = random_real_field(jmax, 100 + 2 * trial);
        auto psi = random_real_field(jmax, 101 + 2 * trial);
        auto fj = [&](const std::vector<std::complex<double>>& f, int j) {
            return (std::abs(j) <= jmax && j != 0) ? f[jmax + j] : std::complex<double>(0);
        };

        // grid evaluation; fields are band-limited so direct sums are exact
        const double h = 2 * kPi / N;
        auto on_grid = [&](auto coeffs_fn) {
            std::vector<double> g(N, 0.0);
            for (int i = 0; i < N; ++i) {
                std::complex<double> v = 0;
                for (int j = -jmax; j <= jmax; ++j) {
                    if (j == 0) continue;
                    v += coeffs_fn(j) *
                         std::exp(std::complex<double>(0, j * i * h)) /
                         std::sqrt(2 * kPi);
                }
                g[i] = v.real();
            }
            return g;
        };
        auto eta_g = on_grid([&](int j) { return fj(eta, j); });
        auto dpsi_g = on_grid([&](int j) {
            return std::complex<double>(0, j) * fj(psi, j);
        });
        auto Dpsi_g = on_grid([&](int j) { return double(std::abs(j)) * fj(psi, j); });

        // products back to Fourier by direct quadrature (band-limited)
        auto to_fourier = [&](const std::vector<double>& g, int j) {
            std::complex<double> c = 0;
            for (int i = 0; i < N; ++i)
                c += g[i] * std::exp(std::complex<double>(0, -j * i * h));
            return c * h / std::sqrt(2 * kPi);
        };
        // G1 psi = -dx(eta dx psi) - |D|(eta |D| psi)
        std::vector<double> p1(N), p2(N);
        for (int i = 0; i < N; ++i) {
            p1[i] = eta_g[i] * dpsi_g[i];
            p2[i] = eta_g[i] * Dpsi_g[i];
        }
        // 1/2 int psi G1 psi = 1/2 sum_j psi_{-j} (G1 psi)_j
        std::complex<double> val = 0;
        for (int j = -2 * jmax; j <= 2 * jmax; ++j) {
            if (j == 0) continue;
            auto g1j = -std::complex<double>(0, j) * to_fourier(p1, j) -
                       double(std::abs(j)) * to_fourier(p2, j);
            val += fj(psi, -j) * g1j;
        }
        val *= 0.5;

        Cxd poly = H3.evaluate([&](int j) {
            auto e = fj(eta, j);
            auto p = fj(psi, j);
            double aj = std::pow(std::abs(double(j)), 0.25);
            std::complex<double> u = (e / aj + std::complex<double>(0, 1) * aj * p) /
                                     std::sqrt(2.0);
            return Cxd(u.real(), u.imag());
        });
        CHECK(std::abs(val.imag()) < 1e-10);
        CHECK(poly.re == doctest::Approx(val.real()).epsilon(1e-9));
        CHECK(std::abs(poly.im) < 1e-10);
    }
}

TEST_CASE("quartic coefficients are conjugate-symmetric") {
    Poly H4 = build_zakharov(8, 4).degree_slice(4, 4);
    double worst = 0;
    H4.for_each([&](const Monomial& m, const Cxd& c) {
        worst = std::max(worst, abs(conj(c) - H4.coeff(m.conjugate())));
    });
    CHECK(worst < 1e-11 * H4.max_abs());
}

TEST_CASE("projections are idempotent and complementary") {
    TangentialSet S({2, 3});
    Poly H = build_zakharov(6, 4);
    Poly ker = project(H, Projector::KerH2, S);
    Poly rg = project(H, Projector::RgH2, S);
    CHECK(project(ker, Projector::KerH2, S).term_count() == ker.term_count());
    CHECK(project(rg, Projector::RgH2, S).term_count() == rg.term_count());
    CHECK(ker.term_count() + rg.term_count() == H.term_count());

    // Pi_triv(u_j ubar_j u_k ubar_k) = itself
    Poly t;
    t.add(Monomial{{2, +1}, {2, -1}, {5, +1}, {5, -1}}, Cxd(1.0));
    CHECK(project(t, Projector::Trivial, S).term_count() == 1);

    // Pi_Ker keeps the Benjamin-Feir monomial
    Poly bf;
    bf.add(Monomial{{-1, +1}, {4, -1}, {9, +1}, {4, -1}}, Cxd(1.0));
    CHECK(project(bf, Projector::KerH2, S).term_count() == 1);

    // dz <= 1 drops monomials with two modes outside S
    Poly two_out;
    two_out.add(Monomial{{5, +1}, {7, -1}, {2, +1}}, Cxd(1.0));
    CHECK(project(two_out, Projector::DzLe, S, 1).empty());
}

TEST_CASE("transport coefficient table") {
    auto v4 = v_expansion_coefficients(4);
    CHECK(v4.v1_plus == doctest::Approx(4.0 * std::pow(4.0, -0.25) / std::sqrt(2.0)));
    CHECK(v4.v1_plus == v4.v1_minus);
    auto v1 = v_expansion_coefficients(1);
    CHECK(v1.v2_pm == doctest::Approx(0.5));
    CHECK(v1.v2_pm == v1.v2_mp);
    CHECK_THROWS_AS(v_expansion_coefficients(0), std::domain_error);
}
