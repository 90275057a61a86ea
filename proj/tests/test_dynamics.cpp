#include <doctest.h>

#include "wwnf/dynamics.hpp"
#include "wwnf/numbers.hpp"
#include "wwnf/zakharov.hpp"

using namespace wwnf;

namespace {

constexpr double kPi = 3.14159265358979323846;

SpectralState random_state(int K, double amp, std::uint64_t stream) {
    SpectralState s(K);
    for (int j = -K; j <= K; ++j) {
        if (j == 0) continue;
        double re = 2 * counter_rng_uniform(21, stream, 2 * (j + K)) - 1;
        double im = 2 * counter_rng_uniform(21, stream, 2 * (j + K) + 1) - 1;
        s.at(j) = Cxd(re, im) * amp;
    }
    return s;
}

} // namespace

TEST_CASE("rhs of H2 is the diagonal rotation") {
    int K = 6;
    Rhs rhs = rhs_full(dispersion_hamiltonian(K), K);
    SpectralState s = random_state(K, 0.3, 1), out(K);
    rhs(s, out);
    for (int j = -K; j <= K; ++j) {
        if (j == 0) continue;
        Cxd expect = Cxd(0, -std::sqrt(std::abs(double(j)))) * s.at(j);
        CHECK(abs(out.at(j) - expect) < 1e-14);
    }
}

TEST_CASE("rhs matches finite differences of H") {
    int K = 4;
    Poly H = build_zakharov(K, 4);
    Rhs rhs = rhs_full(H, K);
    SpectralState s = random_state(K, 0.2, 2), out(K);
    rhs(s, out);
    // zdot_j = -i dH/dzbar_j; in real coordinates z = x + i y:
    // dH/dzbar = (dH/dx + i dH/dy)/2
    const double h = 1e-6;
    auto eval = [&](const SpectralState& st) {
        return H.evaluate([&](int j) { return st.at(j); }).re;
    };
    for (int j : {1, -2, 3}) {
        SpectralState sp = s, sm = s;
        sp.at(j).re += h;
        sm.at(j).re -= h;
        double dx = (eval(sp) - eval(sm)) / (2 * h);
        sp = s; sm = s;
        sp.at(j).im += h;
        sm.at(j).im -= h;
        double dy = (eval(sp) - eval(sm)) / (2 * h);
        Cxd grad(dx / 2, dy / 2);
        Cxd expect = Cxd(0, -1) * grad;
        CHECK(abs(out.at(j) - expect) <= 1e-7 * (1 + abs(out.at(j))));
    }
}

TEST_CASE("rhs_bnf equals the symbolic field of H2 + integrable quartic") {
    int K = 8;
    Poly H = dispersion_hamiltonian(K) + integrable_quartic(K);
    Rhs sym = rhs_full(H, K), hand = rhs_bnf(K);
    SpectralState a(K), b(K);
    double worst = 0;
    for (int trial = 0; trial < 50; ++trial) {
        SpectralState s = random_state(K, 0.1, 100 + trial);
        sym(s, a);
        hand(s, b);
        for (int i = 0; i < s.dim(); ++i) {
            double scale = std::max(abs(a.raw()[i]), 1e-30);
            worst = std::max(worst, abs(a.raw()[i] - b.raw()[i]) / scale);
        }
    }
    CHECK(worst < 1e-9);
}

TEST_CASE("single-mode frequency of the normal-form field") {
    int K = 4, n = 3;
    SpectralState s(K);
    s.at(n) = Cxd(0.07, 0.0);
    SpectralState out(K);
    rhs_bnf(K)(s, out);
    // zdot_n = -i (sqrt|n| + |n|^3 |z_n|^2/(2 pi)) z_n
    double rate = std::sqrt(3.0) + 27.0 * 0.07 * 0.07 / (2 * kPi);
    CHECK(abs(out.at(n) - Cxd(0, -rate) * s.at(n)) < 1e-14);
}

TEST_CASE("integrator reproduces the linear flow") {
    int K = 5;
    Rhs rhs = rhs_full(dispersion_hamiltonian(K), K);
    SpectralState s0 = random_state(K, 0.2, 3);
    double T = 20, tol = 1e-10;
    Trajectory tr = integrate(rhs, s0, T, tol, 10);
    const SpectralState& sT = tr.states.back();
    for (int j = -K; j <= K; ++j) {
        if (j == 0) continue;
        double th = -std::sqrt(std::abs(double(j))) * tr.times.back();
        Cxd expect = Cxd(std::cos(th), std::sin(th)) * s0.at(j);
        CHECK(abs(sT.at(j) - expect) <= 10 * tol * T + 1e-12);
    }
    CHECK_THROWS_AS(integrate(rhs, s0, 1.0, 1e-13), std::domain_error);
}

TEST_CASE("energy and momentum drift stay within the tolerance budget") {
    int K = 5;
    Poly H = build_zakharov(K, 4);
    Poly M = momentum_hamiltonian(K);
    Rhs rhs = rhs_full(H, K);
    SpectralState s0 = random_state(K, 0.1, 4);
    double T = 30, tol = 1e-9;
    Trajectory tr = integrate(rhs, s0, T, tol, 5);
    auto val = [&](const Poly& P, const SpectralState& st) {
        return P.evaluate([&](int j) { return st.at(j); }).re;
    };
    double h0 = val(H, s0), hT = val(H, tr.states.back());
    CHECK(std::abs(hT - h0) <= 100 * tol * T * std::max(std::abs(h0), 1.0));
    double m0 = val(M, s0), mT = val(M, tr.states.back());
    CHECK(std::abs(mT - m0) <= 100 * tol * T * std::max(std::abs(m0), 1.0));
}

TEST_CASE("implicit midpoint holds energy over long runs") {
    int K = 4;
    Poly H = build_zakharov(K, 4);
    Rhs rhs = rhs_full(H, K);
    SpectralState s0 = random_state(K, 0.08, 9);
    auto val = [&](const SpectralState& st) {
        return H.evaluate([&](int j) { return st.at(j); }).re;
    };
    Trajectory tr = integrate_midpoint(rhs, s0, 200.0, 0.02, 10);
    double h0 = val(s0);
    // symplectic: energy error stays bounded (no secular drift), here ~ h^2
    for (auto& st : tr.states)
        CHECK(std::abs(val(st) - h0) <= 1e-5 * std::max(std::abs(h0), 1.0));
    CHECK_THROWS_AS(integrate_midpoint(rhs, s0, 1.0, 0.0), std::domain_error);
}

TEST_CASE("actions are conserved by the normal-form flow") {
    int K = 6;
    SpectralState s0 = random_state(K, 0.08, 5);
    Trajectory tr = integrate(rhs_bnf(K), s0, 50, 1e-10, 5);
    for (int j = -K; j <= K; ++j) {
        if (j == 0) continue;
        CHECK(std::abs(abs2(tr.states.back().at(j)) - abs2(s0.at(j))) <= 1e-7);
    }
}

TEST_CASE("approximate solution: traveling invariance and zero linear residual") {
    TangentialSet S({2, 3});
    ApproxSolution ap(S, {1.0, 1.0}, 0.05);

    // U(phi, x + s) = U(phi - v s, x)
    for (double s : {0.3, 1.1}) {
        for (double x : {0.0, 0.7}) {
            std::vector<double> phi{0.4, 1.9};
            auto lhs = ap.u(phi, x + s);
            std::vector<double> shifted{phi[0] - 2 * s, phi[1] - 3 * s};
            auto rhs = ap.u(shifted, x);
            CHECK(std::abs(lhs - rhs) < 1e-13);
        }
    }

    // residual of the linear solution against H^(2) at omega = omega_bar is 0
    ApproxSolution ap0(S, {1.0, 1.0}, 0.05);
    ap0.omega = S.omega_bar();
    auto rep = residual(dispersion_hamiltonian(3), ap0, 6);
    CHECK(rep.norm < 1e-13);

    // eps = 0: residual 0 for any truncation
    ApproxSolution apz(S, {1.0, 1.0}, 0.0);
    CHECK(residual(build_zakharov(6, 3), apz, 4).norm < 1e-15);
}

TEST_CASE("residual scaling exponent is at least 2 against H2+H3") {
    TangentialSet S({2, 3});
    ResidualScaling rs =
        residual_scaling(S, {1.0, 1.0}, {0.08, 0.04, 0.02, 0.01}, 6, 3, 6);
    for (std::size_t i = 1; i < rs.norms.size(); ++i)
        CHECK(rs.norms[i] < rs.norms[i - 1]); // monotone decay
    CHECK(rs.slope >= 2.0 - 0.05);
}

TEST_CASE("measured frequencies recover the dispersion law at eps = 0") {
    int K = 4;
    SpectralState s0(K);
    s0.at(2) = Cxd(0.05, 0.02);
    s0.at(-3) = Cxd(0.01, -0.04);
    Trajectory tr = integrate(rhs_full(dispersion_hamiltonian(K), K), s0, 40, 1e-10, 400);
    auto fits = measured_frequencies(tr, {2, -3, 1});
    CHECK(fits[0].omega == doctest::Approx(std::sqrt(2.0)).epsilon(1e-8));
    CHECK(fits[1].omega == doctest::Approx(std::sqrt(3.0)).epsilon(1e-8));
    CHECK(fits[2].skipped); // vanishing amplitude
}

TEST_CASE("frequency is independent of the initial phase at fixed actions") {
    int K = 6;
    TangentialSet S({2, 3});
    double eps = 0.06;
    auto run = [&](double phase) {
        SpectralState s0(K);
        s0.at(2) = Cxd(std::cos(phase), std::sin(phase)) * eps;
        s0.at(3) = Cxd(std::cos(2 * phase), std::sin(2 * phase)) * eps;
        Trajectory tr = integrate(rhs_bnf(K), s0, 60, 1e-10, 600);
        return measured_frequencies(tr, {2, 3});
    };
    auto f0 = run(0.0), f1 = run(1.23);
    CHECK(f0[0].omega == doctest::Approx(f1[0].omega).epsilon(1e-7));
    CHECK(f0[1].omega == doctest::Approx(f1[1].omega).epsilon(1e-7));
}

TEST_CASE("floquet eigenvalues stay conjugate-symmetric at eps > 0") {
    TangentialSet S({2, 3});
    ApproxSolution ap(S, {1.0, 1.0}, 0.04);
    Poly Hwk = weak_bnf_transformed(8, S, 2);
    FloquetResult fr = floquet_spectrum(Hwk, ap, 2, 8);
    // the operator is real-to-real: the global spectrum is closed under
    // conjugation (pairs live in momentum blocks q and -q)
    double worst = 0;
    for (auto& ev : fr.eigenvalues) {
        double best = 1e18;
        for (auto& ev2 : fr.eigenvalues)
            best = std::min(best, std::abs(std::conj(ev) - ev2));
        worst = std::max(worst, best);
    }
    CHECK(worst < 1e-9);
}

TEST_CASE("floquet at eps = 0 is exactly diagonal") {
    TangentialSet S({2, 3});
    ApproxSolution ap(S, {1.0, 1.0}, 0.0);
    Poly H = build_zakharov(6, 4);
    FloquetResult fr = floquet_spectrum(H, ap, 1, 6);
    CHECK(fr.max_interior_residual < 1e-12);
    CHECK(fr.interior_checked > 0);
    // eigenvalues come in conjugate pairs
    double worst = 1e9;
    for (auto& ev : fr.eigenvalues) {
        double best = 1e9;
        for (auto& ev2 : fr.eigenvalues) best = std::min(best, std::abs(std::conj(ev) - ev2));
        worst = std::min(worst, best);
        CHECK(best < 1e-9);
    }
    CHECK_THROWS_AS(floquet_spectrum(H, ap, 6, 40, 100), std::domain_error);
}
