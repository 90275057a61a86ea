#pragma once

#include "wwnf/polynomial.hpp"
#include "wwnf/sites.hpp"

#include <cmath>
#include <vector>

namespace wwnf {

/// Construction of the truncated deep-water Hamiltonian in complex
/// coordinates. The surface variables are expanded as
///   f(x) = (2 pi)^{-1/2} sum_j f_j e^{i j x},   j != 0,
/// and the complex substitution per Fourier mode is
///   eta_j = |j|^{1/4} (u_j^+ + u_{-j}^-) / sqrt 2,
///   psi_j = -i |j|^{-1/4} (u_j^+ - u_{-j}^-) / sqrt 2.
/// Products of fields are convolutions carrying one 1/sqrt(2 pi) each, and
/// int_T f dx = sqrt(2 pi) f_0, so quadratic integrals have no stray factor.
namespace detail {

/// Fourier field: wavenumber -> degree-graded polynomial coefficient.
template <class T>
class Field {
public:
    explicit Field(int range) : range_(range), entries_(2 * range + 1) {}

    int range() const { return range_; }
    Polynomial<T>& at(int j) { return entries_[j + range_]; }
    const Polynomial<T>& at(int j) const { return entries_[j + range_]; }

    /// apply a real Fourier multiplier sym(j)
    template <class Sym>
    Field multiplier(Sym&& sym) const {
        Field r(range_);
        for (int j = -range_; j <= range_; ++j) {
            T s = T(sym(j));
            if (!(s == T(0))) r.at(j) = at(j).scaled(s);
        }
        return r;
    }

    /// i*j multiplier (d/dx)
    Field dx() const {
        Field r(range_);
        for (int j = -range_; j <= range_; ++j)
            r.at(j) = at(j).scaled(Cx<T>(T(0), T(j)));
        return r;
    }

    /// pointwise product; convolution with 1/sqrt(2 pi)
    friend Field multiply(const Field& a, const Field& b, int out_range) {
        using std::sqrt;
        Field r(out_range);
        const T inv_sq2pi = T(1) / sqrt(T(2) * pi_const());
        for (int p = -a.range_; p <= a.range_; ++p) {
            if (a.at(p).empty()) continue;
            for (int q = -b.range_; q <= b.range_; ++q) {
                if (b.at(q).empty()) continue;
                int j = p + q;
                if (std::abs(j) > out_range) continue;
                a.at(p).for_each([&](const Monomial& ma, const Cx<T>& ca) {
                    b.at(q).for_each([&](const Monomial& mb, const Cx<T>& cb) {
                        r.at(j).add(Monomial::merged(ma, mb), ca * cb * inv_sq2pi);
                    });
                });
            }
        }
        return r;
    }

    /// int_T . dx = sqrt(2 pi) * zero mode
    Polynomial<T> integral() const {
        using std::sqrt;
        return at(0).scaled(sqrt(T(2) * pi_const()));
    }

    static T pi_const() {
        // digits beyond double matter only for the extended instantiation
        return T(3.14159265358979323846264338327950288L);
    }

private:
    int range_;
    std::vector<Polynomial<T>> entries_;
};

template <class T>
Field<T> eta_field(int cutoff) {
    using std::pow;
    using std::sqrt;
    Field<T> f(cutoff);
    const T inv_sq2 = T(1) / sqrt(T(2));
    for (int j = -cutoff; j <= cutoff; ++j) {
        if (j == 0) continue;
        T a = pow(T(std::abs(j)), T(0.25L)) * inv_sq2;
        f.at(j).add(Monomial{{j, +1}}, Cx<T>(a));
        f.at(j).add(Monomial{{-j, -1}}, Cx<T>(a));
    }
    return f;
}

template <class T>
Field<T> psi_field(int cutoff) {
    using std::pow;
    using std::sqrt;
    Field<T> f(cutoff);
    const T inv_sq2 = T(1) / sqrt(T(2));
    for (int j = -cutoff; j <= cutoff; ++j) {
        if (j == 0) continue;
        T a = pow(T(std::abs(j)), T(-0.25L)) * inv_sq2;
        f.at(j).add(Monomial{{j, +1}}, Cx<T>(T(0), -a));
        f.at(j).add(Monomial{{-j, -1}}, Cx<T>(T(0), a));
    }
    return f;
}

} // namespace detail

/// H^(2) + H^(3) + H^(4) of the Zakharov Hamiltonian
///   H = 1/2 int psi G(eta) psi dx + 1/2 int eta^2 dx
/// with the Dirichlet-Neumann Taylor terms
///   G0 = |D|,  G1 = -dx eta dx - |D| eta |D|,
///   G2 = -1/2 ( D^2 eta^2 |D| + |D| eta^2 D^2 - 2 |D| eta |D| eta |D| ).
/// All monomials are supported on |j| <= cutoff; the result is real-valued
/// and momentum-conserving.
template <class T>
Polynomial<T> build_zakharov_t(int cutoff, int max_degree = 4) {
    using detail::Field;
    if (cutoff < 1) throw std::domain_error("build_zakharov: cutoff must be >= 1");
    if (max_degree < 2 || max_degree > 4)
        throw std::domain_error("build_zakharov: max_degree in {2,3,4}");

    Field<T> eta = detail::eta_field<T>(cutoff);
    Field<T> psi = detail::psi_field<T>(cutoff);
    auto absD = [](int j) { return std::abs(j); };
    auto Dsq = [](int j) { return double(j) * double(j); };

    // H2 = 1/2 int psi |D| psi + 1/2 int eta^2
    Polynomial<T> H = multiply(psi, psi.multiplier(absD), 0).integral().scaled(T(0.5)) +
                      multiply(eta, eta, 0).integral().scaled(T(0.5));

    if (max_degree >= 3) {
        // G1(eta) psi = -dx(eta dx psi) - |D|(eta |D| psi)
        Field<T> t1 = multiply(eta, psi.dx(), 2 * cutoff).dx();
        Field<T> t2 = multiply(eta, psi.multiplier(absD), 2 * cutoff).multiplier(absD);
        Field<T> G1(2 * cutoff);
        for (int j = -2 * cutoff; j <= 2 * cutoff; ++j)
            G1.at(j) = t1.at(j).scaled(T(-1)) + t2.at(j).scaled(T(-1));
        H += multiply(psi, G1, 0).integral().scaled(T(0.5));
    }

    if (max_degree >= 4) {
        Field<T> eta2 = multiply(eta, eta, 2 * cutoff);
        Field<T> a = multiply(eta2, psi.multiplier(absD), 3 * cutoff).multiplier(Dsq);
        Field<T> b = multiply(eta2, psi.multiplier(Dsq), 3 * cutoff).multiplier(absD);
        Field<T> c =
            multiply(eta, multiply(eta, psi.multiplier(absD), 2 * cutoff).multiplier(absD),
                     3 * cutoff)
                .multiplier(absD);
        Field<T> G2(3 * cutoff);
        for (int j = -3 * cutoff; j <= 3 * cutoff; ++j)
            G2.at(j) = a.at(j).scaled(T(-0.5)) + b.at(j).scaled(T(-0.5)) + c.at(j);
        H += multiply(psi, G2, 0).integral().scaled(T(0.5));
    }

    H.prune();
    H.momentum_conserving = true;
    H.real_valued = true;
    return H;
}

inline Poly build_zakharov(int cutoff, int max_degree = 4) {
    return build_zakharov_t<double>(cutoff, max_degree);
}

/// M_C = int_T i u_x ubar dx = sum_j (-j) u_j ubar_j
inline Poly momentum_hamiltonian(int cutoff) {
    if (cutoff < 1) throw std::domain_error("momentum_hamiltonian: cutoff >= 1");
    Poly M;
    for (int j = -cutoff; j <= cutoff; ++j) {
        if (j == 0) continue;
        M.add(Monomial{{j, +1}, {j, -1}}, Cxd(double(-j)));
    }
    M.momentum_conserving = true;
    M.real_valued = true;
    return M;
}

/// quadratic part sum_j sqrt|j| u_j ubar_j assembled directly
inline Poly dispersion_hamiltonian(int cutoff) {
    Poly H;
    for (int j = -cutoff; j <= cutoff; ++j) {
        if (j == 0) continue;
        H.add(Monomial{{j, +1}, {j, -1}}, Cxd(std::sqrt(double(std::abs(j)))));
    }
    H.momentum_conserving = true;
    H.real_valued = true;
    return H;
}

/// Coefficients of the transport operator expansion:
///   (V1)_n^+ = (V1)_n^- = n |n|^{-1/4} / sqrt 2,
///   (V2)_{n,n}^{+-} = (V2)_{n,n}^{-+} = n |n| / 2.
struct VCoefficients {
    double v1_plus;
    double v1_minus;
    double v2_pm;
    double v2_mp;
};

inline VCoefficients v_expansion_coefficients(std::int64_t n) {
    if (n == 0) throw std::domain_error("v_expansion_coefficients: n != 0");
    double an = double(std::llabs(n));
    double v1 = double(n) * std::pow(an, -0.25) / std::sqrt(2.0);
    double v2 = double(n) * an / 2.0;
    return {v1, v1, v2, v2};
}

} // namespace wwnf
