#pragma once

#include <cmath>

namespace wwnf {

/// Minimal complex type usable with any real scalar (double, long double,
/// boost multiprecision floats). std::complex is only specified for the
/// builtin floating types, which rules it out for the extended-precision
/// polynomial instantiation.
template <class T>
struct Cx {
    T re{};
    T im{};

    Cx() = default;
    Cx(T r) : re(r) {}
    Cx(T r, T i) : re(r), im(i) {}

    friend Cx operator+(const Cx& a, const Cx& b) { return {a.re + b.re, a.im + b.im}; }
    friend Cx operator-(const Cx& a, const Cx& b) { return {a.re - b.re, a.im - b.im}; }
    friend Cx operator-(const Cx& a) { return {-a.re, -a.im}; }
    friend Cx operator*(const Cx& a, const Cx& b) {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    friend Cx operator*(const Cx& a, const T& s) { return {a.re * s, a.im * s}; }
    friend Cx operator*(const T& s, const Cx& a) { return a * s; }
    friend Cx operator/(const Cx& a, const T& s) { return {a.re / s, a.im / s}; }
    friend Cx operator/(const Cx& a, const Cx& b) {
        T d = b.re * b.re + b.im * b.im;
        return {(a.re * b.re + a.im * b.im) / d, (a.im * b.re - a.re * b.im) / d};
    }
    Cx& operator+=(const Cx& b) { re += b.re; im += b.im; return *this; }
    Cx& operator-=(const Cx& b) { re -= b.re; im -= b.im; return *this; }
    Cx& operator*=(const Cx& b) { *this = *this * b; return *this; }

    friend Cx conj(const Cx& a) { return {a.re, -a.im}; }
    friend T abs2(const Cx& a) { return a.re * a.re + a.im * a.im; }
    friend T abs(const Cx& a) {
        using std::sqrt;
        return sqrt(abs2(a));
    }
    static Cx i() { return {T(0), T(1)}; }
};

using Cxd = Cx<double>;

} // namespace wwnf
