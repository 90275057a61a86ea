#pragma once

#include "wwnf/complex.hpp"
#include "wwnf/monomial.hpp"
#include "wwnf/sqrt_rational.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <unordered_map>
#include <vector>

namespace wwnf {

/// Sparse degree-graded polynomial over canonical Fourier monomials.
/// Coefficients are stored once per canonical monomial with multiplicities
/// absorbed: H = sum_m c_m * m.
template <class T>
class Polynomial {
public:
    using Coeff = Cx<T>;
    using MonoMap = std::unordered_map<Monomial, Coeff, MonomialHash>;

    static constexpr double kDefaultPruneRel = 1e-14;

    Polynomial() = default;

    bool momentum_conserving = false; // advisory flags set by builders,
    bool real_valued = false;         // verified by the check_* methods

    void add(const Monomial& m, const Coeff& c) {
        auto& deg = by_degree_[m.degree()];
        auto it = deg.find(m);
        if (it == deg.end())
            deg.emplace(m, c);
        else
            it->second += c;
    }

    Coeff coeff(const Monomial& m) const {
        auto d = by_degree_.find(m.degree());
        if (d == by_degree_.end()) return Coeff{};
        auto it = d->second.find(m);
        return it == d->second.end() ? Coeff{} : it->second;
    }

    bool empty() const {
        for (auto& [d, mp] : by_degree_)
            if (!mp.empty()) return false;
        return true;
    }

    std::size_t term_count() const {
        std::size_t n = 0;
        for (auto& [d, mp] : by_degree_) n += mp.size();
        return n;
    }

    int min_degree() const {
        for (auto& [d, mp] : by_degree_)
            if (!mp.empty()) return d;
        return 0;
    }
    int max_degree() const {
        int md = 0;
        for (auto& [d, mp] : by_degree_)
            if (!mp.empty()) md = d;
        return md;
    }

    const std::map<int, MonoMap>& by_degree() const { return by_degree_; }

    template <class Fn>
    void for_each(Fn&& fn) const {
        for (auto& [d, mp] : by_degree_)
            for (auto& [m, c] : mp) fn(m, c);
    }

    /// largest |coefficient| within one degree block
    T max_abs(int degree) const {
        T mx(0);
        auto d = by_degree_.find(degree);
        if (d == by_degree_.end()) return mx;
        for (auto& [m, c] : d->second) mx = std::max(mx, abs(c));
        return mx;
    }
    T max_abs() const {
        T mx(0);
        for (auto& [d, mp] : by_degree_) mx = std::max(mx, max_abs(d));
        return mx;
    }

    /// drop coefficients below rel * (largest same-degree coefficient)
    void prune(double rel = kDefaultPruneRel) {
        for (auto& [d, mp] : by_degree_) {
            T mx(0);
            for (auto& [m, c] : mp) mx = std::max(mx, abs(c));
            T thr = mx * T(rel);
            for (auto it = mp.begin(); it != mp.end();) {
                if (abs(it->second) <= thr)
                    it = mp.erase(it);
                else
                    ++it;
            }
        }
        for (auto it = by_degree_.begin(); it != by_degree_.end();)
            it = it->second.empty() ? by_degree_.erase(it) : std::next(it);
    }

    Polynomial& operator+=(const Polynomial& o) {
        o.for_each([&](const Monomial& m, const Coeff& c) { add(m, c); });
        momentum_conserving = momentum_conserving && o.momentum_conserving;
        real_valued = real_valued && o.real_valued;
        return *this;
    }
    friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }

    Polynomial scaled(const Coeff& s) const {
        Polynomial r;
        r.momentum_conserving = momentum_conserving;
        r.real_valued = false;
        for_each([&](const Monomial& m, const Coeff& c) { r.add(m, c * s); });
        return r;
    }
    Polynomial scaled(const T& s) const {
        Polynomial r = scaled(Coeff(s));
        r.real_valued = real_valued;
        return r;
    }

    /// keep only the degrees in [lo, hi]
    Polynomial degree_slice(int lo, int hi) const {
        Polynomial r;
        r.momentum_conserving = momentum_conserving;
        r.real_valued = real_valued;
        for (auto& [d, mp] : by_degree_)
            if (d >= lo && d <= hi)
                for (auto& [m, c] : mp) r.add(m, c);
        return r;
    }

    /// keep monomials satisfying a predicate
    template <class Pred>
    Polynomial filtered(Pred&& keep) const {
        Polynomial r;
        r.momentum_conserving = momentum_conserving;
        for_each([&](const Monomial& m, const Coeff& c) {
            if (keep(m)) r.add(m, c);
        });
        return r;
    }

    /// max |sum sigma_i j_i| over stored monomials (0 for momentum-conserving)
    std::int64_t check_momentum() const {
        std::int64_t worst = 0;
        for_each([&](const Monomial& m, const Coeff&) {
            worst = std::max<std::int64_t>(worst, std::llabs(m.momentum()));
        });
        return worst;
    }

    /// max |conj(coeff(m)) - coeff(conj m)| (0 for real-valued Hamiltonians)
    T check_reality() const {
        T worst(0);
        for_each([&](const Monomial& m, const Coeff& c) {
            worst = std::max(worst, abs(conj(c) - coeff(m.conjugate())));
        });
        return worst;
    }

    /// value at a state given by evaluate(mode) -> Cx<T> (u_j^+, conjugates derived)
    template <class StateFn>
    Coeff evaluate(StateFn&& uplus) const {
        Coeff total{};
        for_each([&](const Monomial& m, const Coeff& c) {
            Coeff v = c;
            for (const Mode& md : m) {
                Coeff u = uplus(md.j);
                v *= (md.sigma > 0) ? u : conj(u);
            }
            total += v;
        });
        return total;
    }

private:
    std::map<int, MonoMap> by_degree_;
};

/// tally of degree blocks dropped by truncated compositions
struct TruncationAudit {
    long long blocks_skipped = 0; // (deg F, deg H) block pairs above the cap
    long long terms_bound = 0;    // upper bound on the monomial pairs dropped
};

/// {F,H} = (1/i) sum_k ( d_{u_k}H d_{ubar_k}F - d_{ubar_k}H d_{u_k}F ),
/// the complex Poisson bracket with the sign convention that makes
/// {H2, u_{j1}^{s1}...} = -i (sum s_i sqrt|j_i|) u_{j1}^{s1}... hold.
/// Degrees combine as deg F + deg H - 2; blocks above max_degree are skipped
/// (and tallied when an audit is supplied).
template <class T>
Polynomial<T> poisson_bracket(const Polynomial<T>& F, const Polynomial<T>& H,
                              int max_degree = std::numeric_limits<int>::max(),
                              TruncationAudit* audit = nullptr) {
    using Coeff = Cx<T>;
    Polynomial<T> R;
    R.momentum_conserving = F.momentum_conserving && H.momentum_conserving;
    const Coeff minus_i{T(0), T(-1)};

    for (auto& [dF, mpF] : F.by_degree()) {
        for (auto& [dH, mpH] : H.by_degree()) {
            if (dF + dH - 2 > max_degree || dF + dH - 2 < 0) {
                if (audit && dF + dH - 2 > max_degree) {
                    ++audit->blocks_skipped;
                    audit->terms_bound +=
                        static_cast<long long>(mpF.size()) * mpH.size();
                }
                continue;
            }
            // bucket H-monomials by wavenumber so only pairs sharing a mode meet
            std::unordered_map<std::int32_t, std::vector<const std::pair<const Monomial, Coeff>*>>
                buckets;
            for (auto& entry : mpH) {
                const Monomial& m = entry.first;
                std::int32_t last = 0;
                for (const Mode& md : m) {
                    if (md.j != last) buckets[md.j].push_back(&entry);
                    last = md.j;
                }
            }
            for (auto& [mF, cF] : mpF) {
                std::int32_t lastj = 0;
                for (int pos = 0; pos < mF.degree(); ++pos) {
                    const std::int32_t k = mF[pos].j;
                    if (k == lastj) continue; // distinct wavenumbers only
                    lastj = k;
                    auto bk = buckets.find(k);
                    if (bk == buckets.end()) continue;
                    const int cntF_plus = mF.count({k, +1});
                    const int cntF_minus = mF.count({k, -1});
                    // positions of the first (k,+-) in mF, for removal
                    int posFp = -1, posFm = -1;
                    for (int i = 0; i < mF.degree(); ++i) {
                        if (mF[i].j == k && mF[i].sigma > 0 && posFp < 0) posFp = i;
                        if (mF[i].j == k && mF[i].sigma < 0 && posFm < 0) posFm = i;
                    }
                    for (auto* entry : bk->second) {
                        const Monomial& mH = entry->first;
                        const Coeff& cH = entry->second;
                        const int cntH_plus = mH.count({k, +1});
                        const int cntH_minus = mH.count({k, -1});
                        Coeff base = minus_i * cF * cH;
                        if (cntH_plus && cntF_minus) {
                            int posHp = -1;
                            for (int i = 0; i < mH.degree(); ++i)
                                if (mH[i].j == k && mH[i].sigma > 0) { posHp = i; break; }
                            R.add(Monomial::merged(mH.without(posHp), mF.without(posFm)),
                                  base * T(cntH_plus * cntF_minus));
                        }
                        if (cntH_minus && cntF_plus) {
                            int posHm = -1;
                            for (int i = 0; i < mH.degree(); ++i)
                                if (mH[i].j == k && mH[i].sigma < 0) { posHm = i; break; }
                            R.add(Monomial::merged(mH.without(posHm), mF.without(posFp)),
                                  base * T(-cntH_minus * cntF_plus));
                        }
                    }
                }
            }
        }
    }
    R.prune();
    return R;
}

/// exp(ad_F) H truncated at max_degree: H + {F,H} + {F,{F,H}}/2! + ...
/// Matches the Taylor expansion of H composed with the time-one flow of F.
template <class T>
Polynomial<T> lie_transform(const Polynomial<T>& F, const Polynomial<T>& H,
                            int max_degree, TruncationAudit* audit = nullptr) {
    Polynomial<T> out = H.degree_slice(0, max_degree);
    Polynomial<T> cur = out;
    T fact(1);
    for (int k = 1; k <= 2 * max_degree + 2; ++k) {
        cur = poisson_bracket(F, cur, max_degree, audit);
        if (cur.empty()) break;
        fact *= T(k);
        out += cur.scaled(T(1) / fact);
    }
    out.momentum_conserving = F.momentum_conserving && H.momentum_conserving;
    out.prune();
    return out;
}

using Poly = Polynomial<double>;

} // namespace wwnf
