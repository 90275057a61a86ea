#include "wwnf/resonance.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

namespace wwnf {

void ResonanceTuple::canonicalize() {
    std::sort(pairs.begin(), pairs.end());
}

std::string ResonanceTuple::str() const {
    std::string s = "[";
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        s += (i ? " " : "");
        s += (pairs[i].second > 0 ? "+" : "-");
        s += std::to_string(pairs[i].first);
    }
    return s + "]";
}

std::string to_string(ResonanceClass c) {
    switch (c) {
        case ResonanceClass::NotResonant: return "not_resonant";
        case ResonanceClass::Trivial: return "trivial";
        default: return "non_trivial";
    }
}

ResonanceClass classify(const ResonanceTuple& t) {
    if (t.momentum() != 0) return ResonanceClass::NotResonant;
    if (!t.frequency_sum().is_zero()) return ResonanceClass::NotResonant;

    const int n = t.order();
    std::multiset<std::int64_t> plus, minus;
    for (auto& [j, s] : t.pairs) (s > 0 ? plus : minus).insert(j);
    if (n % 2 == 0 && plus.size() == minus.size() && plus == minus)
        return ResonanceClass::Trivial;
    return ResonanceClass::NonTrivial;
}

std::vector<ResonanceTuple> benjamin_feir(std::int64_t lambda_min, std::int64_t lambda_max,
                                          std::int64_t b_min, std::int64_t b_max) {
    if (b_min < 1) throw std::domain_error("benjamin_feir: b >= 1");
    std::vector<ResonanceTuple> out;
    for (std::int64_t lam = lambda_min; lam <= lambda_max; ++lam) {
        if (lam == 0) continue;
        for (std::int64_t b = b_min; b <= b_max; ++b) {
            ResonanceTuple t;
            t.pairs = {{-lam * b * b, +1},
                       {lam * (b + 1) * (b + 1), -1},
                       {lam * (b * b + b + 1) * (b * b + b + 1), +1},
                       {lam * (b + 1) * (b + 1) * b * b, -1}};
            t.canonicalize();
            out.push_back(std::move(t));
        }
    }
    return out;
}

std::vector<ResonanceTuple> enumerate_low_outside(int order, const TangentialSet& S) {
    if (order < 3 || order > 15)
        throw std::domain_error("enumerate_low_outside: 3 <= order <= 15");
    const std::int64_t ball = std::int64_t(order - 1) * S.max_abs();
    const auto& sites = S.sites();
    const int nu = S.nu();

    std::set<ResonanceTuple> found;

    // choose order-1 entries (site index, sign) from S; the last index is
    // fixed by momentum and may land inside or outside S
    std::vector<int> pick(order - 1, 0);   // site index
    std::vector<int> sign(order, 0);

    // iterate signs outermost (2^order), then site combinations nu^(order-1)
    const std::int64_t sign_combos = std::int64_t(1) << order;
    for (std::int64_t sc = 0; sc < sign_combos; ++sc) {
        for (int i = 0; i < order; ++i) sign[i] = (sc >> i) & 1 ? +1 : -1;
        std::fill(pick.begin(), pick.end(), 0);
        while (true) {
            std::int64_t msum = 0;
            for (int i = 0; i < order - 1; ++i) msum += sign[i] * sites[pick[i]];
            // momentum: sign[last] * j_last = -msum
            std::int64_t j_last = -sign[order - 1] * msum;
            if (j_last != 0 && std::llabs(j_last) <= ball) {
                ResonanceTuple t;
                for (int i = 0; i < order - 1; ++i) t.pairs.push_back({sites[pick[i]], sign[i]});
                t.pairs.push_back({j_last, sign[order - 1]});
                t.canonicalize();
                if (classify(t) == ResonanceClass::NonTrivial) found.insert(std::move(t));
            }
            // next combination
            int pos = order - 2;
            while (pos >= 0 && ++pick[pos] == nu) pick[pos--] = 0;
            if (pos < 0) break;
        }
    }
    return {found.begin(), found.end()};
}

GenericityReport is_generic(const TangentialSet& S, int n_max) {
    GenericityReport rep;
    if (!S.bis_ok()) {
        rep.bis_violation = S.bis_violation();
        return rep;
    }
    double min_abs = std::numeric_limits<double>::infinity();
    for (int n = 3; n <= n_max; ++n) {
        auto bad = enumerate_low_outside(n, S);
        if (!bad.empty()) {
            rep.certificate = bad.front();
            return rep;
        }
        // quantitative floor over the scanned non-resonant tuples: redo the
        // scan tracking min |R| of momentum-constrained non-kernel tuples
        const std::int64_t ball = std::int64_t(n - 1) * S.max_abs();
        const auto& sites = S.sites();
        const int nu = S.nu();
        std::vector<int> pick(n - 1, 0);
        std::vector<int> sign(n, 0);
        const std::int64_t sign_combos = std::int64_t(1) << n;
        for (std::int64_t sc = 0; sc < sign_combos; ++sc) {
            for (int i = 0; i < n; ++i) sign[i] = (sc >> i) & 1 ? +1 : -1;
            std::fill(pick.begin(), pick.end(), 0);
            while (true) {
                std::int64_t msum = 0;
                for (int i = 0; i < n - 1; ++i) msum += sign[i] * sites[pick[i]];
                std::int64_t j_last = -sign[n - 1] * msum;
                if (j_last != 0 && std::llabs(j_last) <= ball) {
                    double r = 0;
                    for (int i = 0; i < n - 1; ++i)
                        r += sign[i] * std::sqrt(double(std::llabs(sites[pick[i]])));
                    r += sign[n - 1] * std::sqrt(double(std::llabs(j_last)));
                    if (std::abs(r) > 1e-9) min_abs = std::min(min_abs, std::abs(r));
                }
                int pos = n - 2;
                while (pos >= 0 && ++pick[pos] == nu) pick[pos--] = 0;
                if (pos < 0) break;
            }
        }
    }
    rep.generic = true;
    rep.min_nonresonant_abs = std::isfinite(min_abs) ? min_abs : 0.0;
    return rep;
}

} // namespace wwnf
