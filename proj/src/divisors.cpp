#include "wwnf/divisors.hpp"
#include "wwnf/numbers.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <numeric>

namespace wwnf {

namespace {

double dot(const std::vector<double>& a, const std::vector<std::int64_t>& b) {
    double s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * double(b[i]);
    return s;
}

std::int64_t l1(const std::vector<std::int64_t>& l) {
    std::int64_t s = 0;
    for (auto x : l) s += std::llabs(x);
    return s;
}

/// enumerate l in Z^nu with |l|_1 <= p
void for_each_l(int nu, int p, const std::function<void(const std::vector<std::int64_t>&)>& fn) {
    std::vector<std::int64_t> l(nu, -p);
    while (true) {
        if (l1(l) <= p) fn(l);
        int pos = nu - 1;
        while (pos >= 0 && ++l[pos] > p) l[pos--] = -p;
        if (pos < 0) break;
    }
}

} // namespace

namespace {

/// the combined tuple cancels pairwise: the signed multiset of absolute
/// wavenumbers carried by (l, (j, sigma), (k, -sigma')) has equal plus and
/// minus parts, so the divisor is identically zero
bool trivial_cancellation(const TangentialSet& S, const std::vector<std::int64_t>& l,
                          int sig, std::int64_t j, int sigp, std::int64_t k) {
    std::multiset<std::int64_t> plus, minus;
    for (int i = 0; i < S.nu(); ++i) {
        auto& side = l[i] > 0 ? plus : minus;
        for (std::int64_t c = 0; c < std::llabs(l[i]); ++c)
            side.insert(std::llabs(S.site(i)));
    }
    (sig > 0 ? plus : minus).insert(std::llabs(j));
    (sigp > 0 ? minus : plus).insert(std::llabs(k));
    return plus == minus;
}

} // namespace

std::string DivisorRecord::str() const {
    std::string s = "l=(";
    for (std::size_t i = 0; i < l.size(); ++i) s += (i ? "," : "") + std::to_string(l[i]);
    s += ") ";
    s += (sigma > 0 ? "+" : "-");
    s += "sqrt|" + std::to_string(j) + "| ";
    s += (sigma_prime > 0 ? "-" : "+");
    s += "sqrt|" + std::to_string(k) + "| = " + std::to_string(value);
    return s;
}

DivisorRecord delta(const TangentialSet& S, const std::vector<std::int64_t>& l, int sigma,
                    std::int64_t j, int sigma_prime, std::int64_t k) {
    if (j == 0 || k == 0) throw std::domain_error("delta: j, k nonzero");
    if (int(l.size()) != S.nu()) throw std::invalid_argument("delta: l size != nu");
    DivisorRecord r;
    r.l = l;
    r.j = j;
    r.k = k;
    r.sigma = sigma;
    r.sigma_prime = sigma_prime;

    std::int64_t vl = 0;
    for (int i = 0; i < S.nu(); ++i) vl += S.site(i) * l[i];
    r.constraint_ok = (vl + j - k) == 0;

    SqrtRational ex;
    for (int i = 0; i < S.nu(); ++i)
        if (l[i] != 0) ex += SqrtRational::sqrt_of(std::llabs(S.site(i)), Rational(l[i]));
    ex += SqrtRational::sqrt_of(std::llabs(j), sigma > 0 ? 1 : -1);
    ex += SqrtRational::sqrt_of(std::llabs(k), sigma_prime > 0 ? -1 : 1);
    r.exact = ex;
    r.value = ex.to_double();
    r.trivial = (sigma == sigma_prime) && (j == k) && l1(l) == 0;
    return r;
}

DivisorMin divisor_min(const TangentialSet& S, int p, std::int64_t j_max,
                       bool stability_probe, int threads) {
    if (p < 0 || p > 6) throw std::domain_error("divisor_min: 0 <= p <= 6");
    // shards split the j range into stripes; merge keeps stripe order so the
    // argmin is deterministic for any thread count
    auto scan_stripe = [&](std::int64_t jmax, std::int64_t j_lo, std::int64_t j_hi) {
        DivisorMin best;
        best.min_abs = std::numeric_limits<double>::infinity();
        best.min_abs_opposite_branch = std::numeric_limits<double>::infinity();
        auto wb = S.omega_bar();
        for_each_l(S.nu(), p, [&](const std::vector<std::int64_t>& l) {
            const double wl = dot(wb, l);
            std::int64_t vl = 0;
            for (int i = 0; i < S.nu(); ++i) vl += S.site(i) * l[i];
            const std::int64_t labs = l1(l);
            for (int sig = -1; sig <= 1; sig += 2) {
                for (int sigp = -1; sigp <= 1; sigp += 2) {
                    for (std::int64_t j = j_lo; j <= j_hi; ++j) {
                        if (j == 0 || S.contains(j)) continue;
                        // momentum v.l + j - k = 0 eliminates k; both indices
                        // range over the normal sites S^c only (tangential
                        // collisions are trivial resonances, not divisors)
                        std::int64_t k = vl + j;
                        if (k == 0 || S.contains(k) || std::llabs(k) > jmax) continue;
                        bool trivial = (sig == sigp) && (j == k) && labs == 0;
                        if (trivial) continue;
                        double val = wl + sig * std::sqrt(double(std::llabs(j))) -
                                     sigp * std::sqrt(double(std::llabs(k)));
                        double a = std::abs(val);
                        if (a < 1e-9 && trivial_cancellation(S, l, sig, j, sigp, k)) {
                            ++best.trivial_pattern_skipped;
                            continue;
                        }
                        ++best.scanned;
                        if (a < best.min_abs) {
                            best.min_abs = a;
                            best.argmin = DivisorRecord{l, j, k, sig, sigp, val,
                                                        SqrtRational{}, true, false};
                        }
                        // lower-bound proof branch: sigma = -sigma', |l| = 1,
                        // opposing signs, site modulus dominating j and k
                        if (labs == 1 && sig == -sigp) {
                            int site_i = 0;
                            for (int i = 0; i < S.nu(); ++i)
                                if (l[i] != 0) site_i = i;
                            double sgn_l = l[site_i] > 0 ? 1.0 : -1.0;
                            std::int64_t sabs = std::llabs(S.site(site_i));
                            if (sgn_l != double(sig) && sabs >= std::llabs(j) &&
                                sabs >= std::llabs(k)) {
                                best.opposite_branch_seen = true;
                                best.min_abs_opposite_branch =
                                    std::min(best.min_abs_opposite_branch, a);
                            }
                        }
                    }
                }
            }
        });
        return best;
    };
    auto scan = [&](std::int64_t jmax) {
        const int n = std::max(1, threads);
        std::vector<std::future<DivisorMin>> futs;
        std::vector<DivisorMin> parts;
        const std::int64_t stripe = (2 * jmax + n - 1) / n;
        for (int t = 0; t < n; ++t) {
            std::int64_t lo = -jmax + t * stripe;
            std::int64_t hi = std::min(jmax, lo + stripe - 1);
            if (lo > hi) break;
            if (n == 1)
                parts.push_back(scan_stripe(jmax, lo, hi));
            else
                futs.push_back(std::async(std::launch::async, scan_stripe, jmax, lo, hi));
        }
        for (auto& f : futs) parts.push_back(f.get());
        DivisorMin best = parts.front();
        for (std::size_t i = 1; i < parts.size(); ++i) {
            const auto& p2 = parts[i];
            best.scanned += p2.scanned;
            best.trivial_pattern_skipped += p2.trivial_pattern_skipped;
            if (p2.min_abs < best.min_abs) {
                best.min_abs = p2.min_abs;
                best.argmin = p2.argmin;
            }
            if (p2.opposite_branch_seen) {
                best.opposite_branch_seen = true;
                best.min_abs_opposite_branch =
                    std::min(best.min_abs_opposite_branch, p2.min_abs_opposite_branch);
            }
        }
        return best;
    };
    DivisorMin out = scan(j_max);
    // exact shadow of the argmin
    out.argmin = delta(S, out.argmin.l, out.argmin.sigma, out.argmin.j,
                       out.argmin.sigma_prime, out.argmin.k);
    if (stability_probe) {
        DivisorMin doubled = scan(2 * j_max);
        out.doubled_range_change =
            std::abs(doubled.min_abs - out.min_abs) / std::max(out.min_abs, 1e-300);
    }
    return out;
}

std::string to_string(MelnikovFamily f) {
    switch (f) {
        case MelnikovFamily::G0_0: return "g0";
        case MelnikovFamily::G0_1: return "g1";
        case MelnikovFamily::G0_2: return "g2";
        case MelnikovFamily::Lambda0: return "lambda0";
        case MelnikovFamily::P: return "p";
        case MelnikovFamily::Rplus: return "rplus";
        default: return "rminus";
    }
}

std::optional<MelnikovFamily> melnikov_family_from_string(const std::string& s) {
    if (s == "g0") return MelnikovFamily::G0_0;
    if (s == "g1") return MelnikovFamily::G0_1;
    if (s == "g2") return MelnikovFamily::G0_2;
    if (s == "lambda0") return MelnikovFamily::Lambda0;
    if (s == "p") return MelnikovFamily::P;
    if (s == "rplus") return MelnikovFamily::Rplus;
    if (s == "rminus") return MelnikovFamily::Rminus;
    return std::nullopt;
}

namespace {

struct MembershipContext {
    const FrequencyBox& box;
    std::vector<double> omega;
    std::vector<double> zeta;
    double m1 = 0;
    std::vector<double> omega_shift; // (omega_bar - eps^2 m1 v) + eps^2 A zeta, G0_1/2
    double tau;
    double gamma, gamma_star;

    MembershipContext(const FrequencyBox& b, const std::vector<double>& om,
                      double tau_override, double gamma_scale)
        : box(b), omega(om) {
        zeta = amp_freq(b.S, om, b.eps);
        Corrections corr = corrections(b.S, zeta, b.eps, 1);
        m1 = corr.m1;
        auto wb = b.S.omega_bar();
        auto freq = freq_amp(b.S, zeta, b.eps);
        omega_shift.resize(b.S.nu());
        for (int i = 0; i < b.S.nu(); ++i)
            omega_shift[i] = freq[i] - b.eps * b.eps * m1 * double(b.S.site(i));
        tau = tau_override > 0 ? tau_override : double(b.tau());
        gamma = b.gamma() * gamma_scale;
        gamma_star = b.gamma_star() * gamma_scale;
    }

    double d_leading(std::int64_t j) const {
        return std::sqrt(double(std::llabs(j))) +
               box.eps * box.eps * (m1 + c_correction(box.S, zeta, j)) * double(j);
    }
};

} // namespace

MelnikovResult melnikov_member(const FrequencyBox& box, const std::vector<double>& omega,
                               MelnikovFamily family, int l_max, std::int64_t j_max) {
    MembershipContext ctx(box, omega, -1, 1.0);
    MelnikovResult res;
    res.worst_margin = std::numeric_limits<double>::infinity();
    const auto& S = box.S;
    const double om_inf =
        *std::max_element(omega.begin(), omega.end(),
                          [](double a, double b) { return std::abs(a) < std::abs(b); });
    std::int64_t v_inf = 0;
    for (int i = 0; i < S.nu(); ++i) v_inf = std::max<std::int64_t>(v_inf, std::llabs(S.site(i)));
    const double brexit_sum_c = 1.0 / (4 * (std::abs(om_inf) + 1));
    const double brexit_mom_c = 1.0 / double(v_inf);
    res.brexit_constant = brexit_sum_c;

    auto consider = [&](const std::vector<std::int64_t>& l, std::int64_t j, std::int64_t k,
                        int sig, int sigp, double value, double thr) {
        ++res.checked;
        double margin = std::abs(value) - thr;
        if (margin < res.worst_margin) {
            res.worst_margin = margin;
            res.worst = DivisorRecord{l, j, k, sig, sigp, value, SqrtRational{}, true, false};
        }
        if (margin < 0) {
            res.pass = false;
            // constructive necessary condition for a nonempty resonant set
            double la = double(l1(l));
            if (family == MelnikovFamily::Rplus) {
                double sums = std::sqrt(double(std::llabs(j))) +
                              std::sqrt(double(std::llabs(k)));
                if (la < brexit_sum_c * sums) res.brexit_ok = false;
            } else if (family == MelnikovFamily::P ||
                       family == MelnikovFamily::Lambda0) {
                if (la < brexit_mom_c * double(std::llabs(j))) res.brexit_ok = false;
            }
        }
    };

    for_each_l(S.nu(), l_max, [&](const std::vector<std::int64_t>& l) {
        const std::int64_t la = l1(l);
        const double lfac = std::pow(std::max<std::int64_t>(1, la), -ctx.tau);
        std::int64_t vl = 0;
        for (int i = 0; i < S.nu(); ++i) vl += S.site(i) * l[i];
        const double wl = dot(ctx.omega, l);
        const double wsl = dot(ctx.omega_shift, l);

        switch (family) {
            case MelnikovFamily::G0_0: {
                if (la == 0) break;
                consider(l, 0, 0, 1, 1, wl, ctx.gamma * lfac);
                break;
            }
            case MelnikovFamily::G0_1: {
                if (la == 0) break;
                consider(l, 0, 0, 1, 1, wsl, ctx.gamma * lfac);
                break;
            }
            case MelnikovFamily::G0_2: {
                for (int sig = -1; sig <= 1; sig += 2)
                    for (int sigp = -1; sigp <= 1; sigp += 2)
                        for (std::int64_t j = -j_max; j <= j_max; ++j) {
                            if (j == 0 || S.contains(j)) continue;
                            std::int64_t k = vl + j;
                            if (k == 0 || S.contains(k) || std::llabs(k) > j_max) continue;
                            if (la == 0 && j == k && sig == sigp) continue;
                            double v = wsl + sig * std::sqrt(double(std::llabs(j))) -
                                       sigp * std::sqrt(double(std::llabs(k)));
                            consider(l, j, k, sig, sigp, v, ctx.gamma * lfac);
                        }
                break;
            }
            case MelnikovFamily::Lambda0: {
                // v.l + j = 0, j in S^c, (l, j) != 0
                std::int64_t j = -vl;
                if (j == 0 || S.contains(j)) break;
                consider(l, j, 0, 1, 1, wl + box.eps * box.eps * ctx.m1 * double(j),
                         2 * ctx.gamma * lfac);
                break;
            }
            case MelnikovFamily::P: {
                std::int64_t j = -vl;
                if (j == 0 || S.contains(j)) break;
                for (int sig = -1; sig <= 1; sig += 2)
                    consider(l, sig * j, 0, sig, sig, wl + sig * ctx.d_leading(sig * j),
                             2 * ctx.gamma * lfac);
                break;
            }
            case MelnikovFamily::Rplus: {
                // complete range: a failing divisor needs sqrt|j|+sqrt|k| bounded
                double bound = std::abs(om_inf) * double(la) + 1.0;
                std::int64_t jcap = std::min<std::int64_t>(
                    j_max, std::int64_t(bound * bound) + 1);
                for (int sig = -1; sig <= 1; sig += 2)
                    for (std::int64_t j = -jcap; j <= jcap; ++j) {
                        if (j == 0 || S.contains(j)) continue;
                        std::int64_t k = vl + j;
                        if (k == 0 || S.contains(k) || std::llabs(k) > jcap) continue;
                        double v = wl + sig * (ctx.d_leading(sig * j) +
                                               ctx.d_leading(-sig * k));
                        consider(l, j, k, sig, -sig, v, 2 * ctx.gamma * lfac);
                    }
                break;
            }
            case MelnikovFamily::Rminus: {
                for (int sig = -1; sig <= 1; sig += 2)
                    for (std::int64_t j = -j_max; j <= j_max; ++j) {
                        if (j == 0 || S.contains(j)) continue;
                        std::int64_t k = vl + j;
                        if (k == 0 || k == j || S.contains(k) || std::llabs(k) > j_max)
                            continue;
                        double v = wl + sig * (ctx.d_leading(sig * j) -
                                               ctx.d_leading(sig * k));
                        consider(l, j, k, sig, sig, v, 2 * ctx.gamma_star * lfac);
                    }
                res.truncated = true;
                break;
            }
        }
    });

    if (family == MelnikovFamily::Rminus) {
        res.coverage_note =
            "R- scan exhaustive for |j|,|k| <= " + std::to_string(j_max) +
            "; same-sign tail covered by the Lambda0/Q test per the membership "
            "reduction (threshold C <l>^{2 nu+6} gamma^-2)";
    }
    return res;
}

MeasureTable measure_estimate(const TangentialSet& S, double a, MelnikovFamily family,
                              const std::vector<double>& eps_list, long long samples,
                              std::uint64_t seed, int l_max, std::int64_t j_max,
                              int threads, double tau_override, double gamma_scale) {
    if (samples < 1) throw std::domain_error("measure_estimate: samples >= 1");
    MeasureTable table;
    table.predicted_slope = a;
    const int nu = S.nu();
    auto wb = S.omega_bar();
    TwistData td = twist_matrix(S);
    auto w = S.w_vector();
    constexpr double kPi = 3.14159265358979323846;

    const bool fast = family == MelnikovFamily::G0_0 || family == MelnikovFamily::G0_1 ||
                      family == MelnikovFamily::Lambda0;

    for (double eps : eps_list) {
        FrequencyBox box(S, eps, a);
        const double tau = tau_override > 0 ? tau_override : double(box.tau());
        const double gamma = box.gamma() * gamma_scale;
        const double eps2 = eps * eps;

        // per-l test data: |offset + eps^2 (g . zeta)| < thr excludes the sample
        struct LTest {
            double offset;
            std::vector<double> g;
            double thr;
        };
        std::vector<LTest> tests;
        if (fast) {
            for_each_l(nu, l_max, [&](const std::vector<std::int64_t>& l) {
                std::int64_t la = l1(l);
                if (la == 0) return;
                std::int64_t vl = 0;
                double wbl = 0;
                for (int d = 0; d < nu; ++d) {
                    vl += S.site(d) * l[d];
                    wbl += wb[d] * double(l[d]);
                }
                LTest t;
                t.offset = wbl;
                t.g.assign(nu, 0.0);
                for (int d = 0; d < nu; ++d)
                    for (int e = 0; e < nu; ++e) t.g[d] += td.A(e, d) * double(l[e]);
                double thr_scale = 1.0;
                if (family == MelnikovFamily::G0_1) {
                    // (omega_bar - eps^2 m1 v).l + eps^2 A zeta.l
                    for (int d = 0; d < nu; ++d)
                        t.g[d] -= double(vl) * double(w[d]) / kPi;
                } else if (family == MelnikovFamily::Lambda0) {
                    // omega.l + eps^2 m1 j with j = -v.l, j in S^c
                    std::int64_t j = -vl;
                    if (j == 0 || S.contains(j)) return;
                    for (int d = 0; d < nu; ++d)
                        t.g[d] += double(j) * double(w[d]) / kPi;
                    thr_scale = 2.0;
                }
                t.thr = thr_scale * gamma * std::pow(double(la), -tau);
                // reachability over zeta in [1,2]^nu
                double lo = 0, hi = 0;
                for (int d = 0; d < nu; ++d) {
                    lo += t.g[d] * (t.g[d] >= 0 ? 1.0 : 2.0);
                    hi += t.g[d] * (t.g[d] >= 0 ? 2.0 : 1.0);
                }
                if (t.offset + eps2 * lo - t.thr > 0 || t.offset + eps2 * hi + t.thr < 0)
                    return; // zero unreachable, test can never fail
                tests.push_back(std::move(t));
            });
        }

        auto worker = [&](long long lo, long long hi) {
            long long excluded = 0;
            std::vector<double> zeta(nu);
            for (long long i = lo; i < hi; ++i) {
                for (int d = 0; d < nu; ++d)
                    zeta[d] = 1.0 + counter_rng_uniform(seed, d, std::uint64_t(i));
                bool pass = true;
                if (fast) {
                    for (const auto& t : tests) {
                        double gz = 0;
                        for (int d = 0; d < nu; ++d) gz += t.g[d] * zeta[d];
                        if (std::abs(t.offset + eps2 * gz) < t.thr) {
                            pass = false;
                            break;
                        }
                    }
                } else {
                    auto omega = freq_amp(S, zeta, eps);
                    pass = melnikov_member(box, omega, family, l_max, j_max).pass;
                }
                if (!pass) ++excluded;
            }
            return excluded;
        };

        long long excluded = 0;
        if (threads <= 1) {
            excluded = worker(0, samples);
        } else {
            std::vector<std::future<long long>> futs;
            long long chunk = (samples + threads - 1) / threads;
            for (int t = 0; t < threads; ++t) {
                long long lo = t * chunk, hi = std::min(samples, lo + chunk);
                if (lo >= hi) break;
                futs.push_back(std::async(std::launch::async, worker, lo, hi));
            }
            for (auto& f : futs) excluded += f.get(); // fixed merge order
        }

        MeasureRow row;
        row.eps = eps;
        row.samples = samples;
        row.excluded = excluded;
        row.fraction = double(excluded) / double(samples);
        double se = std::sqrt(std::max(row.fraction * (1 - row.fraction), 0.0) /
                              double(samples));
        row.ci_lo = std::max(0.0, row.fraction - 1.96 * se);
        row.ci_hi = std::min(1.0, row.fraction + 1.96 * se);
        table.rows.push_back(row);
    }

    // log-log slope over rows with positive fraction
    std::vector<double> xs, ys;
    for (auto& r : table.rows)
        if (r.fraction > 0) {
            xs.push_back(std::log(r.eps));
            ys.push_back(std::log(r.fraction));
        }
    if (xs.size() >= 2) {
        double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / xs.size();
        double my = std::accumulate(ys.begin(), ys.end(), 0.0) / ys.size();
        double sxx = 0, sxy = 0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            sxx += (xs[i] - mx) * (xs[i] - mx);
            sxy += (xs[i] - mx) * (ys[i] - my);
        }
        if (sxx > 0) {
            table.slope = sxy / sxx;
            table.slope_defined = true;
        }
    }
    return table;
}

} // namespace wwnf
