#include "wwnf/dynamics.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace wwnf {

namespace {

constexpr double kPi = 3.14159265358979323846;

double fit_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
    double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / xs.size();
    double my = std::accumulate(ys.begin(), ys.end(), 0.0) / ys.size();
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    return sxx > 0 ? sxy / sxx : 0.0;
}

} // namespace

Rhs rhs_full(const Poly& H, int cutoff) {
    // flatten the coefficient map once; evaluation walks the flat list
    struct Term {
        Cxd c;
        int n;
        std::array<Mode, Monomial::kCapacity> modes;
    };
    std::vector<std::pair<Monomial, Cxd>> collected;
    H.for_each([&](const Monomial& m, const Cxd& c) { collected.push_back({m, c}); });
    // canonical order: evaluation must not depend on map iteration history
    std::sort(collected.begin(), collected.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    auto terms = std::make_shared<std::vector<Term>>();
    for (auto& [m, c] : collected) {
        Term t;
        t.c = c;
        t.n = m.degree();
        for (int i = 0; i < m.degree(); ++i) t.modes[i] = m[i];
        terms->push_back(t);
    }
    return [terms, cutoff](const SpectralState& s, SpectralState& out) {
        for (auto& c : out.raw()) c = Cxd{};
        out.t = 1.0; // dt/dt
        for (const auto& t : *terms) {
            bool inside = true;
            for (int i = 0; i < t.n; ++i)
                if (std::abs(t.modes[i].j) > cutoff) { inside = false; break; }
            if (!inside) continue;
            // product of all factors; zdot_j collects -i c * (product / zbar_j)
            for (int p = 0; p < t.n; ++p) {
                if (t.modes[p].sigma > 0) continue;
                Cxd prod = t.c;
                for (int q = 0; q < t.n; ++q) {
                    if (q == p) continue;
                    const Cxd& z = s.at(t.modes[q].j);
                    prod *= (t.modes[q].sigma > 0) ? z : conj(z);
                }
                out.at(t.modes[p].j) += Cxd(0, -1) * prod;
            }
        }
    };
}

Poly integrable_quartic(int cutoff) {
    Poly H;
    for (int k = -cutoff; k <= cutoff; ++k) {
        if (k == 0) continue;
        double a3 = std::pow(std::abs(k), 3);
        H.add(Monomial{{k, +1}, {k, +1}, {k, -1}, {k, -1}}, Cxd(a3 / (4 * kPi)));
        if (-k >= -cutoff && -k <= cutoff)
            H.add(Monomial{{k, +1}, {k, -1}, {-k, +1}, {-k, -1}}, Cxd(-a3 / (2 * kPi)));
    }
    for (int k1 = -cutoff; k1 <= cutoff; ++k1) {
        if (k1 == 0) continue;
        for (int k2 = -cutoff; k2 <= cutoff; ++k2) {
            if (k2 == 0 || std::abs(k2) >= std::abs(k1)) continue;
            if ((k1 > 0) != (k2 > 0)) continue;
            double c = std::abs(k1) * double(k2) * double(k2) / kPi;
            H.add(Monomial{{k1, +1}, {k1, -1}, {k2, +1}, {k2, -1}}, Cxd(c));
            H.add(Monomial{{-k1, +1}, {-k1, -1}, {k2, +1}, {k2, -1}}, Cxd(-c));
        }
    }
    H.momentum_conserving = true;
    H.real_valued = true;
    return H;
}

Rhs rhs_bnf(int cutoff) {
    return [cutoff](const SpectralState& s, SpectralState& out) {
        const int K = cutoff;
        out.t = 1.0;
        // action moments used by the transport term
        std::vector<double> act(2 * K, 0.0);
        for (int j = -K; j <= K; ++j)
            if (j != 0) act[s.index(j)] = abs2(s.at(j));
        for (int n = -K; n <= K; ++n) {
            if (n == 0) continue;
            const double an = std::abs(n);
            double transport = 0; // sum_{|j| < |n|} j |j| |z_j|^2
            for (int j = -K; j <= K; ++j)
                if (j != 0 && std::abs(j) < an) transport += double(j) * std::abs(j) * act[s.index(j)];
            double tail = 0; // sum_{|k| > |n|, sign k = sign n} |k| (|z_-k|^2 - |z_k|^2)
            for (int k = -K; k <= K; ++k) {
                if (k == 0 || std::abs(k) <= an) continue;
                if ((k > 0) != (n > 0)) continue;
                tail += std::abs(k) * (act[s.index(-k)] - act[s.index(k)]);
            }
            const Cxd zn = s.at(n);
            double rate = std::sqrt(an)                      // -i omega_n z_n
                          + transport * double(n) / kPi      // transport term
                          + an * an * an *
                                (act[s.index(n)] - 2 * act[s.index(-n)]) / (2 * kPi)
                          - tail * an * an / kPi;
            out.at(n) = Cxd(0, -1) * zn * rate;
        }
    };
}

Trajectory integrate(const Rhs& rhs, const SpectralState& s0, double T, double tol,
                     int snapshots) {
    if (tol < 1e-12 || tol > 1e-6)
        throw std::domain_error("integrate: tol in [1e-12, 1e-6]");
    // Dormand-Prince 5(4) tableau
    static const double A[7][6] = {
        {},
        {1.0 / 5},
        {3.0 / 40, 9.0 / 40},
        {44.0 / 45, -56.0 / 15, 32.0 / 9},
        {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
        {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
        {35.0 / 384, 0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84}};
    static const double B5[7] = {35.0 / 384,     0, 500.0 / 1113, 125.0 / 192,
                                 -2187.0 / 6784, 11.0 / 84, 0};
    static const double B4[7] = {5179.0 / 57600,  0,           7571.0 / 16695,
                                 393.0 / 640,     -92097.0 / 339200,
                                 187.0 / 2100,    1.0 / 40};

    Trajectory traj;
    SpectralState y = s0;
    double t = 0, h = std::min(0.1, T);
    const double h_min = 1e-12;
    traj.times.push_back(0);
    traj.states.push_back(y);
    const double snap_dt = T / std::max(1, snapshots);
    double next_snap = snap_dt;

    std::vector<SpectralState> k(7, s0);
    SpectralState ytmp = s0, y5 = s0;

    while (t < T) {
        h = std::min(h, T - t);
        rhs(y, k[0]);
        for (int stage = 1; stage < 7; ++stage) {
            ytmp = y;
            for (int i = 0; i < y.dim(); ++i) {
                Cxd acc{};
                for (int s2 = 0; s2 < stage; ++s2)
                    acc += k[s2].raw()[i] * A[stage][s2];
                ytmp.raw()[i] += acc * h;
            }
            rhs(ytmp, k[stage]);
        }
        double err2 = 0;
        y5 = y;
        for (int i = 0; i < y.dim(); ++i) {
            Cxd acc5{}, acc4{};
            for (int s2 = 0; s2 < 7; ++s2) {
                acc5 += k[s2].raw()[i] * B5[s2];
                acc4 += k[s2].raw()[i] * B4[s2];
            }
            y5.raw()[i] += acc5 * h;
            err2 += abs2((acc5 - acc4) * h);
        }
        double err = std::sqrt(err2 / std::max(1, y.dim()));
        if (err <= tol) {
            t += h;
            y = y5;
            y.t = t;
            ++traj.steps_accepted;
            while (t >= next_snap - 1e-14 && next_snap <= T + 1e-14) {
                traj.times.push_back(t);
                traj.states.push_back(y);
                next_snap += snap_dt;
            }
        } else {
            ++traj.steps_rejected;
        }
        double scale = 0.9 * std::pow(tol / std::max(err, 1e-300), 0.2);
        h *= std::clamp(scale, 0.2, 5.0);
        h = std::min(h, 1.0);
        if (h < h_min) {
            traj.step_underflow = true;
            break;
        }
    }
    if (traj.times.back() < t) {
        traj.times.push_back(t);
        traj.states.push_back(y);
    }
    return traj;
}

Trajectory integrate_midpoint(const Rhs& rhs, const SpectralState& s0, double T,
                              double h, int snapshots) {
    if (h <= 0) throw std::domain_error("integrate_midpoint: h > 0");
    Trajectory traj;
    SpectralState y = s0, mid = s0, f = s0, ynext = s0;
    traj.times.push_back(0);
    traj.states.push_back(y);
    const double snap_dt = T / std::max(1, snapshots);
    double next_snap = snap_dt, t = 0;
    const long long steps = std::llround(T / h);
    for (long long n = 0; n < steps; ++n) {
        // fixed-point iteration on the midpoint state
        ynext = y;
        for (int it = 0; it < 50; ++it) {
            for (int i = 0; i < y.dim(); ++i)
                mid.raw()[i] = (y.raw()[i] + ynext.raw()[i]) * 0.5;
            rhs(mid, f);
            double delta = 0;
            for (int i = 0; i < y.dim(); ++i) {
                Cxd upd = y.raw()[i] + f.raw()[i] * h;
                delta = std::max(delta, abs(upd - ynext.raw()[i]));
                ynext.raw()[i] = upd;
            }
            if (delta < 1e-15) break;
        }
        y = ynext;
        t = double(n + 1) * h;
        y.t = t;
        ++traj.steps_accepted;
        while (t >= next_snap - 1e-12 && next_snap <= T + 1e-12) {
            traj.times.push_back(t);
            traj.states.push_back(y);
            next_snap += snap_dt;
        }
    }
    if (traj.times.back() < t) {
        traj.times.push_back(t);
        traj.states.push_back(y);
    }
    return traj;
}

ApproxSolution::ApproxSolution(TangentialSet S_, std::vector<double> zeta_, double eps_)
    : S(std::move(S_)), zeta(std::move(zeta_)), eps(eps_) {
    if (int(zeta.size()) != S.nu())
        throw std::invalid_argument("ApproxSolution: zeta size != nu");
    omega = freq_amp(S, zeta, eps);
}

SpectralState ApproxSolution::state_at(const std::vector<double>& phi, int cutoff) const {
    SpectralState s(cutoff);
    for (int i = 0; i < S.nu(); ++i) {
        double th = -phi[i]; // l(site_i) = -e_i
        s.at(int(S.site(i))) =
            Cxd(std::cos(th), std::sin(th)) * (eps * std::sqrt(zeta[i]));
    }
    return s;
}

std::complex<double> ApproxSolution::u(const std::vector<double>& phi, double x) const {
    std::complex<double> v = 0;
    for (int i = 0; i < S.nu(); ++i) {
        double ph = double(S.site(i)) * x - phi[i];
        v += eps * std::sqrt(zeta[i]) * std::complex<double>(std::cos(ph), std::sin(ph));
    }
    return v;
}

ResidualReport residual(const Poly& H_trunc, const ApproxSolution& approx, int phi_grid) {
    const auto& S = approx.S;
    const int nu = S.nu();
    int mx = int(S.max_abs());
    H_trunc.for_each([&](const Monomial& m, const Cxd&) {
        for (const Mode& md : m) mx = std::max(mx, std::abs(md.j));
    });
    const int cutoff = mx;
    Rhs rhs = rhs_full(H_trunc, cutoff);

    std::vector<int> idx(nu, 0);
    double sum2 = 0;
    long long count = 0;
    SpectralState out(cutoff);
    while (true) {
        std::vector<double> phi(nu);
        for (int i = 0; i < nu; ++i) phi[i] = 2 * kPi * idx[i] / phi_grid;
        SpectralState z = approx.state_at(phi, cutoff);
        rhs(z, out);
        // omega . d_phi U: mode site_i carries e^{-i phi_i}, others are zero
        for (int j = -cutoff; j <= cutoff; ++j) {
            if (j == 0) continue;
            Cxd lhs{};
            int i = S.index_of(j);
            if (i >= 0) lhs = Cxd(0, -approx.omega[i]) * z.at(j);
            sum2 += abs2(lhs - out.at(j));
        }
        ++count;
        int pos = nu - 1;
        while (pos >= 0 && ++idx[pos] == phi_grid) idx[pos--] = 0;
        if (pos < 0) break;
    }
    ResidualReport rep;
    rep.grid = count;
    rep.norm = std::sqrt(sum2 / double(count));
    return rep;
}

ResidualScaling residual_scaling(const TangentialSet& S, const std::vector<double>& zeta,
                                 const std::vector<double>& eps_list, int cutoff,
                                 int max_degree, int phi_grid) {
    Poly H = build_zakharov(cutoff, max_degree);
    ResidualScaling out;
    std::vector<double> xs, ys;
    for (double eps : eps_list) {
        ApproxSolution ap(S, zeta, eps);
        double n = residual(H, ap, phi_grid).norm;
        out.eps.push_back(eps);
        out.norms.push_back(n);
        if (n > 0) {
            xs.push_back(std::log(eps));
            ys.push_back(std::log(n));
        }
    }
    if (xs.size() >= 2) out.slope = fit_slope(xs, ys);
    return out;
}

std::vector<FrequencyFit> measured_frequencies(const Trajectory& traj,
                                               const std::vector<int>& modes) {
    std::vector<FrequencyFit> fits;
    const std::size_t n = traj.times.size();
    for (int mode : modes) {
        FrequencyFit fit;
        fit.mode = mode;
        std::vector<double> th(n), ts = traj.times;
        bool ok = true;
        double prev = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const Cxd& z = traj.states[i].at(mode);
            if (abs(z) < 1e-14) {
                ok = false;
                break;
            }
            double a = std::atan2(z.im, z.re);
            if (i == 0) {
                th[i] = a;
            } else {
                double d = a - std::fmod(prev, 2 * kPi);
                while (d > kPi) d -= 2 * kPi;
                while (d <= -kPi) d += 2 * kPi;
                if (std::abs(d) > kPi / 2) fit.jump_guard_hit = true;
                th[i] = th[i - 1] + d;
            }
            prev = a;
        }
        if (!ok) {
            fit.skipped = true;
            fits.push_back(fit);
            continue;
        }
        double mt = std::accumulate(ts.begin(), ts.end(), 0.0) / n;
        double mth = std::accumulate(th.begin(), th.end(), 0.0) / n;
        double sxx = 0, sxy = 0;
        for (std::size_t i = 0; i < n; ++i) {
            sxx += (ts[i] - mt) * (ts[i] - mt);
            sxy += (ts[i] - mt) * (th[i] - mth);
        }
        double slope = sxy / sxx;
        double ss = 0;
        for (std::size_t i = 0; i < n; ++i) {
            double r = th[i] - mth - slope * (ts[i] - mt);
            ss += r * r;
        }
        fit.omega = -slope; // z ~ e^{-i omega t}
        fit.stderr_ = n > 2 ? std::sqrt(ss / double(n - 2) / sxx) : 0.0;
        fits.push_back(fit);
    }
    return fits;
}

FloquetResult floquet_spectrum(const Poly& H_trunc, const ApproxSolution& approx,
                               int l_max, int j_max, int dim_cap) {
    const auto& S = approx.S;
    const int nu = S.nu();
    const auto& omega = approx.omega;

    // couplings: row (l + dl, ja, -sa) <- col (l, jb, sb) with amplitude
    // -i srow c prod_{rest in S} eps sqrt(zeta)
    struct Entry {
        std::vector<std::int64_t> dl;
        int ja, srow, jb, sb;
        Cxd amp;
    };
    std::vector<Entry> entries;
    H_trunc.for_each([&](const Monomial& m, const Cxd& c) {
        const int n = m.degree();
        for (int ia = 0; ia < n; ++ia) {
            const int ja = m[ia].j;
            if (S.contains(ja) || std::abs(ja) > j_max) continue;
            const int srow = -m[ia].sigma;
            for (int ib = 0; ib < n; ++ib) {
                if (ib == ia) continue;
                const int jb = m[ib].j;
                if (S.contains(jb) || std::abs(jb) > j_max) continue;
                Entry e;
                e.dl.assign(nu, 0);
                e.ja = ja;
                e.srow = srow;
                e.jb = jb;
                e.sb = m[ib].sigma;
                Cxd amp = c;
                bool good = true;
                for (int q = 0; q < n; ++q) {
                    if (q == ia || q == ib) continue;
                    int idx = S.index_of(m[q].j);
                    if (idx < 0) {
                        good = false;
                        break;
                    }
                    amp = amp * (approx.eps * std::sqrt(approx.zeta[idx]));
                    e.dl[idx] -= m[q].sigma; // l(site) = -e_idx
                }
                if (!good) continue;
                e.amp = Cxd(0, -double(srow)) * amp;
                entries.push_back(std::move(e));
            }
        }
    });

    // basis grouped by the conserved q = v.l + s j
    struct Key {
        std::vector<std::int64_t> l;
        int j, s;
    };
    std::map<std::int64_t, std::vector<Key>> blocks;
    std::vector<std::int64_t> l(nu, -l_max);
    long long total = 0;
    while (true) {
        std::int64_t vl = 0;
        for (int i = 0; i < nu; ++i) vl += S.site(i) * l[i];
        for (int j = -j_max; j <= j_max; ++j) {
            if (j == 0 || S.contains(j)) continue;
            for (int s = -1; s <= 1; s += 2) {
                blocks[vl + std::int64_t(s) * j].push_back({l, j, s});
                ++total;
            }
        }
        int pos = nu - 1;
        while (pos >= 0 && ++l[pos] > l_max) l[pos--] = -l_max;
        if (pos < 0) break;
    }
    if (total > dim_cap)
        throw std::domain_error(
            "floquet_spectrum: dimension " + std::to_string(total) + " exceeds cap " +
            std::to_string(dim_cap) + "; reduce l_max or j_max");

    Corrections corr = corrections(S, approx.zeta, approx.eps,
                                   std::max<std::int64_t>(j_max, S.max_abs() + 1));
    auto d_pred = [&](int j) {
        return std::sqrt(double(std::abs(j))) +
               approx.eps * approx.eps *
                   (corr.m1 + c_correction(S, approx.zeta, j)) * double(j);
    };

    FloquetResult out;
    out.dimension = int(total);
    out.blocks = int(blocks.size());
    const std::int64_t j_safe = j_max - S.max_abs();

    // entries indexed by column (jb, sb) for the assembly
    std::map<std::pair<int, int>, std::vector<const Entry*>> by_col;
    for (const auto& e : entries) by_col[{e.jb, e.sb}].push_back(&e);

    for (auto& [q, keys] : blocks) {
        const int N = int(keys.size());
        std::map<std::pair<std::vector<std::int64_t>, std::pair<int, int>>, int> index;
        for (int i = 0; i < N; ++i)
            index[{keys[i].l, {keys[i].j, keys[i].s}}] = i;
        Eigen::MatrixXcd L = Eigen::MatrixXcd::Zero(N, N);
        for (int i = 0; i < N; ++i) {
            double wl = 0;
            for (int d = 0; d < nu; ++d) wl += omega[d] * double(keys[i].l[d]);
            L(i, i) = std::complex<double>(0, wl);
        }
        for (int col = 0; col < N; ++col) {
            auto it = by_col.find({keys[col].j, keys[col].s});
            if (it == by_col.end()) continue;
            for (const Entry* e : it->second) {
                std::vector<std::int64_t> l2 = keys[col].l;
                bool inside = true;
                for (int d = 0; d < nu; ++d) {
                    l2[d] += e->dl[d];
                    if (std::llabs(l2[d]) > l_max) inside = false;
                }
                if (!inside) continue;
                auto rit = index.find({l2, {e->ja, e->srow}});
                if (rit == index.end()) continue;
                L(rit->second, col) -= std::complex<double>(e->amp.re, e->amp.im);
            }
        }
        Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(L, false);
        const auto& ev = es.eigenvalues();
        for (int i = 0; i < N; ++i) out.eigenvalues.push_back(ev(i));

        for (int i = 0; i < N; ++i) {
            double wl = 0;
            bool interior_l = true;
            for (int d = 0; d < nu; ++d) {
                wl += omega[d] * double(keys[i].l[d]);
                if (std::llabs(keys[i].l[d]) > l_max - 1) interior_l = false;
            }
            std::complex<double> pred(0, wl + keys[i].s * d_pred(keys[i].j));
            double dist = std::numeric_limits<double>::infinity();
            for (int r = 0; r < N; ++r) dist = std::min(dist, std::abs(ev(r) - pred));
            out.max_residual_all = std::max(out.max_residual_all, dist);
            if (interior_l && std::abs(keys[i].j) <= j_safe) {
                out.max_interior_residual = std::max(out.max_interior_residual, dist);
                ++out.interior_checked;
            }
        }
    }
    return out;
}

} // namespace wwnf
