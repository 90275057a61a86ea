#include "wwnf/bnf.hpp"
#include "wwnf/io.hpp"
#include "wwnf/spectrum.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <cmath>

namespace wwnf {

namespace {

constexpr double kPi = 3.14159265358979323846;

Monomial action4(int k) { return Monomial{{k, +1}, {k, +1}, {k, -1}, {k, -1}}; }
Monomial action_pair(int a, int b) { return Monomial{{a, +1}, {a, -1}, {b, +1}, {b, -1}}; }

/// integrable-form prediction for the canonical monomial coefficient;
/// returns false if the monomial is not an action term
bool integrable_prediction(const Monomial& m, double& out) {
    if (m.degree() != 4 || !is_trivial_monomial(m)) return false;
    std::multiset<std::int32_t> plus;
    for (const Mode& md : m)
        if (md.sigma > 0) plus.insert(md.j);
    auto it = plus.begin();
    int a = *it++;
    int b = *it;
    if (a == b) {
        out = std::pow(std::abs(a), 3) / (4 * kPi); // |z_a|^4
        return true;
    }
    if (a == -b) {
        // both indices k and -k of the integrable-form sum land on this monomial
        out = -std::pow(std::abs(a), 3) / kPi;
        return true;
    }
    int hi = std::abs(a) > std::abs(b) ? a : b;
    int lo = std::abs(a) > std::abs(b) ? b : a;
    double s = (hi > 0) == (lo > 0) ? 1.0 : -1.0;
    out = s * std::abs(hi) * double(lo) * double(lo) / kPi;
    return true;
}

} // namespace

BnfReport full_bnf_degree4(int cutoff) {
    if (cutoff < 1) throw std::domain_error("full_bnf_degree4: cutoff >= 1");
    BnfReport rep;
    rep.mode = "full";
    rep.cutoff = cutoff;
    rep.internal_cutoff = 2 * cutoff; // closure-exact coefficients up to |j| <= cutoff

    Poly H = build_zakharov(rep.internal_cutoff, 4);
    rep.input_hash = content_hash(H);

    auto res = full_bnf_core(H);
    rep.F3 = res.F3;
    rep.F4 = res.F4;
    rep.degree3_residual = res.degree3_residual;
    rep.audit = res.audit;

    Poly hfb4 = res.transformed.degree_slice(4, 4).filtered([&](const Monomial& m) {
        for (const Mode& md : m)
            if (std::abs(md.j) > cutoff) return false;
        return true;
    });
    rep.normalized = hfb4;

    rep.max_action = 0;
    rep.max_nontrivial_kernel = 0;
    rep.max_action_error = 0;
    rep.action_terms_checked = 0;
    hfb4.for_each([&](const Monomial& m, const Cxd& c) {
        double pred;
        if (integrable_prediction(m, pred)) {
            rep.max_action = std::max(rep.max_action, abs(c));
            rep.max_action_error = std::max(rep.max_action_error, std::abs(c.re - pred) +
                                                                      std::abs(c.im));
            ++rep.action_terms_checked;
        } else {
            rep.max_nontrivial_kernel = std::max(rep.max_nontrivial_kernel, abs(c));
            rep.offending.push_back({m.str(), abs(c)});
        }
    });

    // Benjamin-Feir monomials inside the cutoff; pruned-away entries read 0
    bool any_bf = false;
    for (const auto& t : benjamin_feir(-4, 4, 1, 4)) {
        bool inside = true;
        for (auto& [j, s] : t.pairs) inside = inside && std::llabs(j) <= cutoff;
        if (!inside) continue;
        any_bf = true;
        Monomial m;
        for (auto& [j, s] : t.pairs) m.push({int(j), s});
        m.canonicalize();
        double a = abs(hfb4.coeff(m));
        rep.max_nontrivial_kernel = std::max(rep.max_nontrivial_kernel, a);
    }
    rep.degenerate = !any_bf;
    return rep;
}

ExtendedNullCondition full_bnf_null_condition_extended(int cutoff) {
    using Q = boost::multiprecision::cpp_bin_float_quad;
    ExtendedNullCondition out;
    Polynomial<Q> H = build_zakharov_t<Q>(2 * cutoff, 4);
    auto res = full_bnf_core(H);
    Polynomial<Q> hfb4 = res.transformed.degree_slice(4, 4).filtered([&](const Monomial& m) {
        for (const Mode& md : m)
            if (std::abs(md.j) > cutoff) return false;
        return true;
    });
    Q max_action(0), max_nt(0);
    hfb4.for_each([&](const Monomial& m, const Cx<Q>& c) {
        if (is_trivial_monomial(m))
            max_action = std::max(max_action, abs(c));
        else
            max_nt = std::max(max_nt, abs(c));
    });
    for (const auto& t : benjamin_feir(-2, 2, 1, 3)) {
        bool inside = true;
        for (auto& [j, s] : t.pairs) inside = inside && std::llabs(j) <= cutoff;
        if (!inside) continue;
        Monomial m;
        for (auto& [j, s] : t.pairs) m.push({int(j), s});
        m.canonicalize();
        max_nt = std::max(max_nt, abs(hfb4.coeff(m)));
        ++out.bf_monomials_checked;
    }
    out.max_nontrivial_rel =
        max_action > 0 ? (max_nt / max_action).convert_to<double>() : 0.0;
    return out;
}

namespace {

/// one weak step: normalize the (deg, dz<=1) block of H
Poly weak_step(const Poly& H, const TangentialSet& S, int deg) {
    Poly block = project(H.degree_slice(deg, deg), Projector::DzLe, S, 1);
    Poly B = block.filtered([](const Monomial& m) { return !in_kernel_h2(m); });
    if (B.empty()) return H;
    Poly F = solve_homological(B);
    return lie_transform(F, H, 4);
}

} // namespace

Poly weak_bnf_transformed(int cutoff, const TangentialSet& S, int steps) {
    if (cutoff < 2 * S.max_abs())
        throw std::domain_error(
            "weak_bnf: cutoff must be >= 2 max|S| so the normalized (4,0) "
            "coefficients keep all bracket partners");
    auto gen = is_generic(S);
    if (!gen.generic) throw std::domain_error("weak_bnf: tangential set is not generic");
    Poly H = build_zakharov(cutoff, 4);
    if (steps >= 1) H = weak_step(H, S, 3);
    if (steps >= 2) H = weak_step(H, S, 4);
    return H;
}

BnfReport weak_bnf(int cutoff, const TangentialSet& S, int steps) {
    if (steps < 1 || steps > 2) throw std::domain_error("weak_bnf: steps in {1,2}");
    BnfReport rep;
    rep.mode = "weak";
    rep.cutoff = cutoff;
    rep.internal_cutoff = cutoff; // weak generators have finite support, no
                                  // closure loss for the (4,0) output
    rep.genericity = is_generic(S);
    if (!rep.genericity->generic) {
        rep.refused = true;
        return rep;
    }
    if (cutoff < 2 * S.max_abs())
        throw std::domain_error(
            "weak_bnf: cutoff must be >= 2 max|S| so the normalized (4,0) "
            "coefficients keep all bracket partners");

    Poly H = build_zakharov(cutoff, 4);
    rep.input_hash = content_hash(H);

    Poly B1 = project(H.degree_slice(3, 3), Projector::DzLe, S, 1);
    rep.F3 = solve_homological(B1);
    Poly H1 = lie_transform(rep.F3, H, 4, &rep.audit);
    rep.degree3_residual = project(H1.degree_slice(3, 3), Projector::DzLe, S, 1).max_abs();

    if (steps >= 2) {
        Poly R1 = project(H1.degree_slice(4, 4), Projector::DzLe, S, 1);
        rep.F4 = solve_homological(
            R1.filtered([](const Monomial& m) { return !in_kernel_h2(m); }));
        H1 = lie_transform(rep.F4, H1, 4, &rep.audit);
    }

    // normalized (4,0) term: degree-4, all modes tangential, kernel part
    Poly z40 = project(project(H1.degree_slice(4, 4), Projector::DzEq, S, 0),
                       Projector::KerH2, S);
    rep.normalized = z40;

    // Compare with the integrable quartic form restricted to S. For pairs of
    // opposite sign the |z_{-k1}|^2 |z_{k2}|^2 branch of the full normal form
    // contributes -|k1||k2|^2/pi, so the unified pair rule is
    // sign(k1 k2) |k1||k2|^2/pi; the same-sign displayed formula is the
    // special case. (The weak-full consistency test pins this down.)
    const auto& sites = S.sites();
    Poly pred;
    for (auto k : sites)
        pred.add(action4(int(k)), Cxd(std::pow(std::abs(double(k)), 3) / (4 * kPi)));
    for (auto k1 : sites)
        for (auto k2 : sites)
            if (std::llabs(k2) < std::llabs(k1)) {
                double sgn = (k1 > 0) == (k2 > 0) ? 1.0 : -1.0;
                pred.add(action_pair(int(k1), int(k2)),
                         Cxd(sgn * std::llabs(k1) * double(k2) * double(k2) / kPi));
            }

    rep.max_action = z40.max_abs();
    double err = 0;
    int checked = 0;
    auto visit = [&](const Poly& a, const Poly& b) {
        a.for_each([&](const Monomial& m, const Cxd& c) {
            err = std::max(err, abs(c - b.coeff(m)));
            ++checked;
        });
    };
    visit(z40, pred);
    visit(pred, z40);
    rep.max_action_error = err;
    rep.action_terms_checked = checked;
    return rep;
}

Poly approx_constant_polynomial(int cutoff) {
    Poly H = build_zakharov(cutoff, 4);
    auto res = full_bnf_core(H);
    Poly K2;
    for (int j = -cutoff; j <= cutoff; ++j) {
        if (j == 0) continue;
        K2.add(Monomial{{j, +1}, {j, -1}}, Cxd(double(j) * double(j)));
    }
    K2.momentum_conserving = true;
    K2.real_valued = true;
    Poly K3 = poisson_bracket(K2, res.F3);
    Poly K4 = poisson_bracket(K2, res.F4) +
              poisson_bracket(poisson_bracket(K2, res.F3), res.F3).scaled(0.5);
    return K2 + K3 + K4;
}

BnfReport approx_constant(int cutoff) {
    BnfReport rep;
    rep.mode = "constant";
    rep.cutoff = cutoff;
    rep.internal_cutoff = cutoff; // the identity holds at the truncated level

    Poly H = build_zakharov(cutoff, 4);
    rep.input_hash = content_hash(H);
    Poly K = approx_constant_polynomial(cutoff);
    rep.normalized = K;

    Poly HK = poisson_bracket(H, K, 4);
    rep.hk_residual_deg2 = HK.max_abs(2);
    rep.hk_residual_deg3 = HK.max_abs(3);
    rep.hk_residual_deg4 = HK.max_abs(4);
    rep.hk_scale = std::max({H.max_abs(3), H.max_abs(4), 1.0});
    return rep;
}

BnfReport linear_corrections(int cutoff, const TangentialSet& S,
                             const std::vector<double>& zeta) {
    auto gen = is_generic(S);
    BnfReport rep;
    rep.mode = "corrections";
    rep.cutoff = cutoff;
    rep.genericity = gen;
    if (!gen.generic) {
        rep.refused = true;
        return rep;
    }
    if (int(zeta.size()) != S.nu())
        throw std::invalid_argument("linear_corrections: zeta size != nu");

    BnfReport full = full_bnf_degree4(cutoff);
    rep.internal_cutoff = full.internal_cutoff;
    rep.input_hash = full.input_hash;

    // Pi_triv Pi^{dz=2} H_FB^(4): trivial monomials z_j zbar_j u_k ubar_k with
    // j outside S, k in S; freeze |u_k|^2 = zeta_k and read the diagonal
    Poly block = project(project(full.normalized, Projector::DzEq, S, 2),
                         Projector::Trivial, S);
    std::map<std::int64_t, double> kappa;
    block.for_each([&](const Monomial& m, const Cxd& c) {
        std::int64_t out_j = 0;
        int site_idx = -1;
        for (const Mode& md : m) {
            if (S.contains(md.j)) {
                if (md.sigma > 0) site_idx = S.index_of(md.j);
            } else if (md.sigma > 0) {
                out_j = md.j;
            }
        }
        if (site_idx < 0 || out_j == 0) return; // dz=2 trivial block always has both
        kappa[out_j] += c.re * zeta[site_idx];
    });

    Corrections corr = corrections(S, zeta, 0.0);
    rep.m1 = corr.m1;
    rep.m1_integer_normalization = corr.m1_no_pi;

    const std::int64_t safe = cutoff - S.max_abs();
    double worst = 0;
    for (auto& [j, kj] : kappa) {
        if (std::llabs(j) > safe) continue;
        double pred = (corr.m1 + c_correction(S, zeta, j)) * double(j);
        worst = std::max(worst, std::abs(kj - pred));
        rep.kappa.push_back({j, kj});
    }
    rep.kappa_max_error = worst;

    // which normalization does the extraction match: compare kappa at the
    // largest safe |j| (where c_j = 0, kappa_j = m1 * j)
    double best_pi = 0, best_int = 0;
    for (auto& [j, kj] : kappa) {
        if (std::llabs(j) > safe || std::llabs(j) < S.max_abs()) continue;
        best_pi = std::max(best_pi, std::abs(kj - corr.m1 * double(j)));
        best_int = std::max(best_int, std::abs(kj - corr.m1_no_pi * double(j)));
    }
    rep.m1_convention_matched = best_pi <= best_int ? "(1/pi) sum n|n| zeta_n"
                                                    : "sum n|n| zeta_n";
    return rep;
}

} // namespace wwnf
