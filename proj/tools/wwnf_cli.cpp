// Command-line front end: every subcommand validates its configuration,
// runs the module, writes its data outputs plus a run manifest, and exits
// with 0 (ok), 2 (config error), 3 (genericity failure), 4 (numerical
// failure). Identical (config, seed) reruns produce bit-identical data files.

#include <CLI11.hpp>

#include "wwnf/bnf.hpp"
#include "wwnf/divisors.hpp"
#include "wwnf/dynamics.hpp"
#include "wwnf/io.hpp"
#include "wwnf/resonance.hpp"
#include "wwnf/spectrum.hpp"
#include "wwnf/zakharov.hpp"

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

using namespace wwnf;
namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitGenericity = 3;
constexpr int kExitNumerical = 4;

struct Timer {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    }
};

std::vector<std::int64_t> parse_sites(const std::string& s) {
    std::vector<std::int64_t> out;
    std::string cur;
    for (char c : s + ",") {
        if (c == ',') {
            if (!cur.empty()) out.push_back(std::stoll(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    return out;
}

std::vector<double> parse_doubles(const std::string& s) {
    std::vector<double> out;
    std::string cur;
    for (char c : s + ",") {
        if (c == ',') {
            if (!cur.empty()) out.push_back(std::stod(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    return out;
}

void write_with_manifest(const std::string& path, const std::string& data,
                         const json& config, std::uint64_t seed,
                         const std::vector<std::pair<std::string, std::uint64_t>>& hashes,
                         double wall) {
    write_text_file(path, data);
    json m = make_manifest(config, seed, hashes, wall);
    write_text_file(path + ".manifest.json", m.dump(2) + "\n");
}

fs::path cache_dir() {
    if (const char* env = std::getenv("WWNF_CACHE")) return fs::path(env);
    return fs::path(".wwnf_cache");
}

/// coefficient-table cache: reuse only when the rebuilt key matches and the
/// stored content hash verifies
Poly cached_zakharov(int cutoff, int max_degree) {
    const std::string key = "zakharov_K" + std::to_string(cutoff) + "_d" +
                            std::to_string(max_degree) + "_norm1";
    fs::path file = cache_dir() / (key + ".json");
    if (fs::exists(file)) {
        try {
            json j = json::parse(read_text_file(file.string()));
            if (j.at("key") == key) {
                Poly p = polynomial_from_json(j.at("table"));
                std::uint64_t h = j.at("content_hash").get<std::uint64_t>();
                if (content_hash(p) == h) return p;
            }
        } catch (...) {
            // fall through to rebuild
        }
    }
    Poly p = build_zakharov(cutoff, max_degree);
    std::error_code ec;
    fs::create_directories(cache_dir(), ec);
    if (!ec) {
        json j{{"key", key},
               {"content_hash", content_hash(p)},
               {"table", polynomial_to_json(p)}};
        write_text_file(file.string(), j.dump() + "\n");
    }
    return p;
}

json genericity_json(const GenericityReport& g) {
    json j{{"generic", g.generic}};
    if (g.bis_violation) j["bis_violation"] = g.bis_violation;
    if (g.certificate) j["certificate"] = g.certificate->str();
    if (g.generic) j["min_nonresonant_abs"] = g.min_nonresonant_abs;
    return j;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"deep-water wave normal-form toolkit"};
    app.require_subcommand(1);
    // key-value config file; command-line flags win over file values
    app.set_config("--config", "", "read options from a TOML/INI file");

    std::string sites_str = "2,3", out_dir = ".";
    int cutoff = 12, nmax = 8, order = 4, steps = 2;
    int lmax = 50, threads = 1;
    std::int64_t jmax = 1000;
    double eps = 0.05, a_par = 0.2, tol = 1e-10, T = 100;
    long long samples = 100000;
    std::uint64_t seed = 7;
    std::string mode = "full", family = "g0", zeta_str, eps_list_str, prec = "double";
    std::string traj_format = "csv", residual_eps_str;
    double tau_override = -1, gamma_scale = 1.0;

    app.add_option("--out", out_dir, "output directory");

    auto add_common = [&](CLI::App* c) {
        c->add_option("--sites", sites_str, "tangential sites, e.g. 3,2,-5");
        c->add_option("--seed", seed, "64-bit seed for all randomness");
        c->add_option("--threads", threads, "worker pool size");
    };

    auto* c_sites = app.add_subcommand("sites", "genericity check of a tangential set");
    add_common(c_sites);
    c_sites->add_option("--nmax", nmax, "largest resonance order scanned");

    auto* c_res = app.add_subcommand("resonances", "enumerate low-outside resonances");
    add_common(c_res);
    c_res->add_option("--order", order, "resonance order (3..15)");

    auto* c_bnf = app.add_subcommand("bnf", "Birkhoff normal-form reports");
    add_common(c_bnf);
    c_bnf->add_option("--cutoff", cutoff, "Fourier cutoff");
    c_bnf->add_option("--mode", mode, "full | weak | constant | corrections");
    c_bnf->add_option("--zeta", zeta_str, "tangential actions, e.g. 1.0,1.5");
    c_bnf->add_option("--precision", prec, "double | extended");
    c_bnf->add_option("--steps", steps, "weak-BNF steps (1 or 2)");

    auto* c_twist = app.add_subcommand("twist", "twist matrix and certificates");
    add_common(c_twist);

    auto* c_spec = app.add_subcommand("spectrum", "frequency map and corrections");
    add_common(c_spec);
    c_spec->add_option("--zeta", zeta_str, "tangential actions");
    c_spec->add_option("--eps", eps, "amplitude parameter");

    auto* c_div = app.add_subcommand("divisors", "small-divisor scan");
    add_common(c_div);
    c_div->add_option("--p", order, "|l| bound (0..6)")->default_val(1);
    c_div->add_option("--jmax", jmax, "index range");

    auto* c_meas = app.add_subcommand("measure", "Monte-Carlo measure estimate");
    add_common(c_meas);
    c_meas->add_option("--spec", family, "g0 | g1 | g2 | lambda0 | p | rplus | rminus");
    c_meas->add_option("--eps", eps_list_str, "eps list, e.g. 0.1,0.07,0.05");
    c_meas->add_option("--samples", samples, "Monte-Carlo samples");
    c_meas->add_option("--a", a_par, "smallness exponent a in (0,1)");
    c_meas->add_option("--lmax", lmax, "|l| cutoff");
    c_meas->add_option("--jmax", jmax, "|j|,|k| cutoff for divisor families");
    c_meas->add_option("--tau", tau_override, "diagnostic tau override (non-standard thresholds)");
    c_meas->add_option("--gamma-scale", gamma_scale, "diagnostic threshold scale");

    auto* c_sim = app.add_subcommand("simulate", "integrate the truncated flow");
    add_common(c_sim);
    c_sim->add_option("--cutoff", cutoff, "Fourier cutoff");
    c_sim->add_option("--mode", mode, "full | bnf");
    c_sim->add_option("--eps", eps, "initial amplitude scale");
    c_sim->add_option("--zeta", zeta_str, "tangential actions");
    c_sim->add_option("--T", T, "final time");
    c_sim->add_option("--tol", tol, "integrator tolerance");
    c_sim->add_option("--format", traj_format, "trajectory output: csv | bin");
    std::string integrator = "rk54";
    double step_h = 0.05;
    c_sim->add_option("--integrator", integrator, "rk54 | midpoint");
    c_sim->add_option("--step", step_h, "fixed step for the midpoint integrator");
    c_sim->add_option("--residual-eps", residual_eps_str,
                      "also sweep the residual over these eps values");

    auto* c_floq = app.add_subcommand("floquet", "Floquet spectrum of the linearization");
    add_common(c_floq);
    c_floq->add_option("--eps", eps, "amplitude parameter");
    c_floq->add_option("--zeta", zeta_str, "tangential actions");
    c_floq->add_option("--lmax", lmax, "|l|_inf cutoff")->default_val(3);
    c_floq->add_option("--jmax", jmax, "|j| cutoff")->default_val(10);

    CLI11_PARSE(app, argc, argv);

    Timer timer;
    try {
        fs::create_directories(out_dir);
        TangentialSet S(parse_sites(sites_str));
        std::vector<double> zeta = zeta_str.empty()
                                       ? std::vector<double>(S.nu(), 1.0)
                                       : parse_doubles(zeta_str);
        json cfg{{"sites", sites_str}, {"seed", seed}, {"threads", threads}};

        if (*c_sites) {
            cfg["nmax"] = nmax;
            auto rep = is_generic(S, nmax);
            json out{{"sites", sites_str}, {"report", genericity_json(rep)}};
            write_with_manifest((fs::path(out_dir) / "sites.json").string(),
                                out.dump(2) + "\n", cfg, seed, {}, timer.seconds());
            std::cout << out.dump(2) << "\n";
            return rep.generic ? kExitOk : kExitGenericity;
        }

        if (*c_res) {
            cfg["order"] = order;
            auto found = enumerate_low_outside(order, S);
            std::string csv = "order";
            for (int i = 1; i <= order; ++i) csv += ",j" + std::to_string(i);
            for (int i = 1; i <= order; ++i) csv += ",sigma" + std::to_string(i);
            csv += ",class\n";
            for (const auto& t : found) {
                csv += std::to_string(order);
                for (auto& [j, s] : t.pairs) csv += "," + std::to_string(j);
                for (auto& [j, s] : t.pairs) csv += "," + std::string(s > 0 ? "+" : "-");
                csv += "," + to_string(classify(t)) + "\n";
            }
            write_with_manifest((fs::path(out_dir) / "resonances.csv").string(), csv,
                                cfg, seed, {}, timer.seconds());
            std::cout << found.size() << " non-trivial low-outside resonances\n";
            return kExitOk;
        }

        if (*c_bnf) {
            cfg["cutoff"] = cutoff;
            cfg["mode"] = mode;
            cfg["precision"] = prec;
            BnfReport rep;
            if (mode == "full") {
                rep = full_bnf_degree4(cutoff);
            } else if (mode == "weak") {
                rep = weak_bnf(cutoff, S, steps);
            } else if (mode == "constant") {
                rep = approx_constant(cutoff);
            } else if (mode == "corrections") {
                rep = linear_corrections(cutoff, S, zeta);
            } else {
                std::cerr << "unknown --mode " << mode << "\n";
                return kExitConfig;
            }
            if (rep.refused) {
                json out{{"refused", true},
                         {"genericity", genericity_json(*rep.genericity)}};
                std::cout << out.dump(2) << "\n";
                return kExitGenericity;
            }
            json out{{"mode", rep.mode},
                     {"cutoff", rep.cutoff},
                     {"internal_cutoff", rep.internal_cutoff},
                     {"tolerance", rep.tolerance},
                     {"degree3_residual", rep.degree3_residual},
                     {"max_action", rep.max_action},
                     {"max_nontrivial_kernel", rep.max_nontrivial_kernel},
                     {"max_action_error", rep.max_action_error},
                     {"action_terms_checked", rep.action_terms_checked},
                     {"degenerate", rep.degenerate},
                     {"truncation_audit",
                      {{"blocks_skipped", rep.audit.blocks_skipped},
                       {"terms_bound", rep.audit.terms_bound}}}};
            if (mode == "constant")
                out["hk_residual"] = {rep.hk_residual_deg2, rep.hk_residual_deg3,
                                      rep.hk_residual_deg4};
            if (mode == "corrections") {
                out["m1"] = rep.m1;
                out["m1_integer_normalization"] = rep.m1_integer_normalization;
                out["m1_convention_matched"] = rep.m1_convention_matched;
                out["kappa_max_error"] = rep.kappa_max_error;
            }
            if (prec == "extended" && mode == "full") {
                auto ext = full_bnf_null_condition_extended(std::min(cutoff, 8));
                out["extended_null_rel"] = ext.max_nontrivial_rel;
            }
            // offending-coefficient CSV (empty on success)
            std::string csv = "monomial,abs_coeff\n";
            for (auto& [m, c] : rep.offending)
                if (c > rep.tolerance * rep.max_action)
                    csv += csv_field(m) + "," + fmt_double(c) + "\n";
            std::vector<std::pair<std::string, std::uint64_t>> hashes{
                {"hamiltonian", rep.input_hash}};
            write_with_manifest((fs::path(out_dir) / "bnf_report.json").string(),
                                out.dump(2) + "\n", cfg, seed, hashes, timer.seconds());
            write_text_file((fs::path(out_dir) / "bnf_offending.csv").string(), csv);
            std::cout << out.dump(2) << "\n";
            return kExitOk;
        }

        if (*c_twist) {
            auto tc = twist_check(S);
            json out{{"sites", sites_str},
                     {"int_cert", tc.int_cert.str()},
                     {"det_4piA_nonzero", tc.det_A_nonzero},
                     {"pi_poly_c0", tc.pi_poly_c0.str()},
                     {"pi_poly_c1", tc.pi_poly_c1.str()},
                     {"int_cert_over_pi", tc.int_cert_over_pi.str()},
                     {"det_A_minus_V_nonzero", tc.det_A_minus_V_nonzero},
                     {"det_A_minus_V_numeric", tc.numeric_A_minus_V}};
            write_with_manifest((fs::path(out_dir) / "twist.json").string(),
                                out.dump(2) + "\n", cfg, seed, {}, timer.seconds());
            std::cout << out.dump(2) << "\n";
            return tc.det_A_nonzero ? kExitOk : kExitNumerical;
        }

        if (*c_spec) {
            cfg["eps"] = eps;
            auto om = freq_amp(S, zeta, eps);
            auto corr = corrections(S, zeta, eps);
            json out{{"omega", om},
                     {"m1", corr.m1},
                     {"m1_integer_normalization", corr.m1_no_pi},
                     {"alpha_available", corr.alpha_available}};
            json cj = json::array();
            for (std::size_t i = 0; i < corr.js.size(); ++i)
                cj.push_back({{"j", corr.js[i]},
                              {"c_j", corr.c[i]},
                              {"d_leading", corr.d_leading[i]}});
            out["corrections"] = cj;
            write_with_manifest((fs::path(out_dir) / "spectrum.json").string(),
                                out.dump(2) + "\n", cfg, seed, {}, timer.seconds());
            std::cout << out.dump(2) << "\n";
            return kExitOk;
        }

        if (*c_div) {
            cfg["p"] = order;
            cfg["jmax"] = jmax;
            auto dm = divisor_min(S, order, jmax, true, threads);
            json out{{"min_abs", dm.min_abs},
                     {"argmin", dm.argmin.str()},
                     {"scanned", dm.scanned},
                     {"doubled_range_change", dm.doubled_range_change},
                     {"opposite_branch_min",
                      dm.opposite_branch_seen ? dm.min_abs_opposite_branch : -1.0}};
            write_with_manifest((fs::path(out_dir) / "divisors.json").string(),
                                out.dump(2) + "\n", cfg, seed, {}, timer.seconds());
            std::cout << out.dump(2) << "\n";
            return dm.min_abs > 0 ? kExitOk : kExitNumerical;
        }

        if (*c_meas) {
            auto fam = melnikov_family_from_string(family);
            if (!fam) {
                std::cerr << "unknown --spec " << family << "\n";
                return kExitConfig;
            }
            auto eps_list = eps_list_str.empty() ? std::vector<double>{0.1, 0.07, 0.05}
                                                 : parse_doubles(eps_list_str);
            cfg["spec"] = family;
            cfg["eps"] = eps_list;
            cfg["samples"] = samples;
            cfg["a"] = a_par;
            cfg["lmax"] = lmax;
            cfg["jmax"] = jmax;
            if (tau_override > 0) cfg["tau_override"] = tau_override;
            if (gamma_scale != 1.0) cfg["gamma_scale"] = gamma_scale;
            auto table = measure_estimate(S, a_par, *fam, eps_list, samples, seed, lmax,
                                          jmax, threads, tau_override, gamma_scale);
            std::string csv = "eps,spec,fraction,ci_lo,ci_hi,slope\n";
            for (auto& r : table.rows) {
                csv += fmt_double(r.eps) + "," + family + "," + fmt_double(r.fraction) +
                       "," + fmt_double(r.ci_lo) + "," + fmt_double(r.ci_hi) + "," +
                       (table.slope_defined ? fmt_double(table.slope) : "nan") + "\n";
            }
            write_with_manifest((fs::path(out_dir) / "measure.csv").string(), csv, cfg,
                                seed, {}, timer.seconds());
            std::cout << csv;
            return kExitOk;
        }

        if (*c_sim) {
            cfg["cutoff"] = cutoff;
            cfg["mode"] = mode;
            cfg["eps"] = eps;
            cfg["T"] = T;
            cfg["tol"] = tol;
            Rhs rhs;
            std::uint64_t ham_hash = 0;
            if (mode == "full") {
                Poly H = cached_zakharov(cutoff, 4);
                ham_hash = content_hash(H);
                rhs = rhs_full(H, cutoff);
            } else if (mode == "bnf") {
                rhs = rhs_bnf(cutoff);
            } else {
                std::cerr << "unknown --mode " << mode << "\n";
                return kExitConfig;
            }
            SpectralState s0(cutoff);
            for (int i = 0; i < S.nu(); ++i)
                s0.at(int(S.site(i))) = Cxd(eps * std::sqrt(zeta[i]), 0.0);
            cfg["integrator"] = integrator;
            Trajectory tr = integrator == "midpoint"
                                ? integrate_midpoint(rhs, s0, T, step_h, 200)
                                : integrate(rhs, s0, T, tol, 200);
            if (tr.step_underflow) {
                std::cerr << "step-size underflow\n";
                return kExitNumerical;
            }
            std::string csv = "t,mode,re,im\n";
            for (std::size_t i = 0; i < tr.times.size(); ++i)
                for (int j = -cutoff; j <= cutoff; ++j) {
                    if (j == 0) continue;
                    const Cxd& z = tr.states[i].at(j);
                    if (abs(z) < 1e-300) continue;
                    csv += fmt_double(tr.times[i]) + "," + std::to_string(j) + "," +
                           fmt_double(z.re) + "," + fmt_double(z.im) + "\n";
                }
            std::vector<std::pair<std::string, std::uint64_t>> hashes;
            if (ham_hash) hashes.push_back({"hamiltonian", ham_hash});
            if (traj_format == "bin") {
                // little-endian double frames: t, then re/im for j = -K..K (j != 0)
                std::string blob;
                auto put = [&](double v) {
                    blob.append(reinterpret_cast<const char*>(&v), sizeof v);
                };
                for (std::size_t i = 0; i < tr.times.size(); ++i) {
                    put(tr.times[i]);
                    for (int j = -cutoff; j <= cutoff; ++j) {
                        if (j == 0) continue;
                        put(tr.states[i].at(j).re);
                        put(tr.states[i].at(j).im);
                    }
                }
                json header{{"layout", "t,(re,im) per mode"},
                            {"modes", "j = -cutoff..cutoff, j != 0, ascending"},
                            {"cutoff", cutoff},
                            {"frames", tr.times.size()},
                            {"doubles_per_frame", 1 + 2 * 2 * cutoff},
                            {"byte_order", "little-endian"}};
                write_text_file((fs::path(out_dir) / "trajectory.header.json").string(),
                                header.dump(2) + "\n");
                write_with_manifest((fs::path(out_dir) / "trajectory.bin").string(),
                                    blob, cfg, seed, hashes, timer.seconds());
            } else {
                write_with_manifest((fs::path(out_dir) / "trajectory.csv").string(), csv,
                                    cfg, seed, hashes, timer.seconds());
            }
            if (!residual_eps_str.empty()) {
                auto rs = residual_scaling(S, zeta, parse_doubles(residual_eps_str),
                                           cutoff, 4);
                std::string rcsv = "eps,residual,slope\n";
                for (std::size_t i = 0; i < rs.eps.size(); ++i)
                    rcsv += fmt_double(rs.eps[i]) + "," + fmt_double(rs.norms[i]) + "," +
                            fmt_double(rs.slope) + "\n";
                write_text_file((fs::path(out_dir) / "residual.csv").string(), rcsv);
            }
            std::cout << "steps accepted " << tr.steps_accepted << ", rejected "
                      << tr.steps_rejected << "\n";
            return kExitOk;
        }

        if (*c_floq) {
            auto gen = is_generic(S, 5);
            if (!gen.generic) {
                std::cout << genericity_json(gen).dump(2) << "\n";
                return kExitGenericity;
            }
            cfg["eps"] = eps;
            cfg["lmax"] = lmax;
            cfg["jmax"] = jmax;
            Poly Hwk = weak_bnf_transformed(int(jmax), S, 2);
            ApproxSolution ap(S, zeta, eps);
            FloquetResult fr = floquet_spectrum(Hwk, ap, lmax, int(jmax));
            json out{{"dimension", fr.dimension},
                     {"blocks", fr.blocks},
                     {"max_interior_residual", fr.max_interior_residual},
                     {"interior_checked", fr.interior_checked},
                     {"max_residual_all", fr.max_residual_all}};
            std::string csv = "re,im\n";
            std::vector<std::pair<double, double>> evs;
            for (auto& ev : fr.eigenvalues) evs.push_back({ev.real(), ev.imag()});
            std::sort(evs.begin(), evs.end());
            for (auto& [re, im] : evs) csv += fmt_double(re) + "," + fmt_double(im) + "\n";
            write_with_manifest((fs::path(out_dir) / "floquet.csv").string(), csv, cfg,
                                seed, {{"hamiltonian", content_hash(Hwk)}},
                                timer.seconds());
            write_text_file((fs::path(out_dir) / "floquet.json").string(),
                            out.dump(2) + "\n");
            std::cout << out.dump(2) << "\n";
            return kExitOk;
        }
    } catch (const std::domain_error& e) {
        json err{{"error", e.what()}, {"kind", "domain"}};
        std::cerr << err.dump() << "\n";
        return kExitNumerical;
    } catch (const std::exception& e) {
        json err{{"error", e.what()}, {"kind", "config"}};
        std::cerr << err.dump() << "\n";
        return kExitConfig;
    }
    return kExitConfig;
}
