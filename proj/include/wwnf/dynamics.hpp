#pragma once

#include "wwnf/bnf.hpp"
#include "wwnf/polynomial.hpp"
#include "wwnf/sites.hpp"
#include "wwnf/spectrum.hpp"

#include <complex>
#include <functional>
#include <vector>

namespace wwnf {

/// Truncated spectral state: amplitudes z_j for 0 < |j| <= cutoff.
class SpectralState {
public:
    explicit SpectralState(int cutoff) : cutoff_(cutoff), z_(2 * cutoff) {}

    int cutoff() const { return cutoff_; }
    int dim() const { return int(z_.size()); }

    Cxd& at(int j) { return z_[index(j)]; }
    const Cxd& at(int j) const { return z_[index(j)]; }

    double t = 0;

    std::vector<Cxd>& raw() { return z_; }
    const std::vector<Cxd>& raw() const { return z_; }

    double norm_inf() const {
        double m = 0;
        for (auto& c : z_) m = std::max(m, abs(c));
        return m;
    }

    int index(int j) const {
        if (j == 0 || std::abs(j) > cutoff_)
            throw std::out_of_range("SpectralState: mode outside cutoff");
        return j > 0 ? (j - 1) : (cutoff_ - 1 - j);
    }
    int mode_of(int idx) const {
        return idx < cutoff_ ? idx + 1 : -(idx - cutoff_ + 1);
    }

private:
    int cutoff_;
    std::vector<Cxd> z_;
};

using Rhs = std::function<void(const SpectralState&, SpectralState&)>;

/// zdot_k = -i d_{zbar_k} H, assembled from the sparse coefficient map
Rhs rhs_full(const Poly& H, int cutoff);

/// Hand-coded vector field of H^(2) + H_FB^(4) (integrable quartic normal
/// form): actions |z_n|^2 are first integrals. Interactions are restricted
/// to modes inside the cutoff.
Rhs rhs_bnf(int cutoff);

/// The quartic normal form built directly from its integrable coefficient
/// formula (per-index |k|^3/(4 pi), -|k|^3/(2 pi), same-sign |k1||k2|^2/pi).
Poly integrable_quartic(int cutoff);

struct Trajectory {
    std::vector<double> times;
    std::vector<SpectralState> states;
    long long steps_accepted = 0, steps_rejected = 0;
    bool step_underflow = false;
};

/// Adaptive embedded Dormand-Prince 5(4) with deterministic step acceptance;
/// per-step RMS error estimate <= tol.
Trajectory integrate(const Rhs& rhs, const SpectralState& s0, double T, double tol,
                     int snapshots = 200);

/// Fixed-step implicit midpoint (symplectic), for long conservation runs.
/// Each step solves z' = z + h f((z + z')/2) by fixed-point iteration.
Trajectory integrate_midpoint(const Rhs& rhs, const SpectralState& s0, double T,
                              double h, int snapshots = 200);

/// Leading-order traveling embedding u = sum_{j in S} sqrt(zeta_j) eps
/// e^{i (j x + l(j).phi)} with l(site_i) = -e_i and omega from freq_amp.
struct ApproxSolution {
    TangentialSet S;
    std::vector<double> zeta;
    double eps;
    std::vector<double> omega;

    ApproxSolution(TangentialSet S_, std::vector<double> zeta_, double eps_);

    /// tangential state at torus angle phi (cutoff must cover max|S|)
    SpectralState state_at(const std::vector<double>& phi, int cutoff) const;

    /// the embedding value u(phi, x)
    std::complex<double> u(const std::vector<double>& phi, double x) const;
};

struct ResidualReport {
    double norm = 0;      // RMS of omega.d_phi U - X_H(U) over the phi grid
    long long grid = 0;
};

/// residual of the approximate solution against the truncated field
ResidualReport residual(const Poly& H_trunc, const ApproxSolution& approx,
                        int phi_grid = 8);

/// dyadic scaling: residual at each eps, plus the fitted log-log slope
struct ResidualScaling {
    std::vector<double> eps;
    std::vector<double> norms;
    double slope = 0;
};
ResidualScaling residual_scaling(const TangentialSet& S, const std::vector<double>& zeta,
                                 const std::vector<double>& eps_list, int cutoff,
                                 int max_degree, int phi_grid = 8);

struct FrequencyFit {
    int mode = 0;
    double omega = 0;   // measured frequency (positive for e^{-i omega t})
    double stderr_ = 0;
    bool skipped = false;      // vanishing amplitude
    bool jump_guard_hit = false; // |d arg| > pi/2 between samples
};

/// per-mode frequency via linear regression of the unwrapped phase
std::vector<FrequencyFit> measured_frequencies(const Trajectory& traj,
                                               const std::vector<int>& modes);

struct FloquetResult {
    std::vector<std::complex<double>> eigenvalues;
    int dimension = 0;
    int blocks = 0;
    // interior matching: predictions i(omega.l + s(sqrt|j| + eps^2 (m1+c_j) j))
    // for |l|_inf <= L-1, |j| <= J - max|S|
    double max_interior_residual = 0;
    int interior_checked = 0;
    double max_residual_all = 0; // over all predictions incl. boundary
};

/// Linearization of omega.d_phi - X_{H_trunc} at the approximate solution on
/// the extended basis e^{i(l.phi + j x)}, j not in S, |j| <= J_max,
/// |l|_inf <= L_max. The operator conserves q = v.l + s j, so it is
/// assembled and eigensolved block by block.
FloquetResult floquet_spectrum(const Poly& H_trunc, const ApproxSolution& approx,
                               int l_max, int j_max, int dim_cap = 6000);

} // namespace wwnf
