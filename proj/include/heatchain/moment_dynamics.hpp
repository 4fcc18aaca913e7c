// Time evolution and stationary state of the chain
// covariance, plus the per-site energy and current read-outs.

#pragma once

#include <functional>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "heatchain/chain_model.hpp"
#include "heatchain/covariance_state.hpp"

namespace heatchain {

class PsdViolation : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A Sigma + Sigma A^T + 2 D
Eigen::MatrixXd moment_rhs(const CovarianceState& state, const ModelMatrices& m);

struct EvolveOptions {
    double t_final{0.0};
    double dt_max{0.05};
    int sample_stride{10};      // steps between emitted samples
    double psd_tolerance{1e-10};
    int psd_check_every{1};     // in samples; 0 disables the check
};

struct EvolveSummary {
    CovarianceState final_state;
    double dt{0.0};
    long steps{0};
    long samples{0};
    double worst_psd_ratio{1.0};  // min over checked samples of min_eig / max_eig
};

using SampleObserver = std::function<void(const CovarianceState&)>;

// Step size actually used: min(dt_max, 0.05 / omega(pi), 0.05 / lambda),
// shrunk so that an integer number of steps lands on t_final.
double evolve_step(const ModelMatrices& m, double t_start, const EvolveOptions& options);

// Classical fixed-step RK4. The observer sees the initial state, every
// sample_stride-th step and the final state. Throws PsdViolation when a
// checked sample falls below the PSD tolerance.
EvolveSummary evolve(CovarianceState state, const ModelMatrices& m, const EvolveOptions& options,
                     const SampleObserver& observer = {});

std::vector<CovarianceState> evolve_trajectory(const CovarianceState& state, const ModelMatrices& m,
                                               const EvolveOptions& options);

// Solves A Sigma + Sigma A^T + 2 D = 0 mode by mode (2x2 Lyapunov per
// wavenumber). Throws std::invalid_argument when A is not Hurwitz.
CovarianceState stationary_covariance(const ModelMatrices& m);

// Kronecker-product solve of the same equation; O((2N)^6), N <= 24.
CovarianceState stationary_covariance_dense(const ModelMatrices& m);

struct SiteObservables {
    Eigen::VectorXd energies;
    Eigen::VectorXd currents;   // J_k: current on the bond (k-1, k), positive to the right
    Eigen::VectorXd densities;
    double total_energy{0.0};
    double time{0.0};
};

SiteObservables site_observables(const CovarianceState& state, const ChainParams& p);

// Right-hand side of the site energy balance dE_k/dt, written out term by
// term from the moments (friction, bath injection, current divergence and the
// gamma-dependent exchange terms). D entries are read from m.diffusion.
Eigen::VectorXd energy_rate(const CovarianceState& state, const ModelMatrices& m);

struct EnergyBalanceReport {
    double max_abs_residual{0.0};
    double max_abs_rate{0.0};
    double normalized{0.0};
    bool too_coarse{false};
    std::vector<double> times;              // interior sample times
    std::vector<Eigen::VectorXd> residuals; // per-site residual at each time
};

// Central-difference dE_k/dt against energy_rate on a uniformly sampled
// trajectory.
EnergyBalanceReport energy_balance_residual(const std::vector<CovarianceState>& trajectory,
                                            const ModelMatrices& m);

// Gibbs(t_cold) plus weight_k times the single-site Gibbs variance increase
// (t_hot - t_cold) on the x-x and p-p diagonals.
CovarianceState heated_state(const ChainParams& p, double t_cold, double t_hot,
                             const Eigen::VectorXd& weights);

// exp(-d^2 / 2 w^2) with d the periodic distance to `center`.
Eigen::VectorXd gaussian_weights(int n_sites, double center, double width);

// 1 on the listed sites, 0 elsewhere.
Eigen::VectorXd indicator_weights(int n_sites, const std::vector<int>& sites);

// Least-squares slope of log|y - offset| against t.
double fit_log_slope(const std::vector<double>& t, const std::vector<double>& y, double offset);

}  // namespace heatchain
