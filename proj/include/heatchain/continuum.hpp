// Continuum heat-transport equation with decay and source,
// transport coefficients, the phonon mode-sum conductivity, and the
// chain-versus-continuum comparison.

#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "heatchain/chain_model.hpp"

namespace heatchain {

// u(x) on a uniform periodic grid.
struct ContinuumField {
    Eigen::VectorXd values;
    double dx{1.0};
    double time{0.0};

    int size() const { return static_cast<int>(values.size()); }
    double length() const { return dx * values.size(); }
};

struct TransportCoefficients {
    double range_b{0.0};            // (a / 2 lambda) sqrt(xi/m)
    double eff_velocity{0.0};       // a sqrt(xi/m)
    double diff_const{0.0};         // 2 lambda b^2 = a^2 xi / (2 lambda m)
    double heat_capacity{0.0};      // C(T)
    double kappa{0.0};              // diff_const * C(T)
    double sigma_diffusivity{0.0};  // a^2 xi / (2 lambda m)
};

TransportCoefficients transport_coefficients(const ChainParams& p, double temp);

class CflViolation : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Largest stable explicit step: min(0.4 dx^2 / diff_const, 0.1 / (2 lambda)).
double heat_step_bound(const ChainParams& p, double dx);

// du/dt = diff_const u'' - 2 lambda u + s, second-order central Laplacian,
// classical RK4 in time. Returns u at every requested time (ascending, each
// >= field0.time). dt = 0 picks the largest step within heat_step_bound; a
// larger explicit dt throws CflViolation.
std::vector<ContinuumField> solve_heat(const ContinuumField& field0, const ChainParams& p, double source,
                                       const std::vector<double>& sample_times, double dt = 0.0);

// Field at t_final only.
ContinuumField solve_heat(const ContinuumField& field0, const ChainParams& p, double source, double t_final);

// J = -diff_const du/dx with a central difference at the grid points.
Eigen::VectorXd fourier_current(const ContinuumField& field, const ChainParams& p);

enum class GroupVelocity {
    dispersion,       // a d omega / dq of the full branch
    long_wavelength,  // a sqrt(xi/m) for every mode
};

// (1 / N a) sum_q v(q)^2 tau d eps(q, T)/dT with tau = 1 / (2 lambda).
double klemens_conductivity(const ChainParams& p, double temp,
                            GroupVelocity velocity = GroupVelocity::dispersion);

struct HotspotScenario {
    double width{40.0};         // Gaussian standard deviation, length units; 0 = uniform
    double t_hot{200.0};
    double t_cold{100.0};       // also the bath temperature
    double t_final{0.0};        // 0 means 5 / lambda
    double dt_max{0.05};
    int sample_stride{10};
    double window_begin{0.5};   // comparison window in units of 1 / lambda
    double window_end{5.0};
    int psd_check_every{1};
};

struct ComparisonReport {
    std::vector<double> times;
    std::vector<Eigen::VectorXd> chain_density;  // u_k at x = k a
    std::vector<Eigen::VectorXd> chain_current;  // J_k on bond (k-1, k)
    std::vector<Eigen::VectorXd> pde_density;
    std::vector<Eigen::VectorXd> pde_current;
    std::vector<double> l2_deviation;      // |u_chain - u_pde| / |u_pde|
    std::vector<double> excess_deviation;  // |u_chain - u_pde| / |u_pde - u_eq|
    double max_l2_in_window{0.0};
    double max_excess_in_window{0.0};
    double fourier_slope{0.0};             // least squares J vs -du/dx through the origin
    double diff_const{0.0};
    double range_b{0.0};
    double energy_density_eq{0.0};
    double source{0.0};
    double worst_psd_ratio{1.0};
    std::vector<std::string> flags;
};

// Runs the chain from a Gaussian hotspot and the continuum equation from the
// matching coarse-grained density on the grid dx = a.
ComparisonReport compare_discrete_continuum(const ChainParams& p, const HotspotScenario& scenario);

}  // namespace heatchain
