// Acceptance suite. Each criterion compares the library against an
// independent oracle and carries its tolerance in code.

#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "heatchain/chain_model.hpp"
#include "heatchain/covariance_state.hpp"

namespace heatchain {

struct CriterionResult {
    int id{0};
    std::string name;
    bool passed{false};
    double measured{0.0};
    double tolerance{0.0};
    std::string detail;
    double seconds{0.0};
    // min over this criterion's covariance runs of min_eig / max_eig; 1 when
    // no covariance was checked
    double worst_psd_ratio{1.0};
    std::vector<std::pair<std::string, double>> extra;  // informational values
};

struct VerifyOptions {
    ChainParams base;             // natural-unit defaults
    std::uint64_t seed{20240917};
    std::vector<int> only;        // empty runs all nine
};

std::vector<CriterionResult> run_acceptance(const VerifyOptions& options = {});

// Single criterion. C9 additionally folds in the PSD ratios passed in.
CriterionResult run_criterion(int id, const VerifyOptions& options, double prior_worst_psd = 1.0);

// "PASS  C3 exact-energy-decay  measured=... tol=..." style line.
std::string format_result_line(const CriterionResult& r);

namespace oracle {

// Moment right-hand side written entry by entry from the Heisenberg equations
// of x_k and p_k with scalar couplings, no matrix algebra. Dxx, Dpp indexed
// by site.
Eigen::MatrixXd moment_rhs_loops(const Eigen::MatrixXd& sigma, const ChainParams& p, const Eigen::MatrixXd& dxx,
                                 const Eigen::MatrixXd& dpp);

// The on-site and nearest-neighbour equations for <x_k^2>, <p_k^2> and
// <x_k x_{k+1}> in their printed form (with the factor 2 on the <x_k p_k>
// term). Returns (d<x_k^2>, d<p_k^2>, d<x_k x_{k+1}>) as columns.
Eigen::MatrixX3d printed_site_equations(const Eigen::MatrixXd& sigma, const ChainParams& p,
                                        const Eigen::MatrixXd& dxx, const Eigen::MatrixXd& dpp);

// Thermal covariance from a dense eigendecomposition of K / m.
CovarianceState gibbs_dense(const ChainParams& p, double temp);

// Periodic-image Green's function of u_t = D u_xx - 2 lambda u + s for
// u(x, 0) = background + amp exp(-(x - x0)^2 / 2 w^2) on [0, L).
double heat_green(double x, double t, double diff, double decay, double source, double background, double amp,
                  double x0, double width, double length);

}  // namespace oracle

}  // namespace heatchain
