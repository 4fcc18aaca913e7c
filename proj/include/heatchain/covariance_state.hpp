// Symmetrized second moments of the chain.

#pragma once

#include <Eigen/Dense>

namespace heatchain {

// sigma(i, j) = <{z_i, z_j}>/2 with z = (x_1..x_N, p_1..p_N).
struct CovarianceState {
    Eigen::MatrixXd sigma;
    double time{0.0};

    int n_sites() const { return static_cast<int>(sigma.rows() / 2); }

    auto xx() const { return sigma.topLeftCorner(n_sites(), n_sites()); }
    auto pp() const { return sigma.bottomRightCorner(n_sites(), n_sites()); }
    // xp()(i, j) = <x_i p_j>
    auto xp() const { return sigma.topRightCorner(n_sites(), n_sites()); }

    void symmetrize() { sigma = 0.5 * (sigma + sigma.transpose()).eval(); }
};

struct PsdCheck {
    double min_eigenvalue{0.0};
    double max_eigenvalue{0.0};
    bool ok{true};

    // min / max, the quantity bounded below by -tolerance.
    double ratio() const { return max_eigenvalue > 0.0 ? min_eigenvalue / max_eigenvalue : 0.0; }
};

// PSD up to tolerance: min eig >= -tolerance * max eig.
PsdCheck check_psd(const Eigen::MatrixXd& sigma, double tolerance = 1e-10);

}  // namespace heatchain
