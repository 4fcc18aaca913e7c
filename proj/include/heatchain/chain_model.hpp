// Lattice/bath parameters, phonon dispersion and the
// generator matrices of the second-moment dynamics.

#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

namespace heatchain {

// Physical constants of the harmonic ring and its bath. Natural units by
// default (hbar = k_B = 1).
struct ChainParams {
    int n_sites{64};
    double mass{1.0};
    double omega0{1.0};        // on-site frequency
    double xi{1.0};            // nearest-neighbour spring constant
    double lattice_const{1.0};
    double lambda_fric{0.1};   // on-site friction rate
    double gamma_fric{0.0};    // nearest-neighbour friction rate
    double hbar{1.0};
    double k_boltz{1.0};
    double bath_temp{2.0};
};

// Every violated constraint, one message per item. Empty when valid.
std::vector<std::string> validation_errors(const ChainParams& p);

// Throws std::invalid_argument carrying all validation errors.
void validate(const ChainParams& p);

// omega(q) = sqrt(omega0^2 + (4 xi/m) sin^2(q/2)), q dimensionless.
double dispersion(const ChainParams& p, double q);

// d omega / dq (dimensionless q). For omega0 = 0 the q -> 0+ limit is returned
// at q = 0.
double dispersion_slope(const ChainParams& p, double q);

// omega(pi), the zone-edge frequency.
double max_frequency(const ChainParams& p);

// Wavenumbers 2 pi n / N, n = 0..N-1, folded into (-pi, pi].
std::vector<double> mode_grid(const ChainParams& p);

// First row of a symmetric circulant, entry r coupling sites k and k+r.
// row(r) == row(N - r) is expected.
using CirculantRow = Eigen::VectorXd;

Eigen::MatrixXd circulant(const CirculantRow& first_row);

// Fourier symbol sum_r row(r) cos(q r) of a symmetric circulant.
double circulant_symbol(const CirculantRow& first_row, double q);

// Bath diffusion blocks as circulant first rows (x-x and p-p). The x-p block
// is identically zero.
struct DiffusionProfile {
    CirculantRow xx;
    CirculantRow pp;
};

// Generator of d Sigma/dt = A Sigma + Sigma A^T + 2 D with the ordering
// (x_1..x_N, p_1..p_N).
struct ModelMatrices {
    ChainParams params;
    Eigen::MatrixXd drift;      // [[-Lambda, I/m], [-K, -Lambda]]
    Eigen::MatrixXd diffusion;  // [[Dxx, 0], [0, Dpp]]
    Eigen::MatrixXd stiffness;  // K
    Eigen::MatrixXd friction;   // Lambda
    DiffusionProfile profile;

    int n_sites() const { return params.n_sites; }
    double stiffness_diag() const;
    double stiffness_offdiag() const;
    double friction_diag() const { return params.lambda_fric; }
    double friction_offdiag() const { return params.gamma_fric; }
};

// Rejects 2 gamma > lambda and diffusion blocks whose Fourier symbols are
// negative (D must be PSD).
ModelMatrices build_matrices(const ChainParams& p, const DiffusionProfile& profile);

// Same generator with the bath switched off: Lambda = 0, D = 0.
ModelMatrices build_hamiltonian_matrices(const ChainParams& p);

// A * S using the tridiagonal circulant structure of K and Lambda, O(N^2).
Eigen::MatrixXd apply_drift(const ModelMatrices& m, const Eigen::MatrixXd& s);

}  // namespace heatchain
