// Bath diffusion coefficients, Gibbs covariance and the
// thermal quantities derived from it.
//
// Two families of integrals appear throughout:
//   position kernel  (hbar / 4 pi m) Int coth(hbar w / 2 kT) / w  cos(q r) (lambda + 2 gamma cos q) dq
//   momentum kernel  (hbar m / 4 pi) Int coth(hbar w / 2 kT) * w          (lambda + 2 gamma cos q) dq
// over the Brillouin zone q in [-pi, pi]. The continuum versions use adaptive
// quadrature; the lattice versions replace the integral by the N-mode sum of
// the simulated ring, which is what makes the Gibbs state exactly stationary.

#pragma once

#include <stdexcept>

#include "heatchain/chain_model.hpp"
#include "heatchain/covariance_state.hpp"

namespace heatchain {

enum class Kernel { position, momentum };

struct DiffusionSet {
    double d_xx{0.0};
    double d_pp{0.0};
    double d_ex{0.0};
    double temp{0.0};
};

// How the bath diffusion blocks are assembled for the moment dynamics.
enum class DiffusionModel {
    // Every displacement r via the N-mode sum, both blocks: D = Lambda * Sigma_Gibbs.
    full_circulant,
    // Continuum integrals truncated as written: Dxx = {D_xx, D_ex at r = +-1},
    // Dpp = D_pp * I.
    nearest_neighbor,
};

class QuadratureError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// coth(hbar w / 2 k T) evaluated in the expm1 form; 1 at T = 0.
double thermal_coth(double hbar_omega, double kT);

// Continuum Brillouin-zone integral. Position kernel accepts r >= 0, momentum
// kernel only r = 0. Throws std::invalid_argument for T < 0 or for the
// position kernel at omega0 = 0 (divergent zero mode), QuadratureError when the
// adaptive rule misses its tolerance.
double quad_diffusion(const ChainParams& p, double temp, Kernel kernel, int r);

// Same kernels summed over the N modes of the ring instead of integrated. For
// omega0 = 0 the q = 0 mode is omitted.
double mode_sum_diffusion(const ChainParams& p, double temp, Kernel kernel, int r);

// (D_xx, D_pp, D_ex) by quadrature.
DiffusionSet continuum_diffusion(const ChainParams& p, double temp);

// (D_xx, D_pp, D_ex) by N-mode sum.
DiffusionSet lattice_diffusion(const ChainParams& p, double temp);

// Leading high-temperature closed forms, including the gamma corrections.
DiffusionSet high_temp_diffusion(const ChainParams& p, double temp);

// The high-temperature D_ex lambda-term exactly as it is usually printed,
// which is twice the limit of its own integral. Kept for comparison only.
double printed_high_temp_d_ex(const ChainParams& p, double temp);

// s = [D_pp/m + (m w0^2 + 2 xi) D_xx - 2 xi D_ex] / a
double source_density(const ChainParams& p, const DiffusionSet& d);

// Circulant first rows of Dxx and Dpp at temperature T.
DiffusionProfile diffusion_profile(const ChainParams& p, double temp,
                                   DiffusionModel model = DiffusionModel::full_circulant);

// Thermal covariance of the N-site ring from the normal-mode sum. The x-p
// block vanishes.
CovarianceState gibbs_covariance(const ChainParams& p, double temp);

// Equilibrium energy per unit length, E_site / a.
double gibbs_energy_density(const ChainParams& p, double temp);

// dU/dT per unit length, from the closed-form derivative of the mode sum.
double heat_capacity_density(const ChainParams& p, double temp);

// k_B x^2 / sinh^2(x) with x = hbar w / 2 k T: heat capacity of one mode.
double mode_heat_capacity(double hbar_omega, double kT, double k_boltz);

struct GibbsSummary {
    CovarianceState covariance;
    double energy_density{0.0};
    double heat_capacity_density{0.0};
};

GibbsSummary gibbs_summary(const ChainParams& p, double temp);

}  // namespace heatchain
