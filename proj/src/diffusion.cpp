#include "heatchain/diffusion.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace heatchain {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kQuadAbsTol = 1e-12;
constexpr double kQuadRelTol = 1e-10;
constexpr unsigned kQuadMaxDepth = 30;

void require_temperature(double temp) {
    if (!(temp >= 0.0) || !std::isfinite(temp))
        throw std::invalid_argument("temperature must be finite and >= 0");
}

// Per-mode frequency and coth factor of the ring; the omega = 0 mode (only
// present for omega0 = 0) is flagged and skipped by every sum.
struct ModeTable {
    std::vector<double> q;
    std::vector<double> omega;
    std::vector<double> coth;
    std::vector<bool> skip;

    ModeTable(const ChainParams& p, double temp) : q(mode_grid(p)) {
        const double kT = p.k_boltz * temp;
        omega.reserve(q.size());
        coth.reserve(q.size());
        skip.reserve(q.size());
        for (double qi : q) {
            const double w = dispersion(p, qi);
            omega.push_back(w);
            const bool zero = (w == 0.0);
            skip.push_back(zero);
            coth.push_back(zero ? 0.0 : thermal_coth(p.hbar * w, kT));
        }
    }

    // sum_q f(q) g(omega, coth) cos(q r) (c0 + 2 c1 cos q)
    double sum(Kernel kernel, int r, double c0, double c1) const {
        double acc = 0.0;
        for (std::size_t i = 0; i < q.size(); ++i) {
            if (skip[i]) continue;
            const double g = kernel == Kernel::position ? coth[i] / omega[i] : coth[i] * omega[i];
            acc += g * std::cos(q[i] * r) * (c0 + 2.0 * c1 * std::cos(q[i]));
        }
        return acc;
    }
};

double kernel_prefactor_sum(const ChainParams& p, Kernel kernel) {
    const double n = p.n_sites;
    return kernel == Kernel::position ? p.hbar / (2.0 * p.mass * n) : p.hbar * p.mass / (2.0 * n);
}

// Symmetric circulant row from entries r = 0..N/2.
template <class F>
CirculantRow mirrored_row(int n, F&& entry) {
    CirculantRow row(n);
    for (int r = 0; r <= n / 2; ++r) {
        row(r) = entry(r);
        row((n - r) % n) = row(r);
    }
    return row;
}

}  // namespace

double thermal_coth(double hbar_omega, double kT) {
    if (kT <= 0.0) return 1.0;
    const double x = hbar_omega / (2.0 * kT);
    if (x > 350.0) return 1.0;
    return 1.0 + 2.0 / std::expm1(2.0 * x);
}

double quad_diffusion(const ChainParams& p, double temp, Kernel kernel, int r) {
    validate(p);
    require_temperature(temp);
    if (r < 0) throw std::invalid_argument("quad_diffusion: displacement must be >= 0");
    if (kernel == Kernel::momentum && r != 0)
        throw std::invalid_argument("quad_diffusion: momentum kernel is defined for r = 0 only");
    if (kernel == Kernel::position && p.omega0 == 0.0)
        throw std::invalid_argument(
            "quad_diffusion: position kernel diverges at q = 0 for omega0 = 0; use the "
            "finite-N mode sum");

    const double kT = p.k_boltz * temp;
    const double lam = p.lambda_fric;
    const double gam = p.gamma_fric;
    auto integrand = [&](double q) {
        const double w = dispersion(p, q);
        const double c = thermal_coth(p.hbar * w, kT);
        const double weight = lam + 2.0 * gam * std::cos(q);
        if (kernel == Kernel::momentum) return c * w * weight;
        return c / w * std::cos(q * r) * weight;
    };

    double error = 0.0;
    double l1 = 0.0;
    // Even integrand: integrate [0, pi] and double.
    const double half = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
        integrand, 0.0, kPi, kQuadMaxDepth, kQuadRelTol * 1e-2, &error, &l1);
    if (!std::isfinite(half) || error > std::max(kQuadAbsTol, kQuadRelTol * l1)) {
        std::ostringstream os;
        os << "quad_diffusion: quadrature did not converge (estimate " << half << ", error "
           << error << ")";
        throw QuadratureError(os.str());
    }
    const double pref =
        kernel == Kernel::position ? p.hbar / (4.0 * kPi * p.mass) : p.hbar * p.mass / (4.0 * kPi);
    return pref * 2.0 * half;
}

double mode_sum_diffusion(const ChainParams& p, double temp, Kernel kernel, int r) {
    validate(p);
    require_temperature(temp);
    if (r < 0) throw std::invalid_argument("mode_sum_diffusion: displacement must be >= 0");
    const ModeTable modes(p, temp);
    return kernel_prefactor_sum(p, kernel) * modes.sum(kernel, r, p.lambda_fric, p.gamma_fric);
}

DiffusionSet continuum_diffusion(const ChainParams& p, double temp) {
    return {quad_diffusion(p, temp, Kernel::position, 0), quad_diffusion(p, temp, Kernel::momentum, 0),
            quad_diffusion(p, temp, Kernel::position, 1), temp};
}

DiffusionSet lattice_diffusion(const ChainParams& p, double temp) {
    validate(p);
    require_temperature(temp);
    const ModeTable modes(p, temp);
    const double px = kernel_prefactor_sum(p, Kernel::position);
    const double pm = kernel_prefactor_sum(p, Kernel::momentum);
    const double lam = p.lambda_fric;
    const double gam = p.gamma_fric;
    return {px * modes.sum(Kernel::position, 0, lam, gam), pm * modes.sum(Kernel::momentum, 0, lam, gam),
            px * modes.sum(Kernel::position, 1, lam, gam), temp};
}

DiffusionSet high_temp_diffusion(const ChainParams& p, double temp) {
    validate(p);
    if (!(temp > 0.0)) throw std::invalid_argument("high_temp_diffusion: temperature must be > 0");
    if (p.omega0 == 0.0)
        throw std::invalid_argument("high_temp_diffusion: closed forms diverge for omega0 = 0");

    const double m = p.mass;
    const double w0 = p.omega0;
    const double kT = p.k_boltz * temp;
    const double lam = p.lambda_fric;
    const double gam = p.gamma_fric;
    const double s = std::sqrt(w0 * w0 + 4.0 * p.xi / m);

    // (w0^2 + 2xi/m - w0 S) / (2 xi w0 S), rationalized so xi -> 0 stays finite.
    const double neighbor =
        2.0 * p.xi / (m * m * w0 * s * (w0 * w0 + 2.0 * p.xi / m + w0 * s));
    const double onsite = 1.0 / (m * w0 * s);
    const double edge = (2.0 * kT / (m * w0 * w0)) /
                        (1.0 + 2.0 * p.xi / (2.0 * p.xi + m * w0 * w0) +
                         std::sqrt(1.0 + 4.0 * p.xi / (m * w0 * w0)));

    DiffusionSet d;
    d.d_xx = lam * kT * onsite + 2.0 * gam * kT * neighbor;
    d.d_pp = m * lam * kT;
    d.d_ex = lam * kT * neighbor + gam * edge;
    d.temp = temp;
    return d;
}

double printed_high_temp_d_ex(const ChainParams& p, double temp) {
    const double m = p.mass;
    const double w0 = p.omega0;
    const double s = std::sqrt(w0 * w0 + 4.0 * p.xi / m);
    return p.lambda_fric * p.k_boltz * temp / (p.xi * w0) * (w0 * w0 + 2.0 * p.xi / m - w0 * s) / s;
}

double source_density(const ChainParams& p, const DiffusionSet& d) {
    const double onsite_stiffness = p.mass * p.omega0 * p.omega0 + 2.0 * p.xi;
    return (d.d_pp / p.mass + onsite_stiffness * d.d_xx - 2.0 * p.xi * d.d_ex) / p.lattice_const;
}

DiffusionProfile diffusion_profile(const ChainParams& p, double temp, DiffusionModel model) {
    validate(p);
    require_temperature(temp);
    const int n = p.n_sites;
    if (model == DiffusionModel::nearest_neighbor) {
        const DiffusionSet d = continuum_diffusion(p, temp);
        DiffusionProfile prof{CirculantRow::Zero(n), CirculantRow::Zero(n)};
        prof.xx(0) = d.d_xx;
        prof.xx(1) = d.d_ex;
        prof.xx(n - 1) = d.d_ex;
        prof.pp(0) = d.d_pp;
        return prof;
    }
    const ModeTable modes(p, temp);
    const double px = kernel_prefactor_sum(p, Kernel::position);
    const double pm = kernel_prefactor_sum(p, Kernel::momentum);
    const double lam = p.lambda_fric;
    const double gam = p.gamma_fric;
    return {mirrored_row(n, [&](int r) { return px * modes.sum(Kernel::position, r, lam, gam); }),
            mirrored_row(n, [&](int r) { return pm * modes.sum(Kernel::momentum, r, lam, gam); })};
}

CovarianceState gibbs_covariance(const ChainParams& p, double temp) {
    require_temperature(temp);
    if (p.n_sites < 3) throw std::invalid_argument("gibbs_covariance: n_sites must be >= 3");
    if (!(p.omega0 > 0.0 || p.xi > 0.0))
        throw std::invalid_argument("gibbs_covariance: omega0 = xi = 0 has no normalizable Gibbs state");
    const int n = p.n_sites;
    const ModeTable modes(p, temp);
    const double px = kernel_prefactor_sum(p, Kernel::position);
    const double pm = kernel_prefactor_sum(p, Kernel::momentum);
    const CirculantRow xx = mirrored_row(n, [&](int r) { return px * modes.sum(Kernel::position, r, 1.0, 0.0); });
    const CirculantRow pp = mirrored_row(n, [&](int r) { return pm * modes.sum(Kernel::momentum, r, 1.0, 0.0); });

    CovarianceState state;
    state.sigma = Eigen::MatrixXd::Zero(2 * n, 2 * n);
    state.sigma.topLeftCorner(n, n) = circulant(xx);
    state.sigma.bottomRightCorner(n, n) = circulant(pp);
    return state;
}

double gibbs_energy_density(const ChainParams& p, double temp) {
    require_temperature(temp);
    const ModeTable modes(p, temp);
    const double px = kernel_prefactor_sum(p, Kernel::position);
    const double pm = kernel_prefactor_sum(p, Kernel::momentum);
    const double x0 = px * modes.sum(Kernel::position, 0, 1.0, 0.0);
    const double x1 = px * modes.sum(Kernel::position, 1, 1.0, 0.0);
    const double p0 = pm * modes.sum(Kernel::momentum, 0, 1.0, 0.0);
    const double site = p0 / (2.0 * p.mass) + (0.5 * p.mass * p.omega0 * p.omega0 + p.xi) * x0 - p.xi * x1;
    return site / p.lattice_const;
}

double mode_heat_capacity(double hbar_omega, double kT, double k_boltz) {
    if (kT <= 0.0) return 0.0;
    const double x = hbar_omega / (2.0 * kT);
    if (x == 0.0) return k_boltz;
    if (x > 350.0) return 0.0;
    const double e = std::exp(-2.0 * x);
    const double den = -std::expm1(-2.0 * x);
    return k_boltz * 4.0 * x * x * e / (den * den);
}

double heat_capacity_density(const ChainParams& p, double temp) {
    require_temperature(temp);
    const ModeTable modes(p, temp);
    const double kT = p.k_boltz * temp;
    double sum = 0.0;
    for (std::size_t i = 0; i < modes.q.size(); ++i) {
        if (modes.skip[i]) continue;
        sum += mode_heat_capacity(p.hbar * modes.omega[i], kT, p.k_boltz);
    }
    return sum / (p.n_sites * p.lattice_const);
}

GibbsSummary gibbs_summary(const ChainParams& p, double temp) {
    return {gibbs_covariance(p, temp), gibbs_energy_density(p, temp), heat_capacity_density(p, temp)};
}

}  // namespace heatchain
