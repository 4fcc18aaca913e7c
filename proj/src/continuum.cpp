#include "heatchain/continuum.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "heatchain/diffusion.hpp"
#include "heatchain/moment_dynamics.hpp"

namespace heatchain {

namespace {

constexpr int kMinGrid = 8;

double diffusion_constant(const ChainParams& p) {
    return p.lattice_const * p.lattice_const * p.xi / (2.0 * p.lambda_fric * p.mass);
}

Eigen::VectorXd periodic_laplacian(const Eigen::VectorXd& u, double dx) {
    const Eigen::Index n = u.size();
    Eigen::VectorXd lap(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double left = u((i + n - 1) % n);
        const double right = u((i + 1) % n);
        lap(i) = (left - 2.0 * u(i) + right) / (dx * dx);
    }
    return lap;
}

double l2_norm(const Eigen::VectorXd& v) { return v.norm(); }

}  // namespace

TransportCoefficients transport_coefficients(const ChainParams& p, double temp) {
    validate(p);
    TransportCoefficients t;
    const double sound = std::sqrt(p.xi / p.mass);
    t.eff_velocity = p.lattice_const * sound;
    t.range_b = p.lattice_const / (2.0 * p.lambda_fric) * sound;
    t.diff_const = diffusion_constant(p);
    t.heat_capacity = heat_capacity_density(p, temp);
    t.kappa = t.diff_const * t.heat_capacity;
    t.sigma_diffusivity = diffusion_constant(p);
    return t;
}

double heat_step_bound(const ChainParams& p, double dx) {
    return std::min(0.4 * dx * dx / diffusion_constant(p), 0.1 / (2.0 * p.lambda_fric));
}

std::vector<ContinuumField> solve_heat(const ContinuumField& field0, const ChainParams& p, double source,
                                       const std::vector<double>& sample_times, double dt) {
    validate(p);
    if (field0.size() < kMinGrid) throw std::invalid_argument("solve_heat: grid needs at least 8 cells");
    if (!(field0.dx > 0.0)) throw std::invalid_argument("solve_heat: dx must be > 0");
    if (!field0.values.allFinite()) throw std::invalid_argument("solve_heat: initial field is not finite");
    if (!(source >= 0.0)) throw std::invalid_argument("solve_heat: source must be >= 0");

    const double bound = heat_step_bound(p, field0.dx);
    if (dt != 0.0 && (dt > bound || !(dt > 0.0))) {
        std::ostringstream os;
        os << "solve_heat: dt = " << dt << " violates the explicit stability bound " << bound;
        throw CflViolation(os.str());
    }
    const double step_max = dt == 0.0 ? bound : dt;
    const double diff = diffusion_constant(p);
    const double decay = 2.0 * p.lambda_fric;
    const double dx = field0.dx;
    auto rhs = [&](const Eigen::VectorXd& u) -> Eigen::VectorXd {
        return (diff * periodic_laplacian(u, dx) - decay * u).array() + source;
    };

    std::vector<ContinuumField> out;
    out.reserve(sample_times.size());
    ContinuumField field = field0;
    for (double target : sample_times) {
        if (target < field.time - 1e-12 * std::max(1.0, std::abs(target)))
            throw std::invalid_argument("solve_heat: sample times must be ascending and >= the start time");
        const double span = target - field.time;
        const long steps = span > 0.0 ? static_cast<long>(std::ceil(span / step_max - 1e-9)) : 0;
        const double h = steps > 0 ? span / static_cast<double>(steps) : 0.0;
        for (long i = 0; i < steps; ++i) {
            const Eigen::VectorXd& u = field.values;
            const Eigen::VectorXd k1 = rhs(u);
            const Eigen::VectorXd k2 = rhs(u + 0.5 * h * k1);
            const Eigen::VectorXd k3 = rhs(u + 0.5 * h * k2);
            const Eigen::VectorXd k4 = rhs(u + h * k3);
            field.values += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }
        field.time = target;
        out.push_back(field);
    }
    return out;
}

ContinuumField solve_heat(const ContinuumField& field0, const ChainParams& p, double source, double t_final) {
    return solve_heat(field0, p, source, std::vector<double>{t_final}).back();
}

Eigen::VectorXd fourier_current(const ContinuumField& field, const ChainParams& p) {
    const double diff = diffusion_constant(p);
    const Eigen::Index n = field.values.size();
    Eigen::VectorXd j(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double grad = (field.values((i + 1) % n) - field.values((i + n - 1) % n)) / (2.0 * field.dx);
        j(i) = -diff * grad;
    }
    return j;
}

double klemens_conductivity(const ChainParams& p, double temp, GroupVelocity velocity) {
    validate(p);
    if (!(temp >= 0.0)) throw std::invalid_argument("klemens_conductivity: temperature must be >= 0");
    const double tau = 1.0 / (2.0 * p.lambda_fric);
    const double kT = p.k_boltz * temp;
    const double sound = p.lattice_const * std::sqrt(p.xi / p.mass);
    double sum = 0.0;
    for (double q : mode_grid(p)) {
        const double v = velocity == GroupVelocity::dispersion ? p.lattice_const * dispersion_slope(p, q) : sound;
        const double w = dispersion(p, q);
        // d eps / dT of the Bose-Einstein mode energy; k_B for the omega = 0 mode.
        const double cv = mode_heat_capacity(p.hbar * w, kT, p.k_boltz);
        sum += v * v * tau * cv;
    }
    return sum / (p.n_sites * p.lattice_const);
}

ComparisonReport compare_discrete_continuum(const ChainParams& params, const HotspotScenario& sc) {
    ChainParams p = params;
    p.bath_temp = sc.t_cold;
    validate(p);
    if (!(sc.t_hot >= sc.t_cold)) throw std::invalid_argument("compare: t_hot must be >= t_cold");

    const int n = p.n_sites;
    const double a = p.lattice_const;
    const double t_final = sc.t_final > 0.0 ? sc.t_final : 5.0 / p.lambda_fric;

    ComparisonReport report;
    const TransportCoefficients tc = transport_coefficients(p, p.bath_temp);
    report.diff_const = tc.diff_const;
    report.range_b = tc.range_b;
    report.energy_density_eq = gibbs_energy_density(p, p.bath_temp);
    report.source = source_density(p, lattice_diffusion(p, p.bath_temp));

    if (sc.width < 0.0) throw std::invalid_argument("compare: hotspot_width must be >= 0");
    if (sc.width > 0.0 && sc.width < tc.range_b) report.flags.emplace_back("hotspot narrower than the range b");
    if (tc.range_b < a) report.flags.emplace_back("range b below one lattice constant (lambda too large)");
    if (sc.width > 0.25 * n * a) report.flags.emplace_back("hotspot wider than a quarter of the ring");

    const ModelMatrices m = build_matrices(p, diffusion_profile(p, p.bath_temp));
    // width 0 heats every site uniformly
    const Eigen::VectorXd weights =
        sc.width > 0.0 ? gaussian_weights(n, 0.5 * n, sc.width / a) : Eigen::VectorXd::Ones(n);
    const CovarianceState init = heated_state(p, sc.t_cold, sc.t_hot, weights);

    EvolveOptions opt;
    opt.t_final = t_final;
    opt.dt_max = sc.dt_max;
    opt.sample_stride = sc.sample_stride;
    opt.psd_check_every = sc.psd_check_every;
    const EvolveSummary summary = evolve(init, m, opt, [&](const CovarianceState& s) {
        const SiteObservables obs = site_observables(s, p);
        report.times.push_back(s.time);
        report.chain_density.push_back(obs.densities);
        report.chain_current.push_back(obs.currents);
    });
    report.worst_psd_ratio = summary.worst_psd_ratio;

    ContinuumField u0{report.chain_density.front(), a, 0.0};
    const std::vector<ContinuumField> pde = solve_heat(u0, p, report.source, report.times);

    const double w_begin = sc.window_begin / p.lambda_fric;
    const double w_end = sc.window_end / p.lambda_fric;
    double jg = 0.0;
    double gg = 0.0;
    for (std::size_t i = 0; i < pde.size(); ++i) {
        const Eigen::VectorXd& uc = report.chain_density[i];
        const Eigen::VectorXd& up = pde[i].values;
        report.pde_density.push_back(up);
        report.pde_current.push_back(fourier_current(pde[i], p));
        const double diff = l2_norm(uc - up);
        const double l2 = diff / l2_norm(up);
        const double excess_norm = l2_norm(up.array() - report.energy_density_eq);
        const double excess = excess_norm > 0.0 ? diff / excess_norm : 0.0;
        report.l2_deviation.push_back(l2);
        report.excess_deviation.push_back(excess);

        const double t = report.times[i];
        if (t < w_begin - 1e-9 || t > w_end + 1e-9) continue;
        report.max_l2_in_window = std::max(report.max_l2_in_window, l2);
        report.max_excess_in_window = std::max(report.max_excess_in_window, excess);
        // J_k lives on the bond (k-1, k); pair it with the bond gradient.
        const Eigen::VectorXd& j = report.chain_current[i];
        for (int k = 0; k < n; ++k) {
            const double g = -(uc(k) - uc((k + n - 1) % n)) / a;
            jg += j(k) * g;
            gg += g * g;
        }
    }
    report.fourier_slope = gg > 0.0 ? jg / gg : 0.0;
    return report;
}

}  // namespace heatchain
