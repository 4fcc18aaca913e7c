#include "heatchain/moment_dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "heatchain/diffusion.hpp"

namespace heatchain {

namespace {

constexpr int kDenseMaxSites = 16;

void require_shape(const CovarianceState& state, const ModelMatrices& m) {
    if (state.sigma.rows() != 2 * m.n_sites() || state.sigma.cols() != 2 * m.n_sites()) {
        std::ostringstream os;
        os << "covariance is " << state.sigma.rows() << "x" << state.sigma.cols()
           << ", generator expects " << 2 * m.n_sites() << "x" << 2 * m.n_sites();
        throw std::invalid_argument(os.str());
    }
}

int wrap(int k, int n) { return ((k % n) + n) % n; }

// out = A s + s A^T + 2 D, fused over the tridiagonal circulant blocks of A.
// `out` must not alias `s`.
void moment_rhs_into(const Eigen::MatrixXd& s, const ModelMatrices& m, Eigen::MatrixXd& out) {
    const Eigen::Index n = m.n_sites();
    const Eigen::Index dim = 2 * n;
    out.resize(dim, dim);
    const double inv_mass = 1.0 / m.params.mass;
    const double lam = m.friction_diag();
    const double gam = m.friction_offdiag();
    const double k0 = m.stiffness_diag();
    const double k1 = m.stiffness_offdiag();
    for (Eigen::Index j = 0; j < dim; ++j) {
        const double* col = s.col(j).data();
        const double* x = col;
        const double* p = col + n;
        double* top = out.col(j).data();
        double* bottom = top + n;
        auto site = [&](Eigen::Index i, Eigen::Index up, Eigen::Index down) {
            const double xn = x[up] + x[down];
            const double pn = p[up] + p[down];
            top[i] = p[i] * inv_mass - lam * x[i] - gam * xn;
            bottom[i] = -k0 * x[i] - k1 * xn - lam * p[i] - gam * pn;
        };
        site(0, n - 1, 1);
        for (Eigen::Index i = 1; i < n - 1; ++i) site(i, i - 1, i + 1);
        site(n - 1, n - 2, 0);
    }
    // Symmetric completion in cache-sized tiles.
    constexpr Eigen::Index tile = 32;
    for (Eigen::Index jb = 0; jb < dim; jb += tile) {
        const Eigen::Index je = std::min(jb + tile, dim);
        for (Eigen::Index ib = 0; ib <= jb; ib += tile) {
            const Eigen::Index ie = std::min(ib + tile, dim);
            for (Eigen::Index j = jb; j < je; ++j) {
                for (Eigen::Index i = ib; i < std::min(ie, j); ++i) {
                    const double v = out(i, j) + out(j, i) + 2.0 * m.diffusion(i, j);
                    out(i, j) = v;
                    out(j, i) = v;
                }
            }
        }
    }
    for (Eigen::Index j = 0; j < dim; ++j) out(j, j) = 2.0 * (out(j, j) + m.diffusion(j, j));
}

void symmetrize_in_place(Eigen::MatrixXd& s) {
    for (Eigen::Index j = 0; j < s.cols(); ++j) {
        for (Eigen::Index i = 0; i < j; ++i) {
            const double v = 0.5 * (s(i, j) + s(j, i));
            s(i, j) = v;
            s(j, i) = v;
        }
    }
}

}  // namespace

PsdCheck check_psd(const Eigen::MatrixXd& sigma, double tolerance) {
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sigma, Eigen::EigenvaluesOnly);
    PsdCheck out;
    out.min_eigenvalue = es.eigenvalues().minCoeff();
    out.max_eigenvalue = es.eigenvalues().maxCoeff();
    out.ok = out.min_eigenvalue >= -tolerance * std::max(out.max_eigenvalue, 0.0);
    return out;
}

Eigen::MatrixXd moment_rhs(const CovarianceState& state, const ModelMatrices& m) {
    require_shape(state, m);
    Eigen::MatrixXd out;
    moment_rhs_into(state.sigma, m, out);
    return out;
}

double evolve_step(const ModelMatrices& m, double t_start, const EvolveOptions& options) {
    if (!(options.dt_max > 0.0)) throw std::invalid_argument("evolve: dt_max must be > 0");
    if (!(options.t_final >= t_start)) throw std::invalid_argument("evolve: t_final precedes the state time");
    double dt = std::min(options.dt_max, 0.05 / max_frequency(m.params));
    if (m.params.lambda_fric > 0.0) dt = std::min(dt, 0.05 / m.params.lambda_fric);
    const double span = options.t_final - t_start;
    if (span <= 0.0) return dt;
    const double steps = std::ceil(span / dt - 1e-9);
    return span / steps;
}

EvolveSummary evolve(CovarianceState state, const ModelMatrices& m, const EvolveOptions& options,
                     const SampleObserver& observer) {
    require_shape(state, m);
    if (options.sample_stride < 1) throw std::invalid_argument("evolve: sample_stride must be >= 1");

    const double t0 = state.time;
    const double dt = evolve_step(m, t0, options);
    const long steps = options.t_final > t0 ? std::lround((options.t_final - t0) / dt) : 0;

    EvolveSummary summary;
    summary.dt = dt;
    summary.steps = steps;
    summary.worst_psd_ratio = 1.0;

    auto emit = [&](const CovarianceState& s) {
        if (options.psd_check_every > 0 && summary.samples % options.psd_check_every == 0) {
            const PsdCheck check = check_psd(s.sigma, options.psd_tolerance);
            summary.worst_psd_ratio = std::min(summary.worst_psd_ratio, check.ratio());
            if (!check.ok) {
                std::ostringstream os;
                os << "covariance lost positive semidefiniteness at t = " << s.time
                   << ": min eigenvalue " << check.min_eigenvalue << ", max eigenvalue "
                   << check.max_eigenvalue;
                throw PsdViolation(os.str());
            }
        }
        ++summary.samples;
        if (observer) observer(s);
    };

    symmetrize_in_place(state.sigma);
    emit(state);
    const Eigen::Index dim = state.sigma.rows();
    Eigen::MatrixXd acc(dim, dim), stage(dim, dim), k(dim, dim);
    for (long i = 1; i <= steps; ++i) {
        moment_rhs_into(state.sigma, m, k);
        acc = k;
        stage.noalias() = state.sigma + (0.5 * dt) * k;
        moment_rhs_into(stage, m, k);
        acc += 2.0 * k;
        stage.noalias() = state.sigma + (0.5 * dt) * k;
        moment_rhs_into(stage, m, k);
        acc += 2.0 * k;
        stage.noalias() = state.sigma + dt * k;
        moment_rhs_into(stage, m, k);
        acc += k;
        state.sigma += (dt / 6.0) * acc;
        symmetrize_in_place(state.sigma);
        state.time = t0 + static_cast<double>(i) * dt;
        if (i % options.sample_stride == 0 || i == steps) emit(state);
    }
    summary.final_state = std::move(state);
    return summary;
}

std::vector<CovarianceState> evolve_trajectory(const CovarianceState& state, const ModelMatrices& m,
                                               const EvolveOptions& options) {
    std::vector<CovarianceState> out;
    evolve(state, m, options, [&out](const CovarianceState& s) { out.push_back(s); });
    return out;
}

CovarianceState stationary_covariance(const ModelMatrices& m) {
    const ChainParams& p = m.params;
    const int n = p.n_sites;
    const std::vector<double> qs = mode_grid(p);

    Eigen::VectorXd sxx(n), sxp(n), spp(n);
    for (int i = 0; i < n; ++i) {
        const double q = qs[static_cast<std::size_t>(i)];
        const double l = p.lambda_fric + 2.0 * p.gamma_fric * std::cos(q);
        const double k = m.stiffness_diag() + 2.0 * m.stiffness_offdiag() * std::cos(q);
        if (!(l > 0.0)) {
            std::ostringstream os;
            os << "stationary_covariance: drift is not Hurwitz (friction symbol " << l << " at q = " << q
               << ")";
            throw std::invalid_argument(os.str());
        }
        const double dx = circulant_symbol(m.profile.xx, q);
        const double dp = circulant_symbol(m.profile.pp, q);
        // Unknowns (S_xx, S_xp, S_pp) of the 2x2 mode Lyapunov equation.
        Eigen::Matrix3d lhs;
        lhs << -2.0 * l, 2.0 / p.mass, 0.0,
               -k, -2.0 * l, 1.0 / p.mass,
               0.0, -2.0 * k, -2.0 * l;
        const Eigen::Vector3d rhs(-2.0 * dx, 0.0, -2.0 * dp);
        const Eigen::Vector3d s = lhs.partialPivLu().solve(rhs);
        sxx(i) = s(0);
        sxp(i) = s(1);
        spp(i) = s(2);
    }

    auto inverse = [&](const Eigen::VectorXd& symbol) {
        CirculantRow row(n);
        for (int r = 0; r <= n / 2; ++r) {
            double acc = 0.0;
            for (int i = 0; i < n; ++i) acc += symbol(i) * std::cos(qs[static_cast<std::size_t>(i)] * r);
            row(r) = acc / n;
            row((n - r) % n) = row(r);
        }
        return circulant(row);
    };

    CovarianceState out;
    out.sigma.resize(2 * n, 2 * n);
    const Eigen::MatrixXd xp = inverse(sxp);
    out.sigma << inverse(sxx), xp, xp.transpose(), inverse(spp);
    return out;
}

CovarianceState stationary_covariance_dense(const ModelMatrices& m) {
    const int n = m.n_sites();
    if (n > kDenseMaxSites)
        throw std::invalid_argument("stationary_covariance_dense: limited to n_sites <= 16");
    const Eigen::Index dim = 2 * n;
    const Eigen::VectorXcd eig = m.drift.eigenvalues();
    if (eig.real().maxCoeff() >= 0.0)
        throw std::invalid_argument("stationary_covariance_dense: drift is not Hurwitz");

    // vec(A S + S A^T) = (I (x) A + A (x) I) vec(S), column-major vec.
    const Eigen::Index big = dim * dim;
    Eigen::MatrixXd op = Eigen::MatrixXd::Zero(big, big);
    for (Eigen::Index j = 0; j < dim; ++j) {
        op.block(j * dim, j * dim, dim, dim) += m.drift;
        for (Eigen::Index l = 0; l < dim; ++l) {
            const double a = m.drift(j, l);
            if (a != 0.0) op.block(j * dim, l * dim, dim, dim).diagonal().array() += a;
        }
    }
    const Eigen::VectorXd rhs = -2.0 * Eigen::Map<const Eigen::VectorXd>(m.diffusion.data(), big);
    const Eigen::VectorXd vec = op.partialPivLu().solve(rhs);

    CovarianceState out;
    out.sigma = Eigen::Map<const Eigen::MatrixXd>(vec.data(), dim, dim);
    out.symmetrize();
    return out;
}

SiteObservables site_observables(const CovarianceState& state, const ChainParams& p) {
    const int n = state.n_sites();
    if (n < 3 || n != p.n_sites) throw std::invalid_argument("site_observables: state does not match n_sites");
    const auto xx = state.xx();
    const auto pp = state.pp();
    const auto xp = state.xp();
    const double onsite = 0.5 * p.mass * p.omega0 * p.omega0 + p.xi;

    SiteObservables obs;
    obs.time = state.time;
    obs.energies.resize(n);
    obs.currents.resize(n);
    for (Eigen::Index k = 0; k < n; ++k) {
        const Eigen::Index kp = k + 1 == n ? 0 : k + 1;
        const Eigen::Index km = k == 0 ? n - 1 : k - 1;
        obs.energies(k) = pp(k, k) / (2.0 * p.mass) + onsite * xx(k, k) -
                          0.5 * p.xi * (xx(k, kp) + xx(k, km));
        obs.currents(k) = p.xi / (2.0 * p.mass) * (xp(km, k) - xp(k, km));
    }
    obs.densities = obs.energies / p.lattice_const;
    obs.total_energy = obs.energies.sum();
    return obs;
}

Eigen::VectorXd energy_rate(const CovarianceState& state, const ModelMatrices& m) {
    require_shape(state, m);
    const ChainParams& p = m.params;
    const int n = p.n_sites;
    const auto x = state.xx();
    const auto pm = state.pp();
    const auto c = state.xp();
    const auto dxx = m.diffusion.topLeftCorner(n, n);
    const auto dpp = m.diffusion.bottomRightCorner(n, n);
    const double lam = p.lambda_fric;
    const double gam = p.gamma_fric;
    const double xi = p.xi;
    const double mass = p.mass;
    const double stiff = mass * p.omega0 * p.omega0 + 2.0 * xi;

    const SiteObservables obs = site_observables(state, p);
    Eigen::VectorXd rate(n);
    for (int k = 0; k < n; ++k) {
        const int k1 = wrap(k + 1, n);
        const int km1 = wrap(k - 1, n);
        const int k2 = wrap(k + 2, n);
        const int km2 = wrap(k - 2, n);

        const double bath = dpp(k, k) / mass + stiff * dxx(k, k) - xi * (dxx(k, k1) + dxx(k, km1));
        const double exchange = -xi / (2.0 * mass) * (c(k, k1) + c(k, km1) - c(k1, k) - c(km1, k));
        const double gamma_terms =
            -gam / mass * (pm(k, k1) + pm(k, km1)) - gam * stiff * (x(k, k1) + x(k, km1)) +
            0.5 * gam * xi * (2.0 * x(k, k) + x(k1, k1) + x(km1, km1)) +
            // second-neighbour correlations generated by the neighbour friction
            0.5 * gam * xi * (2.0 * x(km1, k1) + x(k, k2) + x(k, km2));
        rate(k) = -2.0 * lam * obs.energies(k) + bath + exchange + gamma_terms;
    }
    return rate;
}

EnergyBalanceReport energy_balance_residual(const std::vector<CovarianceState>& trajectory,
                                            const ModelMatrices& m) {
    if (trajectory.size() < 3)
        throw std::invalid_argument("energy_balance_residual: need at least 3 samples");
    const double h = trajectory[1].time - trajectory[0].time;
    if (!(h > 0.0)) throw std::invalid_argument("energy_balance_residual: samples must advance in time");
    for (std::size_t i = 2; i < trajectory.size(); ++i) {
        const double hi = trajectory[i].time - trajectory[i - 1].time;
        if (std::abs(hi - h) > 1e-9 * h)
            throw std::invalid_argument("energy_balance_residual: samples must be uniformly spaced");
    }

    EnergyBalanceReport report;
    // Central differences carry an O((h w)^2 / 6) relative error on the
    // fastest phonon.
    report.too_coarse = h * max_frequency(m.params) > 0.1;

    std::vector<Eigen::VectorXd> energies;
    energies.reserve(trajectory.size());
    for (const auto& s : trajectory) energies.push_back(site_observables(s, m.params).energies);

    for (std::size_t i = 1; i + 1 < trajectory.size(); ++i) {
        const Eigen::VectorXd fd = (energies[i + 1] - energies[i - 1]) / (2.0 * h);
        const Eigen::VectorXd res = fd - energy_rate(trajectory[i], m);
        report.max_abs_rate = std::max(report.max_abs_rate, fd.cwiseAbs().maxCoeff());
        report.max_abs_residual = std::max(report.max_abs_residual, res.cwiseAbs().maxCoeff());
        report.times.push_back(trajectory[i].time);
        report.residuals.push_back(res);
    }
    report.normalized = report.max_abs_rate > 0.0 ? report.max_abs_residual / report.max_abs_rate : 0.0;
    return report;
}

CovarianceState heated_state(const ChainParams& p, double t_cold, double t_hot,
                             const Eigen::VectorXd& weights) {
    if (weights.size() != p.n_sites) throw std::invalid_argument("heated_state: one weight per site");
    if ((weights.array() < 0.0).any()) throw std::invalid_argument("heated_state: weights must be >= 0");
    CovarianceState state = gibbs_covariance(p, t_cold);
    const CovarianceState hot = gibbs_covariance(p, t_hot);
    const int n = p.n_sites;
    const double dx = hot.sigma(0, 0) - state.sigma(0, 0);
    const double dp = hot.sigma(n, n) - state.sigma(n, n);
    if (dx < 0.0 || dp < 0.0) throw std::invalid_argument("heated_state: t_hot must be >= t_cold");
    for (int k = 0; k < n; ++k) {
        state.sigma(k, k) += weights(k) * dx;
        state.sigma(n + k, n + k) += weights(k) * dp;
    }
    return state;
}

Eigen::VectorXd gaussian_weights(int n_sites, double center, double width) {
    if (!(width > 0.0)) throw std::invalid_argument("gaussian_weights: width must be > 0");
    Eigen::VectorXd w(n_sites);
    for (int k = 0; k < n_sites; ++k) {
        double d = std::fmod(std::abs(k - center), static_cast<double>(n_sites));
        d = std::min(d, n_sites - d);
        w(k) = std::exp(-0.5 * d * d / (width * width));
    }
    return w;
}

Eigen::VectorXd indicator_weights(int n_sites, const std::vector<int>& sites) {
    Eigen::VectorXd w = Eigen::VectorXd::Zero(n_sites);
    for (int s : sites) {
        if (s < 0 || s >= n_sites) throw std::invalid_argument("indicator_weights: site out of range");
        w(s) = 1.0;
    }
    return w;
}

double fit_log_slope(const std::vector<double>& t, const std::vector<double>& y, double offset) {
    if (t.size() != y.size() || t.size() < 2) throw std::invalid_argument("fit_log_slope: need >= 2 points");
    double st = 0.0, sl = 0.0, stt = 0.0, stl = 0.0;
    const double n = static_cast<double>(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) {
        const double l = std::log(std::abs(y[i] - offset));
        st += t[i];
        sl += l;
        stt += t[i] * t[i];
        stl += t[i] * l;
    }
    return (n * stl - st * sl) / (n * stt - st * st);
}

}  // namespace heatchain
