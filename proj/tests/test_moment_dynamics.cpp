#include <cmath>
#include <random>

#include "doctest.h"
#include "heatchain/diffusion.hpp"
#include "heatchain/moment_dynamics.hpp"
#include "heatchain/verification.hpp"

using namespace heatchain;
using doctest::Approx;

namespace {

ChainParams unit_chain(int n = 16) {
    ChainParams p;
    p.n_sites = n;
    return p;
}

ModelMatrices bath_matrices(const ChainParams& p) { return build_matrices(p, diffusion_profile(p, p.bath_temp)); }

Eigen::MatrixXd random_symmetric(int dim, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Eigen::MatrixXd s(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j <= i; ++j) s(i, j) = s(j, i) = u(rng);
    return s;
}

}  // namespace

TEST_CASE("moment_rhs matches the entry-wise transcription") {
    std::mt19937_64 rng(11);
    for (int n : {4, 5, 9}) {
        ChainParams p = unit_chain(n);
        p.gamma_fric = 0.04;
        p.omega0 = 0.6;
        p.mass = 1.4;
        const ModelMatrices m = bath_matrices(p);
        const Eigen::MatrixXd s = random_symmetric(2 * n, rng);
        const Eigen::MatrixXd ref = oracle::moment_rhs_loops(s, p, m.diffusion.topLeftCorner(n, n),
                                                             m.diffusion.bottomRightCorner(n, n));
        CHECK((moment_rhs({s, 0.0}, m) - ref).cwiseAbs().maxCoeff() < 1e-13);
        CHECK((moment_rhs({s, 0.0}, m) - (m.drift * s + s * m.drift.transpose() + 2 * m.diffusion))
                  .cwiseAbs()
                  .maxCoeff() < 1e-13);
    }
}

TEST_CASE("moment_rhs rejects a dimension mismatch") {
    const ModelMatrices m = bath_matrices(unit_chain(6));
    CHECK_THROWS_AS(moment_rhs({Eigen::MatrixXd::Zero(10, 10), 0.0}, m), std::invalid_argument);
}

TEST_CASE("Gibbs state is a fixed point of the right-hand side") {
    for (double gam : {0.0, 0.03}) {
        ChainParams p = unit_chain(12);
        p.gamma_fric = gam;
        const ModelMatrices m = bath_matrices(p);
        const Eigen::MatrixXd rhs = moment_rhs(gibbs_covariance(p, p.bath_temp), m);
        CHECK(rhs.cwiseAbs().maxCoeff() < 1e-10 * m.diffusion.cwiseAbs().maxCoeff());
    }
}

TEST_CASE("Hamiltonian flow from the ground state conserves the energy") {
    const ChainParams p = unit_chain(8);
    const ModelMatrices m = build_hamiltonian_matrices(p);
    const CovarianceState g = gibbs_covariance(p, 0.0);
    const Eigen::VectorXd rate = energy_rate(g, m);
    CHECK(std::abs(rate.sum()) < 1e-14);
}

TEST_CASE("evolve lands on t_final and emits initial and final samples") {
    ChainParams p = unit_chain(8);
    const ModelMatrices m = bath_matrices(p);
    EvolveOptions opt;
    opt.t_final = 1.234;
    opt.sample_stride = 7;
    const auto traj = evolve_trajectory(gibbs_covariance(p, 3.0), m, opt);
    REQUIRE(traj.size() >= 2);
    CHECK(traj.front().time == 0.0);
    CHECK(traj.back().time == Approx(1.234).epsilon(1e-14));
    const double dt = evolve_step(m, 0.0, opt);
    CHECK(dt <= 0.05 / max_frequency(p) + 1e-15);
}

TEST_CASE("Gibbs initial state stays stationary") {
    ChainParams p = unit_chain(16);
    const ModelMatrices m = bath_matrices(p);
    const CovarianceState g = gibbs_covariance(p, p.bath_temp);
    EvolveOptions opt;
    opt.t_final = 10.0 / p.lambda_fric;
    opt.sample_stride = 200;
    const EvolveSummary s = evolve(g, m, opt);
    CHECK((s.final_state.sigma - g.sigma).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("total energy relaxes exactly as exp(-2 lambda t) for gamma = 0") {
    ChainParams p = unit_chain(16);
    const ModelMatrices m = bath_matrices(p);
    const CovarianceState init = heated_state(p, p.bath_temp, 3 * p.bath_temp, indicator_weights(16, {3, 4}));
    const double u0 = site_observables(init, p).total_energy;
    const double u_eq = 16 * gibbs_energy_density(p, p.bath_temp);
    EvolveOptions opt;
    opt.t_final = 20.0;
    opt.sample_stride = 50;
    std::vector<double> t, u;
    evolve(init, m, opt, [&](const CovarianceState& s) {
        t.push_back(s.time);
        u.push_back(site_observables(s, p).total_energy);
        CHECK(u.back() == Approx(u_eq + (u0 - u_eq) * std::exp(-2 * p.lambda_fric * s.time)).epsilon(1e-10));
    });
    CHECK(-fit_log_slope(t, u, u_eq) == Approx(2 * p.lambda_fric).epsilon(1e-8));
}

TEST_CASE("stationary covariance: Fourier solve against dense Kronecker solve") {
    ChainParams p = unit_chain(4);
    p.gamma_fric = 0.04;
    p.omega0 = 0.3;
    const ModelMatrices m = bath_matrices(p);
    const CovarianceState f = stationary_covariance(m);
    const CovarianceState d = stationary_covariance_dense(m);
    CHECK((f.sigma - d.sigma).cwiseAbs().maxCoeff() < 1e-12 * d.sigma.cwiseAbs().maxCoeff());
}

TEST_CASE("stationary covariance equals Gibbs with and without neighbour friction") {
    for (double gam : {0.0, 0.02}) {
        ChainParams p = unit_chain(24);
        p.lambda_fric = 0.1;
        p.gamma_fric = gam;
        for (double t : {0.5, 2.0, 50.0}) {
            p.bath_temp = t;
            const CovarianceState s = stationary_covariance(bath_matrices(p));
            const CovarianceState g = oracle::gibbs_dense(p, t);
            CHECK((s.sigma - g.sigma).cwiseAbs().maxCoeff() < 1e-9 * g.sigma.cwiseAbs().maxCoeff());
        }
    }
}

TEST_CASE("stationary covariance rejects a non-Hurwitz drift") {
    const ModelMatrices m = build_hamiltonian_matrices(unit_chain(6));
    CHECK_THROWS_AS(stationary_covariance(m), std::invalid_argument);
}

TEST_CASE("site observables") {
    SUBCASE("Gibbs carries no current") {
        const ChainParams p = unit_chain(10);
        const SiteObservables o = site_observables(gibbs_covariance(p, 2.0), p);
        CHECK(o.currents.cwiseAbs().maxCoeff() == 0.0);
    }
    SUBCASE("decoupled ground state has E_k = hbar omega0 / 2") {
        ChainParams p = unit_chain(6);
        p.xi = 0.0;
        p.omega0 = 2.5;
        const SiteObservables o = site_observables(gibbs_covariance(p, 0.0), p);
        for (int k = 0; k < 6; ++k) CHECK(o.energies(k) == Approx(p.hbar * p.omega0 / 2));
    }
    SUBCASE("translation-invariant state gives equal energies and currents") {
        const ChainParams p = unit_chain(9);
        std::mt19937_64 rng(3);
        const Eigen::MatrixXd r = random_symmetric(18, rng);
        // Average r over all ring shifts to make it shift-invariant.
        Eigen::MatrixXd s = Eigen::MatrixXd::Zero(18, 18);
        for (int sh = 0; sh < 9; ++sh)
            for (int i = 0; i < 18; ++i)
                for (int j = 0; j < 18; ++j) {
                    const int ii = (i / 9) * 9 + (i % 9 + sh) % 9;
                    const int jj = (j / 9) * 9 + (j % 9 + sh) % 9;
                    s(ii, jj) += r(i, j) / 9;
                }
        const SiteObservables o = site_observables({s, 0.0}, p);
        CHECK(o.energies.maxCoeff() - o.energies.minCoeff() < 1e-14);
        CHECK(o.currents.maxCoeff() - o.currents.minCoeff() < 1e-14);
    }
}

TEST_CASE("Hamiltonian energy rate is minus the current divergence") {
    const ChainParams p = unit_chain(10);
    const ModelMatrices m = build_hamiltonian_matrices(p);
    std::mt19937_64 rng(5);
    const CovarianceState s{random_symmetric(20, rng), 0.0};
    const Eigen::VectorXd rate = energy_rate(s, m);
    const Eigen::VectorXd j = site_observables(s, p).currents;
    for (int k = 0; k < 10; ++k) CHECK(rate(k) == Approx(-(j((k + 1) % 10) - j(k))).epsilon(1e-13));

    // Exact derivative of E_k from the full right-hand side.
    const Eigen::MatrixXd d = moment_rhs(s, m);
    const SiteObservables de = site_observables({d, 0.0}, p);
    CHECK((de.energies - rate).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("energy rate equals d E_k / dt from the moment equation, gamma != 0") {
    ChainParams p = unit_chain(10);
    p.gamma_fric = 0.04;
    const ModelMatrices m = bath_matrices(p);
    std::mt19937_64 rng(8);
    const CovarianceState s{random_symmetric(20, rng), 0.0};
    const SiteObservables de = site_observables({moment_rhs(s, m), 0.0}, p);
    CHECK((de.energies - energy_rate(s, m)).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("energy balance residual on a finely sampled run") {
    ChainParams p = unit_chain(16);
    p.gamma_fric = 0.03;
    const ModelMatrices m = bath_matrices(p);
    const CovarianceState init = heated_state(p, 1.0, 4.0, gaussian_weights(16, 8.0, 2.0));
    EvolveOptions opt;
    opt.t_final = 5.0;
    opt.dt_max = 0.002;
    opt.sample_stride = 1;
    const auto traj = evolve_trajectory(init, m, opt);
    const EnergyBalanceReport rep = energy_balance_residual(traj, m);
    CHECK_FALSE(rep.too_coarse);
    CHECK(rep.normalized < 1e-4);

    EvolveOptions coarse = opt;
    coarse.sample_stride = 100;
    CHECK(energy_balance_residual(evolve_trajectory(init, m, coarse), m).too_coarse);

    const auto eq = evolve_trajectory(gibbs_covariance(p, p.bath_temp), m, coarse);
    const EnergyBalanceReport er = energy_balance_residual(eq, m);
    CHECK(er.max_abs_residual < 1e-10);
    CHECK(er.max_abs_rate < 1e-10);
}

TEST_CASE("PSD violation aborts evolve with a diagnostic") {
    const ChainParams p = unit_chain(6);
    const ModelMatrices m = bath_matrices(p);
    CovarianceState bad = gibbs_covariance(p, 1.0);
    bad.sigma(0, 0) = -1.0;
    EvolveOptions opt;
    opt.t_final = 1.0;
    CHECK_THROWS_AS(evolve(bad, m, opt), PsdViolation);
    opt.psd_check_every = 0;
    CHECK_NOTHROW(evolve(bad, m, opt));
}

TEST_CASE("heated state and weights") {
    const ChainParams p = unit_chain(8);
    const CovarianceState h = heated_state(p, 1.0, 3.0, indicator_weights(8, {2}));
    const CovarianceState c = gibbs_covariance(p, 1.0);
    const CovarianceState w = gibbs_covariance(p, 3.0);
    CHECK(h.sigma(2, 2) == Approx(w.sigma(0, 0)));
    CHECK(h.sigma(10, 10) == Approx(w.sigma(8, 8)));
    CHECK(h.sigma(3, 3) == c.sigma(3, 3));
    CHECK_THROWS_AS(heated_state(p, 3.0, 1.0, indicator_weights(8, {2})), std::invalid_argument);
    CHECK_THROWS_AS(indicator_weights(8, {8}), std::invalid_argument);

    const Eigen::VectorXd g = gaussian_weights(8, 0.0, 1.0);
    CHECK(g(0) == 1.0);
    CHECK(g(1) == Approx(g(7)));
}

TEST_CASE("log-slope fit is exact on exponentials") {
    std::vector<double> t, y;
    for (int i = 0; i < 20; ++i) {
        t.push_back(0.5 * i);
        y.push_back(3.0 - 2.0 * std::exp(-0.37 * t.back()));
    }
    CHECK(fit_log_slope(t, y, 3.0) == Approx(-0.37).epsilon(1e-12));
}
