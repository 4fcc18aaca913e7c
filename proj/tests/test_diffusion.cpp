#include <cmath>
#include <numbers>

#include "doctest.h"
#include "heatchain/diffusion.hpp"

using namespace heatchain;
using doctest::Approx;

namespace {

constexpr double kPi = std::numbers::pi;

ChainParams unit_chain(int n = 64) {
    ChainParams p;
    p.n_sites = n;
    return p;
}

// Composite trapezoid on [-pi, pi] with the bare coth written as 1/tanh.
double trapezoid(const ChainParams& p, double temp, Kernel kernel, int r, int points) {
    const double h = 2 * kPi / points;
    double acc = 0.0;
    for (int i = 0; i < points; ++i) {  // periodic integrand: endpoints merge
        const double q = -kPi + i * h;
        const double w = std::sqrt(p.omega0 * p.omega0 + 4 * p.xi / p.mass * std::pow(std::sin(q / 2), 2));
        const double c = 1.0 / std::tanh(p.hbar * w / (2 * p.k_boltz * temp));
        const double weight = p.lambda_fric + 2 * p.gamma_fric * std::cos(q);
        acc += kernel == Kernel::position ? c / w * std::cos(q * r) * weight : c * w * weight;
    }
    const double pref = kernel == Kernel::position ? p.hbar / (4 * kPi * p.mass) : p.hbar * p.mass / (4 * kPi);
    return pref * acc * h;
}

}  // namespace

TEST_CASE("quadrature matches a dense trapezoid oracle") {
    ChainParams p = unit_chain();
    p.lambda_fric = 0.1;
    p.gamma_fric = 0.02;
    const double oracle = trapezoid(p, 2.0, Kernel::position, 0, 1000000);
    CHECK(quad_diffusion(p, 2.0, Kernel::position, 0) == Approx(oracle).epsilon(1e-8));
    CHECK(quad_diffusion(p, 2.0, Kernel::position, 1) ==
          Approx(trapezoid(p, 2.0, Kernel::position, 1, 200000)).epsilon(1e-8));
    CHECK(quad_diffusion(p, 0.3, Kernel::momentum, 0) ==
          Approx(trapezoid(p, 0.3, Kernel::momentum, 0, 200000)).epsilon(1e-8));
}

TEST_CASE("quadrature limits") {
    ChainParams p = unit_chain();
    p.xi = 1e-10;
    for (double t : {0.0, 1.0, 50.0}) CHECK(std::abs(quad_diffusion(p, t, Kernel::position, 1)) < 1e-9);

    p.xi = 0.0;
    p.omega0 = 1.0;
    const double t = 1e4;
    CHECK(quad_diffusion(p, t, Kernel::position, 0) ==
          Approx(p.lambda_fric * p.k_boltz * t / (p.mass * p.omega0 * p.omega0)).epsilon(1e-6));
}

TEST_CASE("quadrature errors") {
    ChainParams p = unit_chain();
    CHECK_THROWS_AS(quad_diffusion(p, -1.0, Kernel::position, 0), std::invalid_argument);
    CHECK_THROWS_AS(quad_diffusion(p, 1.0, Kernel::momentum, 1), std::invalid_argument);
    p.omega0 = 0.0;
    CHECK_THROWS_AS(quad_diffusion(p, 1.0, Kernel::position, 0), std::invalid_argument);
    CHECK_NOTHROW(quad_diffusion(p, 1.0, Kernel::momentum, 0));
}

TEST_CASE("T = 0 gives finite zero-point coefficients") {
    const ChainParams p = unit_chain();
    const DiffusionSet d = continuum_diffusion(p, 0.0);
    CHECK(d.d_xx > 0.0);
    CHECK(d.d_pp > 0.0);
    CHECK(std::isfinite(d.d_ex));
    CHECK(thermal_coth(1.0, 0.0) == 1.0);
}

TEST_CASE("high-temperature closed forms") {
    ChainParams p = unit_chain();
    p.lambda_fric = 0.1;
    CHECK(high_temp_diffusion(p, 100.0).d_pp == Approx(10.0).epsilon(1e-15));

    p.gamma_fric = 0.02;
    const DiffusionSet c = high_temp_diffusion(p, 1e4);
    const DiffusionSet q = continuum_diffusion(p, 1e4);
    CHECK(c.d_xx == Approx(q.d_xx).epsilon(1e-2));
    CHECK(c.d_pp == Approx(q.d_pp).epsilon(1e-2));
    CHECK(c.d_ex == Approx(q.d_ex).epsilon(1e-2));

    p.gamma_fric = 0.0;
    p.xi = 1e-9;
    CHECK(std::abs(high_temp_diffusion(p, 10.0).d_ex) < 1e-8);
}

TEST_CASE("the usual printed D_ex lambda-term is twice its integral") {
    ChainParams p = unit_chain();
    p.omega0 = 0.7;
    p.xi = 1.4;
    const double t = 1e4;
    CHECK(printed_high_temp_d_ex(p, t) / quad_diffusion(p, t, Kernel::position, 1) == Approx(2.0).epsilon(1e-4));
}

TEST_CASE("source density equals 2 lambda k T / a on the closed forms") {
    for (double gam : {0.0, 0.02, 0.05}) {
        ChainParams p = unit_chain();
        p.omega0 = 0.6;
        p.xi = 1.5;
        p.mass = 0.8;
        p.lattice_const = 1.7;
        p.gamma_fric = gam;
        const double t = 37.0;
        const double s = source_density(p, high_temp_diffusion(p, t));
        CHECK(s == Approx(2 * p.lambda_fric * p.k_boltz * t / p.lattice_const).epsilon(1e-12));
    }
}

TEST_CASE("zero-temperature source equals 2 lambda u_eq(0)") {
    const ChainParams p = unit_chain();
    const double s = source_density(p, continuum_diffusion(p, 0.0));
    CHECK(s > 0.0);
    CHECK(s == Approx(2 * p.lambda_fric * gibbs_energy_density(p, 0.0)).epsilon(1e-10));
}

TEST_CASE("mode sums converge to the continuum integrals") {
    const ChainParams p = unit_chain(64);
    const DiffusionSet l = lattice_diffusion(p, 2.0);
    const DiffusionSet c = continuum_diffusion(p, 2.0);
    CHECK(l.d_xx == Approx(c.d_xx).epsilon(1e-12));
    CHECK(l.d_pp == Approx(c.d_pp).epsilon(1e-12));
    CHECK(l.d_ex == Approx(c.d_ex).epsilon(1e-12));
}

TEST_CASE("Gibbs covariance of decoupled oscillators in the ground state") {
    ChainParams p = unit_chain(5);
    p.xi = 0.0;
    p.omega0 = 1.7;
    p.mass = 0.9;
    p.hbar = 1.3;
    const CovarianceState g = gibbs_covariance(p, 0.0);
    const int n = 5;
    for (int i = 0; i < n; ++i) {
        CHECK(g.xx()(i, i) == Approx(p.hbar / (2 * p.mass * p.omega0)));
        CHECK(g.pp()(i, i) == Approx(p.hbar * p.mass * p.omega0 / 2));
        for (int j = 0; j < n; ++j)
            if (i != j) CHECK(std::abs(g.xx()(i, j)) < 1e-15);
    }
    CHECK(g.xp().isZero());
}

TEST_CASE("Gibbs covariance matches a brute-force normal-mode construction") {
    const ChainParams p = unit_chain(8);
    const double temp = 2.0;
    Eigen::MatrixXd k = Eigen::MatrixXd::Zero(8, 8);
    for (int i = 0; i < 8; ++i) {
        k(i, i) = p.mass * p.omega0 * p.omega0 + 2 * p.xi;
        k(i, (i + 1) % 8) = k(i, (i + 7) % 8) = -p.xi;
    }
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(k / p.mass);
    Eigen::MatrixXd xx = Eigen::MatrixXd::Zero(8, 8), pp = xx;
    for (int i = 0; i < 8; ++i) {
        const double w = std::sqrt(es.eigenvalues()(i));
        const double c = 1 / std::tanh(p.hbar * w / (2 * p.k_boltz * temp));
        const Eigen::VectorXd v = es.eigenvectors().col(i);
        xx += p.hbar / (2 * p.mass * w) * c * v * v.transpose();
        pp += p.hbar * p.mass * w / 2 * c * v * v.transpose();
    }
    const CovarianceState g = gibbs_covariance(p, temp);
    CHECK((g.xx() - xx).cwiseAbs().maxCoeff() < 1e-12 * xx.cwiseAbs().maxCoeff());
    CHECK((g.pp() - pp).cwiseAbs().maxCoeff() < 1e-12 * pp.cwiseAbs().maxCoeff());
}

TEST_CASE("equipartition and the classical energy density") {
    const ChainParams p = unit_chain();
    const double t = 1e4;
    CHECK(gibbs_covariance(p, t).pp()(0, 0) == Approx(p.mass * p.k_boltz * t).epsilon(1e-6));
    CHECK(gibbs_energy_density(p, t) == Approx(p.k_boltz * t / p.lattice_const).epsilon(1e-6));
    CHECK(heat_capacity_density(p, t) == Approx(p.k_boltz / p.lattice_const).epsilon(1e-6));
}

TEST_CASE("heat capacity: zero at T = 0 and equal to the finite difference of u_eq") {
    ChainParams p = unit_chain(8);
    CHECK(heat_capacity_density(p, 0.0) == 0.0);
    const double t = 1.5;
    const double h = 1e-4 * t;
    const double fd = (gibbs_energy_density(p, t + h) - gibbs_energy_density(p, t - h)) / (2 * h);
    CHECK(heat_capacity_density(p, t) == Approx(fd).epsilon(1e-6));
}

TEST_CASE("Gibbs errors and the acoustic zero mode") {
    ChainParams p = unit_chain(16);
    p.omega0 = 0.0;
    p.xi = 0.0;
    CHECK_THROWS_AS(gibbs_covariance(p, 1.0), std::invalid_argument);
    p.xi = 1.0;
    const CovarianceState g = gibbs_covariance(p, 1.0);
    CHECK(g.sigma.allFinite());
    // q = 0 mode dropped: N - 1 classical modes share the energy
    CHECK(heat_capacity_density(p, 1e5) == Approx(15.0 / 16.0).epsilon(1e-6));
}

TEST_CASE("full-circulant profile is Lambda times the Gibbs covariance") {
    ChainParams p = unit_chain(12);
    p.gamma_fric = 0.03;
    const double t = 0.7;
    const DiffusionProfile prof = diffusion_profile(p, t);
    const CovarianceState g = gibbs_covariance(p, t);
    Eigen::MatrixXd lam = Eigen::MatrixXd::Zero(12, 12);
    for (int i = 0; i < 12; ++i) {
        lam(i, i) = p.lambda_fric;
        lam(i, (i + 1) % 12) = lam(i, (i + 11) % 12) = p.gamma_fric;
    }
    CHECK((circulant(prof.xx) - lam * g.xx()).cwiseAbs().maxCoeff() < 1e-14);
    CHECK((circulant(prof.pp) - lam * g.pp()).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("nearest-neighbour profile keeps only D_xx, D_ex and D_pp") {
    const ChainParams p = unit_chain(10);
    const DiffusionProfile prof = diffusion_profile(p, 2.0, DiffusionModel::nearest_neighbor);
    const DiffusionSet d = continuum_diffusion(p, 2.0);
    CHECK(prof.xx(0) == d.d_xx);
    CHECK(prof.xx(1) == d.d_ex);
    CHECK(prof.xx(9) == d.d_ex);
    CHECK(prof.xx(2) == 0.0);
    CHECK(prof.pp(0) == d.d_pp);
    CHECK(prof.pp.tail(9).isZero());
}
