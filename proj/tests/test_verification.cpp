// The oracles themselves, checked against hand-computable cases.

#include <cmath>
#include <numbers>

#include "doctest.h"
#include "heatchain/diffusion.hpp"
#include "heatchain/verification.hpp"

using namespace heatchain;
using doctest::Approx;

TEST_CASE("printed site equations agree with the entry-wise oracle") {
    ChainParams p;
    p.n_sites = 6;
    p.gamma_fric = 0.03;
    p.omega0 = 0.7;
    const Eigen::MatrixXd s = Eigen::MatrixXd::Random(12, 12);
    const Eigen::MatrixXd sym = 0.5 * (s + s.transpose());
    const ModelMatrices m = build_matrices(p, diffusion_profile(p, 1.0));
    const Eigen::MatrixXd dxx = m.diffusion.topLeftCorner(6, 6);
    const Eigen::MatrixXd dpp = m.diffusion.bottomRightCorner(6, 6);
    const Eigen::MatrixXd full = oracle::moment_rhs_loops(sym, p, dxx, dpp);
    const Eigen::MatrixX3d site = oracle::printed_site_equations(sym, p, dxx, dpp);
    for (int k = 0; k < 6; ++k) {
        CHECK(site(k, 0) == Approx(full(k, k)).epsilon(1e-13));
        CHECK(site(k, 1) == Approx(full(6 + k, 6 + k)).epsilon(1e-13));
        CHECK(site(k, 2) == Approx(full(k, (k + 1) % 6)).epsilon(1e-13));
    }
}

TEST_CASE("single oscillator: oracle right-hand side by hand") {
    // xi = 0 leaves each site a damped oscillator; check one entry directly.
    ChainParams p;
    p.n_sites = 3;
    p.xi = 0.0;
    p.omega0 = 2.0;
    p.mass = 0.5;
    p.lambda_fric = 0.3;
    Eigen::MatrixXd s = Eigen::MatrixXd::Identity(6, 6);
    s(0, 3) = s(3, 0) = 0.25;  // <x_0 p_0>
    const Eigen::MatrixXd d = Eigen::MatrixXd::Zero(3, 3);
    const Eigen::MatrixXd r = oracle::moment_rhs_loops(s, p, d, d);
    // d<x^2>/dt = -2 lambda <x^2> + 2 <xp>/m
    CHECK(r(0, 0) == Approx(-0.6 + 2 * 0.25 / 0.5));
    // d<xp>/dt = <p^2>/m - m w0^2 <x^2> - 2 lambda <xp>
    CHECK(r(0, 3) == Approx(1 / 0.5 - 0.5 * 4 - 0.6 * 0.25));
}

TEST_CASE("heat Green's function at t = 0 is the initial profile") {
    const double g = oracle::heat_green(3.0, 0.0, 5.0, 0.2, 1.0, 2.0, 3.0, 3.0, 8.0, 1000.0);
    CHECK(g == Approx(5.0));
    const double far = oracle::heat_green(0.0, 1e6, 5.0, 0.2, 1.0, 2.0, 3.0, 3.0, 8.0, 100.0);
    CHECK(far == Approx(5.0));  // s / decay
}

TEST_CASE("dense Gibbs oracle at T = 0 for decoupled sites") {
    ChainParams p;
    p.n_sites = 4;
    p.xi = 0.0;
    p.omega0 = 3.0;
    const CovarianceState g = oracle::gibbs_dense(p, 0.0);
    CHECK(g.sigma(1, 1) == Approx(1.0 / 6.0));
    CHECK(g.sigma(5, 5) == Approx(1.5));
}

TEST_CASE("fast criteria pass under the default parameters") {
    VerifyOptions opt;
    opt.only = {1, 2, 4, 5, 7};
    for (const auto& r : run_acceptance(opt)) {
        INFO(format_result_line(r));
        CHECK(r.passed);
    }
}

TEST_CASE("result line format") {
    CriterionResult r;
    r.id = 3;
    r.name = "x";
    r.passed = true;
    CHECK(format_result_line(r).rfind("PASS  C3 x", 0) == 0);
    r.passed = false;
    CHECK(format_result_line(r).rfind("FAIL", 0) == 0);
}
