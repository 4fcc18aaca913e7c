#include "heatchain/chain_model.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace heatchain {

namespace {

constexpr double kPi = std::numbers::pi;

// Relative slack allowed on negative Fourier symbols of D before it is
// declared indefinite (roundoff in mode sums).
constexpr double kSymbolTolerance = 1e-12;

std::vector<std::string> constant_errors(const ChainParams& p) {
    std::vector<std::string> errors;
    auto require = [&errors](bool ok, const char* msg) {
        if (!ok) errors.emplace_back(msg);
    };
    require(p.n_sites >= 3, "n_sites must be >= 3");
    require(p.mass > 0.0 && std::isfinite(p.mass), "mass must be > 0");
    require(p.omega0 >= 0.0 && std::isfinite(p.omega0), "omega0 must be >= 0");
    require(p.xi >= 0.0 && std::isfinite(p.xi), "xi must be >= 0");
    require(p.omega0 > 0.0 || p.xi > 0.0, "omega0 and xi must not both vanish");
    require(p.lattice_const > 0.0 && std::isfinite(p.lattice_const),
            "lattice_const must be > 0");
    require(p.hbar > 0.0 && std::isfinite(p.hbar), "hbar must be > 0");
    require(p.k_boltz > 0.0 && std::isfinite(p.k_boltz), "k_boltz must be > 0");
    require(p.bath_temp >= 0.0 && std::isfinite(p.bath_temp), "bath_temp must be >= 0");
    return errors;
}

void throw_if_any(const std::vector<std::string>& errors) {
    if (errors.empty()) return;
    std::ostringstream os;
    os << "invalid chain parameters:";
    for (const auto& e : errors) os << " [" << e << "]";
    throw std::invalid_argument(os.str());
}

// Y = c0 X + c1 (shift_up(X) + shift_down(X)) for an N x M block with
// periodic rows.
Eigen::MatrixXd tri_circulant_apply(double c0, double c1, const Eigen::MatrixXd& x) {
    const Eigen::Index n = x.rows();
    Eigen::MatrixXd y = c0 * x;
    if (c1 == 0.0) return y;
    y.topRows(n - 1) += c1 * x.bottomRows(n - 1);
    y.row(n - 1) += c1 * x.row(0);
    y.bottomRows(n - 1) += c1 * x.topRows(n - 1);
    y.row(0) += c1 * x.row(n - 1);
    return y;
}

CirculantRow tri_row(int n, double diag, double off) {
    CirculantRow row = CirculantRow::Zero(n);
    row(0) = diag;
    row(1) += off;
    row(n - 1) += off;
    return row;
}

ModelMatrices assemble(const ChainParams& p, const DiffusionProfile& profile) {
    const int n = p.n_sites;
    ModelMatrices m;
    m.params = p;
    m.profile = profile;
    m.stiffness = circulant(tri_row(n, p.mass * p.omega0 * p.omega0 + 2.0 * p.xi, -p.xi));
    m.friction = circulant(tri_row(n, p.lambda_fric, p.gamma_fric));

    const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(n, n);
    m.drift.resize(2 * n, 2 * n);
    m.drift << -m.friction, eye / p.mass, -m.stiffness, -m.friction;

    m.diffusion = Eigen::MatrixXd::Zero(2 * n, 2 * n);
    m.diffusion.topLeftCorner(n, n) = circulant(profile.xx);
    m.diffusion.bottomRightCorner(n, n) = circulant(profile.pp);
    return m;
}

}  // namespace

std::vector<std::string> validation_errors(const ChainParams& p) {
    auto errors = constant_errors(p);
    if (!(p.lambda_fric > 0.0) || !std::isfinite(p.lambda_fric))
        errors.emplace_back("lambda must be > 0");
    if (!(p.gamma_fric >= 0.0) || !std::isfinite(p.gamma_fric))
        errors.emplace_back("gamma must be >= 0");
    else if (2.0 * p.gamma_fric > p.lambda_fric)
        errors.emplace_back("2 gamma must not exceed lambda (diffusion matrix would be indefinite)");
    return errors;
}

void validate(const ChainParams& p) { throw_if_any(validation_errors(p)); }

double dispersion(const ChainParams& p, double q) {
    const double s = std::sin(0.5 * q);
    return std::sqrt(p.omega0 * p.omega0 + 4.0 * p.xi / p.mass * s * s);
}

double dispersion_slope(const ChainParams& p, double q) {
    if (p.omega0 == 0.0) {
        // omega = 2 sqrt(xi/m) |sin(q/2)|
        const double sign = q < 0.0 ? -1.0 : 1.0;
        return sign * std::sqrt(p.xi / p.mass) * std::cos(0.5 * q);
    }
    return p.xi / p.mass * std::sin(q) / dispersion(p, q);
}

double max_frequency(const ChainParams& p) { return dispersion(p, kPi); }

std::vector<double> mode_grid(const ChainParams& p) {
    if (p.n_sites < 3) throw std::invalid_argument("mode_grid: n_sites must be >= 3");
    const int n = p.n_sites;
    std::vector<double> q(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        // n > N/2 folds to negative wavenumbers; n = N/2 stays at +pi.
        const int folded = (2 * k > n) ? k - n : k;
        q[static_cast<std::size_t>(k)] = 2.0 * kPi * folded / n;
    }
    return q;
}

Eigen::MatrixXd circulant(const CirculantRow& first_row) {
    const Eigen::Index n = first_row.size();
    Eigen::MatrixXd c(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) c(i, j) = first_row(((j - i) % n + n) % n);
    return c;
}

double circulant_symbol(const CirculantRow& first_row, double q) {
    double sum = 0.0;
    for (Eigen::Index r = 0; r < first_row.size(); ++r)
        sum += first_row(r) * std::cos(q * static_cast<double>(r));
    return sum;
}

double ModelMatrices::stiffness_diag() const {
    return params.mass * params.omega0 * params.omega0 + 2.0 * params.xi;
}

double ModelMatrices::stiffness_offdiag() const { return -params.xi; }

ModelMatrices build_matrices(const ChainParams& p, const DiffusionProfile& profile) {
    validate(p);
    const int n = p.n_sites;
    if (profile.xx.size() != n || profile.pp.size() != n)
        throw std::invalid_argument("build_matrices: diffusion rows must have n_sites entries");

    for (const auto* row : {&profile.xx, &profile.pp}) {
        const double scale = row->cwiseAbs().maxCoeff();
        for (int r = 1; r < n; ++r) {
            if (std::abs((*row)(r) - (*row)(n - r)) > kSymbolTolerance * scale)
                throw std::invalid_argument("build_matrices: diffusion row is not symmetric");
        }
        for (double q : mode_grid(p)) {
            if (circulant_symbol(*row, q) < -kSymbolTolerance * scale) {
                std::ostringstream os;
                os << "build_matrices: diffusion block is not positive semidefinite (symbol "
                   << circulant_symbol(*row, q) << " at q = " << q << ")";
                throw std::invalid_argument(os.str());
            }
        }
    }
    return assemble(p, profile);
}

ModelMatrices build_hamiltonian_matrices(const ChainParams& p) {
    throw_if_any(constant_errors(p));
    ChainParams closed = p;
    closed.lambda_fric = 0.0;
    closed.gamma_fric = 0.0;
    const DiffusionProfile zero{CirculantRow::Zero(p.n_sites), CirculantRow::Zero(p.n_sites)};
    return assemble(closed, zero);
}

Eigen::MatrixXd apply_drift(const ModelMatrices& m, const Eigen::MatrixXd& s) {
    const Eigen::Index n = m.n_sites();
    if (s.rows() != 2 * n)
        throw std::invalid_argument("apply_drift: dimension mismatch");
    const auto top = s.topRows(n);
    const auto bottom = s.bottomRows(n);
    Eigen::MatrixXd out(2 * n, s.cols());
    const double lam = m.friction_diag();
    const double gam = m.friction_offdiag();
    out.topRows(n) = bottom / m.params.mass - tri_circulant_apply(lam, gam, top);
    out.bottomRows(n) = -tri_circulant_apply(m.stiffness_diag(), m.stiffness_offdiag(), top) -
                        tri_circulant_apply(lam, gam, bottom);
    return out;
}

}  // namespace heatchain
