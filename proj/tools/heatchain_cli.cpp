// heatchain <subcommand> --config <path> [--out <dir>]
//
// Output directory precedence: $HEATCHAIN_OUT_DIR, then --out, then
// meta.output_dir, then the working directory.

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "heatchain/config.hpp"
#include "heatchain/continuum.hpp"
#include "heatchain/diffusion.hpp"
#include "heatchain/moment_dynamics.hpp"
#include "heatchain/output.hpp"
#include "heatchain/verification.hpp"

namespace fs = std::filesystem;
using namespace heatchain;

namespace {

constexpr int kExitFailedCriteria = 1;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

struct Context {
    ScenarioConfig config;
    fs::path out;
    RunReport report;

    std::string path(const std::string& name) {
        const std::string p = (out / name).string();
        report.artifact(name);
        return p;
    }
};

std::vector<double> temperature_sweep(RunKeys& keys, const ChainParams& p) {
    const double t_min = keys.number("t_min", p.bath_temp);
    const double t_max = keys.number("t_max", t_min);
    const int steps = keys.integer("t_steps", 1);
    const std::string scale = keys.choice("scale", {"linear", "log"}, std::string("linear"));
    if (!(t_min >= 0.0)) keys.reject("t_min", "must be >= 0");
    if (t_max < t_min) keys.reject("t_max", "must be >= t_min");
    if (steps < 1) keys.reject("t_steps", "must be >= 1");
    if (scale == "log" && !(t_min > 0.0)) keys.reject("t_min", "must be > 0 for a log sweep");
    keys.finish();

    std::vector<double> temps;
    for (int i = 0; i < steps; ++i) {
        const double f = steps == 1 ? 0.0 : static_cast<double>(i) / (steps - 1);
        temps.push_back(scale == "log" ? t_min * std::pow(t_max / t_min, f) : t_min + f * (t_max - t_min));
    }
    return temps;
}

DiffusionModel diffusion_model(RunKeys& keys) {
    return keys.choice("diffusion_model", {"full_circulant", "nearest_neighbor"}, std::string("full_circulant")) ==
                   "nearest_neighbor"
               ? DiffusionModel::nearest_neighbor
               : DiffusionModel::full_circulant;
}

int cmd_coefficients(Context& ctx) {
    const ChainParams& p = ctx.config.chain;
    RunKeys keys(ctx.config);
    const std::string method = keys.choice("method", {"quadrature", "mode_sum"}, std::string("quadrature"));
    const std::vector<double> temps = temperature_sweep(keys, p);

    CsvWriter csv(ctx.path("coefficients.csv"), {"T", "D_xx", "D_pp", "D_ex", "s", "u_eq", "C"});
    double last_ratio = 0.0;
    for (double t : temps) {
        const DiffusionSet d = method == "quadrature" ? continuum_diffusion(p, t) : lattice_diffusion(p, t);
        const double s = source_density(p, d);
        csv.row({t, d.d_xx, d.d_pp, d.d_ex, s, s / (2.0 * p.lambda_fric), heat_capacity_density(p, t)});
        if (t > 0.0) last_ratio = s * p.lattice_const / (2.0 * p.lambda_fric * p.k_boltz * t);
    }
    ctx.report.metric("rows", static_cast<double>(temps.size()));
    ctx.report.metric("source_ratio_at_t_max", last_ratio, "C4 high-temperature-closed-forms");
    ctx.report.metric("method", method);
    return 0;
}

int cmd_relax(Context& ctx) {
    const ChainParams& p = ctx.config.chain;
    const int n = p.n_sites;
    RunKeys keys(ctx.config);
    const std::string scenario = keys.choice("scenario", {"uniform", "hotspot"}, std::string("hotspot"));
    const double t_cold = keys.number("t_cold", p.bath_temp);
    const double t_hot = keys.number("t_hot", 2.0 * p.bath_temp);
    const std::vector<int> hot_sites = keys.integer_list("hot_sites", std::vector<int>{n / 2});
    EvolveOptions eo;
    eo.t_final = keys.number("t_final", 5.0 / p.lambda_fric);
    eo.dt_max = keys.number("dt_max", 0.05);
    eo.sample_stride = keys.integer("sample_stride", 10);
    const DiffusionModel model = diffusion_model(keys);
    if (t_cold < 0.0) keys.reject("t_cold", "must be >= 0");
    if (scenario == "hotspot" && t_hot < t_cold) keys.reject("t_hot", "must be >= t_cold");
    if (t_hot < 0.0) keys.reject("t_hot", "must be >= 0");
    if (!(eo.t_final >= 0.0)) keys.reject("t_final", "must be >= 0");
    if (!(eo.dt_max > 0.0)) keys.reject("dt_max", "must be > 0");
    if (eo.sample_stride < 1) keys.reject("sample_stride", "must be >= 1");
    for (int s : hot_sites)
        if (s < 0 || s >= n) keys.reject("hot_sites", "site " + std::to_string(s) + " outside 0..n_sites-1");
    keys.finish();

    const ModelMatrices m = build_matrices(p, diffusion_profile(p, p.bath_temp, model));
    const CovarianceState init = scenario == "uniform"
                                     ? gibbs_covariance(p, t_hot)
                                     : heated_state(p, t_cold, t_hot, indicator_weights(n, hot_sites));

    CsvWriter csv(ctx.path("relax.csv"), {"t", "k", "E_k", "J_k", "u_k"});
    CsvWriter totals(ctx.path("relax_total.csv"), {"t", "U"});
    std::vector<double> times, energy;
    const EvolveSummary sum = evolve(init, m, eo, [&](const CovarianceState& s) {
        const SiteObservables obs = site_observables(s, p);
        for (int k = 0; k < n; ++k) csv.row({s.time, double(k), obs.energies(k), obs.currents(k), obs.densities(k)});
        totals.row({s.time, obs.total_energy});
        times.push_back(s.time);
        energy.push_back(obs.total_energy);
    });

    const CovarianceState gibbs = gibbs_covariance(p, p.bath_temp);
    const double u_eq = n * p.lattice_const * gibbs_energy_density(p, p.bath_temp);
    const double gibbs_dev = (sum.final_state.sigma - gibbs.sigma).cwiseAbs().maxCoeff() /
                             gibbs.sigma.cwiseAbs().maxCoeff();

    // Fit only while U - U_eq is well above round-off.
    std::vector<double> ft, fu;
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (std::abs(energy[i] - u_eq) > 1e-8 * std::abs(u_eq)) {
            ft.push_back(times[i]);
            fu.push_back(energy[i]);
        }
    }
    if (ft.size() >= 2) {
        const double rate = -fit_log_slope(ft, fu, u_eq);
        ctx.report.metric("fitted_decay_rate", rate, "C3 exact-energy-decay");
        ctx.report.metric("decay_rate_relative_dev", std::abs(rate / (2.0 * p.lambda_fric) - 1.0),
                          p.gamma_fric == 0.0 ? "C3 exact-energy-decay" : "informational");
    }
    ctx.report.metric("expected_decay_rate", 2.0 * p.lambda_fric);
    ctx.report.metric("u_eq", u_eq);
    ctx.report.metric("final_vs_gibbs_max_rel_dev", gibbs_dev);
    ctx.report.metric("worst_psd_ratio", sum.worst_psd_ratio, "C9 conservation-and-psd");
    ctx.report.metric("dt", sum.dt);
    ctx.report.metric("steps", static_cast<double>(sum.steps));
    return 0;
}

int cmd_compare(Context& ctx) {
    const ChainParams& p = ctx.config.chain;
    const int n = p.n_sites;
    RunKeys keys(ctx.config);
    HotspotScenario sc;
    sc.t_cold = keys.number("t_cold", p.bath_temp);
    sc.t_hot = keys.number("t_hot", 2.0 * sc.t_cold);
    ChainParams at_cold = p;
    at_cold.bath_temp = sc.t_cold;
    sc.width = keys.number("hotspot_width", 8.0 * transport_coefficients(at_cold, sc.t_cold).range_b);
    sc.t_final = keys.number("t_final", 5.0 / p.lambda_fric);
    sc.dt_max = keys.number("dt_max", sc.dt_max);
    sc.sample_stride = keys.integer("sample_stride", sc.sample_stride);
    if (sc.t_cold < 0.0) keys.reject("t_cold", "must be >= 0");
    if (sc.t_hot < sc.t_cold) keys.reject("t_hot", "must be >= t_cold");
    if (sc.width < 0.0) keys.reject("hotspot_width", "must be >= 0");
    if (!(sc.t_final > 0.0)) keys.reject("t_final", "must be > 0");
    if (!(sc.dt_max > 0.0)) keys.reject("dt_max", "must be > 0");
    if (sc.sample_stride < 1) keys.reject("sample_stride", "must be >= 1");
    keys.finish();

    const ComparisonReport rep = compare_discrete_continuum(p, sc);
    const double a = p.lattice_const;
    CsvWriter chain(ctx.path("chain_trajectory.csv"), {"t", "k", "x", "u", "J"});
    CsvWriter pde(ctx.path("pde_trajectory.csv"), {"t", "k", "x", "u", "J"});
    CsvWriter dev(ctx.path("deviation.csv"), {"t", "l2_relative", "excess_relative"});
    for (std::size_t i = 0; i < rep.times.size(); ++i) {
        const double t = rep.times[i];
        for (int k = 0; k < n; ++k) {
            chain.row({t, double(k), k * a, rep.chain_density[i](k), rep.chain_current[i](k)});
            pde.row({t, double(k), k * a, rep.pde_density[i](k), rep.pde_current[i](k)});
        }
        dev.row({t, rep.l2_deviation[i], rep.excess_deviation[i]});
    }
    ctx.report.metric("max_l2_in_window", rep.max_l2_in_window, "C8 discrete-to-continuum");
    ctx.report.metric("fourier_slope", rep.fourier_slope, "C8 discrete-to-continuum");
    ctx.report.metric("diff_const", rep.diff_const, "C8 discrete-to-continuum");
    ctx.report.metric("max_excess_relative_in_window", rep.max_excess_in_window);
    ctx.report.metric("range_b", rep.range_b);
    ctx.report.metric("hotspot_width", sc.width);
    ctx.report.metric("source", rep.source);
    ctx.report.metric("energy_density_eq", rep.energy_density_eq);
    ctx.report.metric("worst_psd_ratio", rep.worst_psd_ratio, "C9 conservation-and-psd");
    ctx.report.metric("l2_deviation_curve", nlohmann::json(rep.l2_deviation));
    ctx.report.metric("flags", nlohmann::json(rep.flags));
    return 0;
}

int cmd_conductivity(Context& ctx) {
    const ChainParams& p = ctx.config.chain;
    RunKeys keys(ctx.config);
    const GroupVelocity v =
        keys.choice("group_velocity", {"dispersion", "long_wavelength"}, std::string("dispersion")) == "dispersion"
            ? GroupVelocity::dispersion
            : GroupVelocity::long_wavelength;
    const std::vector<double> temps = temperature_sweep(keys, p);

    CsvWriter csv(ctx.path("conductivity.csv"), {"T", "C", "kappa_continuum", "kappa_klemens", "sigma"});
    double ratio = 0.0;
    for (double t : temps) {
        const TransportCoefficients tc = transport_coefficients(p, t);
        const double k = klemens_conductivity(p, t, v);
        csv.row({t, tc.heat_capacity, tc.kappa, k, tc.sigma_diffusivity});
        ratio = tc.kappa > 0.0 ? k / tc.kappa : 0.0;
    }
    ctx.report.metric("klemens_over_continuum_at_t_max", ratio, "C6 conductivity-consistency");
    ctx.report.metric("rows", static_cast<double>(temps.size()));
    return 0;
}

int cmd_dispersion(Context& ctx) {
    const ChainParams& p = ctx.config.chain;
    RunKeys keys(ctx.config);
    keys.finish();
    std::vector<double> qs = mode_grid(p);
    std::sort(qs.begin(), qs.end());
    CsvWriter csv(ctx.path("dispersion.csv"), {"q", "omega", "group_velocity"});
    for (double q : qs) csv.row({q, dispersion(p, q), p.lattice_const * dispersion_slope(p, q)});
    ctx.report.metric("omega_max", max_frequency(p));
    ctx.report.metric("omega_min", dispersion(p, 0.0));
    return 0;
}

int cmd_verify(Context& ctx) {
    RunKeys keys(ctx.config);
    VerifyOptions opt;
    if (ctx.config.raw.count("chain.n_sites")) opt.base = ctx.config.chain;
    if (ctx.config.raw.count("meta.seed")) opt.seed = ctx.config.seed;
    opt.only = keys.integer_list("criteria", std::vector<int>{});
    for (int id : opt.only)
        if (id < 1 || id > 9) keys.reject("criteria", "criterion ids are 1..9");
    keys.finish();

    const std::vector<CriterionResult> results = run_acceptance(opt);
    CsvWriter csv(ctx.path("verify.csv"), {"criterion", "passed", "measured", "tolerance", "seconds"});
    bool all = true;
    nlohmann::json criteria = nlohmann::json::array();
    for (const auto& r : results) {
        std::cout << format_result_line(r) << '\n';
        csv.row({double(r.id), r.passed ? 1.0 : 0.0, r.measured, r.tolerance, r.seconds});
        const std::string label = "C" + std::to_string(r.id) + " " + r.name;
        ctx.report.metric(label + " measured", r.measured, label);
        nlohmann::json extra = nlohmann::json::object();
        for (const auto& [k, v] : r.extra) extra[k] = v;
        criteria.push_back({{"id", r.id},
                            {"name", r.name},
                            {"passed", r.passed},
                            {"measured", r.measured},
                            {"tolerance", r.tolerance},
                            {"seconds", r.seconds},
                            {"detail", r.detail},
                            {"worst_psd_ratio", r.worst_psd_ratio},
                            {"extra", extra}});
        all = all && r.passed;
    }
    ctx.report.json()["criteria"] = criteria;
    ctx.report.set_status(all);
    return all ? 0 : kExitFailedCriteria;
}

void emit_error(const fs::path& out, const std::string& kind, const std::string& message,
                const std::vector<std::string>& issues = {}) {
    const nlohmann::json rec = error_record(kind, message, issues);
    std::cerr << rec.dump() << '\n';
    std::error_code ec;
    if (!out.empty() && fs::is_directory(out, ec)) {
        std::ofstream f(out / "error.json");
        f << rec.dump(2) << '\n';
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Harmonic chain heat transport: moment dynamics, bath coefficients and the continuum limit"};
    app.require_subcommand(1);
    std::string config_path;
    std::string out_flag;

    const std::vector<std::pair<std::string, std::string>> subs = {
        {"coefficients", "bath diffusion coefficients, source density and C(T) over a temperature sweep"},
        {"relax", "covariance relaxation from a uniform or hotspot initial state"},
        {"compare", "chain hotspot against the continuum heat equation"},
        {"conductivity", "continuum and mode-sum conductivities over a temperature sweep"},
        {"dispersion", "phonon dispersion on the ring's mode grid"},
        {"verify", "acceptance suite, one PASS/FAIL line per criterion"},
    };
    for (const auto& [name, help] : subs) {
        CLI::App* sub = app.add_subcommand(name, help);
        sub->add_option("--config", config_path, "scenario configuration (INI)")->required();
        sub->add_option("--out", out_flag, "output directory");
    }
    CLI11_PARSE(app, argc, argv);
    const std::string name = app.get_subcommands().front()->get_name();

    fs::path out;
    try {
        const bool needs_chain = name != "verify";
        ScenarioConfig config = load_config(config_path, needs_chain);
        if (const char* env = std::getenv("HEATCHAIN_OUT_DIR"); env && *env)
            out = env;
        else if (!out_flag.empty())
            out = out_flag;
        else
            out = config.output_dir;
        fs::create_directories(out);

        Context ctx{config, out, RunReport(name)};
        ctx.report.echo_config(config.raw, config.chain);
        const std::map<std::string, std::function<int(Context&)>> table = {
            {"coefficients", cmd_coefficients}, {"relax", cmd_relax},           {"compare", cmd_compare},
            {"conductivity", cmd_conductivity}, {"dispersion", cmd_dispersion}, {"verify", cmd_verify},
        };
        const int code = table.at(name)(ctx);
        ctx.report.write((out / "report.json").string());
        return code;
    } catch (const ConfigError& e) {
        emit_error(out, "config", e.what(), e.issues());
        return kExitConfig;
    } catch (const PsdViolation& e) {
        emit_error(out, "psd_violation", e.what());
        return kExitNumerical;
    } catch (const CflViolation& e) {
        emit_error(out, "cfl_violation", e.what());
        return kExitNumerical;
    } catch (const QuadratureError& e) {
        emit_error(out, "quadrature", e.what());
        return kExitNumerical;
    } catch (const std::invalid_argument& e) {
        emit_error(out, "invalid_argument", e.what());
        return kExitConfig;
    } catch (const std::exception& e) {
        emit_error(out, "runtime", e.what());
        return kExitNumerical;
    }
}
