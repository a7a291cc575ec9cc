// Command-line front end: simulation runs, lifespan sweeps, verification
// suites, phase/resonance probes, and the symmetrization consistency check.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>

#include "bsq/resonance.hpp"
#include "bsq/simulate.hpp"
#include "bsq/verify.hpp"

using json = nlohmann::json;
using namespace bsq;

namespace {

Scheme parse_scheme(const std::string& s) {
    if (s == "IFRK4") return Scheme::IFRK4;
    if (s == "ETDRK4") return Scheme::ETDRK4;
    throw CLI::ValidationError("scheme must be IFRK4 or ETDRK4");
}

void write_file(const std::filesystem::path& path, const std::string& text) {
    std::filesystem::create_directories(path.parent_path().empty() ? "." : path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path.string());
    out << text;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"pseudospectral toolkit for the strongly dispersive Boussinesq system"};
    app.require_subcommand(1);

    // shared plan options, overridable per subcommand
    ExperimentPlan plan;
    std::string config_path, outdir = "out", scheme_name = "IFRK4", suite = "all";
    double epsilon = 0.01, t_end = -1;
    bool linear_only = false, no_dealias = false, ledger = false;

    auto load_config = [&](CLI::App* cmd) {
        cmd->parse_complete_callback([&, cmd] {
            if (config_path.empty()) return;
            std::ifstream in(config_path);
            if (!in) throw CLI::ValidationError("config file not found: " + config_path);
            json j = json::parse(in);
            auto set_if = [&](const char* key, auto& target, const char* flag) {
                if (j.contains(key) && cmd->count(flag) == 0) target = j[key].template get<std::decay_t<decltype(target)>>();
            };
            set_if("n", plan.n, "--n");
            set_if("L", plan.L, "--L");
            set_if("N0", plan.N0, "--N0");
            set_if("seed", plan.seed, "--seed");
            set_if("dt", plan.dt, "--dt");
            set_if("cadence", plan.cadence, "--cadence");
            set_if("horizon_coef", plan.horizon_coef, "--T");
            set_if("horizon_power", plan.horizon_power, "--p");
            set_if("epsilon", epsilon, "--epsilon");
            set_if("t_end", t_end, "--t-end");
            set_if("scheme", scheme_name, "--scheme");
            set_if("ledger", ledger, "--ledger");
            if (j.contains("epsilons") && cmd->count("--epsilons") == 0)
                plan.epsilons = j["epsilons"].get<std::vector<double>>();
            if (j.contains("nonlinear") && cmd->count("--linear-only") == 0) linear_only = !j["nonlinear"].get<bool>();
        });
    };

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "JSON config mirroring the experiment plan");
        cmd->add_option("--n", plan.n, "grid points per axis");
        cmd->add_option("--L", plan.L, "domain period");
        cmd->add_option("--N0", plan.N0, "Sobolev index");
        cmd->add_option("--seed", plan.seed, "RNG seed");
        cmd->add_option("--dt", plan.dt, "time step");
        cmd->add_option("--cadence", plan.cadence, "diagnostics sampling interval");
        cmd->add_option("--scheme", scheme_name, "IFRK4 or ETDRK4");
        cmd->add_option("--out", outdir, "output directory");
        cmd->add_flag("--linear-only", linear_only, "disable the nonlinearity");
        load_config(cmd);
    };

    // ----- simulate ---------------------------------------------------------
    auto* sim = app.add_subcommand("simulate", "integrate one run and write CSV + JSON diagnostics");
    add_common(sim);
    sim->add_option("--epsilon", epsilon, "dispersion parameter");
    sim->add_option("--t-end", t_end, "final time (default: horizon rule)");
    sim->add_option("--T", plan.horizon_coef, "horizon coefficient");
    sim->add_option("--p", plan.horizon_power, "horizon power");
    sim->add_flag("--no-dealias", no_dealias, "skip the 2/3 truncation (diagnostics only)");
    sim->add_flag("--ledger", ledger, "record the symmetrized-term ledger each sample");

    // ----- sweep ------------------------------------------------------------
    auto* sw = app.add_subcommand("sweep", "lifespan sweep over a geometric epsilon ladder");
    add_common(sw);
    sw->add_option("--epsilons", plan.epsilons, "epsilon values (geometric spacing)")->delimiter(',');
    sw->add_option("--T", plan.horizon_coef, "horizon coefficient in t_end = T*eps^{-p}");
    sw->add_option("--p", plan.horizon_power, "horizon power");
    sw->add_option("--jobs", plan.max_concurrency, "concurrent runs");
    sw->add_flag("--ledger", ledger, "record the symmetrized-term ledger each sample");

    // ----- verify -----------------------------------------------------------
    auto* ver = app.add_subcommand("verify", "run invariant suites, write a JSON report");
    ver->add_option("--suite", suite, "spectral|lp|model|good_unknowns|phases|all");
    ver->add_option("--out", outdir, "output directory");

    // ----- phases -----------------------------------------------------------
    auto* ph = app.add_subcommand("phases", "resonance, jacobian and bilinear probes");
    int pd = 3, pk = 8, pmu = 1, pl_n = 512, ptrials = 4;
    long psamples = 1000000;
    std::vector<int> l_list = {-3, -4, -5, -6, -7, -8};
    int bk = 7, bk1 = 4, bk2 = 7;
    double ph_eps = 0.01;
    uint64_t ph_seed = 1;
    std::string probe = "resonance";
    ph->add_option("probe", probe, "resonance|jacobian|bilinear")->required();
    ph->add_option("--epsilon", ph_eps, "dispersion parameter");
    ph->add_option("--D", pd, "modulation cutoff");
    ph->add_option("--K", pk, "frequency-ratio cutoff");
    ph->add_option("--mu", pmu, "sign of the first slot (+1/-1)");
    ph->add_option("--samples", psamples, "sample budget");
    ph->add_option("--seed", ph_seed, "RNG seed");
    ph->add_option("--k", bk, "output shell index");
    ph->add_option("--k1", bk1, "low shell index");
    ph->add_option("--k2", bk2, "input shell index");
    ph->add_option("--l-list", l_list, "angular indices to sweep")->delimiter(',');
    ph->add_option("--grid-n", pl_n, "lattice side for the bilinear probe");
    ph->add_option("--trials", ptrials, "random trials per l");
    ph->add_option("--out", outdir, "output directory");

    // ----- symmetrize-check --------------------------------------------------
    auto* sc = app.add_subcommand("symmetrize-check", "central-difference consistency of the symmetrized system");
    add_common(sc);
    sc->add_option("--epsilon", epsilon, "dispersion parameter");
    std::vector<double> dt_list = {0.1, 0.05, 0.025, 0.0125};
    sc->add_option("--dt-list", dt_list, "time steps for the halving study")->delimiter(',');

    CLI11_PARSE(app, argc, argv);
    std::filesystem::create_directories(outdir);

    try {
        if (*sim) {
            SimulationConfig cfg;
            cfg.n = plan.n;
            cfg.L = plan.L;
            cfg.epsilon = epsilon;
            cfg.N0 = plan.N0;
            cfg.seed = plan.seed;
            cfg.dt = plan.dt;
            cfg.t_end = t_end > 0 ? t_end : plan.horizon_coef * std::pow(epsilon, -plan.horizon_power);
            cfg.cadence = plan.cadence;
            cfg.scheme = parse_scheme(scheme_name);
            cfg.nonlinear = !linear_only;
            cfg.dealias = !no_dealias;
            cfg.ledger = ledger;
            auto run = simulate(cfg);
            write_file(std::filesystem::path(outdir) / "run.csv", to_csv(run));

            json j;
            j["config"] = {{"n", cfg.n},           {"L", cfg.L},       {"epsilon", cfg.epsilon},
                           {"N0", cfg.N0},         {"seed", cfg.seed}, {"dt", run.config.dt},
                           {"t_end", cfg.t_end},   {"cadence", cfg.cadence},
                           {"scheme", scheme_name}, {"nonlinear", cfg.nonlinear}};
            j["rows"] = run.rows.size();
            j["blowup"] = run.blowup;
            if (run.blowup) j["blowup_time"] = run.blowup_time;
            j["T_double"] = std::isfinite(run.T_double) ? json(run.T_double) : json();
            j["final_E_N0"] = run.rows.back().E_N0;
            j["spectral_tail"] = run.spectral_tail;
            j["under_resolved"] = run.under_resolved;
            j["cfl_ratio"] = run.cfl_ratio;
            j["cfl_within_guard"] = run.cfl_ok;
            write_file(std::filesystem::path(outdir) / "run.json", j.dump(2) + "\n");

            if (ledger) {
                CutoffProfile<double> phi;
                auto gs = to_good_unknowns(run.final_state, cfg.epsilon, phi);
                auto rhs = symmetrized_rhs(gs, run.final_state, cfg.epsilon, phi);
                json lj;
                for (const auto& [name, term] : rhs.terms) lj[name] = sobolev_norm(term, double(cfg.N0));
                write_file(std::filesystem::path(outdir) / "ledger.json", lj.dump(2) + "\n");
            }
            std::cout << "wrote " << outdir << "/run.csv (" << run.rows.size() << " rows)\n";
            return run.blowup ? 2 : 0;
        }

        if (*sw) {
            plan.scheme = parse_scheme(scheme_name);
            plan.nonlinear = !linear_only;
            plan.ledger = ledger;
            std::vector<SimulationResult> runs;
            auto res = lifespan_sweep(plan, &runs);

            json j;
            j["epsilons"] = plan.epsilons;
            j["doubling_slope"] = res.doubling_slope;
            j["doubling_points"] = res.doubling_points;
            j["growth_C_max"] = res.growth_C_max;
            j["entries"] = json::array();
            for (size_t i = 0; i < res.entries.size(); ++i) {
                const auto& e = res.entries[i];
                json je = {{"epsilon", e.epsilon},
                           {"t_end", e.t_end},
                           {"T_double", std::isfinite(e.T_double) ? json(e.T_double) : json()},
                           {"energy_max", e.energy_max},
                           {"growth_C", e.growth_C},
                           {"growth_residual", e.growth_residual},
                           {"under_resolved", e.under_resolved},
                           {"blowup", e.blowup}};
                j["entries"].push_back(je);
                char name[64];
                std::snprintf(name, sizeof name, "run_eps%.6g.csv", e.epsilon);
                write_file(std::filesystem::path(outdir) / name, to_csv(runs[i]));
            }
            write_file(std::filesystem::path(outdir) / "sweep.json", j.dump(2) + "\n");
            std::cout << j.dump(2) << "\n";
            return 0;
        }

        if (*ver) {
            auto reports = verify(suite);
            json j = json::array();
            bool ok = true;
            for (const auto& rep : reports) {
                json r;
                r["suite"] = rep.suite;
                r["pass"] = rep.all_pass();
                r["checks"] = json::array();
                for (const auto& c : rep.checks)
                    r["checks"].push_back(
                        {{"name", c.name}, {"pass", c.pass}, {"value", c.value}, {"threshold", c.threshold}});
                j.push_back(r);
                ok = ok && rep.all_pass();
                std::cout << (rep.all_pass() ? "[PASS] " : "[FAIL] ") << rep.suite << "\n";
                for (const auto& c : rep.checks)
                    if (!c.pass)
                        std::cout << "       " << c.name << ": " << c.value << " vs " << c.threshold << "\n";
            }
            write_file(std::filesystem::path(outdir) / "verify.json", j.dump(2) + "\n");
            return ok ? 0 : 1;
        }

        if (*ph) {
            if (probe == "resonance") {
                auto res = resonance_sample<double>(ph_eps, AnalysisCutoffs(pd, pk), pmu, psamples, ph_seed);
                std::string csv = "xi1,xi2,eta1,eta2,phi_value,regime\n";
                for (const auto& p : res.points) {
                    char buf[256];
                    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,near_resonant\n",
                                  p.xi.x(), p.xi.y(), p.eta.x(), p.eta.y(), reduced_phi(p));
                    csv += buf;
                }
                write_file(std::filesystem::path(outdir) / "resonance.csv", csv);
                json j = {{"epsilon", ph_eps},
                          {"D", pd},
                          {"K", pk},
                          {"mu", pmu},
                          {"n_samples", res.n_samples},
                          {"n_accepted", res.n_accepted},
                          {"measure_fraction", res.measure_fraction},
                          {"std_error", res.std_error}};
                if (res.n_accepted == 0) j["measure_upper_bound"] = res.measure_upper_bound;
                write_file(std::filesystem::path(outdir) / "resonance.json", j.dump(2) + "\n");
                std::cout << j.dump(2) << "\n";
            } else if (probe == "jacobian") {
                std::mt19937_64 rng(ph_seed);
                double lo = 1e300, hi = 0, agree = 0;
                for (long s = 0; s < psamples; ++s) {
                    auto p = sample_moderate_regime<double>(ph_eps, pmu, rng, pk);
                    auto jc = jacobian_check(p);
                    lo = std::min(lo, jc.ratio);
                    hi = std::max(hi, jc.ratio);
                    agree = std::max(agree, std::abs(jc.finite_difference - jc.closed_form) /
                                                std::max(1e-300, std::abs(jc.closed_form)));
                }
                json j = {{"epsilon", ph_eps}, {"mu", pmu},        {"samples", psamples},
                          {"ratio_min", lo},   {"ratio_max", hi},  {"fd_agreement", agree}};
                write_file(std::filesystem::path(outdir) / "jacobian.json", j.dump(2) + "\n");
                std::cout << j.dump(2) << "\n";
            } else if (probe == "bilinear") {
                CutoffProfile<double> phi;
                auto sweep_res = angular_gain_sweep<double>(bk, bk1, bk2, l_list, ptrials, pl_n, ph_seed, phi);
                json j = {{"k", bk}, {"k1", bk1}, {"k2", bk2}, {"n", pl_n}, {"trials", ptrials}};
                j["l"] = sweep_res.l_values;
                j["max_ratio"] = sweep_res.ratios;
                j["used_l"] = sweep_res.used_l;
                j["fitted_exponent"] = sweep_res.exponent;
                write_file(std::filesystem::path(outdir) / "bilinear.json", j.dump(2) + "\n");
                std::cout << j.dump(2) << "\n";
            } else {
                throw CLI::ValidationError("probe must be resonance|jacobian|bilinear");
            }
            return 0;
        }

        if (*sc) {
            GridSpec<double> g(plan.n, plan.L);
            CutoffProfile<double> phi;
            auto s = annulus_initial_data(g, plan.seed, plan.N0);
            auto gs = to_good_unknowns(s, epsilon, phi);
            auto sym = symmetrized_rhs(gs, s, epsilon, phi);
            auto lin = linearized_rhs(s, epsilon, phi);
            const double agree =
                (sym.total().coeffs - lin.coeffs).abs().maxCoeff() / lin.coeffs.abs().maxCoeff();

            auto lam = symbol_grid(g, sym_lambda_eps<double>(epsilon));
            auto total = sym.total();
            std::vector<double> lx, ly;
            json errs = json::array();
            for (double dt : dt_list) {
                IntegratorConfig icfg;
                icfg.dt = dt;
                auto plus = to_good_unknowns(Integrator<double>(g, epsilon, icfg).step(s), epsilon, phi);
                icfg.dt = -dt;
                auto minus = to_good_unknowns(Integrator<double>(g, epsilon, icfg).step(s), epsilon, phi);
                ComplexArray<double> fd = (plus.V.coeffs - minus.V.coeffs) / (2.0 * dt);
                ComplexArray<double> defect =
                    fd - std::complex<double>(0, 1) * lam * gs.V.coeffs - total.coeffs;
                const double err = std::sqrt(defect.abs2().sum() * g.mode_weight());
                errs.push_back({{"dt", dt}, {"defect", err}});
                lx.push_back(std::log(dt));
                ly.push_back(std::log(err));
            }
            double sx = 0, sy = 0, sxx = 0, sxy = 0;
            const double n = lx.size();
            for (size_t i = 0; i < lx.size(); ++i) {
                sx += lx[i];
                sy += ly[i];
                sxx += lx[i] * lx[i];
                sxy += lx[i] * ly[i];
            }
            const double order = (n * sxy - sx * sy) / (n * sxx - sx * sx);

            json j = {{"n", plan.n},   {"L", plan.L},   {"epsilon", epsilon},
                      {"seed", plan.seed}, {"form_agreement", agree}, {"fd_order", order}};
            j["defects"] = errs;
            write_file(std::filesystem::path(outdir) / "symmetrize_check.json", j.dump(2) + "\n");
            std::cout << j.dump(2) << "\n";
            return (order >= 1.9 && agree <= 1e-10) ? 0 : 1;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
