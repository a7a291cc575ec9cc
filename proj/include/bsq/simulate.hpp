#pragma once

#include <cinttypes>
#include <cstdio>
#include <future>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "bsq/good_unknowns.hpp"
#include "bsq/initial_data.hpp"
#include "bsq/integrator.hpp"

namespace bsq {

struct DiagnosticsRow {
    double t = 0;
    double E_N0 = 0;  // ‖ζ‖²_{H^{N₀}} + ‖v‖²_{H^{N₀}}
    double norm_zeta = 0, norm_v = 0, norm_u = 0, norm_V = 0;
    double curl_res = 0, mean_res = 0;
    double profile_ratio = 0;  // ‖|D|⁻¹∂_tf‖_{H^{N₀}}/ε
    bool has_ledger = false;
    double ledger_S = 0, ledger_Q = 0, ledger_C = 0, ledger_N = 0;
};

/// One experiment-plan entry.
struct SimulationConfig {
    int n = 256;
    double L = 32.0 * EIGEN_PI;
    double epsilon = 0.01;
    int N0 = 5;
    uint64_t seed = 1;
    double dt = 0.02;
    double t_end = 2.0;
    double cadence = 0.1;
    Scheme scheme = Scheme::IFRK4;
    bool nonlinear = true;
    bool dealias = true;
    bool ledger = false;
    double cfl_guard = 40.0;
};

struct SimulationResult {
    SimulationConfig config;
    std::vector<DiagnosticsRow> rows;
    State<double> final_state;
    bool blowup = false;
    double blowup_time = 0;
    double spectral_tail = 0;   // max over the run of the outer-band amplitude ratio
    bool under_resolved = false;
    double cfl_ratio = 0;
    bool cfl_ok = true;
    double T_double = std::numeric_limits<double>::infinity();
};

namespace detail {

/// max |coeff| in the outer tenth of the kept band, relative to the peak.
template <class Scalar>
Scalar tail_fraction(const State<Scalar>& s) {
    const auto& g = s.grid();
    const int kcut = g.dealias_kcut();
    const int inner = static_cast<int>(0.9 * kcut);
    Scalar peak = 0, tail = 0;
    auto scan = [&](const SpectralScalar<Scalar>& f) {
        for (int j = 0; j < g.n; ++j)
            for (int i = 0; i < g.n; ++i) {
                const int m = std::max(std::abs(g.index_to_k(i)), std::abs(g.index_to_k(j)));
                const Scalar a = std::abs(f.coeffs(i, j));
                peak = std::max(peak, a);
                if (m > inner && m <= kcut) tail = std::max(tail, a);
            }
    };
    scan(s.zeta);
    scan(s.v.x);
    scan(s.v.y);
    return peak > Scalar(0) ? tail / peak : Scalar(0);
}

}  // namespace detail

template <class Scalar>
DiagnosticsRow collect_diagnostics(const State<Scalar>& s, Scalar epsilon, int N0, bool with_ledger,
                                   const CutoffProfile<Scalar>& phi = {}) {
    DiagnosticsRow row;
    row.t = s.time;
    row.norm_zeta = sobolev_norm(s.zeta, Scalar(N0));
    row.norm_v = sobolev_norm(s.v, Scalar(N0));
    row.E_N0 = row.norm_zeta * row.norm_zeta + row.norm_v * row.norm_v;
    auto gs = to_good_unknowns(s, epsilon, phi);
    row.norm_u = sobolev_norm(gs.u, Scalar(N0));
    row.norm_V = sobolev_norm(gs.V, Scalar(N0));
    row.curl_res = s.curl_defect();
    row.mean_res = s.mean_defect();
    row.profile_ratio = profile_derivative_ratio(s, epsilon, N0, phi);
    if (with_ledger) {
        auto rhs = symmetrized_rhs(gs, s, epsilon, phi);
        row.has_ledger = true;
        row.ledger_S = sobolev_norm(rhs.S, Scalar(N0));
        row.ledger_Q = sobolev_norm(rhs.Q, Scalar(N0));
        row.ledger_C = sobolev_norm(rhs.C, Scalar(N0));
        row.ledger_N = sobolev_norm(rhs.N, Scalar(N0));
    }
    return row;
}

/// Run one plan entry: integrate, sample diagnostics on the cadence grid,
/// stop at t_end or blowup (the last finite row is always retained).
/// Deterministic in (config, seed).
inline SimulationResult simulate(const SimulationConfig& cfg) {
    GridSpec<double> g(cfg.n, cfg.L);
    CutoffProfile<double> phi;

    IntegratorConfig icfg;
    const int steps_per_sample = std::max(1, static_cast<int>(std::ceil(cfg.cadence / cfg.dt - 1e-12)));
    icfg.dt = cfg.cadence / steps_per_sample;  // dt adjusted to divide the cadence exactly
    icfg.scheme = cfg.scheme;
    icfg.t_end = cfg.t_end;
    icfg.dealias = cfg.dealias;
    icfg.nonlinear = cfg.nonlinear;
    icfg.cfl_guard = cfg.cfl_guard;
    Integrator<double> stepper(g, cfg.epsilon, icfg);

    SimulationResult out;
    out.config = cfg;
    out.config.dt = icfg.dt;
    out.cfl_ratio = stepper.cfl_ratio();
    out.cfl_ok = stepper.cfl_within_guard();

    State<double> state = annulus_initial_data(g, cfg.seed, cfg.N0);
    SpectralScalar<double> W = stepper.state_to_w(state);

    const long n_samples = static_cast<long>(std::floor(cfg.t_end / cfg.cadence + 1e-12));
    out.rows.push_back(collect_diagnostics(state, cfg.epsilon, cfg.N0, cfg.ledger, phi));
    const double E0 = out.rows.front().E_N0;
    out.spectral_tail = detail::tail_fraction(state);

    for (long sample = 1; sample <= n_samples; ++sample) {
        bool finite = true;
        for (int k = 0; k < steps_per_sample && finite; ++k) finite = stepper.advance(W);
        if (!finite) {
            out.blowup = true;
            out.blowup_time = sample * cfg.cadence;
            break;
        }
        state = stepper.w_to_state(W, sample * cfg.cadence);
        out.rows.push_back(collect_diagnostics(state, cfg.epsilon, cfg.N0, cfg.ledger, phi));
        out.spectral_tail = std::max(out.spectral_tail, detail::tail_fraction(state));
        if (!std::isinf(out.T_double)) continue;
        if (out.rows.back().E_N0 > 2.0 * E0) out.T_double = state.time;
    }
    out.final_state = std::move(state);
    out.under_resolved = out.spectral_tail > 1e-8;
    return out;
}

// ---------------------------------------------------------------------------
// Lifespan sweep.

struct ExperimentPlan {
    std::vector<double> epsilons = {0.04, 0.02, 0.01};
    int n = 256;
    double L = 32.0 * EIGEN_PI;
    int N0 = 5;
    uint64_t seed = 1;
    double horizon_coef = 0.1;    // t_end(ε) = coef·ε^{−power}
    double horizon_power = 2.0 / 3.0;
    double dt = 0.02;
    double cadence = 0.1;
    Scheme scheme = Scheme::IFRK4;
    bool nonlinear = true;
    bool ledger = false;
    int max_concurrency = 3;
};

struct SweepEntry {
    double epsilon = 0;
    double t_end = 0;
    double T_double = std::numeric_limits<double>::infinity();
    double energy_max = 0;
    double growth_C = 0;          // least-squares C in E(t) − E(0) ≈ C·ε^{2/3}t
    double growth_residual = 0;   // rms residual of that fit
    bool under_resolved = false;
    bool blowup = false;
};

struct SweepResult {
    std::vector<SweepEntry> entries;
    double doubling_slope = 0;    // fit of log T_double against log(1/ε)
    int doubling_points = 0;      // finite doubling times entering the fit
    double growth_C_max = 0;
};

inline SimulationConfig plan_entry_config(const ExperimentPlan& plan, double epsilon) {
    SimulationConfig cfg;
    cfg.n = plan.n;
    cfg.L = plan.L;
    cfg.epsilon = epsilon;
    cfg.N0 = plan.N0;
    cfg.seed = plan.seed;
    cfg.dt = plan.dt;
    cfg.t_end = plan.horizon_coef * std::pow(epsilon, -plan.horizon_power);
    cfg.cadence = plan.cadence;
    cfg.scheme = plan.scheme;
    cfg.nonlinear = plan.nonlinear;
    cfg.ledger = plan.ledger;
    return cfg;
}

inline SweepEntry summarize_run(const SimulationResult& run) {
    SweepEntry e;
    e.epsilon = run.config.epsilon;
    e.t_end = run.config.t_end;
    e.T_double = run.T_double;
    e.under_resolved = run.under_resolved;
    e.blowup = run.blowup;
    const double E0 = run.rows.front().E_N0;
    double sxx = 0, sxy = 0;
    for (const auto& r : run.rows) {
        e.energy_max = std::max(e.energy_max, r.E_N0);
        const double x = std::pow(run.config.epsilon, 2.0 / 3.0) * r.t;
        sxx += x * x;
        sxy += x * (r.E_N0 - E0);
    }
    e.growth_C = sxx > 0 ? sxy / sxx : 0;
    double rss = 0;
    for (const auto& r : run.rows) {
        const double x = std::pow(run.config.epsilon, 2.0 / 3.0) * r.t;
        const double d = (r.E_N0 - E0) - e.growth_C * x;
        rss += d * d;
    }
    e.growth_residual = std::sqrt(rss / run.rows.size());
    return e;
}

/// Run the plan over its ε list (independent runs, optionally concurrent),
/// record the doubling time per ε, fit log T_double against log(1/ε), and
/// report the least-squares growth constants.  Under-resolved runs are
/// flagged and excluded from the fit.
inline SweepResult lifespan_sweep(const ExperimentPlan& plan,
                                  std::vector<SimulationResult>* keep_runs = nullptr) {
    if (plan.epsilons.size() < 3)
        throw std::invalid_argument("lifespan_sweep: need at least 3 epsilon values");
    for (size_t i = 0; i + 2 < plan.epsilons.size(); ++i) {
        const double r1 = plan.epsilons[i] / plan.epsilons[i + 1];
        const double r2 = plan.epsilons[i + 1] / plan.epsilons[i + 2];
        if (std::abs(r1 / r2 - 1.0) > 0.05)
            throw std::invalid_argument("lifespan_sweep: epsilon values must be geometrically spaced");
    }

    std::vector<SimulationResult> runs(plan.epsilons.size());
    const int width = std::max(1, plan.max_concurrency);
    for (size_t base = 0; base < plan.epsilons.size(); base += width) {
        std::vector<std::future<SimulationResult>> batch;
        for (size_t i = base; i < std::min(base + width, plan.epsilons.size()); ++i)
            batch.push_back(std::async(std::launch::async,
                                       [&plan, eps = plan.epsilons[i]] { return simulate(plan_entry_config(plan, eps)); }));
        for (size_t i = 0; i < batch.size(); ++i) runs[base + i] = batch[i].get();
    }

    SweepResult out;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& run : runs) {
        SweepEntry e = summarize_run(run);
        out.entries.push_back(e);
        out.growth_C_max = std::max(out.growth_C_max, e.growth_C);
        if (!e.under_resolved && std::isfinite(e.T_double)) {
            const double x = std::log(1.0 / e.epsilon), y = std::log(e.T_double);
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
            ++out.doubling_points;
        }
    }
    if (out.doubling_points >= 2) {
        const double m = out.doubling_points;
        out.doubling_slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    }
    if (keep_runs) *keep_runs = std::move(runs);
    return out;
}

// ---------------------------------------------------------------------------
// Text output: CSV rows at 17 significant digits, fixed header.

inline std::string csv_header(bool ledger) {
    std::string h = "t,E_N0,norm_zeta,norm_v,norm_u,norm_V,curl_res,mean_res,profile_ratio";
    if (ledger) h += ",ledger_S,ledger_Q,ledger_C,ledger_N";
    return h + "\n";
}

inline std::string csv_row(const DiagnosticsRow& r) {
    char buf[640];
    int len = std::snprintf(buf, sizeof buf,
                            "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g", r.t, r.E_N0,
                            r.norm_zeta, r.norm_v, r.norm_u, r.norm_V, r.curl_res, r.mean_res,
                            r.profile_ratio);
    if (r.has_ledger)
        len += std::snprintf(buf + len, sizeof buf - len, ",%.17g,%.17g,%.17g,%.17g", r.ledger_S,
                             r.ledger_Q, r.ledger_C, r.ledger_N);
    buf[len++] = '\n';
    return std::string(buf, static_cast<size_t>(len));
}

inline std::string to_csv(const SimulationResult& run) {
    std::string out = csv_header(run.config.ledger);
    for (const auto& r : run.rows) out += csv_row(r);
    return out;
}

}  // namespace bsq
