#pragma once

#include <random>
#include <string>
#include <vector>

#include "bsq/resonance.hpp"
#include "bsq/simulate.hpp"

namespace bsq {

struct Check {
    std::string name;
    bool pass = false;
    double value = 0;
    double threshold = 0;
};

struct VerifyReport {
    std::string suite;
    std::vector<Check> checks;
    bool all_pass() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }
};

namespace verify_detail {

inline void add_le(VerifyReport& rep, const std::string& name, double value, double threshold) {
    rep.checks.push_back({name, value <= threshold, value, threshold});
}
inline void add_ge(VerifyReport& rep, const std::string& name, double value, double threshold) {
    rep.checks.push_back({name, value >= threshold, value, threshold});
}
inline void add_flag(VerifyReport& rep, const std::string& name, bool pass) {
    rep.checks.push_back({name, pass, pass ? 1.0 : 0.0, 1.0});
}

template <class Scalar>
SpectralScalar<Scalar> rand_real(const GridSpec<Scalar>& g, uint64_t seed, int lo, int hi) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<Scalar> normal(0, 1);
    SpectralScalar<Scalar> f(g);
    for (int kb = -hi; kb <= hi; ++kb)
        for (int ka = -hi; ka <= hi; ++ka) {
            const Scalar re = normal(rng), im = normal(rng);
            if ((ka == 0 && kb == 0) || std::max(std::abs(ka), std::abs(kb)) < lo) continue;
            if (std::abs(ka) >= g.n / 2 || std::abs(kb) >= g.n / 2) continue;
            const int i = g.k_to_index(ka), j = g.k_to_index(kb);
            f.coeffs(i, j) += std::complex<Scalar>(re, im);
            f.coeffs(g.reflect(i), g.reflect(j)) += std::complex<Scalar>(re, -im);
        }
    f.zero_nyquist();
    f.zero_mean();
    return f;
}

template <class Scalar>
State<Scalar> rand_state(const GridSpec<Scalar>& g, uint64_t seed, int lo, int hi) {
    auto zeta = rand_real(g, seed, lo, hi);
    auto q = rand_real(g, seed + 7777, lo, hi);
    SpectralVector2<Scalar> v = Scalar(-1) * grad(apply_symbol(q, sym_inv_abs<Scalar>()));
    return State<Scalar>(std::move(zeta), std::move(v));
}

}  // namespace verify_detail

inline VerifyReport verify_spectral() {
    using namespace verify_detail;
    VerifyReport rep{"spectral", {}};
    GridSpec<double> g(64, 11.0);

    double rt = 0, parseval = 0, herm = 0;
    for (uint64_t s : {1u, 2u, 3u}) {
        auto f = rand_real(g, s, 1, 20);
        auto vals = inverse_transform(f);
        auto back = forward_transform(g, vals);
        rt = std::max(rt, (back.coeffs - f.coeffs).abs().maxCoeff() / f.coeffs.abs().maxCoeff());
        const double grid_l2 = std::sqrt((vals * vals).sum()) * g.length / g.n;
        parseval = std::max(parseval, std::abs(l2_norm(f) - grid_l2) / grid_l2);
        herm = std::max(herm, hermitian_residual(product(f, f)) / (1e-30 + f.coeffs.abs().maxCoeff()));
    }
    add_le(rep, "round_trip_relative", rt, 1e-12);
    add_le(rep, "parseval_relative", parseval, 1e-12);
    add_le(rep, "hermitian_preservation", herm, 1e-12);

    auto f = rand_real(g, 5, 1, 20);
    auto m1 = sym_bracket_pow<double>(1.0);
    auto m2 = sym_lambda_eps<double>(0.03);
    auto seq = apply_symbol(apply_symbol(f, m2), m1);
    auto fused = apply_symbol(f, [&](double a, double b) { return m1(a, b) * m2(a, b); });
    add_le(rep, "multiplier_composition",
           (seq.coeffs - fused.coeffs).abs().maxCoeff() / seq.coeffs.abs().maxCoeff(), 1e-14);

    SpectralVector2<double> w(rand_real(g, 6, 1, 20), rand_real(g, 7, 1, 20));
    auto p = curl_free_project(w);
    auto pp = curl_free_project(p);
    add_le(rep, "projection_idempotent",
           ((pp.x.coeffs - p.x.coeffs).abs().maxCoeff() + (pp.y.coeffs - p.y.coeffs).abs().maxCoeff()) /
               (1e-30 + p.x.coeffs.abs().maxCoeff()),
           1e-13);
    add_le(rep, "projection_kills_curl", curl_residual(p), 1e-13);
    return rep;
}

inline VerifyReport verify_lp() {
    using namespace verify_detail;
    VerifyReport rep{"littlewood_paley", {}};
    CutoffProfile<double> phi;

    double pu = 0;
    for (int s = 0; s < 10000; ++s) {
        const double x = std::ldexp(1.0, -3) * std::pow(std::ldexp(1.0, 8), s / 9999.0);
        double sum = 0;
        for (int k = -4; k <= 6; ++k) sum += phi.at(x, k);
        pu = std::max(pu, std::abs(sum - 1.0));
    }
    add_le(rep, "partition_of_unity", pu, 1e-13);

    double supp = 0;
    for (int s = 0; s <= 4000; ++s) {
        const double x = 4.0 * s / 4000.0;
        if (x < 0.625 || x > 1.5) supp = std::max(supp, phi.at(x, 0));
    }
    add_le(rep, "shell_support_exact", supp, 0.0);

    GridSpec<double> g(128, 2.0 * EIGEN_PI);
    double completeness = 0;
    for (uint64_t s : {11u, 12u}) {
        auto a = rand_real(g, s, 1, 40);
        auto b = rand_real(g, s + 50, 1, 40);
        auto whole = product(a, b);
        auto parts = paraproduct_T(a, b, phi) + paraproduct_T(b, a, phi) + remainder_R(a, b, phi);
        completeness = std::max(completeness, l2_norm(whole - parts) / (l2_norm(a) * l2_norm(b)));
    }
    add_le(rep, "decomposition_completeness", completeness, 1e-11);

    auto a = rand_real(g, 21, 1, 40);
    auto b = rand_real(g, 22, 1, 40);
    auto base = paraproduct_T(a, b, phi);
    auto scaled = paraproduct_T(2.0 * a, 4.0 * b, phi);
    add_le(rep, "bilinearity_power_of_two", (scaled.coeffs - 8.0 * base.coeffs).abs().maxCoeff(), 0.0);

    // empirical commutator constant, 50 seeds, scale-separated inputs
    GridSpec<double> gc(512, 2.0 * EIGEN_PI);
    double cmax = 0;
    bool finite = true;
    for (uint64_t seed = 0; seed < 50; ++seed) {
        auto aa = rand_real(gc, 1000 + seed, 1, 3);
        auto bb = rand_real(gc, 2000 + seed, 64, 170);
        const double r = commutator_probe(aa, bb, 2.0, phi);
        finite = finite && std::isfinite(r);
        cmax = std::max(cmax, r);
    }
    add_flag(rep, "commutator_ratio_finite", finite);
    add_ge(rep, "commutator_constant_recorded", cmax, 0.0);
    return rep;
}

inline VerifyReport verify_model() {
    using namespace verify_detail;
    VerifyReport rep{"model", {}};

    add_flag(rep, "special_case_exceptional",
             linear_wellposedness(AbcdParams<double>::special_case(0.01)) == Wellposedness::WellPosedExceptional);
    add_flag(rep, "generic_case",
             linear_wellposedness(AbcdParams<double>{-1, 1, -1, 1.0 / 3.0, 1, 0.01}) ==
                 Wellposedness::WellPosedGeneric);
    add_flag(rep, "unequal_positive_illposed",
             linear_wellposedness(AbcdParams<double>{1, 0, 2, 0, 0, 0.01}) == Wellposedness::IllPosed);

    GridSpec<double> g(64, 32.0 * EIGEN_PI);
    const double eps = 0.01;
    auto s = rand_state(g, 3, 1, 20);
    auto ds = rhs_special(eps, s);
    add_le(rep, "rhs_mean_exact", std::max({mean_residual(ds.zeta), mean_residual(ds.v.x), mean_residual(ds.v.y)}),
           0.0);
    add_le(rep, "rhs_curl_propagation", curl_residual(ds.v), 1e-13);

    double family = 0;
    auto sp = AbcdParams<double>::special_case(eps);
    for (uint64_t seed = 0; seed < 20; ++seed) {
        auto st = rand_state(g, 100 + seed, 1, 20);
        auto da = rhs_abcd(sp, st);
        auto dsp = rhs_special(eps, st);
        family = std::max(family, (l2_norm(da.zeta - dsp.zeta) + l2_norm(da.v - dsp.v)) /
                                      (l2_norm(dsp.zeta) + l2_norm(dsp.v)));
    }
    add_le(rep, "family_reduces_to_special", family, 1e-13);

    // linear symbol eigenvalues match ±iΛ_ε at every lattice point
    double worst = 0;
    for (int j = 0; j < g.n; ++j)
        for (int i = 0; i < g.n; ++i) {
            const Vec2<double> xi = g.xi(i, j);
            auto lam = dispersion_eigenvalues(sp, xi);
            const std::complex<double> target(0, lambda_eps(xi.norm(), eps));
            const double m1 = std::min(std::abs(lam.first - target), std::abs(lam.second - target));
            worst = std::max(worst, m1);
        }
    add_le(rep, "linear_symbol_matches_lambda", worst, 1e-12);
    return rep;
}

inline VerifyReport verify_good_unknowns() {
    using namespace verify_detail;
    VerifyReport rep{"good_unknowns", {}};
    CutoffProfile<double> phi;
    GridSpec<double> g(256, 2.0 * EIGEN_PI);
    const double eps = 1.0;

    auto f = rand_real(g, 1, 1, 2);
    SpectralVector2<double> w = -1.0 * grad(apply_symbol(rand_real(g, 2, 30, 80), sym_inv_abs<double>()));
    auto B = b_eps(f, w, eps, phi);
    add_le(rep, "b_eps_reality",
           std::max(hermitian_residual(B.x), hermitian_residual(B.y)) /
               (1e-30 + B.x.coeffs.abs().maxCoeff()),
           1e-12);

    double round_trip = 0;
    bool contracted = true;
    for (uint64_t seed : {31u, 32u}) {
        auto s = rand_state(g, seed, 1, 80);
        s.zeta.coeffs *= 0.05 / linf_norm(s.zeta);
        auto gs = to_good_unknowns(s, eps, phi);
        auto r = reconstruct(gs, eps, phi);
        contracted = contracted && r.converged;
        round_trip = std::max(round_trip, (sobolev_norm(r.state.v - s.v, 5.0) +
                                           sobolev_norm(r.state.zeta - s.zeta, 5.0)) /
                                              (sobolev_norm(s.v, 5.0) + sobolev_norm(s.zeta, 5.0)));
    }
    add_flag(rep, "reconstruct_converged", contracted);
    add_le(rep, "round_trip_H_N0", round_trip, 1e-10);

    int inside = 0;
    for (int t = 0; t < 40; ++t) {
        auto s = rand_state(g, 500 + t, 1, 80);
        s.zeta.coeffs *= 0.1 / linf_norm(s.zeta);
        auto gs = to_good_unknowns(s, eps, phi);
        const double nz = sobolev_norm(s.zeta, 5.0), nv = sobolev_norm(s.v, 5.0), nV = sobolev_norm(gs.V, 5.0);
        const double ratio = (nz * nz + nv * nv) / (nV * nV);
        if (ratio >= 0.25 && ratio <= 4.0) ++inside;
    }
    add_flag(rep, "energy_equivalence_window", inside == 40);

    // symmetric assembly against the primitive form, both lattices
    double agree = 0;
    {
        auto s = rand_state(g, 12, 1, 80);
        s.zeta.coeffs *= 0.2 / linf_norm(s.zeta);
        auto gs = to_good_unknowns(s, eps, phi);
        auto sym = symmetrized_rhs(gs, s, eps, phi);
        auto lin = linearized_rhs(s, eps, phi);
        agree = (sym.total().coeffs - lin.coeffs).abs().maxCoeff() / lin.coeffs.abs().maxCoeff();
    }
    GridSpec<double> gd(64, 32.0 * EIGEN_PI);
    {
        auto s = rand_state(gd, 13, 1, 20);
        auto gs = to_good_unknowns(s, 0.01, phi);
        auto sym = symmetrized_rhs(gs, s, 0.01, phi);
        auto lin = linearized_rhs(s, 0.01, phi);
        agree = std::max(agree, (sym.total().coeffs - lin.coeffs).abs().maxCoeff() /
                                    lin.coeffs.abs().maxCoeff());
    }
    add_le(rep, "linearized_vs_symmetric", agree, 1e-10);

    // central-difference consistency order (quick 3-point version)
    {
        auto s = rand_state(gd, 21, 1, 20);
        auto gs = to_good_unknowns(s, 0.01, phi);
        auto rhs = symmetrized_rhs(gs, s, 0.01, phi).total();
        IntegratorConfig icfg;
        std::vector<double> lx, ly;
        for (double dt : {0.1, 0.05, 0.025}) {
            icfg.dt = dt;
            auto plus = to_good_unknowns(Integrator<double>(gd, 0.01, icfg).step(s), 0.01, phi);
            icfg.dt = -dt;
            auto minus = to_good_unknowns(Integrator<double>(gd, 0.01, icfg).step(s), 0.01, phi);
            ComplexArray<double> fd = (plus.V.coeffs - minus.V.coeffs) / (2.0 * dt);
            auto lam = symbol_grid(gd, sym_lambda_eps<double>(0.01));
            ComplexArray<double> defect =
                fd - std::complex<double>(0, 1) * lam * gs.V.coeffs - rhs.coeffs;
            lx.push_back(std::log(dt));
            ly.push_back(std::log(std::sqrt(defect.abs2().sum() * gd.mode_weight())));
        }
        const double n = lx.size();
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (size_t i = 0; i < lx.size(); ++i) {
            sx += lx[i];
            sy += ly[i];
            sxx += lx[i] * lx[i];
            sxy += lx[i] * ly[i];
        }
        add_ge(rep, "symmetrization_fd_order", (n * sxy - sx * sy) / (n * sxx - sx * sx), 1.9);
    }
    return rep;
}

inline VerifyReport verify_phases() {
    using namespace verify_detail;
    VerifyReport rep{"phases", {}};
    CutoffProfile<double> phi;
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> unif(0, 1);

    auto rand_pt = [&](int mu, int nu) {
        const double eps = std::pow(10.0, -2.6 * unif(rng));
        const double y = 0.01 * std::pow(400.0, unif(rng));
        const double r = y / std::sqrt(eps);
        const double th = 2 * EIGEN_PI * unif(rng);
        const double rho = 1e-3 * std::pow(2000.0, unif(rng));
        const double thd = 2 * EIGEN_PI * unif(rng);
        Vec2<double> eta(r * std::cos(th), r * std::sin(th));
        Vec2<double> d(rho * r * std::cos(thd), rho * r * std::sin(thd));
        return PhasePoint<double>{eta + d, eta, mu, nu, eps};
    };

    double two_forms = 0, factored = 0, antisym = 0, q_out = 0;
    for (int s = 0; s < 100000; ++s) {
        auto p = rand_pt(s % 2 ? 1 : -1, s % 3 ? 1 : -1);
        const double a = phase_direct(p), b = phase_explicit(p);
        two_forms = std::max(two_forms, std::abs(a - b) / (1.0 + std::abs(a)));

        PhasePoint<double> pm{p.xi, p.eta, s % 2 ? 1 : -1, -1, p.epsilon};
        if (factored_point_admissible(pm)) {
            const double da = phase_direct(pm);
            factored = std::max(factored, std::abs(phase_factored(pm) - da) / (1.0 + std::abs(da)));
        }
        PhasePoint<double> ps{p.xi, p.eta, s % 2 ? 1 : -1, +1, p.epsilon};
        antisym = std::max(antisym, std::abs(symbol_s(ps, phi).real()));

        if (!q_support_box(p)) q_out = std::max(q_out, std::abs(symbol_q(p, phi)));
    }
    add_le(rep, "phase_two_forms", two_forms, 1e-10);
    add_le(rep, "lemma_factorization", factored, 1e-9);
    add_le(rep, "symbol_s_antisymmetry", antisym, 0.0);
    add_le(rep, "symbol_q_support_violations", q_out, 0.0);

    double jac = 0;
    std::mt19937_64 rng2(18);
    for (int s = 0; s < 2000; ++s) {
        auto p = sample_moderate_regime(0.01, s % 2 ? 1 : -1, rng2);
        auto jc = jacobian_check(p);
        jac = std::max(jac, std::abs(jc.finite_difference - jc.closed_form) / std::abs(jc.closed_form));
    }
    add_le(rep, "jacobian_fd_agreement", jac, 1e-6);

    auto res = resonance_sample(0.01, AnalysisCutoffs(3, 8), +1, 1000000, 5);
    add_ge(rep, "resonance_set_nonempty", double(res.n_accepted), 1.0);
    return rep;
}

inline std::vector<VerifyReport> verify(const std::string& suite) {
    std::vector<VerifyReport> out;
    if (suite == "spectral" || suite == "all") out.push_back(verify_spectral());
    if (suite == "lp" || suite == "all") out.push_back(verify_lp());
    if (suite == "model" || suite == "all") out.push_back(verify_model());
    if (suite == "good_unknowns" || suite == "all") out.push_back(verify_good_unknowns());
    if (suite == "phases" || suite == "all") out.push_back(verify_phases());
    if (out.empty()) throw std::invalid_argument("verify: unknown suite '" + suite + "'");
    return out;
}

}  // namespace bsq
