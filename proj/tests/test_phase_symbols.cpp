#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "bsq/resonance.hpp"
#include "test_util.hpp"

using namespace bsq;
using Cplx = std::complex<double>;
using V2 = Vec2<double>;

namespace {

// Sampling box documented with the tolerance analysis: √ε|η| ≤ 4 and
// |ξ−η|/|η| ≤ 2 keep the cancellation floor of the two algebraically equal
// formulas below the 1e−10·(1+|Φ|) budget in double precision.
PhasePoint<double> random_point(std::mt19937_64& rng, int mu, int nu) {
    std::uniform_real_distribution<double> unif(0, 1);
    const double eps = std::pow(10.0, -2.6 * unif(rng));           // ε ∈ [10^{−2.6}, 1]
    const double y = 0.01 * std::pow(400.0, unif(rng));            // √ε|η| ∈ [0.01, 4]
    const double r_eta = y / std::sqrt(eps);
    const double th_eta = 2 * EIGEN_PI * unif(rng);
    const double rho = 1e-3 * std::pow(2000.0, unif(rng));         // |ξ−η|/|η| ∈ [1e−3, 2]
    const double th_d = 2 * EIGEN_PI * unif(rng);
    V2 eta(r_eta * std::cos(th_eta), r_eta * std::sin(th_eta));
    V2 d(rho * r_eta * std::cos(th_d), rho * r_eta * std::sin(th_d));
    return PhasePoint<double>{eta + d, eta, mu, nu, eps};
}

}  // namespace

TEST_CASE("phase at the diagonal and the degenerate triangle") {
    PhasePoint<double> p{V2(1.3, -0.4), V2(1.3, -0.4), +1, -1, 0.05};
    CHECK(phase_direct(p) == doctest::Approx(-2.0 * lambda_eps(p.xi.norm(), 0.05)).epsilon(1e-14));

    // ε = 0, (+,+), collinear same-direction: |ξ| − |ξ−η| − |η| = 0
    V2 eta(0.7, 0.2);
    PhasePoint<double> q{eta + 0.8 * eta, eta, +1, +1, 0.0};
    CHECK(std::abs(phase_direct(q)) < 1e-14);
}

TEST_CASE("direct and expanded phase formulas agree on 1e5 points per sign pair") {
    for (int mu : {+1, -1})
        for (int nu : {+1, -1}) {
            std::mt19937_64 rng(100 + mu * 2 + nu);
            double worst = 0;
            for (int s = 0; s < 100000; ++s) {
                auto p = random_point(rng, mu, nu);
                const double a = phase_direct(p), b = phase_explicit(p);
                worst = std::max(worst, std::abs(a - b) / (1.0 + std::abs(a)));
            }
            CHECK(worst <= 1e-10);
        }
}

TEST_CASE("factored forms match the direct phase on admissible points") {
    for (int mu : {+1, -1}) {
        std::mt19937_64 rng(200 + mu);
        double worst = 0;
        for (int s = 0; s < 100000; ++s) {
            auto p = random_point(rng, mu, -1);
            if (!factored_point_admissible(p)) continue;
            const double a = phase_direct(p), b = phase_factored(p);
            worst = std::max(worst, std::abs(a - b) / (1.0 + std::abs(a)));
        }
        CHECK(worst <= 1e-9);
    }
}

TEST_CASE("reduced factor: collinear closed form and low-frequency size") {
    // ∠(ξ,η) = 0: φ_{+,−} = 4[ε(|ξ|²+|η|²−|ξ||η|)−1] + ε|ξ−η|(|ξ|+|ξ−η|+|η|)
    const double eps = 0.02;
    V2 eta(2.0, 1.0);
    PhasePoint<double> p{V2(1.02 * eta), eta, +1, -1, eps};
    const double a = p.xi.norm(), b = p.diff().norm(), c = eta.norm();
    const double by_hand = 4.0 * (eps * (a * a + c * c - a * c) - 1.0) + eps * b * (a + b + c);
    CHECK(reduced_phi(p) == doctest::Approx(by_hand).epsilon(1e-12));

    // low-frequency regime √ε|η| ≤ ½, |ξ−η| ≤ |η|/32: |φ_{+,−}| ∼ 1
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> unif(0, 1);
    double lo = 1e300, hi = 0;
    for (int s = 0; s < 10000; ++s) {
        const double e = 0.001 + 0.999 * unif(rng);
        const double r = (0.01 + 0.49 * unif(rng)) / std::sqrt(e);
        const double th = 2 * EIGEN_PI * unif(rng);
        const double rho = unif(rng) / 32.0, thd = 2 * EIGEN_PI * unif(rng);
        V2 et(r * std::cos(th), r * std::sin(th));
        V2 d(rho * r * std::cos(thd), rho * r * std::sin(thd));
        PhasePoint<double> q{et + d, et, +1, -1, e};
        const double v = std::abs(reduced_phi(q));
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    MESSAGE("low-frequency |phi_{+,-}| range: [", lo, ", ", hi, "]");
    CHECK(lo > 0.5);
    CHECK(hi < 8.0);
}

TEST_CASE("factored form rejects uncovered sign pairs and degenerate points") {
    PhasePoint<double> p{V2(1, 0), V2(0.9, 0.1), +1, +1, 0.1};
    CHECK_THROWS_AS(reduced_phi(p), std::invalid_argument);
    PhasePoint<double> q{V2(1, 0), V2(-2, 0), +1, -1, 0.1};  // ∠(ξ,η) = π
    CHECK_THROWS_AS(reduced_phi(q), std::invalid_argument);
    PhasePoint<double> r{V2(1, 0), V2(1, 0), -1, -1, 0.1};  // ξ = η
    CHECK_THROWS_AS(reduced_phi(r), std::invalid_argument);
}

TEST_CASE("full sign-pattern oddness of the ε = 0 phase") {
    std::mt19937_64 rng(31);
    auto bare = [](int sigma, int mu, int nu, const V2& xi, const V2& eta) {
        return -sigma * xi.norm() + mu * (xi - eta).norm() + nu * eta.norm();
    };
    for (int s = 0; s < 1000; ++s) {
        auto p = random_point(rng, +1, +1);
        for (int mu : {+1, -1})
            for (int nu : {+1, -1}) {
                // implemented phase is the σ = + slice of the odd pattern
                PhasePoint<double> q{p.xi, p.eta, mu, nu, 0.0};
                CHECK(phase_direct(q) == doctest::Approx(bare(+1, mu, nu, p.xi, p.eta)).epsilon(1e-12));
                CHECK(bare(+1, mu, nu, p.xi, p.eta) ==
                      doctest::Approx(-bare(-1, -mu, -nu, p.xi, p.eta)).epsilon(1e-12));
            }
    }
}

TEST_CASE("symbol s: support, antisymmetry, weighted defect") {
    CutoffProfile<double> phi;
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> unif(0, 1);

    // separation |ξ−η| > (3/160)|η| retires every shell of the weight
    for (int s = 0; s < 1000; ++s) {
        auto p = random_point(rng, s % 2 ? +1 : -1, +1);
        const double etan = p.eta.norm();
        if (p.diff().norm() <= etan / 32.0) continue;
        CHECK(std::abs(symbol_s(p, phi)) == 0.0);
    }

    // conj(s) = −s exactly: the real part is identically zero
    double max_weight = 0;
    for (int s = 0; s < 10000; ++s) {
        auto base = random_point(rng, +1, +1);
        V2 d = 0.01 * base.diff();
        PhasePoint<double> p{base.eta + d, base.eta, s % 2 ? +1 : -1, +1, base.epsilon};
        const Cplx v = symbol_s(p, phi);
        CHECK(v.real() == 0.0);
        max_weight = std::max(max_weight, std::abs(v));
    }
    CHECK(max_weight > 0.0);

    // antisymmetrized weighted defect over support samples, divided by ε|ξ−η|
    double worst = 0;
    int hits = 0;
    for (int s = 0; s < 100000; ++s) {
        const double eps = 0.001 + 0.999 * unif(rng);
        const double r = (0.3 + 63.0 * unif(rng)) / std::sqrt(eps);
        const double th = 2 * EIGEN_PI * unif(rng);
        const double rho = 0.018 * unif(rng);
        const double thd = 2 * EIGEN_PI * unif(rng);
        V2 eta(r * std::cos(th), r * std::sin(th));
        V2 d(rho * r * std::cos(thd), rho * r * std::sin(thd));
        PhasePoint<double> p{eta + d, eta, s % 2 ? +1 : -1, +1, eps};
        const double dn = p.diff().norm();
        if (dn == 0.0) continue;
        const Cplx defect = s_symmetrized_defect(p, 5, phi);
        if (std::abs(defect) == 0.0) continue;
        ++hits;
        worst = std::max(worst, std::abs(defect) / (eps * dn));
    }
    MESSAGE("s-defect ratio max over ", hits, " support samples: ", worst);
    CHECK(hits > 1000);
    CHECK(std::isfinite(worst));
}

TEST_CASE("symbol q: support box is exact, aligned zero, bound ratios") {
    CutoffProfile<double> phi;
    std::mt19937_64 rng(51);
    std::uniform_real_distribution<double> unif(0, 1);

    // √ε|η| = 100 → outside the support box, exactly zero
    {
        const double eps = 0.04;
        V2 eta(100.0 / std::sqrt(eps), 0);
        PhasePoint<double> p{1.001 * eta, eta, +1, -1, eps};
        CHECK(std::abs(symbol_q(p, phi)) == 0.0);
        CHECK(!q_support_box(p));
    }
    // ν = +, ξ ∥ η with |ξ| = |η|: radial factor vanishes
    {
        V2 eta(3.0, 4.0);
        PhasePoint<double> p{eta, eta, -1, +1, 0.01};
        CHECK(std::abs(symbol_q(p, phi)) == 0.0);
    }

    // boundary-straddling samples: q vanishes identically outside the box
    int outside = 0;
    for (int s = 0; s < 100000; ++s) {
        const double eps = 0.001 + 0.999 * unif(rng);
        // straddle both box faces: √ε|η| near 64 and |ξ|/|η| near 1±1/32
        const double y = 40.0 + 48.0 * unif(rng);
        const double r = y / std::sqrt(eps);
        const double th = 2 * EIGEN_PI * unif(rng);
        const double rho = 0.06 * unif(rng);
        const double thd = 2 * EIGEN_PI * unif(rng);
        V2 eta(r * std::cos(th), r * std::sin(th));
        V2 d(rho * r * std::cos(thd), rho * r * std::sin(thd));
        PhasePoint<double> p{eta + d, eta, s % 2 ? +1 : -1, s % 3 ? +1 : -1, eps};
        if (!q_support_box(p)) {
            ++outside;
            CHECK(std::abs(symbol_q(p, phi)) == 0.0);
        }
    }
    CHECK(outside > 10000);

    // recorded bound-ratio maxima on the support
    double r_minus = 0, r_plus = 0;
    for (int s = 0; s < 100000; ++s) {
        const double eps = 0.001 + 0.999 * unif(rng);
        const double y = 0.05 + 47.0 * unif(rng);
        const double r = y / std::sqrt(eps);
        const double th = 2 * EIGEN_PI * unif(rng);
        const double rho = 0.018 * unif(rng) + 1e-6;
        const double thd = 2 * EIGEN_PI * unif(rng);
        V2 eta(r * std::cos(th), r * std::sin(th));
        V2 d(rho * r * std::cos(thd), rho * r * std::sin(thd));
        const int mu = s % 2 ? +1 : -1;
        PhasePoint<double> pm{eta + d, eta, mu, -1, eps};
        PhasePoint<double> pp{eta + d, eta, mu, +1, eps};
        r_minus = std::max(r_minus, std::abs(symbol_q(pm, phi)) / (eps * pm.xi.norm()));
        const double dn = pp.diff().norm();
        if (dn > 0) r_plus = std::max(r_plus, std::abs(symbol_q(pp, phi)) / (eps * dn));
    }
    MESSAGE("bound ratios: |q_{mu,-}|/(eps|xi|) <= ", r_minus, ", |q_{mu,+}|/(eps|xi-eta|) <= ", r_plus);
    CHECK(std::isfinite(r_minus));
    CHECK(std::isfinite(r_plus));
    CHECK(r_minus > 0.0);
    CHECK(r_plus > 0.0);
}

TEST_CASE("resonance sampling against the polar scan oracle") {
    const double eps = 0.01;

    // brute-force scan: 3D polar grid in (r_eta, rho, theta_d); the reduced
    // phase is rotation invariant, which collapses the 4th coordinate
    const double threshold = std::ldexp(1.0, -3);
    long oracle_hits = 0;
    for (int ir = 0; ir < 200; ++ir) {
        const double r = 2.5 * std::pow(640.0 / 2.5, ir / 199.0);
        for (int ip = 0; ip < 50; ++ip) {
            const double rho = std::ldexp(1.0, -8) + (std::ldexp(1.0, -5) - std::ldexp(1.0, -8)) * ip / 49.0;
            for (int it = 0; it < 100; ++it) {
                const double th = 2 * EIGEN_PI * it / 100.0;
                V2 eta(r, 0), d(rho * r * std::cos(th), rho * r * std::sin(th));
                PhasePoint<double> p{eta + d, eta, +1, -1, eps};
                if (std::abs(reduced_phi(p)) <= threshold) ++oracle_hits;
            }
        }
    }
    CHECK(oracle_hits > 0);

    auto res = resonance_sample(eps, AnalysisCutoffs(3, 8), +1, 2000000, 99);
    CHECK(res.n_accepted > 0);
    CHECK(res.measure_fraction > 0.0);
    for (const auto& p : res.points) {
        CHECK(std::abs(reduced_phi(p)) <= threshold);
        CHECK(p.diff().norm() <= p.eta.norm() / 32.0 + 1e-12);
    }

    // unreachable modulation cutoff: empty set with a reported upper bound
    auto none = resonance_sample(eps, AnalysisCutoffs(60, 8), +1, 100000, 99);
    CHECK(none.n_accepted == 0);
    CHECK(none.measure_upper_bound == doctest::Approx(3.0 / 100000.0));
}

TEST_CASE("resonance measure scales like 2^{-D}") {
    const double eps = 0.01;
    std::vector<double> m;
    for (int D : {3, 4, 5}) m.push_back(resonance_sample(eps, AnalysisCutoffs(D, 8), +1, 6000000, 7).measure_fraction);
    MESSAGE("measures at D=3,4,5: ", m[0], " ", m[1], " ", m[2]);
    for (size_t i = 0; i + 1 < m.size(); ++i) {
        CHECK(m[i + 1] > 0.0);
        const double ratio = m[i] / m[i + 1];
        CHECK(ratio > 1.0);
        CHECK(ratio < 4.0);
    }
}

TEST_CASE("jacobian: finite difference against the closed form, ratio window") {
    for (int mu : {+1, -1}) {
        for (double eps : {0.04, 0.01}) {
            std::mt19937_64 rng(300 + mu + int(1000 * eps));
            double lo = 1e300, hi = 0, worst_agree = 0;
            for (int s = 0; s < 10000; ++s) {
                auto p = sample_moderate_regime(eps, mu, rng);
                auto jc = jacobian_check(p);
                worst_agree = std::max(worst_agree,
                                       std::abs(jc.finite_difference - jc.closed_form) /
                                           std::max(1e-30, std::abs(jc.closed_form)));
                lo = std::min(lo, jc.ratio);
                hi = std::max(hi, jc.ratio);
            }
            MESSAGE("mu=", mu, " eps=", eps, ": ratio in [", lo, ", ", hi, "], fd-vs-closed ", worst_agree);
            CHECK(worst_agree <= 1e-6);
            CHECK(lo > 0.0);
            CHECK(hi < 1e4);
            CHECK(std::isfinite(hi));
        }
    }
}

TEST_CASE("angle-localized bilinear probe: rejection and gain exponent") {
    CutoffProfile<double> phi;
    CHECK_THROWS_AS(angular_bilinear_probe<double>(9, 3, 9, -3, 1, 64, 1, phi), std::invalid_argument);
    CHECK_THROWS_AS(angular_bilinear_probe<double>(5, 2, 9, -3, 1, 512, 1, phi), std::invalid_argument);
    CHECK_THROWS_AS(angular_bilinear_probe<double>(5, 2, 5, -1, 1, 256, 1, phi), std::invalid_argument);

    // moderate lattice sweep: k = k₂ = 5, k₁ = k₂ − 3; all l admissible
    auto sweep = angular_gain_sweep<double>(5, 2, 5, {-3, -4, -5, -6}, 4, 256, 17, phi);
    MESSAGE("gain sweep ratios: ", sweep.ratios[0], " ", sweep.ratios[1], " ", sweep.ratios[2], " ",
            sweep.ratios[3], ", exponent ", sweep.exponent);
    CHECK(sweep.used_l.size() == 4);
    CHECK(sweep.exponent >= 0.25);
    CHECK(sweep.exponent <= 0.75);

    // normalized constants ratio/2^{l/2} stay level across the sweep
    std::vector<double> consts;
    for (size_t i = 0; i < sweep.ratios.size(); ++i)
        consts.push_back(sweep.ratios[i] / std::pow(2.0, sweep.l_values[i] / 2.0));
    const auto [mn, mx] = std::minmax_element(consts.begin(), consts.end());
    CHECK(*mx / *mn < 4.0);

    // the separation of the original configuration (k₁ = k₂ − 6) empties the
    // kernel for l ≥ −4; the probe reports zero support there
    auto empty = angular_bilinear_probe<double>(7, 1, 7, -3, 1, 512, 3, phi);
    CHECK(empty.support_pairs == 0);
    CHECK(empty.max_ratio == 0.0);
}
