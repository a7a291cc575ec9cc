#pragma once

#include <optional>
#include <random>
#include <unordered_map>
#include <vector>

#include "bsq/phases.hpp"

namespace bsq {

/// Modulation cutoff D and frequency-ratio cutoff K of the regime splitting.
struct AnalysisCutoffs {
    int D = 1;
    int K = 6;
    AnalysisCutoffs() = default;
    AnalysisCutoffs(int d, int k) : D(d), K(k) {
        if (d < 1 || k < 1) throw std::invalid_argument("AnalysisCutoffs: D and K must be >= 1");
    }
};

template <class Scalar>
struct ResonanceSampleResult {
    std::vector<PhasePoint<Scalar>> points;   // accepted sites in the near-resonant regime
    long n_samples = 0;
    long n_accepted = 0;
    Scalar measure_fraction = 0;              // volume fraction of the sampled domain
    Scalar std_error = 0;
    Scalar measure_upper_bound = 0;           // one-sided 95% bound when no point is accepted
};

/// Rejection-sample the moderate-frequency annulus ¼ ≤ √ε|η| ≤ 64 with the
/// ratio band |ξ−η|/|η| ∈ [2^{−K}, 2^{−5}], and keep the sites where the
/// reduced phase of the (μ,−) pair has modulus ≤ 2^{−D}.  Sampling is polar
/// with area weight in r_η and uniform in the ratio and both angles; the
/// measure estimate is the acceptance fraction of that product measure.
template <class Scalar>
ResonanceSampleResult<Scalar> resonance_sample(Scalar epsilon, const AnalysisCutoffs& cuts, int mu,
                                               long n_samples, uint64_t seed, long max_kept = 200000) {
    if (mu != +1 && mu != -1) throw std::invalid_argument("resonance_sample: mu must be +1 or -1");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<Scalar> unif(0, 1);

    const Scalar sq = std::sqrt(epsilon);
    const Scalar r_lo = Scalar(0.25) / sq, r_hi = Scalar(64) / sq;
    const Scalar rho_lo = std::ldexp(Scalar(1), -cuts.K), rho_hi = std::ldexp(Scalar(1), -5);
    const Scalar threshold = std::ldexp(Scalar(1), -cuts.D);

    ResonanceSampleResult<Scalar> out;
    out.n_samples = n_samples;
    for (long s = 0; s < n_samples; ++s) {
        const Scalar r_eta = std::sqrt(r_lo * r_lo + (r_hi * r_hi - r_lo * r_lo) * unif(rng));
        const Scalar th_eta = Scalar(2) * Scalar(EIGEN_PI) * unif(rng);
        const Scalar rho = rho_lo + (rho_hi - rho_lo) * unif(rng);
        const Scalar th_d = Scalar(2) * Scalar(EIGEN_PI) * unif(rng);
        const Vec2<Scalar> eta(r_eta * std::cos(th_eta), r_eta * std::sin(th_eta));
        const Vec2<Scalar> d(rho * r_eta * std::cos(th_d), rho * r_eta * std::sin(th_d));
        PhasePoint<Scalar> p{eta + d, eta, mu, -1, epsilon};
        if (!factored_point_admissible(p)) continue;
        if (std::abs(reduced_phi(p)) > threshold) continue;
        ++out.n_accepted;
        if (static_cast<long>(out.points.size()) < max_kept) out.points.push_back(p);
    }
    const Scalar p_hat = Scalar(out.n_accepted) / Scalar(n_samples);
    out.measure_fraction = p_hat;
    out.std_error = std::sqrt(p_hat * (Scalar(1) - p_hat) / Scalar(n_samples));
    if (out.n_accepted == 0) out.measure_upper_bound = Scalar(3) / Scalar(n_samples);  // rule of three
    return out;
}

template <class Scalar>
struct JacobianCheck {
    Scalar finite_difference = 0;  // ∂φ/∂r_η by central difference
    Scalar closed_form = 0;        // analytic radial derivative
    Scalar ratio = 0;              // closed_form / √ε
};

/// Radial derivative of the reduced phase at fixed angles and fixed |ξ|,
/// both by central finite difference in |η| and by the closed form that
/// uses ∂_{r_η}|ξ−η| = −cos∠(ξ−η, η).
template <class Scalar>
JacobianCheck<Scalar> jacobian_check(const PhasePoint<Scalar>& p) {
    if (p.nu != -1) throw std::invalid_argument("jacobian_check: regime covers the (mu,-) pairs");
    JacobianCheck<Scalar> out;
    const Scalar r_eta = p.eta.norm();
    const Vec2<Scalar> omega_eta = p.eta / r_eta;
    // |ξ−η| must stay well clear of the step or the central difference
    // straddles the distance function's near-kink
    const Scalar h = Scalar(1e-5) * std::min(r_eta, Scalar(100) * p.diff().norm());

    auto phi_at = [&](Scalar r) {
        PhasePoint<Scalar> q{p.xi, Vec2<Scalar>(r * omega_eta), p.mu, -1, p.epsilon};
        return reduced_phi(q);
    };
    out.finite_difference = (phi_at(r_eta + h) - phi_at(r_eta - h)) / (2 * h);

    const Scalar a = p.xi.norm(), b = p.diff().norm();
    const Scalar eps = p.epsilon;
    const Scalar half = angle_between(p.xi, p.eta) / Scalar(2);
    const Scalar cos2 = std::cos(half) * std::cos(half);
    const Scalar cos_d_eta = p.diff().dot(p.eta) / (b * r_eta);
    if (p.mu == +1) {
        out.closed_form = Scalar(4) * eps * cos2 * (Scalar(2) * r_eta - a) -
                          eps * (Scalar(4) * cos2 - Scalar(3)) * ((a + r_eta + Scalar(2) * b) * cos_d_eta - b);
    } else {
        out.closed_form = eps * (Scalar(2) * r_eta - a) +
                          eps * (Scalar(1) - Scalar(3) / (Scalar(4) * cos2)) *
                              ((a + r_eta - Scalar(2) * b) * cos_d_eta - b);
    }
    out.ratio = out.closed_form / std::sqrt(eps);
    return out;
}

/// Draw a point of supp(q) in the moderate regime (¼ ≤ √ε|η| ≤ 64,
/// 2^{−K}|η| ≤ |ξ−η| ≤ |η|/32), the precondition of jacobian_check; the
/// ratio floor matches the regime where the radial change of variables is
/// actually used.
template <class Scalar>
PhasePoint<Scalar> sample_moderate_regime(Scalar epsilon, int mu, std::mt19937_64& rng, int K = 8) {
    std::uniform_real_distribution<Scalar> unif(0, 1);
    const Scalar sq = std::sqrt(epsilon);
    const Scalar r_lo = Scalar(0.25) / sq, r_hi = Scalar(64) / sq;
    const Scalar r_eta = std::sqrt(r_lo * r_lo + (r_hi * r_hi - r_lo * r_lo) * unif(rng));
    const Scalar th_eta = Scalar(2) * Scalar(EIGEN_PI) * unif(rng);
    const Scalar rho_lo = std::ldexp(Scalar(1), -K);
    const Scalar rho = rho_lo + (Scalar(1) / Scalar(32) - rho_lo) * unif(rng);
    const Scalar th_d = Scalar(2) * Scalar(EIGEN_PI) * unif(rng);
    const Vec2<Scalar> eta(r_eta * std::cos(th_eta), r_eta * std::sin(th_eta));
    const Vec2<Scalar> d(rho * r_eta * std::cos(th_d), rho * r_eta * std::sin(th_d));
    return PhasePoint<Scalar>{eta + d, eta, mu, -1, epsilon};
}

// ---------------------------------------------------------------------------
// Angle-localized bilinear probe.

template <class Scalar>
struct BilinearProbeResult {
    Scalar max_ratio = 0;                 // max over trials of ‖T_k‖/(2^{k1}‖f_{k1}‖‖g_{k2}‖)
    std::vector<Scalar> trial_ratios;
    long support_pairs = 0;               // lattice pairs with nonvanishing kernel
};

namespace detail {

struct LatticeAnnulus {
    std::vector<Eigen::Vector2i> points;
};

inline LatticeAnnulus annulus_points(double lo, double hi) {
    LatticeAnnulus out;
    const int m = static_cast<int>(std::ceil(hi)) + 1;
    for (int y = -m; y <= m; ++y)
        for (int x = -m; x <= m; ++x) {
            const double r = std::hypot(double(x), double(y));
            if (r >= lo && r <= hi) out.points.emplace_back(x, y);
        }
    return out;
}

}  // namespace detail

/// Measure ‖T_k(f,g)‖_{L²} / (2^{k₁}‖f_{k₁}‖‖g_{k₂}‖) for the bilinear form
/// with unit symbol and kernel φ_k(|ξ|)φ_{k₁}(|ξ−η|)φ_{k₂}(|η|)φ_l(∠(ξ,η)),
/// over random shell-supported inputs.  Evaluated as a direct restricted
/// convolution on the integer lattice (the kernel is pointwise-exact; no
/// angular sector partition enters).  Requires |k−k₂| ≤ 2, l ≤ −2, shells
/// resolvable on an n² lattice.
template <class Scalar>
BilinearProbeResult<Scalar> angular_bilinear_probe(int k, int k1, int k2, int l, int trials, int n,
                                                   uint64_t seed, const CutoffProfile<Scalar>& phi = {}) {
    if (std::abs(k - k2) > 2) throw std::invalid_argument("angular_bilinear_probe: need |k-k2| <= 2");
    if (l > -2) throw std::invalid_argument("angular_bilinear_probe: need l <= -2");
    const double hi_eta = 1.5 * std::ldexp(1.0, k2);
    const double hi_xi = 1.5 * std::ldexp(1.0, k);
    if (std::max(hi_eta, hi_xi) > n / 2 - 1 || 0.625 * std::ldexp(1.0, k1) < 1.0) {
        const int needed = 2 * (static_cast<int>(std::max(hi_eta, hi_xi)) + 2);
        throw std::invalid_argument("angular_bilinear_probe: shells unresolvable; need n >= " +
                                    std::to_string(needed) + " and 2^{k1} >= 8/5");
    }

    auto eta_ann = detail::annulus_points(0.625 * std::ldexp(1.0, k2), 1.5 * std::ldexp(1.0, k2));
    auto d_ann = detail::annulus_points(0.625 * std::ldexp(1.0, k1), 1.5 * std::ldexp(1.0, k1));

    const Scalar ang_lo = Scalar(0.625) * std::ldexp(Scalar(1), l);
    const Scalar ang_hi = Scalar(1.5) * std::ldexp(Scalar(1), l);
    const Scalar tan_hi = std::tan(std::min(ang_hi, Scalar(1.5)));

    // index offsets for the dense T / f / g tables
    const int ext = static_cast<int>(std::ceil(hi_eta + 1.5 * std::ldexp(1.0, k1))) + 2;
    const int side = 2 * ext + 1;
    auto at = [&](int x, int y) { return (x + ext) * side + (y + ext); };

    std::mt19937_64 rng(seed);
    std::normal_distribution<Scalar> normal(0, 1);

    BilinearProbeResult<Scalar> out;
    std::vector<std::complex<Scalar>> fhat(static_cast<size_t>(side) * side),
        ghat(static_cast<size_t>(side) * side), T(static_cast<size_t>(side) * side);

    const Scalar quad = Scalar(1) / (Scalar(4) * Scalar(EIGEN_PI) * Scalar(EIGEN_PI));  // Δη²/(2π)²
    for (int trial = 0; trial < trials; ++trial) {
        std::fill(T.begin(), T.end(), std::complex<Scalar>(0));
        for (auto& pnt : eta_ann.points) ghat[at(pnt.x(), pnt.y())] = {normal(rng), normal(rng)};
        for (auto& pnt : d_ann.points) fhat[at(pnt.x(), pnt.y())] = {normal(rng), normal(rng)};

        long pairs = 0;
        for (const auto& eta : eta_ann.points) {
            const Scalar wg2 = phi.at(Scalar(eta.norm()), k2);
            if (wg2 == Scalar(0)) continue;
            const std::complex<Scalar> gv = wg2 * ghat[at(eta.x(), eta.y())];
            for (const auto& d : d_ann.points) {
                const int xx = eta.x() + d.x(), xy = eta.y() + d.y();
                // angle reject before any transcendental
                const Scalar cross = std::abs(Scalar(xx) * Scalar(eta.y()) - Scalar(xy) * Scalar(eta.x()));
                const Scalar dot = Scalar(xx) * Scalar(eta.x()) + Scalar(xy) * Scalar(eta.y());
                if (dot <= Scalar(0) || cross > dot * tan_hi) continue;
                const Scalar ang = std::atan2(cross, dot);
                if (ang < ang_lo || ang > ang_hi) continue;
                const Scalar wl = phi.at(ang, l);
                if (wl == Scalar(0)) continue;
                const Scalar wk = phi.at(std::hypot(Scalar(xx), Scalar(xy)), k);
                if (wk == Scalar(0)) continue;
                const Scalar w1 = phi.at(Scalar(d.norm()), k1);
                if (w1 == Scalar(0)) continue;
                T[at(xx, xy)] += quad * wk * w1 * wl * fhat[at(d.x(), d.y())] * gv;
                ++pairs;
            }
        }
        if (trial == 0) out.support_pairs = pairs;

        Scalar t2 = 0, f2 = 0, g2 = 0;
        for (const auto& c : T) t2 += std::norm(c);
        for (const auto& d : d_ann.points) {
            const Scalar w = phi.at(Scalar(d.norm()), k1);
            f2 += std::norm(w * fhat[at(d.x(), d.y())]);
        }
        for (const auto& e : eta_ann.points) {
            const Scalar w = phi.at(Scalar(e.norm()), k2);
            g2 += std::norm(w * ghat[at(e.x(), e.y())]);
        }
        // ‖T‖_{L²(dξ)} over ‖f_{k1}‖_{L²(dx)}‖g_{k2}‖_{L²(dx)} with Δξ = 1
        const Scalar denom = std::ldexp(Scalar(1), k1) * std::sqrt(f2 * quad) * std::sqrt(g2 * quad);
        const Scalar ratio = denom > Scalar(0) ? std::sqrt(t2) / denom : Scalar(0);
        out.trial_ratios.push_back(ratio);
        out.max_ratio = std::max(out.max_ratio, ratio);

        for (auto& pnt : eta_ann.points) ghat[at(pnt.x(), pnt.y())] = {0, 0};
        for (auto& pnt : d_ann.points) fhat[at(pnt.x(), pnt.y())] = {0, 0};
    }
    return out;
}

/// Sweep l and fit the gain exponent: log₂(max ratio) against l, over the
/// geometrically admissible l (nonempty kernel support).
template <class Scalar>
struct GainSweepResult {
    std::vector<int> l_values;
    std::vector<Scalar> ratios;       // max ratio per l (0 marks an empty kernel)
    std::vector<int> used_l;          // l entering the fit
    Scalar exponent = 0;              // fitted slope of log2(ratio) vs l
};

template <class Scalar>
GainSweepResult<Scalar> angular_gain_sweep(int k, int k1, int k2, const std::vector<int>& ls, int trials,
                                           int n, uint64_t seed, const CutoffProfile<Scalar>& phi = {}) {
    GainSweepResult<Scalar> out;
    for (int l : ls) {
        auto r = angular_bilinear_probe<Scalar>(k, k1, k2, l, trials, n, seed + static_cast<uint64_t>(100 + l), phi);
        out.l_values.push_back(l);
        out.ratios.push_back(r.max_ratio);
    }
    Scalar sx = 0, sy = 0, sxx = 0, sxy = 0;
    int m = 0;
    for (size_t i = 0; i < out.l_values.size(); ++i) {
        if (out.ratios[i] <= Scalar(0)) continue;
        const Scalar x = Scalar(out.l_values[i]);
        const Scalar y = std::log2(out.ratios[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        out.used_l.push_back(out.l_values[i]);
        ++m;
    }
    if (m >= 2) out.exponent = (Scalar(m) * sxy - sx * sy) / (Scalar(m) * sxx - sx * sx);
    return out;
}

}  // namespace bsq
