#pragma once

#include "bsq/cutoff.hpp"
#include "bsq/multiplier.hpp"

namespace bsq {

/// A frequency pair (ξ,η) with sign pair (μ,ν) ∈ {+1,−1}² and ε, the
/// pointwise evaluation site for quadratic phases and symbols.
template <class Scalar>
struct PhasePoint {
    Vec2<Scalar> xi;
    Vec2<Scalar> eta;
    int mu = +1;
    int nu = +1;
    Scalar epsilon = 0;

    Vec2<Scalar> diff() const { return xi - eta; }
};

/// Angle between two nonzero vectors, in [0, π], via the cross/dot pair
/// (stable near collinearity).
template <class Scalar>
Scalar angle_between(const Vec2<Scalar>& a, const Vec2<Scalar>& b) {
    const Scalar cross = a.x() * b.y() - a.y() * b.x();
    const Scalar dot = a.dot(b);
    return std::atan2(std::abs(cross), dot);
}

/// Φ^ε_{μ,ν}(ξ,η) = −Λ_ε(ξ) + μΛ_ε(ξ−η) + νΛ_ε(η).
template <class Scalar>
Scalar phase_direct(const PhasePoint<Scalar>& p) {
    return -lambda_eps(p.xi.norm(), p.epsilon) + Scalar(p.mu) * lambda_eps(p.diff().norm(), p.epsilon) +
           Scalar(p.nu) * lambda_eps(p.eta.norm(), p.epsilon);
}

/// The same phase in expanded form:
/// (|ξ|−μ|ξ−η|−ν|η|)[ε(|ξ|²+|ξ−η|²+|η|²−μν|ξ−η||η|+μ|ξ||ξ−η|+ν|ξ||η|)−1]
///   + 3μνε|ξ||ξ−η||η|.
template <class Scalar>
Scalar phase_explicit(const PhasePoint<Scalar>& p) {
    const Scalar a = p.xi.norm(), b = p.diff().norm(), c = p.eta.norm();
    const Scalar mu = Scalar(p.mu), nu = Scalar(p.nu), eps = p.epsilon;
    const Scalar bracket = eps * (a * a + b * b + c * c - mu * nu * b * c + mu * a * b + nu * a * c) - Scalar(1);
    return (a - mu * b - nu * c) * bracket + Scalar(3) * mu * nu * eps * a * b * c;
}

template <class Scalar>
bool factored_point_admissible(const PhasePoint<Scalar>& p) {
    if (p.xi.norm() == Scalar(0) || p.eta.norm() == Scalar(0)) return false;
    if (p.diff().norm() == Scalar(0)) return false;
    return angle_between(p.xi, p.eta) < Scalar(EIGEN_PI);
}

/// Reduced phase factor φ^ε_{μ,ν} for the two sign pairs the factorization
/// covers, (μ,ν) = (+,−) and (−,−).
template <class Scalar>
Scalar reduced_phi(const PhasePoint<Scalar>& p) {
    if (!(p.nu == -1 && (p.mu == +1 || p.mu == -1)))
        throw std::invalid_argument("reduced_phi: factored form covers only (+,-) and (-,-)");
    if (!factored_point_admissible(p))
        throw std::invalid_argument("reduced_phi: degenerate point (zero vector, xi=eta, or opposite directions)");
    const Scalar a = p.xi.norm(), b = p.diff().norm(), c = p.eta.norm();
    const Scalar eps = p.epsilon;
    const Scalar half_angle = angle_between(p.xi, p.eta) / Scalar(2);
    const Scalar cos2 = std::cos(half_angle) * std::cos(half_angle);
    if (p.mu == +1) {
        return Scalar(4) * cos2 * (eps * (a * a + c * c - a * c) - Scalar(1)) +
               eps * (Scalar(4) * cos2 - Scalar(3)) * b * (a + b + c);
    }
    return eps * (a * a + c * c - a * c) - Scalar(1) +
           eps * (Scalar(3) / (Scalar(4) * cos2) - Scalar(1)) * b * (a - b + c);
}

/// The factored phase: prefactor times the reduced factor.
template <class Scalar>
Scalar phase_factored(const PhasePoint<Scalar>& p) {
    const Scalar a = p.xi.norm(), b = p.diff().norm(), c = p.eta.norm();
    const Scalar phi = reduced_phi(p);
    if (p.mu == +1) return (a * c / (a + b + c)) * phi;
    return (a + b + c) * phi;
}

/// Σ_j φ_{≤j−7}(|ξ−η|)·φ_j(|η|): the paradifferential weight shared by both
/// quadratic symbols.  At most two j contribute; the loop window is exact.
template <class Scalar>
Scalar paraproduct_weight(Scalar d_norm, Scalar eta_norm, const CutoffProfile<Scalar>& phi = {}) {
    if (eta_norm <= Scalar(0)) return Scalar(0);
    const int j0 = static_cast<int>(std::floor(std::log2(eta_norm)));
    Scalar acc = 0;
    for (int j = j0 - 1; j <= j0 + 2; ++j) acc += phi.le(d_norm, j - 7) * phi.at(eta_norm, j);
    return acc;
}

/// s^ε_{μ,+}(ξ,η) = iε(μ·½·ξ·(ξ−η)/|ξ−η| + ¼|ξ|)·Σ_j φ_{≤j−7}(|ξ−η|)φ_j(|η|).
/// Purely imaginary; defined 0 at ξ = η (where the bilinear form never
/// evaluates it, all evolved fields having zero mean).
template <class Scalar>
std::complex<Scalar> symbol_s(const PhasePoint<Scalar>& p, const CutoffProfile<Scalar>& phi = {}) {
    if (p.nu != +1) throw std::invalid_argument("symbol_s: defined for nu = + only");
    const Vec2<Scalar> d = p.diff();
    const Scalar dn = d.norm();
    if (dn == Scalar(0)) return {0, 0};
    const Scalar w = paraproduct_weight(dn, p.eta.norm(), phi);
    if (w == Scalar(0)) return {0, 0};
    const Scalar radial = Scalar(p.mu) * Scalar(0.5) * p.xi.dot(d) / dn + Scalar(0.25) * p.xi.norm();
    return std::complex<Scalar>(0, p.epsilon * radial * w);
}

/// q^ε_{μ,ν}(ξ,η) = (iε/8)·ξ·(ν η/|η| − ξ/|ξ|)·φ_{≤5}(√ε|η|)·Σ_j φ_{≤j−7}φ_j.
template <class Scalar>
std::complex<Scalar> symbol_q(const PhasePoint<Scalar>& p, const CutoffProfile<Scalar>& phi = {}) {
    const Scalar xin = p.xi.norm(), etan = p.eta.norm();
    if (xin == Scalar(0) || etan == Scalar(0)) return {0, 0};
    const Scalar low = phi.le(std::sqrt(p.epsilon) * etan, 5);
    if (low == Scalar(0)) return {0, 0};
    const Scalar w = paraproduct_weight(p.diff().norm(), etan, phi);
    if (w == Scalar(0)) return {0, 0};
    const Scalar radial = Scalar(p.nu) * p.xi.dot(p.eta) / etan - xin;
    return std::complex<Scalar>(0, p.epsilon / Scalar(8) * radial * low * w);
}

/// q̃ = ⟨η⟩^{−N₀}⟨ξ⟩^{N₀} q.
template <class Scalar>
std::complex<Scalar> tilde_q(const PhasePoint<Scalar>& p, int N0, const CutoffProfile<Scalar>& phi = {}) {
    const Scalar bx = std::pow(Scalar(1) + p.xi.squaredNorm(), Scalar(N0) / Scalar(2));
    const Scalar be = std::pow(Scalar(1) + p.eta.squaredNorm(), Scalar(N0) / Scalar(2));
    return (bx / be) * symbol_q(p, phi);
}

/// Antisymmetrized weighted defect of s, the quantity the symmetric energy
/// estimate runs on: ⟨ξ⟩^{−N₀}⟨η⟩^{−N₀}(⟨ξ⟩^{2N₀}s_{μ,+}(ξ,η) − ⟨η⟩^{2N₀}s_{−μ,+}(η,ξ)).
template <class Scalar>
std::complex<Scalar> s_symmetrized_defect(const PhasePoint<Scalar>& p, int N0,
                                          const CutoffProfile<Scalar>& phi = {}) {
    PhasePoint<Scalar> swapped{p.eta, p.xi, -p.mu, +1, p.epsilon};
    PhasePoint<Scalar> here{p.xi, p.eta, p.mu, +1, p.epsilon};
    const Scalar wx = std::pow(Scalar(1) + p.xi.squaredNorm(), Scalar(N0));
    const Scalar we = std::pow(Scalar(1) + p.eta.squaredNorm(), Scalar(N0));
    const Scalar norm = std::sqrt(wx) * std::sqrt(we);
    return (wx * symbol_s(here, phi) - we * symbol_s(swapped, phi)) / norm;
}

/// Support box of q per the paradifferential arithmetic: √ε|η| ≤ 64 and
/// 31/32·|η| ≤ |ξ| ≤ 33/32·|η|.
template <class Scalar>
bool q_support_box(const PhasePoint<Scalar>& p) {
    const Scalar xin = p.xi.norm(), etan = p.eta.norm();
    return std::sqrt(p.epsilon) * etan <= Scalar(64) && Scalar(31) / Scalar(32) * etan <= xin &&
           xin <= Scalar(33) / Scalar(32) * etan;
}

}  // namespace bsq
