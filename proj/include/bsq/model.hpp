#pragma once

#include "bsq/operators.hpp"

namespace bsq {

/// Modeling parameters of the four-parameter Boussinesq family, the surface
/// tension measure τ and the long-wave parameter ε.  The family constraint
/// a+b+c+d = 1/3 − τ is exposed as a residual, not enforced: the strongly
/// dispersive case a=c=1, b=d=0 studied here has no admissible τ ≥ 0, so
/// callers treat a nonzero residual as a warning.
template <class Scalar>
struct AbcdParams {
    Scalar a = 0, b = 0, c = 0, d = 0;
    Scalar tau = 0;
    Scalar epsilon = 0;

    Scalar constraint_residual() const { return a + b + c + d - (Scalar(1) / Scalar(3) - tau); }
    bool satisfies_constraint(Scalar tol = Scalar(1e-12)) const {
        return std::abs(constraint_residual()) <= tol;
    }

    /// The strongly dispersive special case; τ set to 0 with the constraint
    /// knowingly violated (see constraint_residual()).
    static AbcdParams special_case(Scalar epsilon) {
        return AbcdParams{Scalar(1), Scalar(0), Scalar(1), Scalar(0), Scalar(0), epsilon};
    }
};

enum class Wellposedness { WellPosedGeneric, WellPosedExceptional, IllPosed };

/// Linear well-posedness classification: a≤0, c≤0, b≥0, d≥0, or a=c>0,
/// b≥0, d≥0.  The exceptional flag marks b=d=0 with a=c>0, the only
/// well-posed corner whose dispersion relation has nontrivial zeroes.
template <class Scalar>
Wellposedness linear_wellposedness(const AbcdParams<Scalar>& p) {
    const bool damping_ok = p.b >= Scalar(0) && p.d >= Scalar(0);
    if (!damping_ok) return Wellposedness::IllPosed;
    if (p.a <= Scalar(0) && p.c <= Scalar(0)) return Wellposedness::WellPosedGeneric;
    if (p.a == p.c && p.a > Scalar(0)) {
        if (p.b == Scalar(0) && p.d == Scalar(0)) return Wellposedness::WellPosedExceptional;
        return Wellposedness::WellPosedGeneric;
    }
    return Wellposedness::IllPosed;
}

/// λ±(ξ) = ±i|ξ|·√((1−εa|ξ|²)(1−εc|ξ|²) / ((1+εd|ξ|²)(1+εb|ξ|²))).
/// Purely imaginary exactly when the radicand is nonnegative; a negative
/// radicand produces the real (unstable) pair through the principal branch.
template <class Scalar>
std::pair<std::complex<Scalar>, std::complex<Scalar>> dispersion_eigenvalues(
    const AbcdParams<Scalar>& p, const Vec2<Scalar>& xi) {
    const Scalar r2 = xi.squaredNorm();
    const Scalar r = std::sqrt(r2);
    const std::complex<Scalar> radicand(((Scalar(1) - p.epsilon * p.a * r2) * (Scalar(1) - p.epsilon * p.c * r2)) /
                                            ((Scalar(1) + p.epsilon * p.d * r2) * (Scalar(1) + p.epsilon * p.b * r2)),
                                        Scalar(0));
    const std::complex<Scalar> lam = std::complex<Scalar>(0, r) * std::sqrt(radicand);
    return {lam, -lam};
}

/// Wave elevation ζ and horizontal velocity measure v at a time instant.
/// Both have zero mean; v is curl-free.
template <class Scalar>
struct State {
    SpectralScalar<Scalar> zeta;
    SpectralVector2<Scalar> v;
    Scalar time = 0;

    State() = default;
    explicit State(const GridSpec<Scalar>& g) : zeta(g), v(g) {}
    State(SpectralScalar<Scalar> z, SpectralVector2<Scalar> vel, Scalar t = 0)
        : zeta(std::move(z)), v(std::move(vel)), time(t) {
        if (zeta.grid != v.grid()) throw std::invalid_argument("State: zeta and v on different grids");
    }

    const GridSpec<Scalar>& grid() const { return zeta.grid; }

    Scalar mean_defect() const { return std::max({mean_residual(zeta), mean_residual(v.x), mean_residual(v.y)}); }
    Scalar curl_defect() const { return curl_residual(v); }
    bool is_admissible(Scalar curl_tol = Scalar(1e-8)) const {
        return mean_defect() == Scalar(0) && curl_defect() <= curl_tol;
    }
};

enum class Terms { full, linear_only };

/// Time derivative of the special strongly dispersive system:
///   ∂_tζ = −(1+εΔ)∇·v − ε∇·(ζv),   ∂_tv = −(1+εΔ)∇ζ − (ε/2)∇|v|².
/// Both right-hand sides are exact derivatives, so zero mean is preserved
/// exactly and the velocity derivative is a gradient (curl-free).
template <class Scalar>
State<Scalar> rhs_special(Scalar epsilon, const State<Scalar>& s, Terms terms = Terms::full) {
    const auto& g = s.grid();
    auto disp = symbol_grid(g, sym_one_plus_eps_laplacian<Scalar>(epsilon));

    SpectralScalar<Scalar> dzeta = Scalar(-1) * apply_symbol_array(divergence(s.v), disp);
    SpectralVector2<Scalar> gz = grad(s.zeta);
    SpectralVector2<Scalar> dv(Scalar(-1) * apply_symbol_array(gz.x, disp),
                               Scalar(-1) * apply_symbol_array(gz.y, disp));

    if (terms == Terms::full) {
        dzeta -= epsilon * divergence(product(s.zeta, s.v));
        SpectralScalar<Scalar> speed2 = product(s.v.x, s.v.x) + product(s.v.y, s.v.y);
        SpectralVector2<Scalar> gs = grad(speed2);
        dv -= (epsilon / Scalar(2)) * gs;
    }
    State<Scalar> out(std::move(dzeta), std::move(dv), s.time);
    out.zeta.zero_mean();
    out.v.x.zero_mean();
    out.v.y.zero_mean();
    return out;
}

/// Time derivative of the general family, with the implicit (1−εbΔ), (1−εdΔ)
/// factors inverted spectrally (on the lattice the operator is 1+εb|ξ|²).
/// Requires b,d ≥ 0 so the inverse symbol never vanishes.
template <class Scalar>
State<Scalar> rhs_abcd(const AbcdParams<Scalar>& p, const State<Scalar>& s, Terms terms = Terms::full) {
    if (p.b < Scalar(0) || p.d < Scalar(0))
        throw std::invalid_argument("rhs_abcd: b and d must be nonnegative (implicit operator must stay invertible)");
    const auto& g = s.grid();
    const Scalar eps = p.epsilon;

    auto mass_sym = symbol_grid(g, [&](Scalar x1, Scalar x2) {
        const Scalar r2 = x1 * x1 + x2 * x2;
        return std::complex<Scalar>((Scalar(1) - eps * p.a * r2) / (Scalar(1) + eps * p.b * r2), 0);
    });
    auto mom_sym = symbol_grid(g, [&](Scalar x1, Scalar x2) {
        const Scalar r2 = x1 * x1 + x2 * x2;
        return std::complex<Scalar>((Scalar(1) - eps * p.c * r2) / (Scalar(1) + eps * p.d * r2), 0);
    });
    auto mass_inv = symbol_grid(g, [&](Scalar x1, Scalar x2) {
        const Scalar r2 = x1 * x1 + x2 * x2;
        return std::complex<Scalar>(Scalar(1) / (Scalar(1) + eps * p.b * r2), 0);
    });
    auto mom_inv = symbol_grid(g, [&](Scalar x1, Scalar x2) {
        const Scalar r2 = x1 * x1 + x2 * x2;
        return std::complex<Scalar>(Scalar(1) / (Scalar(1) + eps * p.d * r2), 0);
    });

    SpectralScalar<Scalar> dzeta = Scalar(-1) * apply_symbol_array(divergence(s.v), mass_sym);
    SpectralVector2<Scalar> gz = grad(s.zeta);
    SpectralVector2<Scalar> dv(Scalar(-1) * apply_symbol_array(gz.x, mom_sym),
                               Scalar(-1) * apply_symbol_array(gz.y, mom_sym));

    if (terms == Terms::full) {
        dzeta -= eps * apply_symbol_array(divergence(product(s.zeta, s.v)), mass_inv);
        SpectralScalar<Scalar> speed2 = product(s.v.x, s.v.x) + product(s.v.y, s.v.y);
        SpectralVector2<Scalar> gs = grad(speed2);
        dv.x -= (eps / Scalar(2)) * apply_symbol_array(gs.x, mom_inv);
        dv.y -= (eps / Scalar(2)) * apply_symbol_array(gs.y, mom_inv);
    }
    State<Scalar> out(std::move(dzeta), std::move(dv), s.time);
    out.zeta.zero_mean();
    out.v.x.zero_mean();
    out.v.y.zero_mean();
    return out;
}

}  // namespace bsq
