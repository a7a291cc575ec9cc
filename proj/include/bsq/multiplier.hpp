#pragma once

#include <functional>

#include "bsq/field.hpp"

namespace bsq {

/// A Fourier multiplier m(D): pointwise symbol on the dual lattice, with an
/// optional declared support predicate (used by tests to assert exact
/// vanishing).  Singular symbols define their value at the singularity to
/// be 0; every evolved field here has zero mean, so |ξ|⁻¹-type symbols are
/// only ever applied away from the modes they cannot see.
template <class Scalar>
struct Multiplier {
    using Cplx = std::complex<Scalar>;
    std::function<Cplx(Scalar, Scalar)> symbol;
    std::function<bool(Scalar, Scalar)> support;  // optional; empty means "everywhere"

    Cplx operator()(Scalar xi1, Scalar xi2) const { return symbol(xi1, xi2); }
};

/// Evaluate a symbol callable on the whole lattice (FFT order).
template <class Scalar, class F>
ComplexArray<Scalar> symbol_grid(const GridSpec<Scalar>& g, F&& symbol) {
    ComplexArray<Scalar> a(g.n, g.n);
    for (int j = 0; j < g.n; ++j)
        for (int i = 0; i < g.n; ++i) a(i, j) = symbol(g.xi1(i, j), g.xi2(i, j));
    return a;
}

/// coeffs_out(ξ) = m(ξ)·coeffs_in(ξ).
template <class Scalar>
SpectralScalar<Scalar> apply_multiplier(const Multiplier<Scalar>& m, const SpectralScalar<Scalar>& f) {
    return SpectralScalar<Scalar>(f.grid, symbol_grid(f.grid, m.symbol) * f.coeffs);
}

/// Same with an arbitrary callable symbol (hot paths precompute symbol_grid
/// once and reuse apply_symbol_array).
template <class Scalar, class F>
SpectralScalar<Scalar> apply_symbol(const SpectralScalar<Scalar>& f, F&& symbol) {
    return SpectralScalar<Scalar>(f.grid, symbol_grid(f.grid, symbol) * f.coeffs);
}

template <class Scalar>
SpectralScalar<Scalar> apply_symbol_array(const SpectralScalar<Scalar>& f, const ComplexArray<Scalar>& m) {
    return SpectralScalar<Scalar>(f.grid, m * f.coeffs);
}

template <class Scalar, class F>
SpectralVector2<Scalar> apply_symbol(const SpectralVector2<Scalar>& v, F&& symbol) {
    ComplexArray<Scalar> m = symbol_grid(v.grid(), symbol);
    return SpectralVector2<Scalar>(apply_symbol_array(v.x, m), apply_symbol_array(v.y, m));
}

// ---------------------------------------------------------------------------
// Standard symbols.

/// Λ_ε(ξ) = (1−ε|ξ|²)|ξ| = |ξ| − ε|ξ|³, the strongly dispersive branch.
template <class Scalar>
Scalar lambda_eps(Scalar r, Scalar epsilon) {
    return r - epsilon * r * r * r;
}

template <class Scalar>
Scalar lambda_eps(const Vec2<Scalar>& xi, Scalar epsilon) {
    return lambda_eps(xi.norm(), epsilon);
}

template <class Scalar>
auto sym_abs() {
    return [](Scalar x1, Scalar x2) { return std::complex<Scalar>(std::hypot(x1, x2), 0); };
}

/// |ξ|⁻¹ with value 0 at ξ = 0.
template <class Scalar>
auto sym_inv_abs() {
    return [](Scalar x1, Scalar x2) {
        Scalar r = std::hypot(x1, x2);
        return std::complex<Scalar>(r > Scalar(0) ? Scalar(1) / r : Scalar(0), 0);
    };
}

template <class Scalar>
auto sym_lambda_eps(Scalar epsilon) {
    return [epsilon](Scalar x1, Scalar x2) {
        return std::complex<Scalar>(lambda_eps(std::hypot(x1, x2), epsilon), 0);
    };
}

/// ⟨ξ⟩^s = (1+|ξ|²)^{s/2}.
template <class Scalar>
auto sym_bracket_pow(Scalar s) {
    return [s](Scalar x1, Scalar x2) {
        return std::complex<Scalar>(std::pow(Scalar(1) + x1 * x1 + x2 * x2, s / Scalar(2)), 0);
    };
}

/// e^{i t Λ_ε(ξ)} (unimodular; t < 0 gives the profile direction).
template <class Scalar>
auto sym_exp_i_lambda(Scalar t, Scalar epsilon) {
    return [t, epsilon](Scalar x1, Scalar x2) {
        Scalar phase = t * lambda_eps(std::hypot(x1, x2), epsilon);
        return std::complex<Scalar>(std::cos(phase), std::sin(phase));
    };
}

/// Δ⁻¹ = −|ξ|⁻², value 0 at ξ = 0.
template <class Scalar>
auto sym_inv_laplacian() {
    return [](Scalar x1, Scalar x2) {
        Scalar r2 = x1 * x1 + x2 * x2;
        return std::complex<Scalar>(r2 > Scalar(0) ? Scalar(-1) / r2 : Scalar(0), 0);
    };
}

/// (1+εΔ) ↦ 1 − ε|ξ|².
template <class Scalar>
auto sym_one_plus_eps_laplacian(Scalar epsilon) {
    return [epsilon](Scalar x1, Scalar x2) {
        return std::complex<Scalar>(Scalar(1) - epsilon * (x1 * x1 + x2 * x2), 0);
    };
}

}  // namespace bsq
