#pragma once

#include "bsq/multiplier.hpp"
#include "bsq/transform.hpp"

namespace bsq {

template <class Scalar>
SpectralVector2<Scalar> grad(const SpectralScalar<Scalar>& f) {
    const auto& g = f.grid;
    SpectralVector2<Scalar> out(g);
    for (int j = 0; j < g.n; ++j)
        for (int i = 0; i < g.n; ++i) {
            const std::complex<Scalar> c = f.coeffs(i, j);
            out.x.coeffs(i, j) = std::complex<Scalar>(0, g.xi1(i, j)) * c;
            out.y.coeffs(i, j) = std::complex<Scalar>(0, g.xi2(i, j)) * c;
        }
    out.x.zero_nyquist();
    out.y.zero_nyquist();
    return out;
}

template <class Scalar>
SpectralScalar<Scalar> divergence(const SpectralVector2<Scalar>& v) {
    const auto& g = v.grid();
    SpectralScalar<Scalar> out(g);
    for (int j = 0; j < g.n; ++j)
        for (int i = 0; i < g.n; ++i)
            out.coeffs(i, j) = std::complex<Scalar>(0, g.xi1(i, j)) * v.x.coeffs(i, j) +
                               std::complex<Scalar>(0, g.xi2(i, j)) * v.y.coeffs(i, j);
    out.zero_nyquist();
    return out;
}

template <class Scalar>
SpectralScalar<Scalar> laplacian(const SpectralScalar<Scalar>& f) {
    return apply_symbol(f, [](Scalar x1, Scalar x2) {
        return std::complex<Scalar>(-(x1 * x1 + x2 * x2), 0);
    });
}

/// ∂₁v² − ∂₂v¹, the scalar curl.
template <class Scalar>
SpectralScalar<Scalar> curl(const SpectralVector2<Scalar>& v) {
    const auto& g = v.grid();
    SpectralScalar<Scalar> out(g);
    for (int j = 0; j < g.n; ++j)
        for (int i = 0; i < g.n; ++i)
            out.coeffs(i, j) = std::complex<Scalar>(0, g.xi1(i, j)) * v.y.coeffs(i, j) -
                               std::complex<Scalar>(0, g.xi2(i, j)) * v.x.coeffs(i, j);
    out.zero_nyquist();
    return out;
}

/// Gradient-part extraction ∇Δ⁻¹(∇·v): v̂ ↦ ξ(ξ·v̂)/|ξ|², zero mode untouched
/// at 0.  Idempotent; output curl vanishes identically on the lattice.
template <class Scalar>
SpectralVector2<Scalar> curl_free_project(const SpectralVector2<Scalar>& v) {
    const auto& g = v.grid();
    SpectralVector2<Scalar> out(g);
    for (int j = 0; j < g.n; ++j)
        for (int i = 0; i < g.n; ++i) {
            const Scalar x1 = g.xi1(i, j), x2 = g.xi2(i, j);
            const Scalar r2 = x1 * x1 + x2 * x2;
            if (r2 == Scalar(0)) continue;
            const std::complex<Scalar> proj = (x1 * v.x.coeffs(i, j) + x2 * v.y.coeffs(i, j)) / r2;
            out.x.coeffs(i, j) = x1 * proj;
            out.y.coeffs(i, j) = x2 * proj;
        }
    out.x.zero_nyquist();
    out.y.zero_nyquist();
    return out;
}

/// Zero all modes with max(|k₁|,|k₂|) above the 2/3 cutoff of the lattice
/// extent.  Applied after every pointwise product; keeps quadratic
/// nonlinearities alias-free on the kept band.
template <class Scalar>
SpectralScalar<Scalar> dealias(SpectralScalar<Scalar> f) {
    const auto& g = f.grid;
    const int kcut = g.dealias_kcut();
    for (int j = 0; j < g.n; ++j) {
        const int kj = std::abs(g.index_to_k(j));
        for (int i = 0; i < g.n; ++i) {
            if (std::max(std::abs(g.index_to_k(i)), kj) > kcut) f.coeffs(i, j) = std::complex<Scalar>(0);
        }
    }
    return f;
}

template <class Scalar>
SpectralVector2<Scalar> dealias(SpectralVector2<Scalar> v) {
    return SpectralVector2<Scalar>(dealias(std::move(v.x)), dealias(std::move(v.y)));
}

/// ‖f‖_{H^s} = (Σ ⟨ξ⟩^{2s}|f̂|²·w)^{1/2}; s = 0 is the grid L² norm (Parseval).
template <class Scalar>
Scalar sobolev_norm(const SpectralScalar<Scalar>& f, Scalar s) {
    const auto& g = f.grid;
    Scalar acc = 0;
    for (int j = 0; j < g.n; ++j)
        for (int i = 0; i < g.n; ++i) {
            const Scalar x1 = g.xi1(i, j), x2 = g.xi2(i, j);
            const Scalar w = std::pow(Scalar(1) + x1 * x1 + x2 * x2, s);
            acc += w * std::norm(f.coeffs(i, j));
        }
    return std::sqrt(acc * g.mode_weight());
}

template <class Scalar>
Scalar sobolev_norm(const SpectralVector2<Scalar>& v, Scalar s) {
    const Scalar a = sobolev_norm(v.x, s), b = sobolev_norm(v.y, s);
    return std::sqrt(a * a + b * b);
}

template <class Scalar>
Scalar l2_norm(const SpectralScalar<Scalar>& f) {
    return std::sqrt(f.coeffs.abs2().sum() * f.grid.mode_weight());
}

template <class Scalar>
Scalar l2_norm(const SpectralVector2<Scalar>& v) {
    const Scalar a = l2_norm(v.x), b = l2_norm(v.y);
    return std::sqrt(a * a + b * b);
}

/// sup-norm of the physical-space field (modulus for complex fields).
template <class Scalar>
Scalar linf_norm(const SpectralScalar<Scalar>& f) {
    return to_physical(f).abs().maxCoeff();
}

template <class Scalar>
Scalar mean_residual(const SpectralScalar<Scalar>& f) {
    return std::abs(f.coeffs(0, 0));
}

/// ‖∂₁v²−∂₂v¹‖_{L²} relative to ‖v‖_{L²} (0 for v = 0).
template <class Scalar>
Scalar curl_residual(const SpectralVector2<Scalar>& v) {
    const Scalar nv = l2_norm(v);
    if (nv == Scalar(0)) return Scalar(0);
    return l2_norm(curl(v)) / nv;
}

/// Pointwise product of two spectral fields, dealiased.
template <class Scalar>
SpectralScalar<Scalar> product(const SpectralScalar<Scalar>& a, const SpectralScalar<Scalar>& b) {
    SpectralScalar<Scalar>::require_same_grid(a, b);
    ComplexArray<Scalar> pa = to_physical(a), pb = to_physical(b);
    return dealias(from_physical(a.grid, ComplexArray<Scalar>(pa * pb)));
}

template <class Scalar>
SpectralVector2<Scalar> product(const SpectralScalar<Scalar>& a, const SpectralVector2<Scalar>& b) {
    return SpectralVector2<Scalar>(product(a, b.x), product(a, b.y));
}

}  // namespace bsq
