#pragma once

#include "bsq/grid.hpp"

namespace bsq {

/// Fourier coefficients of a scalar field on the dual lattice.  Real-valued
/// fields carry Hermitian symmetry coeffs(−ξ) = conj(coeffs(ξ)); the
/// symmetrized complex unknown V is stored in the same container without it.
template <class Scalar>
struct SpectralScalar {
    GridSpec<Scalar> grid;
    ComplexArray<Scalar> coeffs;

    SpectralScalar() = default;
    explicit SpectralScalar(const GridSpec<Scalar>& g)
        : grid(g), coeffs(ComplexArray<Scalar>::Zero(g.n, g.n)) {}
    SpectralScalar(const GridSpec<Scalar>& g, ComplexArray<Scalar> c) : grid(g), coeffs(std::move(c)) {
        if (coeffs.rows() != g.n || coeffs.cols() != g.n)
            throw std::invalid_argument("SpectralScalar: coefficient array does not match grid");
        zero_nyquist();
    }

    void zero_nyquist() {
        const int ny = grid.nyquist_index();
        coeffs.row(ny).setZero();
        coeffs.col(ny).setZero();
    }
    void zero_mean() { coeffs(0, 0) = std::complex<Scalar>(0); }

    friend SpectralScalar operator+(const SpectralScalar& a, const SpectralScalar& b) {
        require_same_grid(a, b);
        return SpectralScalar(a.grid, a.coeffs + b.coeffs);
    }
    friend SpectralScalar operator-(const SpectralScalar& a, const SpectralScalar& b) {
        require_same_grid(a, b);
        return SpectralScalar(a.grid, a.coeffs - b.coeffs);
    }
    friend SpectralScalar operator*(std::complex<Scalar> s, const SpectralScalar& f) {
        return SpectralScalar(f.grid, s * f.coeffs);
    }
    friend SpectralScalar operator*(Scalar s, const SpectralScalar& f) {
        return SpectralScalar(f.grid, s * f.coeffs);
    }
    SpectralScalar& operator+=(const SpectralScalar& b) {
        require_same_grid(*this, b);
        coeffs += b.coeffs;
        return *this;
    }
    SpectralScalar& operator-=(const SpectralScalar& b) {
        require_same_grid(*this, b);
        coeffs -= b.coeffs;
        return *this;
    }

    static void require_same_grid(const SpectralScalar& a, const SpectralScalar& b) {
        if (a.grid != b.grid) throw std::invalid_argument("SpectralScalar: grid mismatch");
    }
};

/// Two-component field (velocity measure, good unknown) on a shared grid.
template <class Scalar>
struct SpectralVector2 {
    SpectralScalar<Scalar> x;
    SpectralScalar<Scalar> y;

    SpectralVector2() = default;
    explicit SpectralVector2(const GridSpec<Scalar>& g) : x(g), y(g) {}
    SpectralVector2(SpectralScalar<Scalar> cx, SpectralScalar<Scalar> cy)
        : x(std::move(cx)), y(std::move(cy)) {
        if (x.grid != y.grid) throw std::invalid_argument("SpectralVector2: components on different grids");
    }

    const GridSpec<Scalar>& grid() const { return x.grid; }

    friend SpectralVector2 operator+(const SpectralVector2& a, const SpectralVector2& b) {
        return SpectralVector2(a.x + b.x, a.y + b.y);
    }
    friend SpectralVector2 operator-(const SpectralVector2& a, const SpectralVector2& b) {
        return SpectralVector2(a.x - b.x, a.y - b.y);
    }
    friend SpectralVector2 operator*(Scalar s, const SpectralVector2& v) {
        return SpectralVector2(s * v.x, s * v.y);
    }
    friend SpectralVector2 operator*(std::complex<Scalar> s, const SpectralVector2& v) {
        return SpectralVector2(s * v.x, s * v.y);
    }
    SpectralVector2& operator+=(const SpectralVector2& b) {
        x += b.x;
        y += b.y;
        return *this;
    }
    SpectralVector2& operator-=(const SpectralVector2& b) {
        x -= b.x;
        y -= b.y;
        return *this;
    }
};

/// max |coeffs(−ξ) − conj(coeffs(ξ))| over matched modes.
template <class Scalar>
Scalar hermitian_residual(const SpectralScalar<Scalar>& f) {
    const auto& g = f.grid;
    Scalar r = 0;
    for (int j = 0; j < g.n; ++j) {
        for (int i = 0; i < g.n; ++i) {
            if (i == g.nyquist_index() || j == g.nyquist_index()) continue;
            const std::complex<Scalar> d =
                f.coeffs(g.reflect(i), g.reflect(j)) - std::conj(f.coeffs(i, j));
            r = std::max(r, std::abs(d));
        }
    }
    return r;
}

/// Project onto the Hermitian (real-field) part: ½(f̂(ξ) + conj(f̂(−ξ))).
template <class Scalar>
SpectralScalar<Scalar> hermitian_part(const SpectralScalar<Scalar>& f) {
    const auto& g = f.grid;
    SpectralScalar<Scalar> out(g);
    for (int j = 0; j < g.n; ++j)
        for (int i = 0; i < g.n; ++i)
            out.coeffs(i, j) =
                Scalar(0.5) * (f.coeffs(i, j) + std::conj(f.coeffs(g.reflect(i), g.reflect(j))));
    out.zero_nyquist();
    return out;
}

/// Anti-Hermitian part divided by i: the real field q with f = p + i·q.
template <class Scalar>
SpectralScalar<Scalar> antihermitian_part_over_i(const SpectralScalar<Scalar>& f) {
    const auto& g = f.grid;
    SpectralScalar<Scalar> out(g);
    const std::complex<Scalar> half_over_i(0, Scalar(-0.5));
    for (int j = 0; j < g.n; ++j)
        for (int i = 0; i < g.n; ++i)
            out.coeffs(i, j) =
                half_over_i * (f.coeffs(i, j) - std::conj(f.coeffs(g.reflect(i), g.reflect(j))));
    out.zero_nyquist();
    return out;
}

/// Field with coefficients conj(f̂(−ξ)); for spatial fields this is the
/// pointwise complex conjugate (V ↦ V⁻).
template <class Scalar>
SpectralScalar<Scalar> conjugate_field(const SpectralScalar<Scalar>& f) {
    const auto& g = f.grid;
    SpectralScalar<Scalar> out(g);
    for (int j = 0; j < g.n; ++j)
        for (int i = 0; i < g.n; ++i)
            out.coeffs(i, j) = std::conj(f.coeffs(g.reflect(i), g.reflect(j)));
    out.zero_nyquist();
    return out;
}

}  // namespace bsq
