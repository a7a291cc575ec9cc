#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <stdexcept>

namespace bsq {

template <class Scalar>
using RealArray = Eigen::Array<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <class Scalar>
using ComplexArray = Eigen::Array<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>;

template <class Scalar>
using Vec2 = Eigen::Matrix<Scalar, 2, 1>;

/// Doubly periodic n×n lattice on [0,L)² with its dual frequency lattice
/// ξ ∈ (2π/L)·{−n/2,…,n/2−1}².  Coefficients are stored in FFT order:
/// index i ↦ wavenumber i for i < n/2, i−n otherwise.  The unmatched
/// Nyquist row/column (index n/2) is kept identically zero by every
/// construction routine so the lattice is symmetric under ξ ↦ −ξ.
template <class Scalar>
struct GridSpec {
    int n = 0;          // points per axis, even, ≥ 8
    Scalar length = 0;  // physical period L

    GridSpec() = default;
    GridSpec(int n_per_axis, Scalar domain_length) : n(n_per_axis), length(domain_length) {
        if (n < 8 || n % 2 != 0) throw std::invalid_argument("GridSpec: n must be even and >= 8");
        if (!(length > Scalar(0))) throw std::invalid_argument("GridSpec: length must be positive");
    }

    friend bool operator==(const GridSpec& a, const GridSpec& b) {
        return a.n == b.n && a.length == b.length;
    }
    friend bool operator!=(const GridSpec& a, const GridSpec& b) { return !(a == b); }

    /// Signed integer wavenumber of FFT index i.
    int index_to_k(int i) const { return i < n / 2 ? i : i - n; }
    /// FFT index of integer wavenumber k ∈ [−n/2, n/2).
    int k_to_index(int k) const { return k >= 0 ? k : k + n; }
    /// Index of the reflected mode −ξ (Nyquist maps to itself).
    int reflect(int i) const { return i == 0 ? 0 : n - i; }

    Scalar freq_unit() const { return Scalar(2) * Scalar(EIGEN_PI) / length; }
    Scalar xi1(int i, int) const { return freq_unit() * Scalar(index_to_k(i)); }
    Scalar xi2(int, int j) const { return freq_unit() * Scalar(index_to_k(j)); }
    Vec2<Scalar> xi(int i, int j) const { return Vec2<Scalar>(xi1(i, j), xi2(i, j)); }

    int nyquist_index() const { return n / 2; }
    /// Dealiasing rule for quadratic products: keep max(|k₁|,|k₂|) ≤ n/3.
    int dealias_kcut() const { return n / 3; }

    Scalar min_nonzero_freq() const { return freq_unit(); }
    Scalar max_freq() const { return freq_unit() * Scalar(n / 2 - 1) * std::sqrt(Scalar(2)); }

    /// Largest frequency surviving the dealias cutoff (corner of the kept square).
    Scalar max_dealiased_freq() const { return freq_unit() * Scalar(dealias_kcut()) * std::sqrt(Scalar(2)); }

    /// L² quadrature weight per mode under the (unnormalized fwd, 1/n² inv)
    /// transform convention: ‖f‖²_{L²} = w·Σ|f̂|² with w = (L/n²)².
    Scalar mode_weight() const {
        Scalar w = length / (Scalar(n) * Scalar(n));
        return w * w;
    }

    Scalar dx() const { return length / Scalar(n); }
    Scalar x1(int i) const { return dx() * Scalar(i); }
    Scalar x2(int j) const { return dx() * Scalar(j); }
};

/// |ξ| on the full lattice, FFT order.
template <class Scalar>
RealArray<Scalar> abs_xi_array(const GridSpec<Scalar>& g) {
    RealArray<Scalar> a(g.n, g.n);
    for (int j = 0; j < g.n; ++j)
        for (int i = 0; i < g.n; ++i) a(i, j) = g.xi(i, j).norm();
    return a;
}

template <class Scalar>
RealArray<Scalar> xi1_array(const GridSpec<Scalar>& g) {
    RealArray<Scalar> a(g.n, g.n);
    for (int j = 0; j < g.n; ++j)
        for (int i = 0; i < g.n; ++i) a(i, j) = g.xi1(i, j);
    return a;
}

template <class Scalar>
RealArray<Scalar> xi2_array(const GridSpec<Scalar>& g) {
    RealArray<Scalar> a(g.n, g.n);
    for (int j = 0; j < g.n; ++j)
        for (int i = 0; i < g.n; ++i) a(i, j) = g.xi2(i, j);
    return a;
}

}  // namespace bsq
