#pragma once

#include <unsupported/Eigen/FFT>

#include "bsq/field.hpp"

namespace bsq {

/// 2D discrete Fourier transforms built from 1D passes.  Convention:
/// forward carries no factor, inverse carries 1/n per axis, so
/// inverse(forward(f)) = f and a constant c maps to coeffs(0,0) = c·n².
///
/// A provider instance is not safe for concurrent calls; use one per
/// worker thread (see transform_provider()).  Distinct output buffers from
/// distinct instances are fine.
template <class Scalar>
class TransformProvider {
  public:
    using Cplx = std::complex<Scalar>;
    using CMat = Eigen::Matrix<Cplx, Eigen::Dynamic, Eigen::Dynamic>;

    ComplexArray<Scalar> forward(const ComplexArray<Scalar>& in) { return pass(in, /*inverse=*/false); }
    ComplexArray<Scalar> inverse(const ComplexArray<Scalar>& in) { return pass(in, /*inverse=*/true); }

  private:
    ComplexArray<Scalar> pass(const ComplexArray<Scalar>& in, bool inverse) {
        const int n = static_cast<int>(in.rows());
        CMat work = in.matrix();
        Eigen::Matrix<Cplx, Eigen::Dynamic, 1> col(n), out(n);
        for (int j = 0; j < n; ++j) {
            col = work.col(j);
            if (inverse)
                fft_.inv(out, col);
            else
                fft_.fwd(out, col);
            work.col(j) = out;
        }
        for (int i = 0; i < n; ++i) {
            col = work.row(i).transpose();
            if (inverse)
                fft_.inv(out, col);
            else
                fft_.fwd(out, col);
            work.row(i) = out.transpose();
        }
        return work.array();
    }

    Eigen::FFT<Scalar> fft_;
};

/// One provider per thread; reentrant across threads by construction.
template <class Scalar>
TransformProvider<Scalar>& transform_provider() {
    static thread_local TransformProvider<Scalar> provider;
    return provider;
}

/// Real grid samples → spectral coefficients.  Nyquist modes are zeroed on
/// construction so the ξ ↦ −ξ symmetry is exact.
template <class Scalar>
SpectralScalar<Scalar> forward_transform(const GridSpec<Scalar>& g, const RealArray<Scalar>& values) {
    if (values.rows() != g.n || values.cols() != g.n)
        throw std::invalid_argument("forward_transform: array dimensions do not match grid");
    ComplexArray<Scalar> lifted = values.template cast<std::complex<Scalar>>();
    return SpectralScalar<Scalar>(g, transform_provider<Scalar>().forward(lifted));
}

/// Spectral coefficients → real grid samples (imaginary part discarded;
/// it is roundoff for Hermitian input).
template <class Scalar>
RealArray<Scalar> inverse_transform(const SpectralScalar<Scalar>& f) {
    return transform_provider<Scalar>().inverse(f.coeffs).real();
}

/// Complex-valued physical samples of a (not necessarily Hermitian) field.
template <class Scalar>
ComplexArray<Scalar> to_physical(const SpectralScalar<Scalar>& f) {
    return transform_provider<Scalar>().inverse(f.coeffs);
}

template <class Scalar>
SpectralScalar<Scalar> from_physical(const GridSpec<Scalar>& g, const ComplexArray<Scalar>& values) {
    if (values.rows() != g.n || values.cols() != g.n)
        throw std::invalid_argument("from_physical: array dimensions do not match grid");
    return SpectralScalar<Scalar>(g, transform_provider<Scalar>().forward(values));
}

}  // namespace bsq
