#pragma once

#include <random>

#include "bsq/model.hpp"

namespace bsq {

/// Seeded random band-limited initial data: random phases on the annulus
/// 1 ≤ |ξ| ≤ 4, velocity curl-free by construction (longitudinal), scaled so
/// ‖ζ‖²_{H^{N₀}} + ‖v‖²_{H^{N₀}} = 1.  The RNG stream walks the integer
/// frequency box [−M,M]² of the annulus, which depends on L but not on the
/// grid size, so the data is resolution-independent by construction.
template <class Scalar>
State<Scalar> annulus_initial_data(const GridSpec<Scalar>& g, uint64_t seed, int N0,
                                   Scalar r_lo = Scalar(1), Scalar r_hi = Scalar(4)) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<Scalar> normal(0, 1);
    const Scalar unit = g.freq_unit();
    const int M = static_cast<int>(std::ceil(r_hi / unit));
    if (M >= g.n / 2)
        throw std::invalid_argument("annulus_initial_data: grid cannot resolve the data annulus");

    SpectralScalar<Scalar> zeta(g);
    SpectralScalar<Scalar> q(g);  // longitudinal stream: v = −|D|⁻¹∇q
    for (int m2 = -M; m2 <= M; ++m2) {
        for (int m1 = -M; m1 <= M; ++m1) {
            const Scalar zr = normal(rng), zi = normal(rng);
            const Scalar qr = normal(rng), qi = normal(rng);
            if (m1 == 0 && m2 == 0) continue;
            const Scalar r = unit * std::hypot(Scalar(m1), Scalar(m2));
            if (r < r_lo || r > r_hi) continue;
            const int i = g.k_to_index(m1), j = g.k_to_index(m2);
            zeta.coeffs(i, j) += std::complex<Scalar>(zr, zi) / Scalar(2);
            zeta.coeffs(g.reflect(i), g.reflect(j)) += std::complex<Scalar>(zr, -zi) / Scalar(2);
            q.coeffs(i, j) += std::complex<Scalar>(qr, qi) / Scalar(2);
            q.coeffs(g.reflect(i), g.reflect(j)) += std::complex<Scalar>(qr, -qi) / Scalar(2);
        }
    }
    zeta.zero_nyquist();
    q.zero_nyquist();
    SpectralVector2<Scalar> v = Scalar(-1) * grad(apply_symbol(q, sym_inv_abs<Scalar>()));

    const Scalar nz = sobolev_norm(zeta, Scalar(N0)), nv = sobolev_norm(v, Scalar(N0));
    const Scalar scale = Scalar(1) / std::sqrt(nz * nz + nv * nv);
    zeta.coeffs *= scale;
    v.x.coeffs *= scale;
    v.y.coeffs *= scale;
    return State<Scalar>(std::move(zeta), std::move(v), Scalar(0));
}

}  // namespace bsq
