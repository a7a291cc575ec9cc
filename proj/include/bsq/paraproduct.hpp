#pragma once

#include <vector>

#include "bsq/cutoff.hpp"
#include "bsq/operators.hpp"

namespace bsq {

/// Littlewood–Paley projections as multiplier applications of the shared
/// cutoff profile, radial in |ξ|.
template <class Scalar>
SpectralScalar<Scalar> project_at(const SpectralScalar<Scalar>& f, int k,
                                  const CutoffProfile<Scalar>& phi = {}) {
    return apply_symbol(f, [&phi, k](Scalar x1, Scalar x2) {
        return std::complex<Scalar>(phi.at(std::hypot(x1, x2), k), 0);
    });
}

template <class Scalar>
SpectralScalar<Scalar> project_le(const SpectralScalar<Scalar>& f, int k,
                                  const CutoffProfile<Scalar>& phi = {}) {
    return apply_symbol(f, [&phi, k](Scalar x1, Scalar x2) {
        return std::complex<Scalar>(phi.le(std::hypot(x1, x2), k), 0);
    });
}

template <class Scalar>
SpectralScalar<Scalar> project_ge(const SpectralScalar<Scalar>& f, int k,
                                  const CutoffProfile<Scalar>& phi = {}) {
    return apply_symbol(f, [&phi, k](Scalar x1, Scalar x2) {
        return std::complex<Scalar>(phi.ge(std::hypot(x1, x2), k), 0);
    });
}

template <class Scalar>
SpectralScalar<Scalar> project_interval(const SpectralScalar<Scalar>& f, int lo, int hi,
                                        const CutoffProfile<Scalar>& phi = {}) {
    return apply_symbol(f, [&phi, lo, hi](Scalar x1, Scalar x2) {
        return std::complex<Scalar>(phi.interval(std::hypot(x1, x2), lo, hi), 0);
    });
}

namespace detail {

/// Physical-space shell pieces P_k f for k in the grid's dyadic range, plus
/// the (constant) zero-mode piece.  Shared workhorse of both paraproduct
/// halves: at most #bands + O(1) transforms per call, no fast tree.  Bands
/// whose projected coefficients vanish identically (shell-limited inputs are
/// the common case) skip their transform.
template <class Scalar>
struct ShellPieces {
    DyadicRange range;
    std::complex<Scalar> mean_value;              // f̂(0,0)/n² as a physical constant
    std::vector<ComplexArray<Scalar>> physical;   // physical samples of P_k f; empty if the band is 0

    bool has(int k) const {
        return physical[static_cast<size_t>(k - range.k_min)].size() > 0;
    }
    const ComplexArray<Scalar>& piece(int k) const {
        return physical[static_cast<size_t>(k - range.k_min)];
    }

    static ShellPieces build(const SpectralScalar<Scalar>& f, const CutoffProfile<Scalar>& phi) {
        const auto& g = f.grid;
        ShellPieces out;
        out.range = DyadicRange::for_grid(g);
        out.mean_value = f.coeffs(0, 0) / (Scalar(g.n) * Scalar(g.n));
        out.physical.reserve(out.range.count());
        for (int k = out.range.k_min; k <= out.range.k_max; ++k) {
            SpectralScalar<Scalar> band = project_at(f, k, phi);
            if (band.coeffs.abs().maxCoeff() == Scalar(0))
                out.physical.emplace_back();
            else
                out.physical.push_back(to_physical(band));
        }
        return out;
    }
};

}  // namespace detail

/// Low-high paraproduct T_f g = Σ_j P_{≤j−7} f · P_j g, each product
/// dealiased (the sum is accumulated in physical space and dealiased once;
/// dealiasing is linear so this is the same thing).  Nontrivial output needs
/// the lattice to span more than seven octaves below the dealias cutoff.
template <class Scalar>
SpectralScalar<Scalar> paraproduct_T(const SpectralScalar<Scalar>& f, const SpectralScalar<Scalar>& g,
                                     const CutoffProfile<Scalar>& phi = {}) {
    SpectralScalar<Scalar>::require_same_grid(f, g);
    const auto& gr = f.grid;
    const DyadicRange range = DyadicRange::for_grid(gr);

    auto f_pieces = detail::ShellPieces<Scalar>::build(f, phi);
    auto g_pieces = detail::ShellPieces<Scalar>::build(g, phi);

    // Running prefix P_{≤j−7}f, advanced band by band.
    ComplexArray<Scalar> prefix = ComplexArray<Scalar>::Constant(gr.n, gr.n, f_pieces.mean_value);
    ComplexArray<Scalar> acc = ComplexArray<Scalar>::Zero(gr.n, gr.n);
    int included_up_to = range.k_min - 1;  // prefix currently holds P_{≤included_up_to}
    for (int j = range.k_min; j <= range.k_max; ++j) {
        const int want = j - 7;
        while (included_up_to < want && included_up_to < range.k_max) {
            ++included_up_to;
            if (f_pieces.has(included_up_to)) prefix += f_pieces.piece(included_up_to);
        }
        if (g_pieces.has(j)) acc += prefix * g_pieces.piece(j);
    }
    return dealias(from_physical(gr, acc));
}

/// Diagonal remainder R(f,g) = Σ_j P_j f · P_{[j−6,j+6]} g, dealiased.
template <class Scalar>
SpectralScalar<Scalar> remainder_R(const SpectralScalar<Scalar>& f, const SpectralScalar<Scalar>& g,
                                   const CutoffProfile<Scalar>& phi = {}) {
    SpectralScalar<Scalar>::require_same_grid(f, g);
    const auto& gr = f.grid;
    const DyadicRange range = DyadicRange::for_grid(gr);

    auto f_pieces = detail::ShellPieces<Scalar>::build(f, phi);
    auto g_pieces = detail::ShellPieces<Scalar>::build(g, phi);

    ComplexArray<Scalar> acc = ComplexArray<Scalar>::Zero(gr.n, gr.n);
    for (int j = range.k_min; j <= range.k_max; ++j) {
        if (!f_pieces.has(j)) continue;
        ComplexArray<Scalar> window;
        for (int l = std::max(j - 6, range.k_min); l <= std::min(j + 6, range.k_max); ++l) {
            if (!g_pieces.has(l)) continue;
            if (window.size() == 0)
                window = g_pieces.piece(l);
            else
                window += g_pieces.piece(l);
        }
        if (window.size() > 0) acc += f_pieces.piece(j) * window;
    }
    return dealias(from_physical(gr, acc));
}

/// Vector-slot conveniences used by the symmetrized system assembly.
template <class Scalar>
SpectralVector2<Scalar> paraproduct_T(const SpectralScalar<Scalar>& f, const SpectralVector2<Scalar>& g,
                                      const CutoffProfile<Scalar>& phi = {}) {
    return SpectralVector2<Scalar>(paraproduct_T(f, g.x, phi), paraproduct_T(f, g.y, phi));
}

template <class Scalar>
SpectralVector2<Scalar> paraproduct_T(const SpectralVector2<Scalar>& f, const SpectralScalar<Scalar>& g,
                                      const CutoffProfile<Scalar>& phi = {}) {
    return SpectralVector2<Scalar>(paraproduct_T(f.x, g, phi), paraproduct_T(f.y, g, phi));
}

/// Diagnostic ratio ‖[|D|⁻¹div, T_a]b‖_{H^s} / (‖∇a‖_{L^∞}·‖b‖_{H^{s−1}}),
/// with the scalar b embedded as the gradient field B = −∇|D|⁻¹b so that
/// |D|⁻¹div B = b exactly.  Records the empirical commutator constant; 0
/// when either denominator factor is below the guard.
template <class Scalar>
Scalar commutator_probe(const SpectralScalar<Scalar>& a, const SpectralScalar<Scalar>& b, Scalar s,
                        const CutoffProfile<Scalar>& phi = {}) {
    SpectralScalar<Scalar>::require_same_grid(a, b);
    SpectralScalar<Scalar> inv_b = apply_symbol(b, sym_inv_abs<Scalar>());
    SpectralVector2<Scalar> B = Scalar(-1) * grad(inv_b);

    // |D|⁻¹div(T_a B) − T_a(|D|⁻¹div B)
    SpectralScalar<Scalar> divTaB = divergence(paraproduct_T(a, B, phi));
    SpectralScalar<Scalar> first = apply_symbol(divTaB, sym_inv_abs<Scalar>());
    SpectralScalar<Scalar> second = paraproduct_T(a, apply_symbol(divergence(B), sym_inv_abs<Scalar>()), phi);
    const Scalar num = sobolev_norm(first - second, s);

    SpectralVector2<Scalar> ga = grad(a);
    const Scalar grad_a_inf =
        std::max(linf_norm(ga.x), linf_norm(ga.y));
    const Scalar b_norm = sobolev_norm(b, s - Scalar(1));
    const Scalar guard = Scalar(1e-14);
    if (grad_a_inf < guard || b_norm < guard) return Scalar(0);
    return num / (grad_a_inf * b_norm);
}

}  // namespace bsq
