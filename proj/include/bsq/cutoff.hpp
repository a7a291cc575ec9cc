#pragma once

#include <cmath>

#include "bsq/grid.hpp"

namespace bsq {

/// The dyadic cutoff profile: even, smooth, φ ≡ 1 on [−5/4,5/4], φ ≡ 0
/// outside [−3/2,3/2], values in [0,1].  The transition uses the exp-type
/// smoothstep S(t) = 1/(1+exp(1/t − 1/(1−t))), which is C^∞ with all
/// derivatives vanishing at both ends, evaluated in the overflow-safe form
/// below.  Only support and plateau are canonical; everything quantitative
/// downstream (symbol values, recorded constants) depends on this choice,
/// so exactly one profile object is shared by grid operators and pointwise
/// symbol evaluation.
template <class Scalar>
struct CutoffProfile {
    static constexpr Scalar plateau_end = Scalar(1.25);  // 5/4
    static constexpr Scalar support_end = Scalar(1.5);   // 3/2

    Scalar operator()(Scalar x) const {
        const Scalar ax = std::abs(x);
        if (ax <= plateau_end) return Scalar(1);
        if (ax >= support_end) return Scalar(0);
        const Scalar t = (support_end - ax) / (support_end - plateau_end);  // ∈ (0,1)
        const Scalar e = Scalar(1) / t - Scalar(1) / (Scalar(1) - t);
        if (e > Scalar(500)) return Scalar(0);
        if (e < Scalar(-500)) return Scalar(1);
        return Scalar(1) / (Scalar(1) + std::exp(e));
    }

    /// φ_{≤k}(x) = φ(x/2^k).
    Scalar le(Scalar x, int k) const { return (*this)(std::ldexp(x, -k)); }
    /// φ_k(x) = φ(x/2^k) − φ(x/2^{k−1}); supported in |x| ∈ [5/8·2^k, 3/2·2^k].
    Scalar at(Scalar x, int k) const { return le(x, k) - le(x, k - 1); }
    /// φ_{≥k}(x) = 1 − φ_{≤k−1}(x).
    Scalar ge(Scalar x, int k) const { return Scalar(1) - le(x, k - 1); }
    /// φ_I = Σ_{k∈[lo,hi]} φ_k = φ_{≤hi} − φ_{≤lo−1}.
    Scalar interval(Scalar x, int lo, int hi) const { return le(x, hi) - le(x, lo - 1); }
};

/// φ_k support bounds in physical frequency.
template <class Scalar>
Scalar dyadic_support_lo(int k) {
    return std::ldexp(Scalar(0.625), k);
}
template <class Scalar>
Scalar dyadic_support_hi(int k) {
    return std::ldexp(Scalar(1.5), k);
}

/// The resolvable dyadic range [k_min, k_max] of a grid: chosen so that on
/// every nonzero lattice point Σ_{k∈range} φ_k(|ξ|) = 1 exactly
/// (φ_{≤k_min−1} vanishes below the smallest nonzero |ξ|, φ_{≤k_max}
/// plateaus above the largest).
struct DyadicRange {
    int k_min = 0;
    int k_max = 0;

    int count() const { return k_max - k_min + 1; }

    template <class Scalar>
    static DyadicRange for_grid(const GridSpec<Scalar>& g) {
        DyadicRange r;
        r.k_min = static_cast<int>(std::floor(std::log2(g.min_nonzero_freq()))) - 1;
        r.k_max = static_cast<int>(std::ceil(std::log2(g.max_freq()))) + 1;
        return r;
    }
};

}  // namespace bsq
