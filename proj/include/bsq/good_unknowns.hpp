#pragma once

#include <string>
#include <utility>
#include <vector>

#include "bsq/model.hpp"
#include "bsq/paraproduct.hpp"

namespace bsq {

/// ½ T_f((1+εΔ)⁻¹ φ_{≥6}(√ε|D|) g), the bilinear correction behind the good
/// unknown.  The inner multiplier is evaluated only where φ_{≥6}(√ε|ξ|) ≠ 0,
/// i.e. √ε|ξ| > 40, where 1−ε|ξ|² < −1599 keeps the inversion harmless; the
/// symbol is defined 0 elsewhere (including at the 1−ε|ξ|² = 0 ring).
template <class Scalar>
SpectralVector2<Scalar> b_eps(const SpectralScalar<Scalar>& f, const SpectralVector2<Scalar>& g,
                              Scalar epsilon, const CutoffProfile<Scalar>& phi = {}) {
    auto inner = [&phi, epsilon](Scalar x1, Scalar x2) {
        const Scalar r = std::hypot(x1, x2);
        const Scalar cut = phi.ge(std::sqrt(epsilon) * r, 6);
        if (cut == Scalar(0)) return std::complex<Scalar>(0, 0);
        return std::complex<Scalar>(cut / (Scalar(1) - epsilon * r * r), 0);
    };
    SpectralVector2<Scalar> filtered = apply_symbol(g, inner);
    return Scalar(0.5) * paraproduct_T(f, filtered, phi);
}

/// |D|⁻¹div u, the scalar stream of a (nearly) curl-free vector field.
template <class Scalar>
SpectralScalar<Scalar> inv_abs_div(const SpectralVector2<Scalar>& u) {
    return apply_symbol(divergence(u), sym_inv_abs<Scalar>());
}

/// The derived unknowns at a time instant: u = v + εBᵉ(ζ,v) and the complex
/// scalar V = ζ + i|D|⁻¹div u.  V is genuinely complex (no Hermitian
/// symmetry); V⁻ is realized as ξ ↦ conj(V̂(−ξ)).
template <class Scalar>
struct GoodState {
    SpectralVector2<Scalar> u;
    SpectralScalar<Scalar> V;
    Scalar time = 0;
};

template <class Scalar>
SpectralScalar<Scalar> make_symmetrized_unknown(const SpectralScalar<Scalar>& zeta,
                                                const SpectralVector2<Scalar>& u) {
    SpectralScalar<Scalar> q = inv_abs_div(u);
    SpectralScalar<Scalar> V(zeta.grid, ComplexArray<Scalar>(zeta.coeffs + std::complex<Scalar>(0, 1) * q.coeffs));
    return V;
}

template <class Scalar>
GoodState<Scalar> to_good_unknowns(const State<Scalar>& s, Scalar epsilon,
                                   const CutoffProfile<Scalar>& phi = {}) {
    GoodState<Scalar> out;
    out.u = s.v + epsilon * b_eps(s.zeta, s.v, epsilon, phi);
    out.V = make_symmetrized_unknown(s.zeta, out.u);
    out.time = s.time;
    return out;
}

/// ζ and the longitudinal part recovered from V:
///   ζ = ½(V̂(ξ) + conj(V̂(−ξ))),  ṽ = −|D|⁻¹∇ q with q = ½i⁻¹(V − V̄).
template <class Scalar>
SpectralScalar<Scalar> elevation_of(const SpectralScalar<Scalar>& V) {
    return hermitian_part(V);
}

template <class Scalar>
SpectralVector2<Scalar> tilde_velocity_of(const SpectralScalar<Scalar>& V) {
    SpectralScalar<Scalar> q = antihermitian_part_over_i(V);
    SpectralVector2<Scalar> gq = grad(apply_symbol(q, sym_inv_abs<Scalar>()));
    return Scalar(-1) * gq;
}

template <class Scalar>
struct ReconstructOutcome {
    State<Scalar> state;
    bool converged = false;
    int iterations = 0;
    Scalar residual = 0;
};

/// Invert the good-unknown map: v solves v = ṽ − εΔ⁻¹∇div Bᵉ(ζ,v) by plain
/// fixed-point iteration (the contraction constant is ε‖ζ‖_{L∞}·C_B, small
/// in every intended regime).  Non-contraction within 50 sweeps is reported,
/// not thrown.
template <class Scalar>
ReconstructOutcome<Scalar> reconstruct(const GoodState<Scalar>& gs, Scalar epsilon,
                                       const CutoffProfile<Scalar>& phi = {}) {
    ReconstructOutcome<Scalar> out;
    SpectralScalar<Scalar> zeta = elevation_of(gs.V);
    SpectralVector2<Scalar> vt = tilde_velocity_of(gs.V);

    SpectralVector2<Scalar> v = vt;
    Scalar residual = 0;
    bool converged = false;
    int it = 0;
    const Scalar tol = Scalar(1e-12);
    for (; it < 50; ++it) {
        SpectralVector2<Scalar> corr = curl_free_project(b_eps(zeta, v, epsilon, phi));
        SpectralVector2<Scalar> next = vt - epsilon * corr;
        residual = l2_norm(next - v);
        const Scalar scale = std::max(Scalar(1), l2_norm(next));
        v = std::move(next);
        if (!std::isfinite(residual)) {
            ++it;
            break;  // blown up: definitely not contracting
        }
        if (residual <= tol * scale) {
            converged = true;
            ++it;
            break;
        }
    }
    out.state = State<Scalar>(std::move(zeta), std::move(v), gs.time);
    out.converged = converged;
    out.iterations = it;
    out.residual = residual;
    return out;
}

/// The right-hand side of the symmetrized evolution ∂_tV − iΛ_εV, split
/// into its four groups with every addend separately retrievable.
template <class Scalar>
struct SymmetrizedRhs {
    SpectralScalar<Scalar> S, Q, C, N;
    std::vector<std::pair<std::string, SpectralScalar<Scalar>>> terms;

    SpectralScalar<Scalar> total() const { return S + Q + C + N; }
};

namespace detail {

template <class Scalar>
SpectralScalar<Scalar> i_inv_abs_div(const SpectralVector2<Scalar>& w) {
    SpectralScalar<Scalar> q = inv_abs_div(w);
    q.coeffs *= std::complex<Scalar>(0, 1);
    return q;
}

/// (T_a·∇)h for vector a, scalar h: Σ_i T_{a_i}(∂_i h).
template <class Scalar>
SpectralScalar<Scalar> transport_T(const SpectralVector2<Scalar>& a, const SpectralScalar<Scalar>& h,
                                   const CutoffProfile<Scalar>& phi) {
    SpectralVector2<Scalar> gh = grad(h);
    return paraproduct_T(a.x, gh.x, phi) + paraproduct_T(a.y, gh.y, phi);
}

/// (T_a·∇)w componentwise for vector w.
template <class Scalar>
SpectralVector2<Scalar> transport_T(const SpectralVector2<Scalar>& a, const SpectralVector2<Scalar>& w,
                                    const CutoffProfile<Scalar>& phi) {
    return SpectralVector2<Scalar>(transport_T(a, w.x, phi), transport_T(a, w.y, phi));
}

}  // namespace detail

/// Assemble ∂_tV − iΛ_εV from the paradifferential term lists.  The pair
/// (gs, s) must be consistent (gs = to_good_unknowns(s, ε)).
template <class Scalar>
SymmetrizedRhs<Scalar> symmetrized_rhs(const GoodState<Scalar>& gs, const State<Scalar>& s,
                                       Scalar epsilon, const CutoffProfile<Scalar>& phi = {}) {
    using detail::i_inv_abs_div;
    using detail::transport_T;
    const auto& g = s.grid();
    const Scalar eps = epsilon;
    const std::complex<Scalar> I(0, 1);

    const SpectralScalar<Scalar>& zeta = s.zeta;
    const SpectralVector2<Scalar>& v = s.v;
    const SpectralVector2<Scalar>& u = gs.u;
    const SpectralScalar<Scalar>& V = gs.V;

    SpectralVector2<Scalar> B = b_eps(zeta, v, eps, phi);
    SpectralVector2<Scalar> vt = curl_free_project(u);          // ṽ, the longitudinal part of u
    SpectralVector2<Scalar> Bcf = curl_free_project(B);         // Δ⁻¹∇div Bᵉ

    auto low_pass = [&](auto&& field) {  // φ_{≤5}(√ε|D|)
        return apply_symbol(field, [&phi, eps](Scalar x1, Scalar x2) {
            return std::complex<Scalar>(phi.le(std::sqrt(eps) * std::hypot(x1, x2), 5), 0);
        });
    };
    auto abs_D = [&](const SpectralScalar<Scalar>& f) { return apply_symbol(f, sym_abs<Scalar>()); };
    auto disp = [&](const SpectralScalar<Scalar>& f) {
        return apply_symbol(f, sym_one_plus_eps_laplacian<Scalar>(eps));
    };

    SymmetrizedRhs<Scalar> out;
    out.S = SpectralScalar<Scalar>(g);
    out.Q = SpectralScalar<Scalar>(g);
    out.C = SpectralScalar<Scalar>(g);
    out.N = SpectralScalar<Scalar>(g);
    auto add = [&](SpectralScalar<Scalar>& group, std::string name, SpectralScalar<Scalar> term) {
        group += term;
        out.terms.emplace_back(std::move(name), std::move(term));
    };

    // --- symmetric quadratic group -----------------------------------------
    add(out.S, "S.transport", Scalar(-eps) * divergence(paraproduct_T(vt, V, phi)));
    add(out.S, "S.pressure", (I * eps / Scalar(2)) * abs_D(paraproduct_T(zeta, V, phi)));

    // --- low-frequency quadratic group -------------------------------------
    add(out.Q, "Q.velocity",
        Scalar(-eps / 2) * divergence(SpectralVector2<Scalar>(paraproduct_T(zeta, low_pass(vt.x), phi),
                                                              paraproduct_T(zeta, low_pass(vt.y), phi))));
    add(out.Q, "Q.elevation", (-I * eps / Scalar(2)) * abs_D(paraproduct_T(zeta, low_pass(zeta), phi)));

    // --- cubic group ---------------------------------------------------------
    add(out.C, "C.cubic", (eps * eps) * divergence(paraproduct_T(Bcf, V, phi)));

    // --- remaining nonlinear group ------------------------------------------
    add(out.N, "N.low_correction",
        (eps * eps / Scalar(2)) * divergence(SpectralVector2<Scalar>(paraproduct_T(zeta, low_pass(Bcf.x), phi),
                                                                     paraproduct_T(zeta, low_pass(Bcf.y), phi))));

    // −iε[|D|⁻¹div, T_v]·∇u
    {
        SpectralVector2<Scalar> Tgrad = transport_T(v, u, phi);
        SpectralScalar<Scalar> first = apply_symbol(divergence(Tgrad), sym_inv_abs<Scalar>());
        SpectralScalar<Scalar> second = transport_T(v, inv_abs_div(u), phi);
        add(out.N, "N.comm_div_v", (-I * eps) * (first - second));
    }
    // +iε T_{div v}(|D|⁻¹div u)
    add(out.N, "N.transport_div", (I * eps) * paraproduct_T(divergence(v), inv_abs_div(u), phi));
    // −(ε/2)|D|([|D|⁻¹div, T_ζ]u)
    {
        SpectralScalar<Scalar> first = apply_symbol(divergence(paraproduct_T(zeta, u, phi)), sym_inv_abs<Scalar>());
        SpectralScalar<Scalar> second = paraproduct_T(zeta, inv_abs_div(u), phi);
        add(out.N, "N.comm_div_zeta", Scalar(-eps / 2) * abs_D(first - second));
    }

    // N_ζ terms
    add(out.N, "N.remainder_zeta",
        Scalar(-eps) * divergence(SpectralVector2<Scalar>(remainder_R(zeta, v.x, phi), remainder_R(zeta, v.y, phi))));
    {
        // [Δ, T_ζ]X with X = (1+εΔ)⁻¹φ_{≥6}(√ε|D|)v
        auto inner = [&phi, eps](Scalar x1, Scalar x2) {
            const Scalar r = std::hypot(x1, x2);
            const Scalar cut = phi.ge(std::sqrt(eps) * r, 6);
            if (cut == Scalar(0)) return std::complex<Scalar>(0, 0);
            return std::complex<Scalar>(cut / (Scalar(1) - eps * r * r), 0);
        };
        SpectralVector2<Scalar> X = apply_symbol(v, inner);
        SpectralVector2<Scalar> comm(laplacian(paraproduct_T(zeta, X.x, phi)) - paraproduct_T(zeta, laplacian(X.x), phi),
                                     laplacian(paraproduct_T(zeta, X.y, phi)) - paraproduct_T(zeta, laplacian(X.y), phi));
        add(out.N, "N.comm_laplacian", (eps * eps / Scalar(2)) * divergence(comm));
    }
    add(out.N, "N.T_zeta_B", (eps * eps / Scalar(2)) * divergence(paraproduct_T(zeta, B, phi)));

    // i|D|⁻¹div N_u, term by term
    {
        SpectralVector2<Scalar> gz = grad(zeta);
        auto high_pass = [&](const SpectralScalar<Scalar>& f) {
            return apply_symbol(f, [&phi, eps](Scalar x1, Scalar x2) {
                return std::complex<Scalar>(phi.ge(std::sqrt(eps) * std::hypot(x1, x2), 6), 0);
            });
        };
        SpectralScalar<Scalar> hz = high_pass(zeta);
        add(out.N, "N.T_gradzeta",
            (eps / Scalar(2)) * i_inv_abs_div(SpectralVector2<Scalar>(paraproduct_T(gz.x, hz, phi),
                                                                      paraproduct_T(gz.y, hz, phi))));

        // −ε T_{∇v}·v: component j is Σ_i T_{∂_i v_j}(v_i)
        SpectralVector2<Scalar> gvx = grad(v.x), gvy = grad(v.y);
        SpectralVector2<Scalar> Tgv(paraproduct_T(gvx.x, v.x, phi) + paraproduct_T(gvx.y, v.y, phi),
                                    paraproduct_T(gvy.x, v.x, phi) + paraproduct_T(gvy.y, v.y, phi));
        add(out.N, "N.T_gradv", Scalar(-eps) * i_inv_abs_div(Tgv));

        // −ε R(v·, ∇v): component j is Σ_i R(v_i, ∂_i v_j)
        SpectralVector2<Scalar> Rv(remainder_R(v.x, gvx.x, phi) + remainder_R(v.y, gvx.y, phi),
                                   remainder_R(v.x, gvy.x, phi) + remainder_R(v.y, gvy.y, phi));
        add(out.N, "N.remainder_v", Scalar(-eps) * i_inv_abs_div(Rv));

        add(out.N, "N.B_dispdiv",
            Scalar(-eps) * i_inv_abs_div(b_eps(disp(divergence(v)), v, eps, phi)));
        add(out.N, "N.T_v_gradB", (eps * eps) * i_inv_abs_div(detail::transport_T(v, B, phi)));
        add(out.N, "N.B_quadratic",
            (-eps * eps) * i_inv_abs_div(b_eps(divergence(product(zeta, v)), v, eps, phi)));
        SpectralScalar<Scalar> speed2 = product(v.x, v.x) + product(v.y, v.y);
        add(out.N, "N.B_speed",
            (-eps * eps / Scalar(2)) * i_inv_abs_div(b_eps(zeta, grad(speed2), eps, phi)));
    }

    return out;
}

/// The same right-hand side straight from the primitive evolution:
///   −ε∇·(ζv) + ε(1+εΔ)∇·Bᵉ + iε|D|⁻¹div[−½∇|v|² + Bᵉ(∂_tζ,v) + Bᵉ(ζ,∂_tv)].
/// Algebraically identical to symmetrized_rhs(...).total(); the two are
/// compared spectrally as a consistency oracle.
template <class Scalar>
SpectralScalar<Scalar> linearized_rhs(const State<Scalar>& s, Scalar epsilon,
                                      const CutoffProfile<Scalar>& phi = {}) {
    const Scalar eps = epsilon;
    State<Scalar> ds = rhs_special(eps, s);

    SpectralVector2<Scalar> B = b_eps(s.zeta, s.v, eps, phi);
    SpectralScalar<Scalar> term1 = Scalar(-eps) * divergence(product(s.zeta, s.v));
    SpectralScalar<Scalar> term2 =
        eps * apply_symbol(divergence(B), sym_one_plus_eps_laplacian<Scalar>(eps));

    SpectralScalar<Scalar> speed2 = product(s.v.x, s.v.x) + product(s.v.y, s.v.y);
    SpectralVector2<Scalar> inner = Scalar(-0.5) * grad(speed2);
    inner += b_eps(ds.zeta, s.v, eps, phi);
    inner += b_eps(s.zeta, ds.v, eps, phi);
    SpectralScalar<Scalar> term3 = detail::i_inv_abs_div(inner);
    term3.coeffs *= eps;

    return term1 + term2 + term3;
}

/// Profile pair f = e^{−itΛ_ε}V, g = ⟨∇⟩^{N₀}f.
template <class Scalar>
struct Profile {
    SpectralScalar<Scalar> f;
    SpectralScalar<Scalar> g;
    Scalar time = 0;
    int N0 = 5;
};

template <class Scalar>
Profile<Scalar> profile_of(const GoodState<Scalar>& gs, Scalar epsilon, int N0) {
    Profile<Scalar> out;
    out.f = apply_symbol(gs.V, sym_exp_i_lambda<Scalar>(-gs.time, epsilon));
    out.g = apply_symbol(out.f, sym_bracket_pow<Scalar>(Scalar(N0)));
    out.time = gs.time;
    out.N0 = N0;
    return out;
}

/// ‖|D|⁻¹(∂_tV − iΛ_εV)‖_{H^{N₀}}/ε — the profile-derivative diagnostic
/// (the unimodular factor drops out of the norm).
template <class Scalar>
Scalar profile_derivative_ratio(const State<Scalar>& s, Scalar epsilon, int N0,
                                const CutoffProfile<Scalar>& phi = {}) {
    SpectralScalar<Scalar> rhs = linearized_rhs(s, epsilon, phi);
    SpectralScalar<Scalar> smooth = apply_symbol(rhs, sym_inv_abs<Scalar>());
    return sobolev_norm(smooth, Scalar(N0)) / epsilon;
}

}  // namespace bsq
