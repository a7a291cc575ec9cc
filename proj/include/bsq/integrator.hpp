#pragma once

#include "bsq/model.hpp"

namespace bsq {

enum class Scheme { IFRK4, ETDRK4 };

struct IntegratorConfig {
    double dt = 0.01;
    Scheme scheme = Scheme::IFRK4;
    double t_end = 1.0;
    bool dealias = true;
    double cfl_guard = 40.0;  // advisory: dt·max|Λ_ε| is recorded against it
    bool nonlinear = true;
};

namespace detail {

// φ_j(z) = (e^z − Σ_{m<j} z^m/m!)/z^j = Σ_m z^m/(m+j)!, by series near 0
// where the closed form cancels catastrophically.
template <class Scalar>
std::complex<Scalar> phi_fn(int j, std::complex<Scalar> z) {
    if (std::abs(z) < Scalar(0.5)) {
        std::complex<Scalar> acc(0), zp(1);
        Scalar fact = 1;
        for (int q = 1; q <= j; ++q) fact *= Scalar(q);
        for (int m = 0; m < 18; ++m) {
            acc += zp / fact;
            zp *= z;
            fact *= Scalar(m + j + 1);
        }
        return acc;
    }
    std::complex<Scalar> ez = std::exp(z);
    if (j == 1) return (ez - Scalar(1)) / z;
    if (j == 2) return (ez - Scalar(1) - z) / (z * z);
    return (ez - Scalar(1) - z - z * z / Scalar(2)) / (z * z * z);
}

}  // namespace detail

/// Time stepper for the strongly dispersive system in the characteristic
/// variable W = ζ + i|D|⁻¹div v, which diagonalizes the linear part to iΛ_ε:
/// the stiff dispersion is integrated exactly (integrating-factor RK4) or
/// through φ-functions (ETDRK4 cross-check).  With the nonlinearity off a
/// step is the exact propagator e^{iΛ_ε dt}.
template <class Scalar>
class Integrator {
  public:
    using Cplx = std::complex<Scalar>;

    Integrator(const GridSpec<Scalar>& g, Scalar epsilon, const IntegratorConfig& cfg)
        : grid_(g), epsilon_(epsilon), cfg_(cfg) {
        const Scalar dt = Scalar(cfg.dt);
        lambda_ = RealArray<Scalar>(g.n, g.n);
        for (int j = 0; j < g.n; ++j)
            for (int i = 0; i < g.n; ++i) lambda_(i, j) = lambda_eps(g.xi(i, j).norm(), epsilon);
        auto exp_of = [&](Scalar factor) {
            ComplexArray<Scalar> e(g.n, g.n);
            for (int j = 0; j < g.n; ++j)
                for (int i = 0; i < g.n; ++i) {
                    const Scalar ph = factor * lambda_(i, j);
                    e(i, j) = Cplx(std::cos(ph), std::sin(ph));
                }
            return e;
        };
        e_half_ = exp_of(dt / 2);
        e_full_ = exp_of(dt);
        if (cfg.scheme == Scheme::ETDRK4) {
            f1_.resize(g.n, g.n);
            f2_.resize(g.n, g.n);
            f3_.resize(g.n, g.n);
            q_half_.resize(g.n, g.n);
            for (int j = 0; j < g.n; ++j)
                for (int i = 0; i < g.n; ++i) {
                    const Cplx z = Cplx(0, dt * lambda_(i, j));
                    const Cplx p1 = detail::phi_fn(1, z), p2 = detail::phi_fn(2, z), p3 = detail::phi_fn(3, z);
                    f1_(i, j) = dt * (p1 - Scalar(3) * p2 + Scalar(4) * p3);
                    f2_(i, j) = dt * (p2 - Scalar(2) * p3);
                    f3_(i, j) = dt * (Scalar(4) * p3 - p2);
                    q_half_(i, j) = (dt / 2) * detail::phi_fn(1, z / Scalar(2));
                }
        }
    }

    Scalar cfl_ratio() const { return Scalar(cfg_.dt) * lambda_.abs().maxCoeff(); }
    bool cfl_within_guard() const { return cfl_ratio() <= Scalar(cfg_.cfl_guard); }

    SpectralScalar<Scalar> state_to_w(const State<Scalar>& s) const {
        SpectralScalar<Scalar> q = inv_abs_div_local(s.v);
        return SpectralScalar<Scalar>(grid_, ComplexArray<Scalar>(s.zeta.coeffs + Cplx(0, 1) * q.coeffs));
    }

    State<Scalar> w_to_state(const SpectralScalar<Scalar>& W, Scalar time) const {
        SpectralScalar<Scalar> zeta = hermitian_part(W);
        SpectralScalar<Scalar> q = antihermitian_part_over_i(W);
        SpectralVector2<Scalar> v(grid_);
        for (int j = 0; j < grid_.n; ++j)
            for (int i = 0; i < grid_.n; ++i) {
                const Scalar x1 = grid_.xi1(i, j), x2 = grid_.xi2(i, j);
                const Scalar r = std::hypot(x1, x2);
                if (r == Scalar(0)) continue;
                const Cplx val = Cplx(0, -1) * q.coeffs(i, j) / r;
                v.x.coeffs(i, j) = x1 * val;
                v.y.coeffs(i, j) = x2 * val;
            }
        v.x.zero_nyquist();
        v.y.zero_nyquist();
        return State<Scalar>(std::move(zeta), std::move(v), time);
    }

    /// One step of size cfg.dt; returns false when the result is not finite.
    bool advance(SpectralScalar<Scalar>& W) const {
        if (cfg_.scheme == Scheme::IFRK4)
            advance_ifrk4(W);
        else
            advance_etdrk4(W);
        W.zero_nyquist();
        W.coeffs(0, 0) = Cplx(0);
        return W.coeffs.allFinite();
    }

    State<Scalar> step(const State<Scalar>& s) const {
        SpectralScalar<Scalar> W = state_to_w(s);
        if (!advance(W)) throw std::runtime_error("Integrator::step: state became non-finite");
        return w_to_state(W, s.time + Scalar(cfg_.dt));
    }

    /// Nonlinear part of the evolution in the characteristic variable:
    /// N_W = −ε∇·(ζv) + i|D|⁻¹div(−(ε/2)∇|v|²).
    SpectralScalar<Scalar> nonlinear(const SpectralScalar<Scalar>& W) const {
        if (!cfg_.nonlinear) return SpectralScalar<Scalar>(grid_);
        State<Scalar> s = w_to_state(W, 0);
        SpectralScalar<Scalar> nz = Scalar(-epsilon_) * divergence(raw_product(s.zeta, s.v.x, s.v.y));
        SpectralScalar<Scalar> speed2 = raw_product_scalar(s.v.x, s.v.x) + raw_product_scalar(s.v.y, s.v.y);
        SpectralScalar<Scalar> q = inv_abs_div_local(grad(speed2));
        SpectralScalar<Scalar> out(grid_,
                                   ComplexArray<Scalar>(nz.coeffs + Cplx(0, -epsilon_ / 2) * q.coeffs));
        out.coeffs(0, 0) = Cplx(0);
        return out;
    }

  private:
    void advance_ifrk4(SpectralScalar<Scalar>& W) const {
        const Scalar dt = Scalar(cfg_.dt);
        SpectralScalar<Scalar> k1 = nonlinear(W);
        SpectralScalar<Scalar> stage(grid_);
        stage.coeffs = e_half_ * (W.coeffs + (dt / 2) * k1.coeffs);
        SpectralScalar<Scalar> k2 = nonlinear(stage);
        stage.coeffs = e_half_ * W.coeffs + (dt / 2) * k2.coeffs;
        SpectralScalar<Scalar> k3 = nonlinear(stage);
        stage.coeffs = e_full_ * W.coeffs + dt * (e_half_ * k3.coeffs);
        SpectralScalar<Scalar> k4 = nonlinear(stage);
        W.coeffs = e_full_ * W.coeffs +
                   (dt / 6) * (e_full_ * k1.coeffs + Scalar(2) * (e_half_ * (k2.coeffs + k3.coeffs)) + k4.coeffs);
    }

    void advance_etdrk4(SpectralScalar<Scalar>& W) const {
        SpectralScalar<Scalar> n1 = nonlinear(W);
        SpectralScalar<Scalar> a(grid_), b(grid_), c(grid_);
        a.coeffs = e_half_ * W.coeffs + q_half_ * n1.coeffs;
        SpectralScalar<Scalar> n2 = nonlinear(a);
        b.coeffs = e_half_ * W.coeffs + q_half_ * n2.coeffs;
        SpectralScalar<Scalar> n3 = nonlinear(b);
        c.coeffs = e_half_ * a.coeffs + q_half_ * (Scalar(2) * n3.coeffs - n1.coeffs);
        SpectralScalar<Scalar> n4 = nonlinear(c);
        W.coeffs = e_full_ * W.coeffs + f1_ * n1.coeffs + f2_ * (Scalar(2) * (n2.coeffs + n3.coeffs)) +
                   f3_ * n4.coeffs;
    }

    SpectralScalar<Scalar> inv_abs_div_local(const SpectralVector2<Scalar>& u) const {
        return apply_symbol(divergence(u), sym_inv_abs<Scalar>());
    }

    SpectralVector2<Scalar> raw_product(const SpectralScalar<Scalar>& a, const SpectralScalar<Scalar>& bx,
                                        const SpectralScalar<Scalar>& by) const {
        ComplexArray<Scalar> pa = to_physical(a);
        SpectralScalar<Scalar> px = from_physical(grid_, ComplexArray<Scalar>(pa * to_physical(bx)));
        SpectralScalar<Scalar> py = from_physical(grid_, ComplexArray<Scalar>(pa * to_physical(by)));
        if (cfg_.dealias) return SpectralVector2<Scalar>(dealias(std::move(px)), dealias(std::move(py)));
        return SpectralVector2<Scalar>(std::move(px), std::move(py));
    }

    SpectralScalar<Scalar> raw_product_scalar(const SpectralScalar<Scalar>& a,
                                              const SpectralScalar<Scalar>& b) const {
        SpectralScalar<Scalar> p =
            from_physical(grid_, ComplexArray<Scalar>(to_physical(a) * to_physical(b)));
        return cfg_.dealias ? dealias(std::move(p)) : std::move(p);
    }

    GridSpec<Scalar> grid_;
    Scalar epsilon_;
    IntegratorConfig cfg_;
    RealArray<Scalar> lambda_;
    ComplexArray<Scalar> e_half_, e_full_;
    ComplexArray<Scalar> f1_, f2_, f3_, q_half_;
};

/// One-shot step with the spec's free-function surface.
template <class Scalar>
State<Scalar> step(const State<Scalar>& s, const IntegratorConfig& cfg, Scalar epsilon) {
    return Integrator<Scalar>(s.grid(), epsilon, cfg).step(s);
}

}  // namespace bsq
