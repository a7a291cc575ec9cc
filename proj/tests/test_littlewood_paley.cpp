#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "bsq/paraproduct.hpp"
#include "test_util.hpp"

using namespace bsq;
using Cplx = std::complex<double>;

namespace {

// Independent paraproduct oracle: the dyadic block sum evaluated as a direct
// double sum over lattice frequency pairs (no FFT path shared with the
// implementation).  Valid on the dealiased band for band-limited inputs.
SpectralScalar<double> block_sum_T(const SpectralScalar<double>& f, const SpectralScalar<double>& g,
                                   const CutoffProfile<double>& phi) {
    const auto& gr = f.grid;
    const DyadicRange range = DyadicRange::for_grid(gr);
    SpectralScalar<double> out(gr);
    const double inv_n2 = 1.0 / (double(gr.n) * double(gr.n));
    for (int oj = 0; oj < gr.n; ++oj) {
        for (int oi = 0; oi < gr.n; ++oi) {
            const int kx = gr.index_to_k(oi), ky = gr.index_to_k(oj);
            if (std::max(std::abs(kx), std::abs(ky)) > gr.dealias_kcut()) continue;
            Cplx acc = 0;
            for (int ej = 0; ej < gr.n; ++ej) {
                for (int ei = 0; ei < gr.n; ++ei) {
                    const int dx = kx - gr.index_to_k(ei), dy = ky - gr.index_to_k(ej);
                    if (dx < -gr.n / 2 || dx >= gr.n / 2 || dy < -gr.n / 2 || dy >= gr.n / 2) continue;
                    const Cplx fv = f.coeffs(gr.k_to_index(dx), gr.k_to_index(dy));
                    const Cplx gv = g.coeffs(ei, ej);
                    if (fv == Cplx(0) || gv == Cplx(0)) continue;
                    const double r_low = gr.freq_unit() * std::hypot(double(dx), double(dy));
                    const double r_high = gr.freq_unit() * std::hypot(double(gr.index_to_k(ei)), double(gr.index_to_k(ej)));
                    double weight = 0;
                    for (int k = range.k_min; k <= range.k_max; ++k)
                        weight += phi.le(r_low, k - 7) * phi.at(r_high, k);
                    acc += weight * fv * gv;
                }
            }
            out.coeffs(oi, oj) = acc * inv_n2;
        }
    }
    return out;
}

}  // namespace

TEST_CASE("cutoff profile: plateau, support, smoothness, evenness") {
    CutoffProfile<double> phi;
    CHECK(phi(0.0) == 1.0);
    CHECK(phi(1.25) == 1.0);
    CHECK(phi(-1.2) == 1.0);
    CHECK(phi(1.5) == 0.0);
    CHECK(phi(2.0) == 0.0);
    for (double x = 0.0; x <= 2.0; x += 1e-3) {
        const double v = phi(x);
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
        CHECK(phi(-x) == v);
    }
    // two continuous derivatives at the seams (finite-difference estimates stay bounded)
    auto d2 = [&](double x) { return (phi(x + 1e-4) - 2 * phi(x) + phi(x - 1e-4)) / 1e-8; };
    CHECK(std::abs(d2(1.25 + 1e-6)) < 10.0);
    CHECK(std::abs(d2(1.5 - 1e-6)) < 10.0);
}

TEST_CASE("phi_k: zero at origin, value 1 at the shell center, telescoping") {
    CutoffProfile<double> phi;
    for (int k : {-3, 0, 2, 7}) {
        CHECK(phi.at(0.0, k) == 0.0);
        CHECK(phi.at(std::ldexp(1.0, k), k) == 1.0);  // φ(1) − φ(2)
    }
    // partition of unity on [2^{k_min+1}, 2^{k_max-1}], 10⁴ sample points
    const int k_min = -4, k_max = 6;
    const double lo = std::ldexp(1.0, k_min + 1), hi = std::ldexp(1.0, k_max - 1);
    for (int s = 0; s < 10000; ++s) {
        const double x = lo * std::pow(hi / lo, s / 9999.0);
        double sum = 0;
        for (int k = k_min; k <= k_max; ++k) sum += phi.at(x, k);
        CHECK(std::abs(sum - 1.0) < 1e-13);
    }
}

TEST_CASE("phi_k vanishes outside [5/8·2^k, 3/2·2^k]") {
    CutoffProfile<double> phi;
    for (int k : {-2, 0, 3}) {
        const double lo = dyadic_support_lo<double>(k), hi = dyadic_support_hi<double>(k);
        for (int s = 0; s <= 2000; ++s) {
            const double x = std::ldexp(4.0, k) * s / 2000.0;
            if (x < lo || x > hi) CHECK(phi.at(x, k) == 0.0);
        }
    }
}

TEST_CASE("projections: telescoping, single shell, exact complement") {
    GridSpec<double> g(32, 2.0 * EIGEN_PI);
    CutoffProfile<double> phi;
    const DyadicRange range = DyadicRange::for_grid(g);

    auto f = test::random_real_field(g, 3, 1, 10);
    SpectralScalar<double> sum(g);
    for (int k = range.k_min; k <= range.k_max; ++k) sum += project_at(f, k, phi);
    CHECK((sum.coeffs - f.coeffs).abs().maxCoeff() < 1e-12 * f.coeffs.abs().maxCoeff());

    // P_k of a single mode with |ξ| = 2^k passes through with weight 1.
    SpectralScalar<double> mode(g);
    mode.coeffs(g.k_to_index(4), 0) = 1.0;  // |ξ| = 4 = 2²
    auto pk = project_at(mode, 2, phi);
    CHECK(std::abs(pk.coeffs(g.k_to_index(4), 0) - Cplx(1, 0)) == 0.0);

    // P_{≥k} + P_{≤k−1} = identity exactly (definition φ_{≥k} = 1 − φ_{≤k−1}).
    auto hi = project_ge(f, 2, phi);
    auto lo = project_le(f, 1, phi);
    CHECK(((hi.coeffs + lo.coeffs) - f.coeffs).abs().maxCoeff() == 0.0);
}

TEST_CASE("paraproduct against a constant first slot") {
    GridSpec<double> g(32, 2.0 * EIGEN_PI);
    CutoffProfile<double> phi;
    const double c = 2.75;
    SpectralScalar<double> cf(g);
    cf.coeffs(0, 0) = c * double(g.n) * double(g.n);
    auto f = test::random_real_field(g, 5, 1, 8);  // safe band
    auto tfg = paraproduct_T(cf, f, phi);
    CHECK((tfg.coeffs - c * f.coeffs).abs().maxCoeff() < 1e-12 * (c * f.coeffs.abs().maxCoeff()));
}

TEST_CASE("paraproduct support arithmetic: far-separated single modes annihilate") {
    GridSpec<double> g(64, 2.0 * EIGEN_PI);
    CutoffProfile<double> phi;
    // g-mode at |η| = 16 = 2⁴ (only shell j = 4 sees it); f-mode at
    // |ξ−η| = 2 > 2^{j−6} retires φ_{≤j−7}.
    SpectralScalar<double> gm(g), fm(g);
    gm.coeffs(g.k_to_index(16), 0) = 1.0;
    fm.coeffs(g.k_to_index(2), 0) = 1.0;
    auto t = paraproduct_T(fm, gm, phi);
    CHECK(t.coeffs.abs().maxCoeff() < 1e-15);
}

TEST_CASE("paraproduct matches the dyadic block-sum oracle") {
    GridSpec<double> g(16, 2.0 * EIGEN_PI);
    CutoffProfile<double> phi;
    for (uint64_t seed : {11u, 12u}) {
        auto f = test::random_real_field(g, seed, 1, 5);
        auto h = test::random_real_field(g, seed + 100, 1, 5);
        auto fast = paraproduct_T(f, h, phi);
        auto slow = block_sum_T(f, h, phi);
        const double scale = std::max(1e-30, slow.coeffs.abs().maxCoeff());
        CHECK((fast.coeffs - slow.coeffs).abs().maxCoeff() < 1e-12 * scale);
    }
}

TEST_CASE("paraproduct bilinearity is exact for power-of-two scalings") {
    GridSpec<double> g(16, 5.0);
    CutoffProfile<double> phi;
    auto f = test::random_real_field(g, 21, 1, 5);
    auto h = test::random_real_field(g, 22, 1, 5);
    auto base = paraproduct_T(f, h, phi);
    auto scaled = paraproduct_T(2.0 * f, 4.0 * h, phi);
    CHECK((scaled.coeffs - 8.0 * base.coeffs).abs().maxCoeff() == 0.0);
}

TEST_CASE("remainder and decomposition completeness") {
    GridSpec<double> g(32, 2.0 * EIGEN_PI);
    CutoffProfile<double> phi;

    SpectralScalar<double> zero(g);
    auto f = test::random_real_field(g, 31, 1, 10);
    CHECK(remainder_R(zero, f, phi).coeffs.abs().maxCoeff() == 0.0);
    CHECK(remainder_R(f, zero, phi).coeffs.abs().maxCoeff() == 0.0);

    for (uint64_t seed : {41u, 42u, 43u}) {
        auto a = test::random_real_field(g, seed, 1, 10);
        auto b = test::random_real_field(g, seed + 7, 1, 10);
        auto whole = product(a, b);
        auto parts = paraproduct_T(a, b, phi) + paraproduct_T(b, a, phi) + remainder_R(a, b, phi);
        const double defect = l2_norm(whole - parts);
        CHECK(defect <= 1e-11 * l2_norm(a) * l2_norm(b));
    }
}

TEST_CASE("same-shell modes land entirely in the remainder") {
    GridSpec<double> g(64, 2.0 * EIGEN_PI);
    CutoffProfile<double> phi;
    SpectralScalar<double> a(g), b(g);
    a.coeffs(g.k_to_index(8), 0) = 1.0;   // |ξ| = 8
    b.coeffs(0, g.k_to_index(8)) = 1.0;   // |η| = 8, orthogonal direction
    auto whole = product(a, b);
    auto r = remainder_R(a, b, phi);
    CHECK(paraproduct_T(a, b, phi).coeffs.abs().maxCoeff() < 1e-15);
    CHECK(paraproduct_T(b, a, phi).coeffs.abs().maxCoeff() < 1e-15);
    CHECK((r.coeffs - whole.coeffs).abs().maxCoeff() < 1e-13 * whole.coeffs.abs().maxCoeff());
}

TEST_CASE("frequency localization of each paraproduct summand") {
    GridSpec<double> g(64, 2.0 * EIGEN_PI);
    CutoffProfile<double> phi;
    auto f = test::random_real_field(g, 51, 1, 20);
    auto h = test::random_real_field(g, 52, 1, 20);
    const int j = 4;  // shell at 2⁴ = 16, well inside the lattice
    auto low = project_le(f, j - 7, phi);
    auto shell = project_at(h, j, phi);
    auto summand = product(low, shell);
    const double lo = std::ldexp(1.0, j) * (0.625 - 1.5 / 128.0);
    const double hi = std::ldexp(1.0, j) * (1.5 + 1.5 / 128.0);
    const double dust = 1e-13 * summand.coeffs.abs().maxCoeff();
    for (int cj = 0; cj < g.n; ++cj)
        for (int ci = 0; ci < g.n; ++ci) {
            const double r = g.xi(ci, cj).norm();
            if (r < lo - 1e-9 || r > hi + 1e-9) CHECK(std::abs(summand.coeffs(ci, cj)) <= dust);
        }
}

TEST_CASE("commutator probe: degenerate inputs and the empirical constant") {
    GridSpec<double> g64(64, 2.0 * EIGEN_PI);
    CutoffProfile<double> phi;

    SpectralScalar<double> constant(g64);
    constant.coeffs(0, 0) = 3.0 * double(g64.n) * double(g64.n);
    auto b = test::random_real_field(g64, 61, 1, 20);
    CHECK(commutator_probe(constant, b, 2.0, phi) == 0.0);

    auto a = test::random_real_field(g64, 62, 1, 20);
    SpectralScalar<double> zero(g64);
    CHECK(commutator_probe(a, zero, 2.0, phi) == 0.0);

    // A 64² lattice spans fewer than seven octaves below its dealias cutoff,
    // so the j−7 offset makes T_a trivial and the ratio is exactly 0 there.
    CHECK(commutator_probe(a, b, 2.0, phi) < 1e-15);

    // 512² is the first power of two whose dealiased span (n/3 = 170) covers
    // a full shell (|ξ| ∈ [96,160], j = 7) with modes seven octaves below it;
    // there the empirical constant is nontrivial.  The companion verify suite
    // runs the full 50-seed version of this probe.
    GridSpec<double> g(512, 2.0 * EIGEN_PI);
    double max_ratio = 0.0;
    for (uint64_t seed = 0; seed < 8; ++seed) {
        // scale-separated inputs saturate the pairing: slowly varying a, b on
        // the shells at least seven octaves above it
        auto aa = test::random_real_field(g, 1000 + seed, 1, 3);
        auto bb = test::random_real_field(g, 2000 + seed, 64, 170);
        const double r = commutator_probe(aa, bb, 2.0, phi);
        CHECK(std::isfinite(r));
        max_ratio = std::max(max_ratio, r);
    }
    MESSAGE("empirical commutator constant over 8 seeds: ", max_ratio);
    CHECK(max_ratio > 1e-8);
    CHECK(std::isfinite(max_ratio));
}
