#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "emx/norms.hpp"
#include "emx/random_field.hpp"
#include "test_helpers.hpp"

using namespace emx;
using namespace emx::testing;

namespace {
const Grid g16(16, 2.0 * pi);
}

TEST_CASE("forward transform: zero field, single mode, conventions") {
    RealField zero(g16);
    SpectralField zc = real_to_spectral(zero);
    for (const cplx& w : zc.c) CHECK(std::abs(w) == 0.0);

    // f = sin(x1) on L = 2*pi has exactly two nonzero coefficients, -i/2 at
    // m = (1,0,0) and +i/2 at m = (-1,0,0).
    RealField f(g16);
    for (int i = 0; i < g16.n; ++i)
        for (int j = 0; j < g16.n; ++j)
            for (int k = 0; k < g16.n; ++k)
                f.at(i, j, k) = std::sin(i * g16.dx());
    SpectralField fc = real_to_spectral(f);
    CHECK(std::abs(fc.at(1, 0, 0) - cplx(0.0, -0.5)) < 1e-14);
    CHECK(std::abs(fc.at(g16.n - 1, 0, 0) - cplx(0.0, 0.5)) < 1e-14);
    int nonzero = 0;
    for (const cplx& w : fc.c)
        if (std::abs(w) > 1e-13) ++nonzero;
    CHECK(nonzero == 2);
}

TEST_CASE("round trip real -> spectral -> real is identity to 1e-12") {
    SpectralField f = random_smooth(g16, 7);
    RealField r = spectral_to_real(f);
    SpectralField f2 = real_to_spectral(r);
    RealField r2 = spectral_to_real(f2);
    double err = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < r.v.size(); ++i) {
        err = std::max(err, std::abs(r.v[i] - r2.v[i]));
        scale = std::max(scale, std::abs(r.v[i]));
    }
    CHECK(err < 1e-12 * scale);
    CHECK(hermitian_residual(f2) < 1e-12);
}

TEST_CASE("Parseval: spectral L2 equals quadrature L2") {
    SpectralField f = random_smooth(g16, 3);
    const double spec = norm_l2(f);
    const double quad = norm_l2(spectral_to_real(f));
    CHECK(rel_diff(spec, quad) < 1e-12);

    // sin(x1): ||f||_L2^2 = (2 pi)^3 / 2, ||f||_Linf = 1
    SpectralField s = make_sin(g16, {1, 0, 0});
    const double l2 = norm_l2(s);
    CHECK(rel_diff(l2 * l2, std::pow(2.0 * pi, 3) / 2.0) < 1e-12);
    CHECK(rel_diff(norm(s, NormKind::linf()), 1.0) < 1e-12);
}

TEST_CASE("Lambda^s: identity at |xi|=1, semigroup, mean-value gate") {
    SpectralField s = make_sin(g16, {1, 0, 0});
    SpectralField l2s = apply_symbol(s, MultiplierSymbol::fractional_power(2.0));
    for (std::size_t i = 0; i < s.c.size(); ++i)
        CHECK(std::abs(l2s.c[i] - s.c[i]) < 1e-14);

    SpectralField f = random_smooth(g16, 9);
    SpectralField a =
        apply_symbol(apply_symbol(f, MultiplierSymbol::fractional_power(0.7)),
                     MultiplierSymbol::fractional_power(-1.2));
    SpectralField b = apply_symbol(f, MultiplierSymbol::fractional_power(-0.5));
    double err = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < a.c.size(); ++i) {
        err = std::max(err, std::abs(a.c[i] - b.c[i]));
        scale = std::max(scale, std::abs(b.c[i]));
    }
    CHECK(err < 1e-12 * scale);

    SpectralField biased = f;
    biased.c[0] = cplx(1.0, 0.0);
    CHECK_THROWS_AS(apply_symbol(biased, MultiplierSymbol::fractional_power(-1.0)),
                    mean_value_error);
    CHECK_NOTHROW(apply_symbol(
        biased, MultiplierSymbol::fractional_power(-1.0, ZeroModeRule::annihilate)));
}

TEST_CASE("partial derivative multiplies by i xi") {
    SpectralField s = make_sin(g16, {1, 0, 0});
    SpectralField d = apply_symbol(s, MultiplierSymbol::partial_derivative(0));
    SpectralField c = make_cos(g16, {1, 0, 0});
    for (std::size_t i = 0; i < d.c.size(); ++i)
        CHECK(std::abs(d.c[i] - c.c[i]) < 1e-14);
    SpectralField d2 = apply_symbol(s, MultiplierSymbol::partial_derivative(1));
    for (const cplx& w : d2.c) CHECK(std::abs(w) == 0.0);
}

TEST_CASE("ring projection splits |xi| = 1.5 evenly between rings 0 and 1") {
    // phi(3/2) = 1/2 with the frozen transition bump, so a mode halfway into
    // the overlap belongs half to each ring.
    CHECK(std::abs(lp_phi(1.5) - 0.5) < 1e-15);
    CHECK(std::abs(lp_ring_symbol(0, 1.5) - 0.5) < 1e-15);
    CHECK(std::abs(lp_ring_symbol(1, 1.5) - 0.5) < 1e-15);

    const Grid g(16, 4.0 * pi); // k0 = 1/2, so m = (3,0,0) sits at |xi| = 1.5
    SpectralField f = make_sin(g, {3, 0, 0});
    SpectralField r0 = apply_symbol(f, MultiplierSymbol::ring_projection(0));
    SpectralField r1 = apply_symbol(f, MultiplierSymbol::ring_projection(1));
    double err = 0.0;
    for (std::size_t i = 0; i < f.c.size(); ++i)
        err = std::max(err, std::abs(r0.c[i] + r1.c[i] - f.c[i]));
    CHECK(err < 1e-14);
    for (int j : {-3, -2, -1, 2, 3, 4}) {
        SpectralField rj = apply_symbol(f, MultiplierSymbol::ring_projection(j));
        for (const cplx& w : rj.c) CHECK(std::abs(w) < 1e-15);
    }
}

TEST_CASE("ring symbols sum to exactly 1 at every nonzero wavenumber") {
    const RingRange rr = grid_ring_range(g16);
    RandomStream rs(3, "test.partition_symbols");
    for (int i = 0; i < 200; ++i) {
        const double r = g16.k0() * (1.0 + rs.uniform01() * (g16.n / 2 * std::sqrt(3.0) - 1.0));
        double sum = 0.0;
        for (int j = rr.jmin; j <= rr.jmax; ++j) sum += lp_ring_symbol(j, r);
        CHECK(std::abs(sum - 1.0) < 1e-12);
    }
}

TEST_CASE("partition of unity over the grid's ring range") {
    SpectralField f = random_smooth(g16, 21);
    const RingRange rr = grid_ring_range(g16);
    SpectralField sum(g16);
    for (int j = rr.jmin; j <= rr.jmax; ++j)
        axpy(sum, 1.0, apply_symbol(f, MultiplierSymbol::ring_projection(j)));
    double err = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < f.c.size(); ++i) {
        err = std::max(err, std::abs(sum.c[i] - f.c[i]));
        scale = std::max(scale, std::abs(f.c[i]));
    }
    CHECK(err < 1e-10 * scale);
}

TEST_CASE("dealias mask zeroes every mode above n/3") {
    SpectralField f(g16);
    for (auto& w : f.c) w = cplx(1.0, 0.0);
    SpectralField d = apply_symbol(f, MultiplierSymbol::dealias_mask());
    detail::for_each_mode(g16, [&](std::size_t idx, int mi, int mj, int mk) {
        const bool kept = 3 * std::abs(mi) <= g16.n && 3 * std::abs(mj) <= g16.n &&
                          3 * std::abs(mk) <= g16.n;
        CHECK(std::abs(d.c[idx]) == (kept ? 1.0 : 0.0));
    });
}

TEST_CASE("negative norms: single mode at |xi| = 2") {
    SpectralField f = make_sin(g16, {2, 0, 0});
    const double l2 = norm_l2(f);
    for (double s : {0.25, 0.5, 1.0, 1.4}) {
        CHECK(rel_diff(norm(f, NormKind::neg_sobolev(s)), std::pow(2.0, -s) * l2) < 1e-12);
    }
    // |xi| = 2 sits at the bottom edge of ring 1 where phi_1 = 1.
    CHECK(rel_diff(norm(f, NormKind::neg_besov(1.0)), 0.5 * l2) < 1e-12);
}

TEST_CASE("norm via direct mode sum matches apply_symbol + L2 path") {
    SpectralField f = random_smooth(g16, 33);
    for (double s : {0.75, 1.5, 2.0}) {
        const double direct = norm_sobolev(f, s);
        const double via =
            norm_l2(apply_symbol(f, MultiplierSymbol::fractional_power(s)));
        CHECK(rel_diff(direct, via) < 1e-12);
        const double dneg = norm_neg_sobolev(f, s < 1.5 ? s : 1.2);
        const double vneg = norm_l2(apply_symbol(
            f, MultiplierSymbol::fractional_power(-(s < 1.5 ? s : 1.2))));
        CHECK(rel_diff(dneg, vneg) < 1e-12);
    }
}

TEST_CASE("multinomial identity: grad^l tensor norm equals ||Lambda^l f||") {
    SpectralField f = random_smooth(g16, 5);
    auto d = [&](const SpectralField& h, int axis) {
        return apply_symbol(h, MultiplierSymbol::partial_derivative(axis));
    };
    auto factorial = [](int a) { return a <= 1 ? 1.0 : a == 2 ? 2.0 : 6.0; };
    for (int l : {1, 2, 3}) {
        double tensor_sq = 0.0;
        for (int a1 = 0; a1 <= l; ++a1)
            for (int a2 = 0; a2 + a1 <= l; ++a2) {
                const int a3 = l - a1 - a2;
                SpectralField h = f;
                for (int r = 0; r < a1; ++r) h = d(h, 0);
                for (int r = 0; r < a2; ++r) h = d(h, 1);
                for (int r = 0; r < a3; ++r) h = d(h, 2);
                const double w =
                    factorial(l) / (factorial(a1) * factorial(a2) * factorial(a3));
                const double nm = norm_l2(h);
                tensor_sq += w * nm * nm;
            }
        const double lam = norm_sobolev(f, double(l));
        CHECK(rel_diff(tensor_sq, lam * lam) < 1e-10);
    }
}

TEST_CASE("neg_besov(s) <= 2^s * neg_sobolev(s) across the randomization law") {
    int checked = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        RandomStream rs(seed, "test.besov_bound");
        const double env = double(seed % 3);
        SpectralField f = random_band_limited(g16, 5, env, rs);
        const double s = 0.25 + 1.25 * (double(seed) / 99.0);
        const double besov = norm(f, NormKind::neg_besov(s));
        const double sob = norm(f, NormKind::neg_sobolev(s));
        CHECK(besov <= std::pow(2.0, s) * sob * (1.0 + 1e-12));
        ++checked;
    }
    CHECK(checked == 100);
}

TEST_CASE("l2_pairing: definition, orthogonality, quadrature oracle") {
    SpectralField f = random_smooth(g16, 11);
    const double l2 = norm_l2(f);
    CHECK(rel_diff(l2_pairing(f, f), l2 * l2) < 1e-12);

    SpectralField s = make_sin(g16, {1, 0, 0});
    SpectralField c = make_cos(g16, {1, 0, 0});
    CHECK(std::abs(l2_pairing(s, c)) < 1e-14);

    // independent rectangle-rule oracle
    SpectralField h = random_smooth(g16, 12);
    RealField fr = spectral_to_real(f), hr = spectral_to_real(h);
    double quad = 0.0;
    for (std::size_t i = 0; i < fr.v.size(); ++i) quad += fr.v[i] * hr.v[i];
    quad *= std::pow(g16.dx(), 3);
    CHECK(rel_diff(l2_pairing(f, h), quad) < 1e-12);
    CHECK(rel_diff(l2_pairing(f, h), l2_pairing(h, f)) < 1e-14);

    const Grid other(32, 2.0 * pi);
    SpectralField wrong(other);
    CHECK_THROWS_AS(l2_pairing(f, wrong), shape_error);
}

TEST_CASE("parameter and mean gates") {
    SpectralField f = random_smooth(g16, 2);
    CHECK_THROWS_AS(NormKind::lp(0.5), parameter_error);
    CHECK_THROWS_AS(NormKind::neg_sobolev(0.0), parameter_error);
    SpectralField biased = f;
    biased.c[0] = cplx(0.5, 0.0);
    CHECK_THROWS_AS(norm(biased, NormKind::neg_sobolev(0.5)), mean_value_error);
    CHECK_THROWS_AS(norm(biased, NormKind::neg_besov(0.5)), mean_value_error);
    CHECK_THROWS_AS(Grid(15, 2.0 * pi), parameter_error);
    CHECK_THROWS_AS(Grid(6, 2.0 * pi), parameter_error);
}

TEST_CASE("inhomogeneous H^s helper: single-mode closed forms") {
    // |xi| = 1: every Lambda^l level contributes the L2 norm, so
    // ||f||_{H^m} = sqrt(m+1) ||f||_{L2}.
    SpectralField f = make_sin(g16, {1, 0, 0});
    const double l2 = norm_l2(f);
    CHECK(rel_diff(norm_h_inhom(f, 2.0), std::sqrt(3.0) * l2) < 1e-12);
    CHECK(rel_diff(norm_h_inhom(f, 3.0), 2.0 * l2) < 1e-12);
    CHECK(rel_diff(norm_h_intersect(f, 2.0, 3.0), 2.0 * l2) < 1e-12);
    // fractional order: levels 0,1,2 plus Lambda^2.5, all equal at |xi| = 1
    CHECK(rel_diff(norm_h_inhom(f, 2.5), 2.0 * l2) < 1e-12);
}
