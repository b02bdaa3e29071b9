#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "emx/diagnostics.hpp"
#include "emx/mode_matrix.hpp"
#include "test_helpers.hpp"

using namespace emx;
using namespace emx::testing;

namespace {

const Grid g16(16, 2.0 * pi);
const ModelParams default_params;

PlasmaState random_consistent_state(const Grid& g, std::uint64_t seed, double amp) {
    InitialDataSpec spec;
    spec.amplitude = amp;
    spec.seed = seed;
    spec.max_mode = std::min(4, g.dealias_mode());
    return make_initial_data(spec, g, default_params);
}

} // namespace

TEST_CASE("energy report: equilibrium and single-mode closed forms") {
    PlasmaState eq(g16);
    const EnergyReport r0 = energy_report(eq, 4);
    CHECK(r0.E_N == 0.0);
    CHECK(r0.D_N == 0.0);
    CHECK(r0.min_1pn == doctest::Approx(1.0));

    // n = delta sin(x1), L = 2pi, N = 3: every level contributes equally at
    // |xi| = 1, so E_3 = 4 delta^2 (2pi)^3/2, and D_3 = E_3 since only n is
    // populated (n carries full levels in both sums).
    const double delta = 1e-3;
    PlasmaState s(g16);
    s.n = make_sin(g16, {1, 0, 0}, delta);
    const EnergyReport r = energy_report(s, 3);
    const double unit = delta * delta * std::pow(2.0 * pi, 3) / 2.0;
    CHECK(rel_diff(r.E_N, 4.0 * unit) < 1e-12);
    CHECK(rel_diff(r.D_N, r.E_N) < 1e-12);
    for (int l = 0; l <= 3; ++l) CHECK(rel_diff(r.level_all[l] * r.level_all[l], unit) < 1e-12);
}

TEST_CASE("energy report: B-only mode exposes the regularity-loss structure") {
    PlasmaState s(g16);
    s.B[2] = make_sin(g16, {1, 0, 0}, 1e-3); // |xi| = 1, divergence-free
    const int N = 3;
    const EnergyReport r = energy_report(s, N);
    const double unit = norm_l2(s.B[2]) * norm_l2(s.B[2]);
    // E counts levels 0..N of B; D only levels 1..N-1
    CHECK(rel_diff(r.E_N, (N + 1) * unit) < 1e-12);
    CHECK(rel_diff(r.D_N, (N - 1) * unit) < 1e-12);
    CHECK(r.D_N < r.E_N);
}

TEST_CASE("energy report: two independent computation routes agree") {
    PlasmaState s = random_consistent_state(g16, 5, 1e-2);
    const int N = 4;
    const EnergyReport r = energy_report(s, N);

    // oracle route: direct Lambda-weighted mode sum, per field
    double e_direct = 0.0;
    s.for_each_field([&](const SpectralField& f) {
        for (int l = 0; l <= N; ++l) {
            const double v = norm_sobolev(f, double(l));
            e_direct += v * v;
        }
    });
    CHECK(rel_diff(r.E_N, e_direct) < 1e-12);

    double from_levels = 0.0;
    for (double v : r.level_all) from_levels += v * v;
    CHECK(rel_diff(r.E_N, from_levels) < 1e-12);
}

TEST_CASE("energy and dissipation are monotone in N, D <= E always") {
    PlasmaState s = random_consistent_state(g16, 8, 1e-2);
    double prevE = -1.0, prevD = -1.0;
    for (int N = 0; N <= 5; ++N) {
        const EnergyReport r = energy_report(s, N);
        CHECK(r.E_N >= prevE);
        CHECK(r.D_N >= prevD);
        CHECK(r.D_N <= r.E_N * (1.0 + 1e-12));
        prevE = r.E_N;
        prevD = r.D_N;
    }
    CHECK_THROWS_AS(energy_report(s, 100), resolution_error);
}

TEST_CASE("window functionals: equilibrium zeros and the gradient-pair sign") {
    PlasmaState eq(g16);
    const WindowFunctionals w0 = window_functionals(eq, 0);
    CHECK(w0.E_window == 0.0);
    CHECK(w0.D_window == 0.0);
    CHECK(w0.E_tilde == 0.0);

    // u = grad g, n = g: cross_n = sum_l ||grad^{l+1} g||^2 > 0
    SpectralField gpot = random_smooth(g16, 12, 3);
    scale(gpot, 1e-2 / norm_l2(gpot));
    PlasmaState s(g16);
    s.n = gpot;
    for (int a = 0; a < 3; ++a)
        s.u[a] = apply_symbol(gpot, MultiplierSymbol::partial_derivative(a));
    const int k = 0;
    const WindowFunctionals w = window_functionals(s, k);
    double expect = 0.0;
    for (int l = k; l <= k + 1; ++l) {
        const double v = norm_sobolev(gpot, double(l + 1));
        expect += v * v;
    }
    CHECK(rel_diff(w.cross_n, expect) < 1e-12);
    CHECK(w.cross_n > 0.0);
}

TEST_CASE("window cross terms match the multiplier + pairing route") {
    PlasmaState s = random_consistent_state(g16, 21, 1e-2);
    const int k = 1;
    const WindowFunctionals w = window_functionals(s, k);

    auto lam = [&](const SpectralField& f, double l) {
        return apply_symbol(f, MultiplierSymbol::fractional_power(l, ZeroModeRule::annihilate));
    };
    double cn = 0.0, ce = 0.0, cb = 0.0;
    for (int l = k; l <= k + 1; ++l)
        for (int a = 0; a < 3; ++a) {
            cn += l2_pairing(lam(s.u[a], l),
                             lam(apply_symbol(s.n, MultiplierSymbol::partial_derivative(a)),
                                 l));
            ce += l2_pairing(lam(s.u[a], l), lam(s.E[a], l));
        }
    for (int a = 0; a < 3; ++a) {
        const int bb = (a + 1) % 3, cc = (a + 2) % 3;
        SpectralField curl =
            apply_symbol(s.B[cc], MultiplierSymbol::partial_derivative(bb));
        axpy(curl, -1.0, apply_symbol(s.B[bb], MultiplierSymbol::partial_derivative(cc)));
        cb += l2_pairing(lam(s.E[a], k), lam(curl, k));
    }
    CHECK(rel_diff(w.cross_n, cn) < 1e-10);
    CHECK(rel_diff(w.cross_E, ce) < 1e-10);
    CHECK(rel_diff(w.cross_B, cb) < 1e-10);
    CHECK(w.E_tilde ==
          doctest::Approx(w.E_window + w.eps * (w.cross_n + w.cross_E - w.eta * w.cross_B)));
}

TEST_CASE("instant energy is equivalent to the window energy on small states") {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        PlasmaState s = random_consistent_state(g16, seed + 1000, 1e-3);
        const WindowFunctionals w = window_functionals(s, 0, 0.05, 0.1);
        CHECK(w.E_tilde >= 0.5 * w.E_window);
        CHECK(w.E_tilde <= 1.5 * w.E_window);
    }
}

TEST_CASE("negative norm tracking: values, ranges, surrogate zero-mode policy") {
    PlasmaState eq(g16);
    CHECK(track_negative_norms(eq, 0.5, false).value == 0.0);

    PlasmaState s(g16);
    s.u[0] = make_sin(g16, {2, 0, 0}, 1e-3); // |xi| = 2
    const NormTrack t = track_negative_norms(s, 0.5, false);
    CHECK(rel_diff(t.value, std::pow(2.0, -0.5) * norm_l2(s.u[0])) < 1e-12);

    // ring-supported: |xi| = 2 sits at the bottom edge of ring 1 (phi_1 = 1)
    const NormTrack tb = track_negative_norms(s, 1.5, true);
    CHECK(rel_diff(tb.value, std::pow(2.0, -1.5) * norm_l2(s.u[0])) < 1e-12);

    CHECK_THROWS_AS(track_negative_norms(s, 1.5, false), parameter_error);
    CHECK_THROWS_AS(track_negative_norms(s, 1.6, true), parameter_error);

    // strict mode rejects a biased field; the surrogate drops the zero mode
    PlasmaState biased = s;
    biased.theta.c[0] = cplx(1e-3, 0.0);
    CHECK_THROWS_AS(track_negative_norms(biased, 0.5, false, false), mean_value_error);
    const NormTrack ts = track_negative_norms(biased, 0.5, false, true);
    CHECK(rel_diff(ts.value, t.value) < 1e-12);
}

TEST_CASE("lyapunov check: zero trajectory, growing counterexample, bisection") {
    std::vector<LyapunovSample> flat;
    for (int i = 0; i <= 30; ++i) flat.push_back({0.1 * i, 0.0, 0.0});
    const LyapunovReport r0 = lyapunov_check(flat, 0.01);
    CHECK(r0.violations.empty());
    CHECK(r0.lambda_max == 64.0);

    // growing series E = e^t: every interior sample violates
    std::vector<LyapunovSample> grow;
    for (int i = 0; i <= 30; ++i) grow.push_back({0.1 * i, std::exp(0.1 * i), 1.0});
    const LyapunovReport rg = lyapunov_check(grow, 0.01);
    CHECK(rg.violations.size() == grow.size() - 2);
    CHECK(rg.lambda_max == 0.0);

    // decaying E = e^{-t} with D = E: dE/dt = -E, so violations start once
    // lambda exceeds ~1; bisection should land near 1
    std::vector<LyapunovSample> decay;
    for (int i = 0; i <= 60; ++i) {
        const double t = 0.05 * i;
        decay.push_back({t, std::exp(-t), std::exp(-t)});
    }
    const LyapunovReport rd = lyapunov_check(decay, 0.01, 0.0);
    CHECK(rd.violations.empty());
    CHECK(rd.lambda_max > 0.9);
    CHECK(rd.lambda_max < 1.1);

    CHECK_THROWS_AS(lyapunov_check({{0.0, 1.0, 1.0}, {0.1, 1.0, 1.0}}, 0.01),
                    insufficient_data_error);
}

TEST_CASE("lyapunov holds along a linear-oracle trajectory at k = 0") {
    PlasmaState s = random_consistent_state(g16, 77, 1.0);
    state_scale(s, 1e-3 / state_l2(s));
    std::vector<LyapunovSample> series;
    for (int i = 0; i <= 40; ++i) {
        const PlasmaState y = linear_oracle_evolve(s, 0.1 * i, default_params);
        const WindowFunctionals w = window_functionals(y, 0);
        series.push_back({0.1 * i, w.E_tilde, w.D_window});
    }
    const LyapunovReport rep = lyapunov_check(series, 0.01);
    CHECK(rep.violations.empty());
    CHECK(rep.lambda_max >= 0.01);
}
