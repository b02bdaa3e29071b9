// Acceptance suite: runs every gate criterion at its stated tolerance and
// prints one PASS/FAIL line per criterion. Exit code = number of failed
// criteria. Criterion 6 carries a known red half: the ring-discrete Besov
// interpolation does not admit constant 1 (see README, "Known red check");
// it is asserted as specified anyway rather than weakened.

#include <chrono>
#include <cstdio>

#include "emx/drivers.hpp"

using namespace emx;

namespace {

int failures = 0;

void report(int num, const char* name, bool pass, const std::string& detail) {
    std::printf("[%s] criterion %d: %s — %s\n", pass ? "PASS" : "FAIL", num, name,
                detail.c_str());
    std::fflush(stdout);
    if (!pass) ++failures;
}

double now() {
    using clk = std::chrono::steady_clock;
    static const clk::time_point t0 = clk::now();
    return std::chrono::duration<double>(clk::now() - t0).count();
}

PlasmaState consistent_state(const Grid& g, std::uint64_t seed, double amp, int max_mode) {
    InitialDataSpec spec;
    spec.seed = seed;
    spec.amplitude = amp;
    spec.max_mode = max_mode;
    return make_initial_data(spec, g, ModelParams{});
}

double rel_state_err(const PlasmaState& a, const PlasmaState& b) {
    PlasmaState d = a;
    state_axpy(d, -1.0, b);
    return state_l2(d) / std::max(state_l2(b), 1e-300);
}

// independent ordinary-least-squares oracle for the criterion-9 arithmetic
double ols_slope(const std::vector<std::pair<double, double>>& series, double t0, double t1) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (auto [t, v] : series) {
        if (t < t0 - 1e-12 || t > t1 + 1e-12) continue;
        const double x = std::log1p(t), y = std::log(v);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++n;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

void criterion1_fixed_point_and_symmetry() {
    const Grid g(16, 2.0 * pi);
    PlasmaState eq(g);
    const double eq_resid = state_max_abs_coeff(rhs(eq, ModelParams{}));

    PlasmaState s = consistent_state(g, 5, 1e-2, 4);
    const PlasmaState t = rhs(s, ModelParams{});
    double herm = 0.0;
    t.for_each_field([&](const SpectralField& f) {
        herm = std::max(herm, hermitian_residual(f));
    });
    report(1, "fixed point & real symmetry", eq_resid <= 1e-15 && herm <= 1e-12,
           "rhs(equilibrium) max coeff " + cfgdet::fmt(eq_resid) + " (<=1e-15), tendency "
           "imag residue " + cfgdet::fmt(herm) + " (<=1e-12)");
}

void criterion2_constraint_conservation() {
    const Grid g(32, 16.0 * pi);
    PlasmaState y = consistent_state(g, 42, 1e-3, 8);
    StepControl ctl;
    ctl.max_dt = 1.0;
    const ModelParams params;
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        y = rk4_step(y, cfl_dt(y, ctl), params);
        const auto [re, rb] = constraint_residual(y);
        worst = std::max(worst, (re + rb) / std::max(state_l2(y), 1e-300));
    }
    report(2, "constraint conservation over 1000 steps (32^3, delta 1e-3)", worst < 1e-8,
           "max pre-projection relative residual " + cfgdet::fmt(worst) + " (<1e-8), t = " +
               cfgdet::fmt(y.time));
}

void criterion3_oracle_and_order() {
    const Grid g(16, 2.0 * pi);
    const ModelParams params;

    PlasmaState s0 = consistent_state(g, 7, 1.0, 4);
    state_scale(s0, 1e-8 / state_l2(s0));
    PlasmaState y = s0;
    for (int i = 0; i < 100; ++i) y = rk4_step(y, 0.01, params);
    const double rel = rel_state_err(y, linear_oracle_evolve(s0, 1.0, params));

    PlasmaState n0 = consistent_state(g, 13, 1.0, 4);
    state_scale(n0, 1e-2 / state_l2(n0));
    auto run = [&](int steps) {
        PlasmaState z = n0;
        for (int i = 0; i < steps; ++i) z = rk4_step(z, 0.5 / steps, params);
        return z;
    };
    const PlasmaState ref = run(160);
    const double order = std::log2(rel_state_err(run(20), ref) / rel_state_err(run(40), ref));

    report(3, "linear-oracle equivalence & RK4 order",
           rel <= 1e-6 && order >= 3.8 && order <= 4.2,
           "rel error vs expm oracle " + cfgdet::fmt(rel) + " (<=1e-6), observed order " +
               cfgdet::fmt(order) + " (4.0 +- 0.2)");
}

RunConfig lyapunov_config() {
    RunConfig cfg;
    cfg.seed = 42;
    cfg.points_per_axis = 32;
    cfg.box_length = 16.0 * pi;
    cfg.init.amplitude = 1e-3;
    cfg.init.max_mode = 8;
    cfg.step.t_end = 20.0;
    cfg.step.sample_every = 0.1;
    cfg.diag_order = 3;
    cfg.window_ks = {0};
    cfg.neg_norms = {{0.5, false}};
    return cfg;
}

TrajectoryRecord lyapunov_record; // shared by criteria 4 and 5

void criterion4_lyapunov() {
    RunConfig cfg = lyapunov_config();
    // normalize E_3(0) to 1e-6 via the linear amplitude scaling
    const PlasmaState probe = make_initial_data(cfg.init, cfg.grid(), cfg.model);
    const double e3 = energy_report(probe, 3).E_N;
    cfg.init.amplitude *= std::sqrt(1e-6 / e3);

    lyapunov_record = run_simulation(cfg);
    const std::vector<LyapunovSample> series = lyapunov_record.lyapunov_series(0);
    const LyapunovReport rep = lyapunov_check(series, 0.01, 1e-3);

    const double E30 = lyapunov_record.samples.front().energy.E_N;
    double maxE3 = 0.0, intD3 = 0.0;
    for (std::size_t i = 0; i < lyapunov_record.samples.size(); ++i) {
        const Sample& s = lyapunov_record.samples[i];
        maxE3 = std::max(maxE3, s.energy.E_N);
        if (i + 1 < lyapunov_record.samples.size()) {
            const Sample& nx = lyapunov_record.samples[i + 1];
            intD3 += 0.5 * (s.energy.D_N + nx.energy.D_N) * (nx.t - s.t);
        }
    }
    const bool pass =
        rep.violations.empty() && maxE3 <= 2.0 * E30 && intD3 <= 10.0 * E30 && E30 <= 1e-6;
    report(4, "Lyapunov structure of the instant energy (k = 0)", pass,
           std::to_string(rep.violations.size()) + " violations at lambda 0.01 (need 0), "
           "lambda_max " + cfgdet::fmt(rep.lambda_max) + ", max E3/E3(0) " +
               cfgdet::fmt(maxE3 / E30) + " (<=2), int D3/E3(0) " + cfgdet::fmt(intD3 / E30) +
               " (<=10), E3(0) " + cfgdet::fmt(E30));
}

void criterion5_negative_norm_preservation() {
    if (lyapunov_record.samples.empty()) {
        report(5, "negative-norm preservation", false, "criterion-4 run unavailable");
        return;
    }
    const double init = lyapunov_record.samples.front().neg_norms.at(0).value;
    double worst = 0.0;
    for (const Sample& s : lyapunov_record.samples)
        worst = std::max(worst, s.neg_norms.at(0).value);
    report(5, "H^{-1/2} norm preserved along the criterion-4 run", worst <= 1.5 * init,
           "max/initial = " + cfgdet::fmt(worst / init) + " (<=1.5)");
}

void criterion6_sharp_inequalities() {
    const Grid sample_grid(24, 2.0 * pi);
    bool pass = true;
    std::string detail;

    // (a) random-field gate at the default tuple, 1000 samples per lemma
    for (Lemma lemma : {Lemma::interp_hs, Lemma::interp_besov}) {
        SampleLaw law;
        law.grid = sample_grid;
        law.count = 1000;
        law.seed = 7;
        const InequalityReport r = verify_inequality(lemma, default_lemma_params(lemma), law);
        const bool ok = r.max_ratio <= 1.0 + 1e-10;
        pass = pass && ok;
        detail += std::string(lemma_name(lemma)) + " max " + cfgdet::fmt(r.max_ratio) +
                  (ok ? " ok; " : " EXCEEDS 1+1e-10; ");
    }
    // tuple sweep at reduced sample count
    for (double s : {0.5, 1.0, 1.5}) {
        for (int ell : {0, 1, 2}) {
            LemmaParams p;
            p.s = s;
            p.ell = ell;
            SampleLaw law;
            law.grid = sample_grid;
            law.count = 200;
            law.seed = 11;
            const double h = verify_inequality(Lemma::interp_hs, p, law).max_ratio;
            const double b = verify_inequality(Lemma::interp_besov, p, law).max_ratio;
            if (h > 1.0 + 1e-10) {
                pass = false;
                detail += "hs(s=" + cfgdet::fmt(s) + ",l=" + std::to_string(ell) + ") max " +
                          cfgdet::fmt(h) + "; ";
            }
            if (b > 1.0 + 1e-10) {
                pass = false;
                detail += "besov(s=" + cfgdet::fmt(s) + ",l=" + std::to_string(ell) +
                          ") max " + cfgdet::fmt(b) + "; ";
            }
        }
    }

    // (b) single-mode saturation: hs on arbitrary modes, besov on dyadic radii
    const Grid g(16, 2.0 * pi);
    double worst_eq = 1.0;
    for (auto m : {std::array<int, 3>{1, 0, 0}, {1, 1, 1}, {0, 3, 2}}) {
        SpectralField f(g);
        const int i = (m[0] + g.n) % g.n, j = (m[1] + g.n) % g.n, k = (m[2] + g.n) % g.n;
        f.c[g.index(i, j, k)] = cplx(0.0, -0.5);
        f.c[g.index((g.n - m[0]) % g.n, (g.n - m[1]) % g.n, (g.n - m[2]) % g.n)] =
            cplx(0.0, 0.5);
        LemmaParams p;
        worst_eq = std::min(worst_eq, inequality_ratio(Lemma::interp_hs, p, f, f));
    }
    for (int mode : {1, 2, 4}) {
        SpectralField f(g);
        f.c[g.index(mode, 0, 0)] = cplx(0.0, -0.5);
        f.c[g.index(g.n - mode, 0, 0)] = cplx(0.0, 0.5);
        LemmaParams p;
        worst_eq = std::min(worst_eq, inequality_ratio(Lemma::interp_besov, p, f, f));
    }
    if (worst_eq < 1.0 - 1e-10) {
        pass = false;
        detail += "single-mode saturation dropped to " + cfgdet::fmt(worst_eq) + "; ";
    } else {
        detail += "single-mode saturation >= 1-1e-10; ";
    }
    if (!pass)
        detail += "(known red half: sup-type Besov interpolation has no constant-1 bound; "
                  "see README)";
    report(6, "sharp interpolation inequalities", pass, detail);
}

void criterion7_calibrated_lemmas() {
    bool pass = true;
    std::string detail;
    for (Lemma lemma : {Lemma::gn, Lemma::commutator, Lemma::riesz, Lemma::lp_besov}) {
        const CalibrationEntry* cal = calibration_for(lemma);
        SampleLaw law;
        law.grid = Grid(24, 2.0 * pi);
        law.count = calibration_samples_per_seed;
        double worst_drift = 0.0;
        for (std::uint64_t seed : calibration_seeds) {
            law.seed = seed;
            const InequalityReport r =
                verify_inequality(lemma, default_lemma_params(lemma), law);
            worst_drift =
                std::max(worst_drift, std::abs(r.max_ratio / cal->frozen_max - 1.0));
        }
        if (worst_drift > calibration_drift_tol) pass = false;
        detail += std::string(lemma_name(lemma)) + " drift " +
                  cfgdet::fmt(100.0 * worst_drift) + "%; ";
    }
    report(7, "unspecified-constant lemmas reproducible across 5 seeds (+-5%)", pass, detail);
}

void criterion8_exponent_algebra() {
    bool pass = true;
    std::string detail;
    auto expect = [&](double got, double want, const char* what) {
        if (std::abs(got - want) > 1e-12) {
            pass = false;
            detail += std::string(what) + " got " + cfgdet::fmt(got) + " want " +
                      cfgdet::fmt(want) + "; ";
        }
    };
    DecayClaim c;
    c.k = 0;
    c.source = RegularitySource::lp;
    c.value = 1.0;
    c.tier = DecayTier::further2;
    expect(predicted_exponent(c), -13.0 / 4.0, "further2 k0 L1");
    c.tier = DecayTier::further1;
    expect(predicted_exponent(c), -5.0 / 4.0, "further1 k0 L1");
    expect(lp_equivalent_s(1.0), 1.5, "s_p(1)");
    for (int k : {0, 1, 2})
        for (double s : {0.0, 0.5, 1.0}) {
            DecayClaim q;
            q.k = k;
            q.source = RegularitySource::hs;
            q.value = s;
            q.tier = DecayTier::basic;
            expect(required_regularity(q), 2.0 * k + 2.0 + s, "N basic");
            expect(predicted_exponent(q), -(k + s) / 2.0, "exp basic");
            q.tier = DecayTier::further1;
            expect(required_regularity(q), 2.0 * k + 4.0 + s, "N further1");
            expect(predicted_exponent(q), -(k + 1.0 + s) / 2.0, "exp further1");
            q.tier = DecayTier::further11;
            expect(required_regularity(q), 2.0 * k + 6.0 + s, "N further11");
            expect(predicted_exponent(q), -(k + 2.0 + s) / 2.0, "exp further11");
            q.tier = DecayTier::further2;
            expect(required_regularity(q), 2.0 * k + 12.0 + s, "N further2");
            expect(predicted_exponent(q), -(k / 2.0 + 7.0 / 4.0 + s), "exp further2");
        }
    bool gated = false;
    try {
        DecayClaim q;
        q.tier = DecayTier::further2;
        predicted_exponent(q, {0.0, 0.0, 1.0});
    } catch (const hypothesis_error&) {
        gated = true;
    }
    if (!gated) {
        pass = false;
        detail += "B_inf gate missing; ";
    }
    report(8, "exponent algebra exact", pass, pass ? "all formula checks exact" : detail);
}

void criterion9_decay_consistency_study() {
    namespace fs = std::filesystem;
    bool pass = true;
    std::string detail;
    std::vector<double> exponents;
    std::string verdict;

    for (std::uint64_t seed : {42ull, 43ull, 44ull}) {
        RunConfig cfg;
        cfg.seed = seed;
        cfg.init.seed = seed;
        cfg.points_per_axis = 48;
        cfg.box_length = 16.0 * pi;
        cfg.init.amplitude = 1e-3;
        cfg.init.max_mode = 8;
        cfg.step.t_end = 8.0;
        cfg.step.sample_every = 0.2;
        cfg.diag_order = 3;
        cfg.window_ks = {};
        cfg.neg_norms = {};
        DecayClaim claim;
        claim.tier = DecayTier::basic;
        claim.k = 0;
        claim.source = RegularitySource::hs;
        claim.value = 0.5;
        claim.window_t0 = 1.0;
        claim.window_t1 = 8.0;
        claim.target = default_target(claim.tier);
        cfg.claims = {claim};
        cfg.output_dir =
            (fs::temp_directory_path() / ("emx_acceptance_decay_" + std::to_string(seed)))
                .string();

        const DecayStudyResult res = drive_decay_study(cfg, cfg.output_dir, "acceptance", true);
        const ojson rep =
            ojson::parse(read_file(fs::path(cfg.output_dir) / "decay_report.json"));

        if (rep["caveat"] != torus_gap_caveat) {
            pass = false;
            detail += "caveat text not verbatim; ";
        }
        if (!rep["claims"][0].contains("fit") || !rep["claims"][0]["fit"].contains("r2")) {
            pass = false;
            detail += "fit/r2 missing; ";
            continue;
        }
        const double fitted = rep["claims"][0]["fit"]["exponent"];
        exponents.push_back(fitted);
        verdict = rep["claims"][0]["verdict"];
        // independent arithmetic check of the reported slope
        const double oracle = ols_slope(res.record.claim_series(0), 1.0, 8.0);
        if (std::abs(oracle - fitted) > 1e-9) {
            pass = false;
            detail += "fit arithmetic mismatch (" + cfgdet::fmt(oracle) + " vs " +
                      cfgdet::fmt(fitted) + "); ";
        }
        if (verdict != "consistent" && verdict != "inconsistent") {
            pass = false;
            detail += "unexpected verdict " + verdict + "; ";
        }
    }
    if (exponents.size() == 3) {
        const double spread = *std::max_element(exponents.begin(), exponents.end()) -
                              *std::min_element(exponents.begin(), exponents.end());
        if (spread > 0.1) {
            pass = false;
            detail += "seed spread " + cfgdet::fmt(spread) + " > 0.1; ";
        }
        detail += "fitted {" + cfgdet::fmt(exponents[0]) + ", " + cfgdet::fmt(exponents[1]) +
                  ", " + cfgdet::fmt(exponents[2]) + "} vs predicted -0.25, spread " +
                  cfgdet::fmt(spread) + ", verdict " + verdict +
                  " (band miss downgrades, never fails)";
    }
    report(9, "decay consistency study (labeled non-exact)", pass, detail);
}

} // namespace

int main() {
    std::printf("acceptance suite, version %s\n", version_string);
    const struct {
        void (*fn)();
    } criteria[] = {{criterion1_fixed_point_and_symmetry},
                    {criterion2_constraint_conservation},
                    {criterion3_oracle_and_order},
                    {criterion4_lyapunov},
                    {criterion5_negative_norm_preservation},
                    {criterion6_sharp_inequalities},
                    {criterion7_calibrated_lemmas},
                    {criterion8_exponent_algebra},
                    {criterion9_decay_consistency_study}};
    for (const auto& c : criteria) {
        const double t0 = now();
        c.fn();
        std::printf("         (%.1fs)\n", now() - t0);
    }
    std::printf("%d of 9 criteria failed\n", failures);
    return failures;
}
