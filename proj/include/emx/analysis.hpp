#pragma once

#include <limits>
#include <string>
#include <vector>

#include "emx/diagnostics.hpp"
#include "emx/random_field.hpp"

namespace emx {

// Shared wording for every decay report; reproduced verbatim in the docs.
inline constexpr const char* torus_gap_caveat =
    "Algebraic decay rates are whole-space statements driven by a continuum of low "
    "frequencies; on a finite periodic box the long-time decay is exponential at the "
    "rate of the slowest resolved mode. Exponent fits are therefore restricted to the "
    "pre-recurrence window t <= L/2 and reported as consistency checks against the "
    "predicted rates, not as reproductions of them.";

// --- decay claims -----------------------------------------------------------

enum class DecayTier { basic, further1, further11, further2 };
enum class RegularitySource { hs, besov, lp };
enum class TargetSeries { all_fields, no_magnetic, density, density_temp_divu };

struct DecayClaim {
    DecayTier tier = DecayTier::basic;
    int k = 0;
    RegularitySource source = RegularitySource::hs;
    double value = 0.5; // s for hs/besov, p for lp
    TargetSeries target = TargetSeries::all_fields;
    double window_t0 = 1.0, window_t1 = 8.0;
};

inline TargetSeries default_target(DecayTier tier) {
    switch (tier) {
    case DecayTier::basic: return TargetSeries::all_fields;
    case DecayTier::further1: return TargetSeries::no_magnetic;
    case DecayTier::further11: return TargetSeries::density;
    case DecayTier::further2: return TargetSeries::density_temp_divu;
    }
    return TargetSeries::all_fields;
}

// s_p = 3(1/p - 1/2): the negative-Sobolev order equivalent to L^p data.
inline double lp_equivalent_s(double p) {
    if (p < 1.0 || p > 2.0)
        throw parameter_error("decay claim: Lp source needs p in [1,2]");
    return 3.0 * (1.0 / p - 0.5);
}

inline double claim_regularity_s(const DecayClaim& c) {
    switch (c.source) {
    case RegularitySource::hs:
        if (c.value < 0.0 || c.value >= 1.5)
            throw parameter_error("decay claim: hs source needs s in [0, 3/2)");
        return c.value;
    case RegularitySource::besov:
        if (!(c.value > 0.0) || c.value > 1.5)
            throw parameter_error("decay claim: besov source needs s in (0, 3/2]");
        return c.value;
    case RegularitySource::lp: return lp_equivalent_s(c.value);
    }
    return 0.0;
}

// Minimum energy order N demanded by each tier's hypotheses.
inline double required_regularity(const DecayClaim& c) {
    const double s = claim_regularity_s(c);
    switch (c.tier) {
    case DecayTier::basic: return 2.0 * c.k + 2.0 + s;
    case DecayTier::further1: return 2.0 * c.k + 4.0 + s;
    case DecayTier::further11: return 2.0 * c.k + 6.0 + s;
    case DecayTier::further2: return 2.0 * c.k + 12.0 + s;
    }
    return 0.0;
}

inline double predicted_exponent(const DecayClaim& c,
                                 const std::array<double, 3>& b_infinity = {0.0, 0.0, 0.0}) {
    if (c.k < 0) throw parameter_error("decay claim: k must be >= 0");
    const double s = claim_regularity_s(c);
    if (c.tier == DecayTier::further2) {
        const double b2 = b_infinity[0] * b_infinity[0] + b_infinity[1] * b_infinity[1] +
                          b_infinity[2] * b_infinity[2];
        if (b2 != 0.0)
            throw hypothesis_error(
                "decay claim: the (n,theta,div u) tier requires B_infinity = 0");
    }
    switch (c.tier) {
    case DecayTier::basic: return -(c.k + s) / 2.0;
    case DecayTier::further1: return -(c.k + 1.0 + s) / 2.0;
    case DecayTier::further11: return -(c.k + 2.0 + s) / 2.0;
    case DecayTier::further2: return -(c.k / 2.0 + 7.0 / 4.0 + s);
    }
    return 0.0;
}

// ||grad^k (target set)||_{L2} for one state; div u is derived on demand.
inline double claim_series_value(const PlasmaState& st, const DecayClaim& c) {
    check_resolution(st.grid, c.k, "claim_series_value");
    const double l = double(c.k);
    auto sq = [&](const SpectralField& f) {
        const double v = norm_sobolev(f, l);
        return v * v;
    };
    double acc = 0.0;
    switch (c.target) {
    case TargetSeries::all_fields:
        acc = sq(st.n) + sq(st.theta) + vec3_norm_l2_sq(st.u, l) + vec3_norm_l2_sq(st.E, l) +
              vec3_norm_l2_sq(st.B, l);
        break;
    case TargetSeries::no_magnetic:
        acc = sq(st.n) + sq(st.theta) + vec3_norm_l2_sq(st.u, l) + vec3_norm_l2_sq(st.E, l);
        break;
    case TargetSeries::density: acc = sq(st.n); break;
    case TargetSeries::density_temp_divu: {
        SpectralField divu(st.grid);
        for (int a = 0; a < 3; ++a)
            axpy(divu, 1.0, apply_symbol(st.u[a], MultiplierSymbol::partial_derivative(a)));
        acc = sq(st.n) + sq(st.theta) + sq(divu);
        break;
    }
    }
    return std::sqrt(acc);
}

// --- decay-rate fitting -----------------------------------------------------

struct DecayFit {
    double exponent = 0.0; // slope of log v against log(1+t)
    double stderr_ = 0.0;
    double r2 = 0.0;
    double exp_rate = 0.0; // slope of log v against t (exponential model)
    double exp_r2 = 0.0;   // its R^2, for flagging non-power-law series
    int count = 0;
    double t0 = 0.0, t1 = 0.0;
};

inline DecayFit fit_decay_exponent(const std::vector<std::pair<double, double>>& series,
                                   double t0, double t1) {
    std::vector<double> lx, ly, tx;
    for (const auto& [t, v] : series) {
        if (t < t0 - 1e-12 || t > t1 + 1e-12) continue;
        if (!(v > 0.0))
            throw log_domain_error("fit_decay_exponent: nonpositive value at t = " +
                                   std::to_string(t));
        lx.push_back(std::log1p(t));
        tx.push_back(t);
        ly.push_back(std::log(v));
    }
    const int n = int(lx.size());
    if (n < 10)
        throw insufficient_data_error("fit_decay_exponent: need >= 10 samples in window, got " +
                                      std::to_string(n));
    auto regress = [n](const std::vector<double>& x, const std::vector<double>& y, double& slope,
                       double& se, double& r2) {
        double mx = 0.0, my = 0.0;
        for (int i = 0; i < n; ++i) {
            mx += x[i];
            my += y[i];
        }
        mx /= n;
        my /= n;
        double sxx = 0.0, sxy = 0.0, syy = 0.0;
        for (int i = 0; i < n; ++i) {
            sxx += (x[i] - mx) * (x[i] - mx);
            sxy += (x[i] - mx) * (y[i] - my);
            syy += (y[i] - my) * (y[i] - my);
        }
        slope = sxy / sxx;
        double ssr = 0.0;
        for (int i = 0; i < n; ++i) {
            const double resid = (y[i] - my) - slope * (x[i] - mx);
            ssr += resid * resid;
        }
        se = n > 2 ? std::sqrt(ssr / (n - 2) / sxx) : 0.0;
        r2 = syy > 0.0 ? 1.0 - ssr / syy : 1.0;
    };
    DecayFit fit;
    fit.count = n;
    fit.t0 = t0;
    fit.t1 = t1;
    regress(lx, ly, fit.exponent, fit.stderr_, fit.r2);
    double dummy_se = 0.0;
    regress(tx, ly, fit.exp_rate, dummy_se, fit.exp_r2);
    return fit;
}

enum class ClaimVerdict { consistent, inconsistent, unsupported, hypothesis_violated };

inline const char* verdict_name(ClaimVerdict v) {
    switch (v) {
    case ClaimVerdict::consistent: return "consistent";
    case ClaimVerdict::inconsistent: return "inconsistent";
    case ClaimVerdict::unsupported: return "unsupported";
    case ClaimVerdict::hypothesis_violated: return "hypothesis-violated";
    }
    return "?";
}

// --- randomized verification of the analytic inequalities -------------------

enum class Lemma { interp_hs, interp_besov, gn, commutator, composition, riesz, lp_besov };

inline const char* lemma_name(Lemma l) {
    switch (l) {
    case Lemma::interp_hs: return "interp_hs";
    case Lemma::interp_besov: return "interp_besov";
    case Lemma::gn: return "gn";
    case Lemma::commutator: return "commutator";
    case Lemma::composition: return "composition";
    case Lemma::riesz: return "riesz";
    case Lemma::lp_besov: return "lp_besov";
    }
    return "?";
}

struct LemmaParams {
    double s = 0.5; // interp_*, riesz, lp_besov
    int ell = 1;    // interp_* level
    int k = 2;      // commutator / composition order
    // Gagliardo-Nirenberg: ||grad^alpha f||_Lp <= C ||grad^m f||^{1-th} ||grad^l f||^th
    double gn_alpha = 1.0, gn_m = 0.0, gn_l = 2.0, gn_p = 2.0;
};

struct SampleLaw {
    int count = 1000;
    std::uint64_t seed = 7;
    Grid grid{24, 2.0 * pi};
    // spectral envelopes |xi|^-a cycled per sample: rough through smooth
    std::array<double, 3> envelopes{0.0, 1.0, 2.0};
};

struct InequalityReport {
    Lemma lemma = Lemma::interp_hs;
    LemmaParams params;
    int samples = 0;
    std::uint64_t seed = 0;
    double max_ratio = 0.0;
    double mean_ratio = 0.0;
    double theta = 0.0; // interpolation exponent where applicable
};

namespace detail {

inline double gn_theta(const LemmaParams& lp) {
    const double lhs_scale = lp.gn_alpha + 3.0 * (0.5 - 1.0 / lp.gn_p);
    if (lp.gn_l == lp.gn_m) throw parameter_error("gn: m and l must differ");
    const double th = (lhs_scale - lp.gn_m) / (lp.gn_l - lp.gn_m);
    const bool pinf = std::isinf(lp.gn_p);
    if (th < -1e-12 || th > 1.0 + 1e-12 || (pinf && (th <= 0.0 || th >= 1.0)))
        throw parameter_error("gn: interpolation exponent out of range");
    return th;
}

inline RealField product(const RealField& a, const RealField& b) {
    RealField r(a.grid);
    for (std::size_t i = 0; i < r.v.size(); ++i) r.v[i] = a.v[i] * b.v[i];
    return r;
}

inline double grad_linf(const SpectralField& f) {
    RealField d0 = spectral_to_real(apply_symbol(f, MultiplierSymbol::partial_derivative(0)));
    RealField d1 = spectral_to_real(apply_symbol(f, MultiplierSymbol::partial_derivative(1)));
    RealField d2 = spectral_to_real(apply_symbol(f, MultiplierSymbol::partial_derivative(2)));
    double m = 0.0;
    for (std::size_t i = 0; i < d0.v.size(); ++i)
        m = std::max(m, std::sqrt(d0.v[i] * d0.v[i] + d1.v[i] * d1.v[i] + d2.v[i] * d2.v[i]));
    return m;
}

} // namespace detail

// Ratio LHS / RHS-without-constant for one sampled field (pair). The sharp
// interpolation lemmas must give ratios <= 1; the others are only bounded.
inline double inequality_ratio(Lemma lemma, const LemmaParams& lp, const SpectralField& f,
                               const SpectralField& g) {
    switch (lemma) {
    case Lemma::interp_hs: {
        const double th = 1.0 / (lp.ell + 1.0 + lp.s);
        const double lhs = norm_sobolev(f, lp.ell);
        const double rhs = std::pow(norm_sobolev(f, lp.ell + 1.0), 1.0 - th) *
                           std::pow(norm_neg_sobolev(f, lp.s), th);
        return rhs > 0.0 ? lhs / rhs : (lhs == 0.0 ? 0.0 : std::numeric_limits<double>::infinity());
    }
    case Lemma::interp_besov: {
        const double th = 1.0 / (lp.ell + 1.0 + lp.s);
        const double lhs = norm_sobolev(f, lp.ell);
        const double rhs = std::pow(norm_sobolev(f, lp.ell + 1.0), 1.0 - th) *
                           std::pow(norm_neg_besov(f, lp.s), th);
        return rhs > 0.0 ? lhs / rhs : (lhs == 0.0 ? 0.0 : std::numeric_limits<double>::infinity());
    }
    case Lemma::gn: {
        const double th = detail::gn_theta(lp);
        const SpectralField lf = apply_symbol(
            f, MultiplierSymbol::fractional_power(lp.gn_alpha, ZeroModeRule::annihilate));
        const double lhs = std::isinf(lp.gn_p) ? linf_grid(spectral_to_real(lf))
                                               : norm_lp(spectral_to_real(lf), lp.gn_p);
        const double rhs = std::pow(norm_sobolev(f, lp.gn_m), 1.0 - th) *
                           std::pow(norm_sobolev(f, lp.gn_l), th);
        return rhs > 0.0 ? lhs / rhs : (lhs == 0.0 ? 0.0 : std::numeric_limits<double>::infinity());
    }
    case Lemma::commutator: {
        if (lp.k < 1) throw parameter_error("commutator: k must be >= 1");
        const RealField gr = spectral_to_real(g), hr = spectral_to_real(f);
        const SpectralField gh = real_to_spectral(detail::product(gr, hr));
        const SpectralField lam_h = apply_symbol(
            f, MultiplierSymbol::fractional_power(double(lp.k), ZeroModeRule::annihilate));
        const SpectralField g_lam_h =
            real_to_spectral(detail::product(gr, spectral_to_real(lam_h)));
        SpectralField comm = apply_symbol(
            gh, MultiplierSymbol::fractional_power(double(lp.k), ZeroModeRule::annihilate));
        axpy(comm, -1.0, g_lam_h);
        const double lhs = norm_l2(comm);
        const double rhs = detail::grad_linf(g) * norm_sobolev(f, double(lp.k - 1)) +
                           norm_sobolev(g, double(lp.k)) * linf_grid(hr);
        return rhs > 0.0 ? lhs / rhs : (lhs == 0.0 ? 0.0 : std::numeric_limits<double>::infinity());
    }
    case Lemma::composition: {
        // f(n) = n/(1+n): f ~ n with bounded derivatives on |n| < 1
        RealField nr = spectral_to_real(f);
        double mx = linf_grid(nr);
        if (mx > 0.4)
            for (double& x : nr.v) x *= 0.4 / mx;
        RealField fn(nr.grid);
        for (std::size_t i = 0; i < nr.v.size(); ++i) fn.v[i] = nr.v[i] / (1.0 + nr.v[i]);
        const double lhs = norm_sobolev(real_to_spectral(fn), double(lp.k));
        const double rhs = norm_sobolev(real_to_spectral(nr), double(lp.k));
        return rhs > 0.0 ? lhs / rhs : (lhs == 0.0 ? 0.0 : std::numeric_limits<double>::infinity());
    }
    case Lemma::riesz: {
        if (!(lp.s > 0.0) || lp.s >= 1.5)
            throw parameter_error("riesz: s in (0, 3/2) required");
        const double p = 1.0 / (0.5 + lp.s / 3.0);
        const double lhs = norm_neg_sobolev(f, lp.s);
        const double rhs = norm_lp(spectral_to_real(f), p);
        return rhs > 0.0 ? lhs / rhs : (lhs == 0.0 ? 0.0 : std::numeric_limits<double>::infinity());
    }
    case Lemma::lp_besov: {
        if (!(lp.s > 0.0) || lp.s > 1.5)
            throw parameter_error("lp_besov: s in (0, 3/2] required");
        const double p = 1.0 / (0.5 + lp.s / 3.0);
        const double lhs = norm_neg_besov(f, lp.s);
        const double rhs = norm_lp(spectral_to_real(f), p);
        return rhs > 0.0 ? lhs / rhs : (lhs == 0.0 ? 0.0 : std::numeric_limits<double>::infinity());
    }
    }
    return 0.0;
}

// Randomized sweep. Fields are band-limited complex-Gaussian draws with the
// law's power-law envelopes; product-bearing lemmas (commutator, composition)
// sample at n/4 so that quadratic products are exactly representable on the
// grid, the rest use the full dealiased band.
inline InequalityReport verify_inequality(Lemma lemma, const LemmaParams& params,
                                          const SampleLaw& law) {
    InequalityReport rep;
    rep.lemma = lemma;
    rep.params = params;
    rep.seed = law.seed;
    if (lemma == Lemma::interp_hs || lemma == Lemma::interp_besov)
        rep.theta = 1.0 / (params.ell + 1.0 + params.s);
    if (lemma == Lemma::gn) rep.theta = detail::gn_theta(params);

    const bool needs_product = lemma == Lemma::commutator || lemma == Lemma::composition;
    const int max_mode = needs_product ? law.grid.n / 4 : law.grid.dealias_mode();
    RandomStream rs(law.seed, std::string("verify.") + lemma_name(lemma));

    double acc = 0.0;
    for (int i = 0; i < law.count; ++i) {
        const double env = law.envelopes[i % law.envelopes.size()];
        const SpectralField f = random_band_limited(law.grid, max_mode, env, rs);
        SpectralField g;
        if (lemma == Lemma::commutator) g = random_band_limited(law.grid, max_mode, env, rs);
        const double r = inequality_ratio(lemma, params, f, g);
        rep.max_ratio = std::max(rep.max_ratio, r);
        acc += r;
        ++rep.samples;
    }
    rep.mean_ratio = rep.samples ? acc / rep.samples : 0.0;
    return rep;
}

} // namespace emx
