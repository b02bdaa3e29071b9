#pragma once

#include <vector>

#include "emx/initial_data.hpp"
#include "emx/model.hpp"

namespace emx {

// Derivative-level L2 norms of field groups, computed in one mode sweep:
// level[l] = sum over the group of || Lambda^l f ||^2, l = 0..N.
// For integer l this is the full grad^l tensor norm squared.
struct LevelSums {
    std::vector<double> nut; // (n, u, theta)
    std::vector<double> e;   // E
    std::vector<double> b;   // B
};

inline LevelSums level_sums(const PlasmaState& s, int levels) {
    LevelSums ls;
    ls.nut.assign(levels + 1, 0.0);
    ls.e.assign(levels + 1, 0.0);
    ls.b.assign(levels + 1, 0.0);
    const Grid& g = s.grid;
    const double k0sq = g.k0() * g.k0();
    detail::for_each_mode(g, [&](std::size_t idx, int mi, int mj, int mk) {
        const double r2 = k0sq * (double(mi) * mi + double(mj) * mj + double(mk) * mk);
        double nut = std::norm(s.n.c[idx]) + std::norm(s.theta.c[idx]);
        double e = 0.0, b = 0.0;
        for (int a = 0; a < 3; ++a) {
            nut += std::norm(s.u[a].c[idx]);
            e += std::norm(s.E[a].c[idx]);
            b += std::norm(s.B[a].c[idx]);
        }
        double w = 1.0;
        for (int l = 0; l <= levels; ++l) {
            ls.nut[l] += nut * w;
            ls.e[l] += e * w;
            ls.b[l] += b * w;
            w *= r2;
        }
    });
    const double L3 = g.length * g.length * g.length;
    for (int l = 0; l <= levels; ++l) {
        ls.nut[l] *= L3;
        ls.e[l] *= L3;
        ls.b[l] *= L3;
    }
    return ls;
}

// E_N = sum_{l<=N} ||grad^l (n,u,th,E,B)||^2
// D_N = sum_{l<=N} ||grad^l (n,u,th)||^2 + sum_{l<=N-1} ||grad^l E||^2
//       + sum_{1<=l<=N-1} ||grad^l B||^2
// D_N omits the top-order electromagnetic levels and zeroth-order B: the
// regularity-loss structure, so D_N <= E_N always.
struct EnergyReport {
    double time = 0.0;
    int N = 0;
    double E_N = 0.0;
    double D_N = 0.0;
    std::vector<double> level_all; // ||grad^l(n,u,th,E,B)||_{L2}, l = 0..N
    double r_E = 0.0, r_B = 0.0;
    double min_1pn = 1.0, min_1pth = 1.0;
};

inline void check_resolution(const Grid& g, int order, const char* what) {
    if (order > g.dealias_mode())
        throw resolution_error(std::string(what) + ": derivative order " +
                               std::to_string(order) + " exceeds n/3 = " +
                               std::to_string(g.dealias_mode()));
}

inline EnergyReport energy_report(const PlasmaState& s, int N) {
    if (N < 0) throw parameter_error("energy_report: N must be >= 0");
    check_resolution(s.grid, N, "energy_report");
    const LevelSums ls = level_sums(s, N);
    EnergyReport r;
    r.time = s.time;
    r.N = N;
    r.level_all.resize(N + 1);
    for (int l = 0; l <= N; ++l) {
        const double all = ls.nut[l] + ls.e[l] + ls.b[l];
        r.level_all[l] = std::sqrt(all);
        r.E_N += all;
        if (l <= N) r.D_N += ls.nut[l];
        if (l <= N - 1) r.D_N += ls.e[l];
        if (l >= 1 && l <= N - 1) r.D_N += ls.b[l];
    }
    const auto [re, rb] = constraint_residual(s);
    r.r_E = re;
    r.r_B = rb;
    const auto [mn, mt] = min_one_plus_fields(s);
    r.min_1pn = mn;
    r.min_1pth = mt;
    return r;
}

// Window functionals with minimum derivative counts, and the instant energy
// candidate built from the interactive cross terms:
//   E_win  = sum_{l=k}^{k+2} ||grad^l (n,u,th,E,B)||^2
//   D_win  = sum_{l=k}^{k+2} ||grad^l (n,u,th)||^2
//            + sum_{l=k}^{k+1} ||grad^l E||^2 + ||grad^{k+1} B||^2
//   cross_n = sum_{l=k}^{k+1} int grad^l u . grad grad^l n
//   cross_E = sum_{l=k}^{k+1} int grad^l u . grad^l E
//   cross_B = int grad^k E . grad^k curl B
//   E_tilde = E_win + eps (cross_n + cross_E - eta cross_B)
struct WindowFunctionals {
    int k = 0;
    double eps = 0.05, eta = 0.1;
    double E_window = 0.0;
    double D_window = 0.0;
    double cross_n = 0.0, cross_E = 0.0, cross_B = 0.0;
    double E_tilde = 0.0;
};

inline WindowFunctionals window_functionals(const PlasmaState& s, int k, double eps = 0.05,
                                            double eta = 0.1) {
    if (k < 0) throw parameter_error("window_functionals: k must be >= 0");
    check_resolution(s.grid, k + 2, "window_functionals");
    WindowFunctionals w;
    w.k = k;
    w.eps = eps;
    w.eta = eta;

    const Grid& g = s.grid;
    const double k0sq = g.k0() * g.k0();
    double e_win = 0.0, d_win = 0.0, cn = 0.0, ce = 0.0, cb = 0.0;
    detail::for_each_mode(g, [&](std::size_t idx, int mi, int mj, int mk) {
        const double r2 = k0sq * (double(mi) * mi + double(mj) * mj + double(mk) * mk);
        double nut = std::norm(s.n.c[idx]) + std::norm(s.theta.c[idx]);
        double e = 0.0, b = 0.0;
        for (int a = 0; a < 3; ++a) {
            nut += std::norm(s.u[a].c[idx]);
            e += std::norm(s.E[a].c[idx]);
            b += std::norm(s.B[a].c[idx]);
        }
        // int grad^l u . grad grad^l n = |xi|^{2l} Re( (i xi n)^* . u ) summed
        const cplx ix[3] = {cplx(0.0, std::sqrt(k0sq) * mi), cplx(0.0, std::sqrt(k0sq) * mj),
                            cplx(0.0, std::sqrt(k0sq) * mk)};
        double u_dot_gradn = 0.0, u_dot_e = 0.0, e_dot_curlb = 0.0;
        for (int a = 0; a < 3; ++a) {
            u_dot_gradn += (s.u[a].c[idx] * std::conj(ix[a] * s.n.c[idx])).real();
            u_dot_e += (s.u[a].c[idx] * std::conj(s.E[a].c[idx])).real();
            const int bb = (a + 1) % 3, cc = (a + 2) % 3;
            const cplx curlb = ix[bb] * s.B[cc].c[idx] - ix[cc] * s.B[bb].c[idx];
            e_dot_curlb += (s.E[a].c[idx] * std::conj(curlb)).real();
        }
        double wl = std::pow(r2, k); // |xi|^{2k}
        for (int l = k; l <= k + 2; ++l) {
            e_win += (nut + e + b) * wl;
            d_win += nut * wl;
            if (l <= k + 1) {
                d_win += e * wl;
                cn += u_dot_gradn * wl;
                ce += u_dot_e * wl;
            }
            if (l == k + 1) d_win += b * wl;
            if (l == k) cb += e_dot_curlb * wl;
            wl *= r2;
        }
    });
    const double L3 = g.length * g.length * g.length;
    w.E_window = e_win * L3;
    w.D_window = d_win * L3;
    w.cross_n = cn * L3;
    w.cross_E = ce * L3;
    w.cross_B = cb * L3;
    w.E_tilde = w.E_window + eps * (w.cross_n + w.cross_E - eta * w.cross_B);
    return w;
}

// --- negative-norm tracking -------------------------------------------------

struct NormTrack {
    double time = 0.0;
    double s = 0.0;
    bool besov = false;
    double value = 0.0;
};

// ||(u,theta,E,B)|| in H^{-s} or B^{-s}_{2,inf}, the component-wise sum over
// the four symbols. `surrogate` drops the zero mode instead of rejecting a
// nonzero mean: along torus trajectories the quadratic terms feed O(delta^2)
// means into u, theta, E, which the whole-space norms never see. The strict
// mode is the literal operator; run sampling uses the surrogate.
inline NormTrack track_negative_norms(const PlasmaState& st, double s, bool besov,
                                      bool surrogate = false) {
    if (besov) {
        if (!(s > 0.0) || s > 1.5)
            throw parameter_error("track_negative_norms: besov needs s in (0, 3/2]");
    } else {
        if (!(s > 0.0) || s >= 1.5)
            throw parameter_error("track_negative_norms: sobolev needs s in (0, 3/2)");
    }
    NormTrack t;
    t.time = st.time;
    t.s = s;
    t.besov = besov;
    const NormKind kind = besov ? NormKind::neg_besov(s) : NormKind::neg_sobolev(s);
    t.value = group_norm_utEB(st, kind, surrogate);
    return t;
}

// --- Lyapunov monitor -------------------------------------------------------

// One sampled point of the instant-energy series.
struct LyapunovSample {
    double t = 0.0;
    double E_tilde = 0.0;
    double D_window = 0.0;
};

struct LyapunovViolation {
    double t = 0.0;
    double value = 0.0; // dE_tilde/dt + lambda * D_window - slack
};

struct LyapunovReport {
    double lambda_probe = 0.0;
    double slack = 0.0;
    std::vector<LyapunovViolation> violations;
    double lambda_max = 0.0; // largest probe with no violations (bisection)
};

// Centered-difference check of dE_tilde/dt + lambda D <= slack at every
// interior sample. Tests the conclusion of the energy estimates without
// re-deriving their algebra.
inline LyapunovReport lyapunov_check(const std::vector<LyapunovSample>& series,
                                     double lambda_probe = 0.01,
                                     double slack_factor = 1e-3) {
    if (series.size() < 3)
        throw insufficient_data_error("lyapunov_check: need at least 3 samples");
    LyapunovReport rep;
    rep.lambda_probe = lambda_probe;
    rep.slack = slack_factor * series.front().E_tilde;

    auto violations_at = [&](double lambda, std::vector<LyapunovViolation>* out) {
        int count = 0;
        for (std::size_t i = 1; i + 1 < series.size(); ++i) {
            const double dt = series[i + 1].t - series[i - 1].t;
            if (!(dt > 0.0)) throw parameter_error("lyapunov_check: samples must increase in t");
            const double dE = (series[i + 1].E_tilde - series[i - 1].E_tilde) / dt;
            const double v = dE + lambda * series[i].D_window - rep.slack;
            if (v > 0.0) {
                ++count;
                if (out) out->push_back({series[i].t, v});
            }
        }
        return count;
    };

    violations_at(lambda_probe, &rep.violations);

    // violations are monotone in lambda (D >= 0), so bisect for the largest
    // clean probe
    double lo = 0.0, hi = 64.0;
    if (violations_at(0.0, nullptr) > 0) {
        rep.lambda_max = 0.0;
        return rep;
    }
    if (violations_at(hi, nullptr) == 0) {
        rep.lambda_max = hi;
        return rep;
    }
    for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (violations_at(mid, nullptr) == 0)
            lo = mid;
        else
            hi = mid;
    }
    rep.lambda_max = lo;
    return rep;
}

} // namespace emx
