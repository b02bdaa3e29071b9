#pragma once

#include "emx/state.hpp"

namespace emx {

// Right-hand side of the perturbation system
//
//   dn/dt     = -u.grad n - (1+n) div u
//   du/dt     = -u - E - grad theta - u x B_inf - u.grad u
//               - ((1+theta)/(1+n)) grad n - u x B
//   dtheta/dt = -theta - u.grad theta - (2/3)(1+theta) div u + (1/3)|u|^2
//   dE/dt     = curl B + u + n u
//   dB/dt     = -curl E
//
// with constraints div E = -n, div B = 0. Products are formed in real space,
// derivatives in spectral space; the two-thirds mask is applied once to the
// assembled tendency. E never needs a real-space representation: it enters
// only linearly and is handled spectrally, as are both curls.

namespace detail {

inline RealField inv(const SpectralField& f) { return spectral_to_real(f); }

inline SpectralField deriv(const SpectralField& f, int axis) {
    return apply_symbol(f, MultiplierSymbol::partial_derivative(axis));
}

// (i xi x v)_a at every mode, for curl terms.
inline SpectralField spectral_curl_component(const Vec3Field& v, int a) {
    const int b = (a + 1) % 3, c = (a + 2) % 3;
    SpectralField out(v[0].grid);
    const Grid& g = v[0].grid;
    const double k0 = g.k0();
    detail::for_each_mode(g, [&](std::size_t idx, int mi, int mj, int mk) {
        const double xb = k0 * (b == 0 ? mi : b == 1 ? mj : mk);
        const double xc = k0 * (c == 0 ? mi : c == 1 ? mj : mk);
        out.c[idx] = cplx(0.0, 1.0) * (xb * v[c].c[idx] - xc * v[b].c[idx]);
    });
    return out;
}

} // namespace detail

inline PlasmaState rhs(const PlasmaState& s, const ModelParams& p) {
    const Grid& g = s.grid;
    const std::size_t sz = g.size();

    const RealField n_r = detail::inv(s.n);
    double min_1pn = 1.0 + n_r.v[0];
    for (double x : n_r.v) min_1pn = std::min(min_1pn, 1.0 + x);
    if (min_1pn <= 0.0)
        throw vacuum_error("rhs: min(1+n) <= 0 at t = " + std::to_string(s.time) +
                           "; the small-data regime is lost");

    const RealField th_r = detail::inv(s.theta);
    std::array<RealField, 3> u_r{detail::inv(s.u[0]), detail::inv(s.u[1]), detail::inv(s.u[2])};
    std::array<RealField, 3> b_r{detail::inv(s.B[0]), detail::inv(s.B[1]), detail::inv(s.B[2])};

    std::array<RealField, 3> dn, dth;
    std::array<std::array<RealField, 3>, 3> du; // du[i][a] = d_i u_a
    for (int i = 0; i < 3; ++i) {
        dn[i] = detail::inv(detail::deriv(s.n, i));
        dth[i] = detail::inv(detail::deriv(s.theta, i));
        for (int a = 0; a < 3; ++a) du[i][a] = detail::inv(detail::deriv(s.u[a], i));
    }

    RealField tn(g), tth(g);
    std::array<RealField, 3> tu_nl{RealField(g), RealField(g), RealField(g)};
    std::array<RealField, 3> nu{RealField(g), RealField(g), RealField(g)};

    const std::array<double, 3>& binf = p.b_infinity;
    for (std::size_t q = 0; q < sz; ++q) {
        const double nn = n_r.v[q], th = th_r.v[q];
        const double ux = u_r[0].v[q], uy = u_r[1].v[q], uz = u_r[2].v[q];
        const double divu = du[0][0].v[q] + du[1][1].v[q] + du[2][2].v[q];

        tn.v[q] = -(ux * dn[0].v[q] + uy * dn[1].v[q] + uz * dn[2].v[q]) - (1.0 + nn) * divu;

        // total magnetic field seen by the Lorentz term
        const double bx = b_r[0].v[q] + binf[0];
        const double by = b_r[1].v[q] + binf[1];
        const double bz = b_r[2].v[q] + binf[2];
        const double coef = (1.0 + th) / (1.0 + nn);
        const double uxb[3] = {uy * bz - uz * by, uz * bx - ux * bz, ux * by - uy * bx};
        for (int a = 0; a < 3; ++a) {
            const double adv =
                ux * du[0][a].v[q] + uy * du[1][a].v[q] + uz * du[2][a].v[q];
            tu_nl[a].v[q] = -adv - coef * dn[a].v[q] - uxb[a];
        }

        tth.v[q] = -th - (ux * dth[0].v[q] + uy * dth[1].v[q] + uz * dth[2].v[q]) -
                   (2.0 / 3.0) * (1.0 + th) * divu +
                   (ux * ux + uy * uy + uz * uz) / 3.0;

        nu[0].v[q] = nn * ux;
        nu[1].v[q] = nn * uy;
        nu[2].v[q] = nn * uz;
    }

    PlasmaState t(g);
    t.time = 1.0; // tendencies carry d/dt units; time slot flags "is a tendency"
    t.n = real_to_spectral(tn);
    t.theta = real_to_spectral(tth);
    for (int a = 0; a < 3; ++a) {
        t.u[a] = real_to_spectral(tu_nl[a]);
        axpy(t.u[a], -1.0, s.u[a]);
        axpy(t.u[a], -1.0, s.E[a]);
        axpy(t.u[a], -1.0, detail::deriv(s.theta, a));

        t.E[a] = detail::spectral_curl_component(s.B, a);
        axpy(t.E[a], 1.0, s.u[a]);
        axpy(t.E[a], 1.0, real_to_spectral(nu[a]));

        t.B[a] = detail::spectral_curl_component(s.E, a);
        scale(t.B[a], -1.0);
    }

    // dn/dt = -div((1+n)u) has exactly zero mean in the continuum; pin it so
    // the torus constraint div E = -n stays solvable.
    t.n.c[0] = cplx(0.0, 0.0);

    if (p.dealias) t.for_each_field([](SpectralField& f) { dealias_inplace(f); });
    return t;
}

// Linearization of rhs about the equilibrium, assembled spectrally. Used by
// quadratic-smallness tests; the per-mode matrix in mode_matrix.hpp is the
// same operator mode by mode.
inline PlasmaState linear_rhs(const PlasmaState& s, const ModelParams& p) {
    const Grid& g = s.grid;
    PlasmaState t(g);
    t.time = 1.0;
    const std::array<double, 3>& binf = p.b_infinity;
    // dn/dt = -div u
    for (int a = 0; a < 3; ++a) axpy(t.n, -1.0, detail::deriv(s.u[a], a));
    for (int a = 0; a < 3; ++a) {
        // du/dt = -u - E - grad theta - grad n - u x B_inf
        axpy(t.u[a], -1.0, s.u[a]);
        axpy(t.u[a], -1.0, s.E[a]);
        axpy(t.u[a], -1.0, detail::deriv(s.theta, a));
        axpy(t.u[a], -1.0, detail::deriv(s.n, a));
        const int b = (a + 1) % 3, c = (a + 2) % 3;
        axpy(t.u[a], -binf[c], s.u[b]);
        axpy(t.u[a], binf[b], s.u[c]);
        // dE/dt = curl B + u; dB/dt = -curl E
        t.E[a] = detail::spectral_curl_component(s.B, a);
        axpy(t.E[a], 1.0, s.u[a]);
        t.B[a] = detail::spectral_curl_component(s.E, a);
        scale(t.B[a], -1.0);
        // dtheta/dt = -theta - (2/3) div u
        axpy(t.theta, -2.0 / 3.0, detail::deriv(s.u[a], a));
    }
    axpy(t.theta, -1.0, s.theta);
    return t;
}

// (||div E + n||_L2, ||div B||_L2), both spectral.
inline std::pair<double, double> constraint_residual(const PlasmaState& s) {
    const Grid& g = s.grid;
    const double k0 = g.k0();
    double accE = 0.0, accB = 0.0;
    detail::for_each_mode(g, [&](std::size_t idx, int mi, int mj, int mk) {
        const cplx ix(0.0, k0 * mi), iy(0.0, k0 * mj), iz(0.0, k0 * mk);
        const cplx divE = ix * s.E[0].c[idx] + iy * s.E[1].c[idx] + iz * s.E[2].c[idx];
        const cplx divB = ix * s.B[0].c[idx] + iy * s.B[1].c[idx] + iz * s.B[2].c[idx];
        accE += std::norm(divE + s.n.c[idx]);
        accB += std::norm(divB);
    });
    const double L3 = g.length * g.length * g.length;
    return {std::sqrt(accE * L3), std::sqrt(accB * L3)};
}

// Restore div E = -n (longitudinal part of E replaced by the spectral
// solution) and div B = 0 (Leray projection). Transverse parts, means, and
// (n, u, theta) are untouched; idempotent.
inline PlasmaState project_constraints(const PlasmaState& s) {
    PlasmaState out = s;
    const Grid& g = s.grid;
    const double k0 = g.k0();
    detail::for_each_mode(g, [&](std::size_t idx, int mi, int mj, int mk) {
        if (mi == 0 && mj == 0 && mk == 0) return;
        const double x[3] = {k0 * mi, k0 * mj, k0 * mk};
        const double x2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
        const cplx xdotE = x[0] * s.E[0].c[idx] + x[1] * s.E[1].c[idx] + x[2] * s.E[2].c[idx];
        const cplx xdotB = x[0] * s.B[0].c[idx] + x[1] * s.B[1].c[idx] + x[2] * s.B[2].c[idx];
        // longitudinal E solving i xi . E = -n: E_long = i xi n / |xi|^2
        const cplx elong = cplx(0.0, 1.0) * s.n.c[idx] / x2;
        for (int a = 0; a < 3; ++a) {
            out.E[a].c[idx] = s.E[a].c[idx] - x[a] * xdotE / x2 + x[a] * elong;
            out.B[a].c[idx] = s.B[a].c[idx] - x[a] * xdotB / x2;
        }
    });
    return out;
}

inline std::pair<double, double> min_one_plus_fields(const PlasmaState& s) {
    const RealField n_r = spectral_to_real(s.n);
    const RealField th_r = spectral_to_real(s.theta);
    return {1.0 + min_grid(n_r), 1.0 + min_grid(th_r)};
}

// Bound factors of the refined energy estimates:
//   F = ||(n,u,th)||_{H^{k/2+2} ^ H^3} + ||(n,u,th)||_{H^3}^2 + ||grad B||_{L2}
//   G = ||(n,u,th)||_{H^{k/2+1} ^ H^3}^2 + ||grad B||_{L2}^2
// where ^ is the intersection (max of the two norms, applied per field) and
// the group norm is the sum over the symbols n, u, theta.
inline std::pair<double, double> bound_factors(const PlasmaState& s, int k) {
    if (k < 0) throw parameter_error("bound_factors: k must be >= 0");
    const double top_order = k / 2.0 + 2.0;
    if (top_order > double(s.grid.dealias_mode()))
        throw resolution_error("bound_factors: derivative order " + std::to_string(top_order) +
                               " exceeds the grid's resolved band");

    auto group_intersect = [&](double so) {
        double acc = norm_h_intersect(s.n, so, 3.0);
        double uacc = 0.0;
        for (const auto& f : s.u) {
            const double v = norm_h_intersect(f, so, 3.0);
            uacc += v * v;
        }
        acc += std::sqrt(uacc);
        acc += norm_h_intersect(s.theta, so, 3.0);
        return acc;
    };
    auto group_h3 = [&]() {
        double acc = norm_h_inhom(s.n, 3.0);
        double uacc = 0.0;
        for (const auto& f : s.u) {
            const double v = norm_h_inhom(f, 3.0);
            uacc += v * v;
        }
        acc += std::sqrt(uacc);
        acc += norm_h_inhom(s.theta, 3.0);
        return acc;
    };

    const double gradB = std::sqrt(vec3_norm_l2_sq(s.B, 1.0));
    const double h3 = group_h3();
    const double F = group_intersect(k / 2.0 + 2.0) + h3 * h3 + gradB;
    const double gmix = group_intersect(k / 2.0 + 1.0);
    const double G = gmix * gmix + gradB * gradB;
    return {F, G};
}

} // namespace emx
