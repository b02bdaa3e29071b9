#pragma once

#include <array>
#include <functional>

#include "emx/norms.hpp"

namespace emx {

using Vec3Field = std::array<SpectralField, 3>;

inline Vec3Field make_vec3(const Grid& g) {
    return {SpectralField(g), SpectralField(g), SpectralField(g)};
}

// The 11-field perturbation state (n, u, theta, E, B) around the constant
// equilibrium (1, 0, 1, 0, B_infinity). Fields are held spectrally; the
// constraints div E = -n and div B = 0 and zero means are invariants of the
// construction and of the evolution, monitored rather than enforced per step.
struct PlasmaState {
    Grid grid;
    SpectralField n, theta;
    Vec3Field u, E, B;
    double time = 0.0;

    PlasmaState() = default;
    explicit PlasmaState(const Grid& g)
        : grid(g), n(g), theta(g), u(make_vec3(g)), E(make_vec3(g)), B(make_vec3(g)) {}

    template <class F>
    void for_each_field(F&& fn) {
        fn(n);
        for (auto& f : u) fn(f);
        fn(theta);
        for (auto& f : E) fn(f);
        for (auto& f : B) fn(f);
    }
    template <class F>
    void for_each_field(F&& fn) const {
        fn(n);
        for (const auto& f : u) fn(f);
        fn(theta);
        for (const auto& f : E) fn(f);
        for (const auto& f : B) fn(f);
    }
};

struct ModelParams {
    std::array<double, 3> b_infinity{0.0, 0.0, 0.0};
    bool dealias = true;
};

inline void state_axpy(PlasmaState& y, double a, const PlasmaState& x) {
    require_same_grid(y.grid, x.grid, "state_axpy");
    axpy(y.n, a, x.n);
    axpy(y.theta, a, x.theta);
    for (int i = 0; i < 3; ++i) {
        axpy(y.u[i], a, x.u[i]);
        axpy(y.E[i], a, x.E[i]);
        axpy(y.B[i], a, x.B[i]);
    }
}

inline void state_scale(PlasmaState& y, double a) {
    y.for_each_field([a](SpectralField& f) { scale(f, a); });
}

// sqrt of the sum of squared L2 norms of all 11 fields; the level-0 energy.
inline double state_l2(const PlasmaState& s) {
    double acc = 0.0;
    s.for_each_field([&](const SpectralField& f) {
        const double v = norm_l2(f);
        acc += v * v;
    });
    return std::sqrt(acc);
}

inline double state_max_abs_coeff(const PlasmaState& s) {
    double m = 0.0;
    s.for_each_field([&](const SpectralField& f) {
        for (const cplx& w : f.c) m = std::max(m, std::abs(w));
    });
    return m;
}

// --- group norms (paper convention ||(A,B)||_X = ||A||_X + ||B||_X) --------
//
// A vector field counts as one symbol; its components aggregate in l2.

inline double vec3_norm_l2_sq(const Vec3Field& v, double sobolev_order = 0.0) {
    double acc = 0.0;
    for (const auto& f : v) {
        const double x = sobolev_order == 0.0 ? norm_l2(f) : norm_sobolev(f, sobolev_order);
        acc += x * x;
    }
    return acc;
}

inline double vec3_neg_sobolev(const Vec3Field& v, double s, bool surrogate) {
    double acc = 0.0;
    for (const auto& f : v) {
        double x;
        if (surrogate) {
            SpectralField g = f;
            g.c[0] = cplx(0.0, 0.0);
            x = norm_neg_sobolev(g, s);
        } else {
            x = norm_neg_sobolev(f, s);
        }
        acc += x * x;
    }
    return std::sqrt(acc);
}

inline double vec3_neg_besov(const Vec3Field& v, double s, bool surrogate) {
    const Grid& g = v[0].grid;
    const RingRange rr = grid_ring_range(g);
    std::vector<double> acc(rr.jmax - rr.jmin + 1, 0.0);
    for (const auto& f : v) {
        SpectralField h = f;
        if (surrogate)
            h.c[0] = cplx(0.0, 0.0);
        else
            require_mean_zero(h, "vec3_neg_besov");
        const std::vector<double> rn = ring_l2_norms(h, rr);
        for (std::size_t i = 0; i < rn.size(); ++i) acc[i] += rn[i] * rn[i];
    }
    double best = 0.0;
    for (int j = rr.jmin; j <= rr.jmax; ++j)
        best = std::max(best, std::sqrt(acc[j - rr.jmin]) * std::pow(2.0, -s * j));
    return best;
}

} // namespace emx
