#pragma once

#include <optional>
#include <string>

#include "emx/model.hpp"
#include "emx/random_field.hpp"

namespace emx {

enum class Profile { band_limited_random, gaussian_bump };

struct FieldMask {
    bool n = true, u = true, theta = true, E = true, B = true;
    bool any() const { return n || u || theta || E || B; }
};

struct Normalization {
    NormKind kind = NormKind::l2();
    double target = 0.0;
};

struct InitialDataSpec {
    double amplitude = 1e-3;
    Profile profile = Profile::band_limited_random;
    int max_mode = 4;          // band_limited_random
    double bump_width = 1.0;   // gaussian_bump, in box units
    std::uint64_t seed = 0;
    FieldMask mask;
    std::optional<Normalization> normalization; // applied to (u,theta,E,B)
};

namespace detail {

inline SpectralField seeded_scalar(const Grid& g, const InitialDataSpec& spec,
                                   const std::string& stream, double cx, double cy,
                                   double cz) {
    SpectralField f;
    if (spec.profile == Profile::band_limited_random) {
        RandomStream rs(spec.seed, stream);
        f = random_band_limited(g, spec.max_mode, 1.0, rs);
    } else {
        f = gaussian_bump(g, spec.bump_width, cx, cy, cz);
    }
    scale(f, spec.amplitude);
    return f;
}

} // namespace detail

// ||(u,theta,E,B)||, the component-wise sum over the four symbols in the
// requested norm. This is the quantity initial-data normalization targets
// and the one the negative-norm tracker reports along trajectories.
inline double group_norm_utEB(const PlasmaState& s, const NormKind& kind, bool surrogate) {
    using Tag = NormKind::Tag;
    auto vec_norm = [&](const Vec3Field& v) -> double {
        switch (kind.tag) {
        case Tag::l2: return std::sqrt(vec3_norm_l2_sq(v, 0.0));
        case Tag::sobolev: return std::sqrt(vec3_norm_l2_sq(v, kind.param));
        case Tag::neg_sobolev: return vec3_neg_sobolev(v, kind.param, surrogate);
        case Tag::neg_besov: return vec3_neg_besov(v, kind.param, surrogate);
        case Tag::linf: {
            double m = 0.0;
            for (const auto& f : v) m = std::max(m, norm(f, kind));
            return m;
        }
        default: {
            double acc = 0.0;
            for (const auto& f : v) acc += std::pow(norm(f, kind), kind.param);
            return std::pow(acc, 1.0 / kind.param);
        }
        }
    };
    auto scal_norm = [&](const SpectralField& f) -> double {
        if (surrogate &&
            (kind.tag == Tag::neg_sobolev || kind.tag == Tag::neg_besov)) {
            SpectralField h = f;
            h.c[0] = cplx(0.0, 0.0);
            return norm(h, kind);
        }
        return norm(f, kind);
    };
    return vec_norm(s.u) + scal_norm(s.theta) + vec_norm(s.E) + vec_norm(s.B);
}

// Build a state satisfying the compatibility conditions div E0 = -n0 and
// div B0 = 0 exactly: the longitudinal part of E is the spectral solution of
// the Poisson constraint, the seeded E contributes only its divergence-free
// part, and B is Leray-projected. All fields are mean-zero by construction.
inline PlasmaState make_initial_data(const InitialDataSpec& spec, const Grid& g,
                                     const ModelParams& params) {
    (void)params;
    if (spec.max_mode > g.dealias_mode())
        throw parameter_error("make_initial_data: max_mode exceeds the dealiased band");
    if (!(spec.amplitude > 0.0))
        throw parameter_error("make_initial_data: amplitude must be positive");

    PlasmaState s(g);
    if (spec.mask.n) s.n = detail::seeded_scalar(g, spec, "init.n", 0.5, 0.5, 0.5);
    if (spec.mask.theta)
        s.theta = detail::seeded_scalar(g, spec, "init.theta", 0.25, 0.5, 0.75);
    if (spec.mask.u)
        for (int a = 0; a < 3; ++a)
            s.u[a] = detail::seeded_scalar(g, spec, "init.u" + std::to_string(a),
                                           0.3 + 0.2 * a, 0.6, 0.4);

    Vec3Field e_seed = make_vec3(g), b_seed = make_vec3(g);
    if (spec.mask.E)
        for (int a = 0; a < 3; ++a)
            e_seed[a] = detail::seeded_scalar(g, spec, "init.E" + std::to_string(a),
                                              0.7, 0.3 + 0.2 * a, 0.5);
    if (spec.mask.B)
        for (int a = 0; a < 3; ++a)
            b_seed[a] = detail::seeded_scalar(g, spec, "init.B" + std::to_string(a),
                                              0.4, 0.8, 0.2 + 0.3 * a);

    const double k0 = g.k0();
    detail::for_each_mode(g, [&](std::size_t idx, int mi, int mj, int mk) {
        if (mi == 0 && mj == 0 && mk == 0) return;
        const double x[3] = {k0 * mi, k0 * mj, k0 * mk};
        const double x2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
        const cplx xdotE = x[0] * e_seed[0].c[idx] + x[1] * e_seed[1].c[idx] +
                           x[2] * e_seed[2].c[idx];
        const cplx xdotB = x[0] * b_seed[0].c[idx] + x[1] * b_seed[1].c[idx] +
                           x[2] * b_seed[2].c[idx];
        const cplx elong = cplx(0.0, 1.0) * s.n.c[idx] / x2;
        for (int a = 0; a < 3; ++a) {
            s.E[a].c[idx] = e_seed[a].c[idx] - x[a] * xdotE / x2 + x[a] * elong;
            s.B[a].c[idx] = b_seed[a].c[idx] - x[a] * xdotB / x2;
        }
    });

    if (spec.normalization) {
        const double current = group_norm_utEB(s, spec.normalization->kind, false);
        if (!(current > 0.0))
            throw degenerate_normalization_error(
                "make_initial_data: normalization requested but the seeded "
                "(u,theta,E,B) group is zero");
        state_scale(s, spec.normalization->target / current);
    }
    return s;
}

} // namespace emx
