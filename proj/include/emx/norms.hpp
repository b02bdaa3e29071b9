#pragma once

#include <cmath>
#include <initializer_list>
#include <vector>

#include "emx/multiplier.hpp"

namespace emx {

// Norm kinds. L2 and all Sobolev-type norms are evaluated spectrally via
// Parseval; Lp and Linf by rectangle-rule quadrature on the collocation grid
// (spectrally accurate for smooth fields). For integer l, |xi|^{2l} equals
// the multinomial sum over all l-th derivative combinations, so sobolev(l)
// coincides with the full grad^l tensor L2 norm; that identity is covered by
// a dedicated test.
struct NormKind {
    enum class Tag { l2, linf, lp, sobolev, neg_sobolev, neg_besov };
    Tag tag;
    double param = 0.0; // p for lp, l for sobolev, s for negative orders

    static NormKind l2() { return {Tag::l2, 0.0}; }
    static NormKind linf() { return {Tag::linf, 0.0}; }
    static NormKind lp(double p) {
        if (p < 1.0) throw parameter_error("norm: Lp requires p >= 1");
        return {Tag::lp, p};
    }
    static NormKind sobolev(double l) {
        if (l < 0.0) throw parameter_error("norm: sobolev order must be >= 0");
        return {Tag::sobolev, l};
    }
    static NormKind neg_sobolev(double s) {
        if (!(s > 0.0)) throw parameter_error("norm: neg_sobolev requires s > 0");
        return {Tag::neg_sobolev, s};
    }
    static NormKind neg_besov(double s) {
        if (!(s > 0.0)) throw parameter_error("norm: neg_besov requires s > 0");
        return {Tag::neg_besov, s};
    }
};

namespace detail {

inline double l3(const Grid& g) { return g.length * g.length * g.length; }

// sum over modes of |c|^2 * w(|xi|^2), fixed iteration order.
template <class W>
inline double weighted_mode_sum(const SpectralField& f, bool skip_zero, W&& w) {
    const double k0sq = f.grid.k0() * f.grid.k0();
    double acc = 0.0;
    for_each_mode(f.grid, [&](std::size_t idx, int mi, int mj, int mk) {
        if (skip_zero && mi == 0 && mj == 0 && mk == 0) return;
        const double r2 = k0sq * (double(mi) * mi + double(mj) * mj + double(mk) * mk);
        acc += std::norm(f.c[idx]) * w(r2);
    });
    return acc;
}

} // namespace detail

inline double norm_l2(const SpectralField& f) {
    return std::sqrt(detail::l3(f.grid) *
                     detail::weighted_mode_sum(f, false, [](double) { return 1.0; }));
}

inline double norm_l2(const RealField& f) {
    double s = 0.0;
    for (double x : f.v) s += x * x;
    const double cell = f.grid.dx() * f.grid.dx() * f.grid.dx();
    return std::sqrt(s * cell);
}

inline double norm_lp(const RealField& f, double p) {
    if (p < 1.0) throw parameter_error("norm: Lp requires p >= 1");
    double s = 0.0;
    for (double x : f.v) s += std::pow(std::abs(x), p);
    const double cell = f.grid.dx() * f.grid.dx() * f.grid.dx();
    return std::pow(s * cell, 1.0 / p);
}

inline double norm_sobolev(const SpectralField& f, double l) {
    if (l == 0.0) return norm_l2(f); // Lambda^0 is the identity
    return std::sqrt(detail::l3(f.grid) * detail::weighted_mode_sum(f, true, [l](double r2) {
                         return std::pow(r2, l);
                     }));
}

inline double norm_neg_sobolev(const SpectralField& f, double s) {
    if (!(s > 0.0)) throw parameter_error("norm: neg_sobolev requires s > 0");
    require_mean_zero(f, "norm(neg_sobolev)");
    return std::sqrt(detail::l3(f.grid) * detail::weighted_mode_sum(f, true, [s](double r2) {
                         return std::pow(r2, -s);
                     }));
}

// ||Delta_j f||_{L2} for every ring the grid carries, in ring order.
inline std::vector<double> ring_l2_norms(const SpectralField& f, const RingRange& rr) {
    const int count = rr.jmax - rr.jmin + 1;
    std::vector<double> acc(count, 0.0);
    const double k0 = f.grid.k0();
    detail::for_each_mode(f.grid, [&](std::size_t idx, int mi, int mj, int mk) {
        if (mi == 0 && mj == 0 && mk == 0) return;
        const double nrm = std::norm(f.c[idx]);
        if (nrm == 0.0) return;
        const double r = k0 * std::sqrt(double(mi) * mi + double(mj) * mj + double(mk) * mk);
        for (int j = rr.jmin; j <= rr.jmax; ++j) {
            const double phi = lp_ring_symbol(j, r);
            if (phi != 0.0) acc[j - rr.jmin] += nrm * phi * phi;
        }
    });
    const double L3 = detail::l3(f.grid);
    for (double& a : acc) a = std::sqrt(a * L3);
    return acc;
}

inline double norm_neg_besov(const SpectralField& f, double s) {
    if (!(s > 0.0)) throw parameter_error("norm: neg_besov requires s > 0");
    require_mean_zero(f, "norm(neg_besov)");
    const RingRange rr = grid_ring_range(f.grid);
    const std::vector<double> rn = ring_l2_norms(f, rr);
    double best = 0.0;
    for (int j = rr.jmin; j <= rr.jmax; ++j)
        best = std::max(best, rn[j - rr.jmin] * std::pow(2.0, -s * j));
    return best;
}

inline double norm(const SpectralField& f, const NormKind& kind) {
    using Tag = NormKind::Tag;
    switch (kind.tag) {
    case Tag::l2: return norm_l2(f);
    case Tag::linf: return linf_grid(spectral_to_real(f));
    case Tag::lp: return norm_lp(spectral_to_real(f), kind.param);
    case Tag::sobolev: return norm_sobolev(f, kind.param);
    case Tag::neg_sobolev: return norm_neg_sobolev(f, kind.param);
    case Tag::neg_besov: return norm_neg_besov(f, kind.param);
    }
    return 0.0;
}

inline double norm(const RealField& f, const NormKind& kind) {
    using Tag = NormKind::Tag;
    switch (kind.tag) {
    case Tag::l2: return norm_l2(f);
    case Tag::linf: return linf_grid(f);
    case Tag::lp: return norm_lp(f, kind.param);
    default: return norm(real_to_spectral(f), kind);
    }
}

// integral of f*g over the box, computed spectrally:
// L^3 * Re sum_m fhat(m) conj(ghat(m)). Symmetric for Hermitian inputs.
inline double l2_pairing(const SpectralField& f, const SpectralField& g) {
    require_same_grid(f.grid, g.grid, "l2_pairing");
    double acc = 0.0;
    for (std::size_t i = 0; i < f.c.size(); ++i)
        acc += f.c[i].real() * g.c[i].real() + f.c[i].imag() * g.c[i].imag();
    return acc * detail::l3(f.grid);
}

// --- inhomogeneous Sobolev norms (used by the F/G bound factors) -----------
//
// For integer m, ||f||_{H^m}^2 = sum_{l=0}^{m} ||Lambda^l f||^2, matching the
// derivative-sum convention of the energy functionals. Fractional orders
// extend this by replacing the top level with Lambda^s:
// ||f||_{H^s}^2 = sum_{l=0}^{ceil(s)-1} ||Lambda^l f||^2 + ||Lambda^s f||^2.
inline double norm_h_inhom(const SpectralField& f, double s) {
    if (s < 0.0) throw parameter_error("norm_h_inhom: order must be >= 0");
    const int top = int(std::ceil(s - 1e-12));
    double acc = 0.0;
    for (int l = 0; l < top; ++l) {
        const double v = norm_sobolev(f, double(l));
        acc += v * v;
    }
    const double v = norm_sobolev(f, s);
    return std::sqrt(acc + v * v);
}

// max of the two norms: the standard intersection-space convention.
inline double norm_h_intersect(const SpectralField& f, double s1, double s2) {
    return std::max(norm_h_inhom(f, s1), norm_h_inhom(f, s2));
}

} // namespace emx
