#pragma once

#include <cmath>
#include <string>

#include "emx/field.hpp"

namespace emx {

// --- Littlewood-Paley bump -------------------------------------------------
//
// phi is the standard exp(-1/x) transition bump, frozen here so ring norms
// are reproducible bit for bit on a given grid:
//
//   h(x)    = exp(-1/x)            for x > 0, else 0
//   ramp(x) = h(x) / (h(x) + h(1-x))   (smooth, 0 -> 1 on [0,1], monotone)
//   phi(r)  = 1 - ramp(r - 1)          (1 for r <= 1, 0 for r >= 2)
//
// Ring j has symbol phi_j(xi) = phi(2^-j |xi|) - phi(2^{1-j} |xi|), supported
// in 2^{j-1} <= |xi| <= 2^{j+1}; the symbols telescope to 1 away from 0.
// Note ramp(1/2) = 1/2 exactly, so phi(3/2) = 1/2: a mode with |xi| = 3/2 is
// split evenly between rings 0 and 1.

inline double lp_transition(double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double a = std::exp(-1.0 / x);
    const double b = std::exp(-1.0 / (1.0 - x));
    return a / (a + b);
}

inline double lp_phi(double r) { return 1.0 - lp_transition(r - 1.0); }

inline double lp_ring_symbol(int j, double r) {
    return lp_phi(std::ldexp(r, -j)) - lp_phi(std::ldexp(r, 1 - j));
}

// Inclusive ring-index range [jmin, jmax] whose symbols sum to exactly 1 on
// every nonzero wavenumber the grid carries.
struct RingRange {
    int jmin, jmax;
};

inline RingRange grid_ring_range(const Grid& g) {
    const double kmin = g.k0();
    const double kmax = g.max_xi();
    int jmin = int(std::floor(std::log2(kmin) + 1e-12));
    int jmax = int(std::ceil(std::log2(kmax) - 1e-12));
    return {jmin, jmax};
}

// --- multiplier symbols ----------------------------------------------------

enum class ZeroModeRule {
    require_zero, // error if the input has nonzero mean
    annihilate    // silently zero the mean (torus surrogate for Lambda^s)
};

struct MultiplierSymbol {
    enum class Kind { fractional_power, partial_derivative, ring_projection, dealias_mask };

    Kind kind;
    double power = 0.0;                              // fractional_power
    ZeroModeRule zero_mode = ZeroModeRule::require_zero;
    int axis = 0;                                    // partial_derivative, 0..2
    int ring = 0;                                    // ring_projection

    // Lambda^s = |xi|^s, the fractional Laplacian power.
    static MultiplierSymbol fractional_power(double s,
                                             ZeroModeRule rule = ZeroModeRule::require_zero) {
        MultiplierSymbol m;
        m.kind = Kind::fractional_power;
        m.power = s;
        m.zero_mode = rule;
        return m;
    }
    static MultiplierSymbol partial_derivative(int axis) {
        if (axis < 0 || axis > 2)
            throw parameter_error("partial_derivative: axis must be 0..2");
        MultiplierSymbol m;
        m.kind = Kind::partial_derivative;
        m.axis = axis;
        return m;
    }
    static MultiplierSymbol ring_projection(int j) {
        MultiplierSymbol m;
        m.kind = Kind::ring_projection;
        m.ring = j;
        return m;
    }
    static MultiplierSymbol dealias_mask() {
        MultiplierSymbol m;
        m.kind = Kind::dealias_mask;
        return m;
    }
};

namespace detail {

// Loop over all modes calling fn(flat_index, m1, m2, m3).
template <class F>
inline void for_each_mode(const Grid& g, F&& fn) {
    std::size_t idx = 0;
    for (int i = 0; i < g.n; ++i) {
        const int mi = g.mode(i);
        for (int j = 0; j < g.n; ++j) {
            const int mj = g.mode(j);
            for (int k = 0; k < g.n; ++k, ++idx) {
                fn(idx, mi, mj, g.mode(k));
            }
        }
    }
}

inline double l2_of(const SpectralField& f) {
    double s = 0.0;
    for (const cplx& w : f.c) s += std::norm(w);
    const double L3 = f.grid.length * f.grid.length * f.grid.length;
    return std::sqrt(s * L3);
}

} // namespace detail

inline void require_mean_zero(const SpectralField& f, const char* what) {
    const double scale = detail::l2_of(f);
    if (std::abs(f.mean()) > 1e-12 * scale && scale > 0.0)
        throw mean_value_error(std::string(what) +
                               ": field has nonzero mean; negative-order multipliers are "
                               "undefined on the zero mode");
}

inline SpectralField apply_symbol(const SpectralField& f, const MultiplierSymbol& sym) {
    using Kind = MultiplierSymbol::Kind;
    SpectralField out(f.grid);
    const Grid& g = f.grid;
    const double k0 = g.k0();

    switch (sym.kind) {
    case Kind::fractional_power: {
        if (sym.power < 0.0 && sym.zero_mode == ZeroModeRule::require_zero)
            require_mean_zero(f, "apply_symbol(fractional_power)");
        const double s = sym.power;
        detail::for_each_mode(g, [&](std::size_t idx, int mi, int mj, int mk) {
            if (mi == 0 && mj == 0 && mk == 0) {
                // Lambda^0 is the identity; any other power kills the mean.
                out.c[idx] = s == 0.0 ? f.c[idx] : cplx(0.0, 0.0);
                return;
            }
            const double r2 = double(mi) * mi + double(mj) * mj + double(mk) * mk;
            const double r = k0 * std::sqrt(r2);
            out.c[idx] = f.c[idx] * std::pow(r, s);
        });
        break;
    }
    case Kind::partial_derivative: {
        // i*xi_axis; the Nyquist plane is zeroed (its derivative has no
        // Hermitian-symmetric representative on an even grid).
        const int ax = sym.axis;
        detail::for_each_mode(g, [&](std::size_t idx, int mi, int mj, int mk) {
            const int m = ax == 0 ? mi : (ax == 1 ? mj : mk);
            if (2 * std::abs(m) == g.n) {
                out.c[idx] = cplx(0.0, 0.0);
                return;
            }
            out.c[idx] = f.c[idx] * cplx(0.0, k0 * m);
        });
        break;
    }
    case Kind::ring_projection: {
        const int j = sym.ring;
        detail::for_each_mode(g, [&](std::size_t idx, int mi, int mj, int mk) {
            if (mi == 0 && mj == 0 && mk == 0) {
                out.c[idx] = cplx(0.0, 0.0);
                return;
            }
            const double r2 = double(mi) * mi + double(mj) * mj + double(mk) * mk;
            out.c[idx] = f.c[idx] * lp_ring_symbol(j, k0 * std::sqrt(r2));
        });
        break;
    }
    case Kind::dealias_mask: {
        const int keep = g.n; // keep iff 3*|m_i| <= n for every axis
        detail::for_each_mode(g, [&](std::size_t idx, int mi, int mj, int mk) {
            const bool ok = 3 * std::abs(mi) <= keep && 3 * std::abs(mj) <= keep &&
                            3 * std::abs(mk) <= keep;
            out.c[idx] = ok ? f.c[idx] : cplx(0.0, 0.0);
        });
        break;
    }
    }
    return out;
}

// In-place two-thirds mask; the hot path for rhs evaluation.
inline void dealias_inplace(SpectralField& f) {
    const Grid& g = f.grid;
    detail::for_each_mode(g, [&](std::size_t idx, int mi, int mj, int mk) {
        if (3 * std::abs(mi) > g.n || 3 * std::abs(mj) > g.n || 3 * std::abs(mk) > g.n)
            f.c[idx] = cplx(0.0, 0.0);
    });
}

} // namespace emx
