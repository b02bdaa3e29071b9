#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "emx/errors.hpp"
#include "emx/fft.hpp"
#include "emx/grid.hpp"

namespace emx {

using cplx = std::complex<double>;

// Scalar field sampled on the collocation grid.
struct RealField {
    Grid grid;
    std::vector<double> v;

    RealField() = default;
    explicit RealField(const Grid& g) : grid(g), v(g.size(), 0.0) {}

    double& at(int i, int j, int k) { return v[grid.index(i, j, k)]; }
    double at(int i, int j, int k) const { return v[grid.index(i, j, k)]; }
};

// Fourier coefficients of one real scalar field. Hermitian symmetry
// c(-m) = conj(c(m)) is an invariant: every operator in this codebase maps
// Hermitian inputs to Hermitian outputs, and transforms from real data
// produce it by construction.
struct SpectralField {
    Grid grid;
    std::vector<cplx> c;

    SpectralField() = default;
    explicit SpectralField(const Grid& g) : grid(g), c(g.size(), cplx(0.0, 0.0)) {}

    cplx& at(int i, int j, int k) { return c[grid.index(i, j, k)]; }
    cplx at(int i, int j, int k) const { return c[grid.index(i, j, k)]; }

    cplx mean() const { return c[0]; }
};

inline void require_same_grid(const Grid& a, const Grid& b, const char* what) {
    if (!(a == b))
        throw shape_error(std::string(what) + ": grid mismatch");
}

inline SpectralField real_to_spectral(const RealField& f) {
    SpectralField out(f.grid);
    if (f.v.size() != f.grid.size())
        throw shape_error("real_to_spectral: array size does not match grid");
    fft::engine_for(f.grid.n).forward(f.v.data(), out.c.data());
    return out;
}

inline RealField spectral_to_real(const SpectralField& f) {
    RealField out(f.grid);
    if (f.c.size() != f.grid.size())
        throw shape_error("spectral_to_real: array size does not match grid");
    fft::engine_for(f.grid.n).inverse(f.c.data(), out.v.data());
    return out;
}

// Max |imag| of the inverse transform, relative to the field scale; a
// direct measure of Hermitian-symmetry violation.
inline double hermitian_residual(const SpectralField& f) {
    std::vector<cplx> z(f.grid.size());
    fft::engine_for(f.grid.n).inverse_complex(f.c.data(), z.data());
    double imag_max = 0.0, abs_max = 0.0;
    for (const cplx& w : z) {
        imag_max = std::max(imag_max, std::abs(w.imag()));
        abs_max = std::max(abs_max, std::abs(w));
    }
    return abs_max > 0.0 ? imag_max / abs_max : 0.0;
}

// --- coefficient-level algebra (used by the integrator's stage combos) ---

inline void axpy(SpectralField& y, double a, const SpectralField& x) {
    require_same_grid(y.grid, x.grid, "axpy");
    for (std::size_t i = 0; i < y.c.size(); ++i) y.c[i] += a * x.c[i];
}

inline void scale(SpectralField& y, double a) {
    for (auto& w : y.c) w *= a;
}

inline double linf_grid(const RealField& f) {
    double m = 0.0;
    for (double x : f.v) m = std::max(m, std::abs(x));
    return m;
}

inline double min_grid(const RealField& f) {
    double m = f.v.empty() ? 0.0 : f.v[0];
    for (double x : f.v) m = std::min(m, x);
    return m;
}

} // namespace emx
