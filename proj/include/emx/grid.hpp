#pragma once

#include <cmath>
#include <cstddef>
#include <string>

#include "emx/errors.hpp"

namespace emx {

inline constexpr double pi = 3.14159265358979323846;

// Uniform periodic grid on [0,L)^3 with n collocation points per axis.
// Mode m of storage index i follows the usual FFT layout: m = i for
// i <= n/2, m = i - n otherwise, so |m| <= n/2 and the zero mode is unique.
// The wavenumber of mode m is xi = 2*pi*m/L per component.
struct Grid {
    int n = 0;
    double length = 2.0 * pi;

    Grid() = default;
    Grid(int points_per_axis, double box_length)
        : n(points_per_axis), length(box_length) {
        if (n < 8 || n % 2 != 0)
            throw parameter_error("grid: points_per_axis must be even and >= 8, got " +
                                  std::to_string(n));
        if (!(length > 0.0))
            throw parameter_error("grid: box_length must be positive");
    }

    std::size_t size() const { return std::size_t(n) * n * n; }
    double dx() const { return length / n; }
    // Fundamental wavenumber 2*pi/L.
    double k0() const { return 2.0 * pi / length; }

    int mode(int i) const { return i <= n / 2 ? i : i - n; }
    double xi(int i) const { return k0() * mode(i); }
    bool is_nyquist(int i) const { return i == n / 2; }

    std::size_t index(int i, int j, int k) const {
        return (std::size_t(i) * n + j) * n + k;
    }

    // Largest |m_i| kept by the two-thirds dealiasing rule: 3*|m| <= n.
    int dealias_mode() const { return n / 3; }

    // Largest |xi| representable on the grid (corner mode).
    double max_xi() const { return k0() * (n / 2) * std::sqrt(3.0); }

    friend bool operator==(const Grid& a, const Grid& b) {
        return a.n == b.n && a.length == b.length;
    }
};

} // namespace emx
