#pragma once

#include <cstdint>
#include <random>
#include <string_view>

#include "emx/field.hpp"
#include "emx/multiplier.hpp"

namespace emx {

// All randomness flows from one config seed through named sub-streams, so a
// run is replayable from (seed, stream name) alone. Gaussians are produced
// by our own Box-Muller over mt19937_64 bits; std::normal_distribution is
// implementation-defined and would break replay across standard libraries.
class RandomStream {
public:
    RandomStream(std::uint64_t seed, std::string_view stream) {
        std::uint64_t h = 1469598103934665603ull; // FNV-1a
        for (char ch : stream) {
            h ^= std::uint64_t(static_cast<unsigned char>(ch));
            h *= 1099511628211ull;
        }
        rng_.seed(seed ^ h);
    }

    double uniform01() { return double(rng_() >> 11) * 0x1.0p-53; }

    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform01(), u2 = uniform01();
        while (u1 <= 0.0) u1 = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * pi * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    std::uint64_t bits() { return rng_(); }

private:
    std::mt19937_64 rng_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

// Band-limited random scalar field: independent complex Gaussian
// coefficients with spectral envelope |xi|^{-envelope_a}, Hermitian pairs
// set explicitly, zero mode empty. Modes are visited in a fixed order so the
// result is a pure function of (seed, stream).
//
// Only modes with |m_i| <= max_mode are populated; max_mode must stay within
// the dealiased band.
inline SpectralField random_band_limited(const Grid& g, int max_mode, double envelope_a,
                                         RandomStream& rs) {
    if (max_mode < 1 || max_mode > g.dealias_mode())
        throw parameter_error("random_band_limited: max_mode must be in [1, n/3]");
    SpectralField f(g);
    const double k0 = g.k0();
    for (int mi = -max_mode; mi <= max_mode; ++mi)
        for (int mj = -max_mode; mj <= max_mode; ++mj)
            for (int mk = -max_mode; mk <= max_mode; ++mk) {
                // visit one representative per Hermitian pair
                if (mi < 0) continue;
                if (mi == 0 && mj < 0) continue;
                if (mi == 0 && mj == 0 && mk <= 0) continue;
                const double r = k0 * std::sqrt(double(mi) * mi + double(mj) * mj +
                                                double(mk) * mk);
                const double amp = std::pow(r, -envelope_a) / std::sqrt(2.0);
                const cplx z(rs.gaussian() * amp, rs.gaussian() * amp);
                const int i = (mi + g.n) % g.n;
                const int j = (mj + g.n) % g.n;
                const int k = (mk + g.n) % g.n;
                const int ci = (g.n - mi) % g.n;
                const int cj = (g.n - mj + g.n) % g.n;
                const int ck = (g.n - mk + g.n) % g.n;
                f.c[g.index(i, j, k)] = z;
                f.c[g.index(ci, cj, ck)] = std::conj(z);
            }
    return f;
}

// Periodized Gaussian bump at `center` (fractions of L), mean removed.
inline SpectralField gaussian_bump(const Grid& g, double width,
                                   double cx, double cy, double cz) {
    if (!(width > 0.0)) throw parameter_error("gaussian_bump: width must be positive");
    RealField f(g);
    const double L = g.length;
    auto torus_d = [L](double a, double b) {
        double d = std::fmod(std::abs(a - b), L);
        return std::min(d, L - d);
    };
    for (int i = 0; i < g.n; ++i)
        for (int j = 0; j < g.n; ++j)
            for (int k = 0; k < g.n; ++k) {
                const double dx = torus_d(i * g.dx(), cx * L);
                const double dy = torus_d(j * g.dx(), cy * L);
                const double dz = torus_d(k * g.dx(), cz * L);
                f.at(i, j, k) = std::exp(-(dx * dx + dy * dy + dz * dz) / (2.0 * width * width));
            }
    SpectralField out = real_to_spectral(f);
    out.c[0] = cplx(0.0, 0.0);
    return out;
}

} // namespace emx
