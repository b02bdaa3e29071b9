#pragma once

#include "emx/smallmat.hpp"
#include "emx/state.hpp"

namespace emx {

// Linearization of the system at one wavenumber, acting on the coefficient
// vector in the fixed ordering (n, u1, u2, u3, theta, E1, E2, E3, B1, B2, B3):
//
//   dn/dt     = -i xi . u
//   du/dt     = -u - E - i xi theta - i xi n - u x B_inf
//   dtheta/dt = -theta - (2/3) i xi . u
//   dE/dt     =  i xi x B + u
//   dB/dt     = -i xi x E
struct ModeMatrix {
    std::array<double, 3> xi{0.0, 0.0, 0.0};
    CMat m;
};

inline constexpr int mode_dim = 11;
inline constexpr int idx_n = 0, idx_u = 1, idx_theta = 4, idx_E = 5, idx_B = 8;

inline ModeMatrix assemble_mode_matrix(const std::array<double, 3>& xi,
                                       const ModelParams& params) {
    ModeMatrix mm;
    mm.xi = xi;
    CMat& M = mm.m;
    M = CMat(mode_dim);
    const cplx I(0.0, 1.0);
    const std::array<double, 3>& b = params.b_infinity;

    for (int a = 0; a < 3; ++a) {
        M(idx_n, idx_u + a) = -I * xi[a];

        M(idx_u + a, idx_u + a) += -1.0;
        M(idx_u + a, idx_E + a) = -1.0;
        M(idx_u + a, idx_theta) = -I * xi[a];
        M(idx_u + a, idx_n) = -I * xi[a];
        // -(u x B_inf)_a = -eps_abc u_b Binf_c
        const int bb = (a + 1) % 3, cc = (a + 2) % 3;
        M(idx_u + a, idx_u + bb) += -b[cc];
        M(idx_u + a, idx_u + cc) += b[bb];

        M(idx_theta, idx_u + a) = -(2.0 / 3.0) * I * xi[a];

        M(idx_E + a, idx_u + a) = 1.0;
        // (i xi x B)_a = i (xi_b B_c - xi_c B_b)
        M(idx_E + a, idx_B + cc) += I * xi[bb];
        M(idx_E + a, idx_B + bb) += -I * xi[cc];
        // -(i xi x E)_a
        M(idx_B + a, idx_E + cc) += -I * xi[bb];
        M(idx_B + a, idx_E + bb) += I * xi[cc];
    }
    M(idx_theta, idx_theta) = -1.0;
    return mm;
}

// Exact solution of the linearized system: every mode evolves by
// exp(t M(xi)). The exponential is computed by Pade scaling-and-squaring,
// which needs no conditioning escape hatch.
inline PlasmaState linear_oracle_evolve(const PlasmaState& s, double t,
                                        const ModelParams& params) {
    if (t < 0.0) throw parameter_error("linear_oracle_evolve: t must be >= 0");
    const Grid& g = s.grid;
    PlasmaState out(g);
    out.time = s.time + t;
    const double k0 = g.k0();
    detail::for_each_mode(g, [&](std::size_t idx, int mi, int mj, int mk) {
        std::vector<cplx> v(mode_dim);
        v[idx_n] = s.n.c[idx];
        v[idx_theta] = s.theta.c[idx];
        for (int a = 0; a < 3; ++a) {
            v[idx_u + a] = s.u[a].c[idx];
            v[idx_E + a] = s.E[a].c[idx];
            v[idx_B + a] = s.B[a].c[idx];
        }
        bool empty = true;
        for (const cplx& w : v)
            if (w != cplx(0.0, 0.0)) {
                empty = false;
                break;
            }
        if (empty) return;

        ModeMatrix mm = assemble_mode_matrix({k0 * mi, k0 * mj, k0 * mk}, params);
        mm.m *= cplx(t, 0.0);
        const std::vector<cplx> w = expm(mm.m).apply(v);
        out.n.c[idx] = w[idx_n];
        out.theta.c[idx] = w[idx_theta];
        for (int a = 0; a < 3; ++a) {
            out.u[a].c[idx] = w[idx_u + a];
            out.E[a].c[idx] = w[idx_E + a];
            out.B[a].c[idx] = w[idx_B + a];
        }
    });
    return out;
}

} // namespace emx
