#pragma once

#include "emx/model.hpp"

namespace emx {

struct StepControl {
    double cfl = 0.4;          // in (0, 1]
    double max_dt = 0.05;
    int reproject_every = 50;  // steps between constraint projections
    double t_end = 1.0;
    double sample_every = 0.1; // diagnostic cadence in time units

    void validate() const {
        if (!(cfl > 0.0) || cfl > 1.0)
            throw parameter_error("step control: cfl must be in (0,1]");
        if (!(max_dt > 0.0)) throw parameter_error("step control: max_dt must be > 0");
        if (reproject_every < 1)
            throw parameter_error("step control: reproject_every must be >= 1");
        if (t_end < 0.0) throw parameter_error("step control: t_end must be >= 0");
        if (!(sample_every > 0.0))
            throw parameter_error("step control: sample_every must be > 0");
    }
};

// dt = cfl * dx / (1 + max|u| + max sqrt(1+theta) + 1), capped by max_dt.
// Light speed and the acoustic speed sqrt(1+theta) are both order one in
// the nondimensionalized system; the two 1's cover light and relaxation.
inline double cfl_dt(const PlasmaState& s, const StepControl& ctl) {
    double umax = 0.0;
    for (const auto& f : s.u) umax = std::max(umax, linf_grid(spectral_to_real(f)));
    const RealField th = spectral_to_real(s.theta);
    double smax = 0.0;
    for (double x : th.v) smax = std::max(smax, std::sqrt(std::max(0.0, 1.0 + x)));
    const double bound = 1.0 + umax + smax + 1.0;
    return std::min(ctl.cfl * s.grid.dx() / bound, ctl.max_dt);
}

// Classical four-stage Runge-Kutta. Because every stage tendency satisfies
// div(dE/dt) + dn/dt = 0 and div(dB/dt) = 0 identically, any RK combination
// conserves the constraints to rounding; no per-step cleaning is needed.
inline PlasmaState rk4_step(const PlasmaState& s, double dt, const ModelParams& p) {
    if (!(dt > 0.0)) throw parameter_error("rk4_step: dt must be positive");
    const PlasmaState k1 = rhs(s, p);

    PlasmaState y2 = s;
    state_axpy(y2, dt / 2.0, k1);
    const PlasmaState k2 = rhs(y2, p);

    PlasmaState y3 = s;
    state_axpy(y3, dt / 2.0, k2);
    const PlasmaState k3 = rhs(y3, p);

    PlasmaState y4 = s;
    state_axpy(y4, dt, k3);
    const PlasmaState k4 = rhs(y4, p);

    PlasmaState out = s;
    state_axpy(out, dt / 6.0, k1);
    state_axpy(out, dt / 3.0, k2);
    state_axpy(out, dt / 3.0, k3);
    state_axpy(out, dt / 6.0, k4);
    out.time = s.time + dt;
    return out;
}

} // namespace emx
