#pragma once

#include "emx/config.hpp"
#include "emx/diagnostics.hpp"
#include "emx/integrator.hpp"

namespace emx {

// One diagnostic row along a trajectory.
struct Sample {
    double t = 0.0;
    EnergyReport energy;
    std::vector<WindowFunctionals> windows;
    std::vector<NormTrack> neg_norms;
    std::vector<double> claim_values;
};

struct ProjectionEvent {
    long step = 0;
    double t = 0.0;
    double r_E_pre = 0.0, r_B_pre = 0.0;
};

struct BlowupEvent {
    double t = 0.0;
    std::string what;
};

struct SnapshotRecord {
    double t = 0.0;
    PlasmaState state;
};

struct TrajectoryRecord {
    std::vector<Sample> samples;
    std::vector<ProjectionEvent> projections;
    std::vector<SnapshotRecord> snapshots;
    std::optional<BlowupEvent> blowup;

    std::vector<LyapunovSample> lyapunov_series(std::size_t window_index) const {
        std::vector<LyapunovSample> out;
        out.reserve(samples.size());
        for (const Sample& s : samples)
            out.push_back({s.t, s.windows.at(window_index).E_tilde,
                           s.windows.at(window_index).D_window});
        return out;
    }

    std::vector<std::pair<double, double>> claim_series(std::size_t claim_index) const {
        std::vector<std::pair<double, double>> out;
        out.reserve(samples.size());
        for (const Sample& s : samples) out.push_back({s.t, s.claim_values.at(claim_index)});
        return out;
    }
};

namespace simdet {

inline Sample take_sample(const PlasmaState& st, const RunConfig& cfg) {
    Sample s;
    s.t = st.time;
    s.energy = energy_report(st, cfg.diag_order);
    for (int k : cfg.window_ks)
        s.windows.push_back(window_functionals(st, k, cfg.window_eps, cfg.window_eta));
    for (const NegNormRequest& r : cfg.neg_norms)
        s.neg_norms.push_back(
            track_negative_norms(st, r.s, r.besov, /*surrogate=*/true));
    for (const DecayClaim& c : cfg.claims) s.claim_values.push_back(claim_series_value(st, c));
    return s;
}

} // namespace simdet

// March the state to t_end, sampling diagnostics on the configured cadence
// and re-projecting the constraints every reproject_every steps (logging the
// pre-projection residual so drift stays observable). The step size is the
// CFL bound snapped so sample times are hit exactly; a vacuum event ends the
// run and is recorded rather than rethrown. Deterministic given the config.
inline TrajectoryRecord run_simulation(const RunConfig& cfg) {
    cfg.validate();
    const Grid g = cfg.grid();
    PlasmaState state = make_initial_data(cfg.init, g, cfg.model);

    TrajectoryRecord rec;
    rec.samples.push_back(simdet::take_sample(state, cfg));
    auto snapshot_due = [&](double t) {
        for (double ts : cfg.snapshot_times)
            if (std::abs(ts - t) < 1e-9) return true;
        return false;
    };
    if (snapshot_due(0.0)) rec.snapshots.push_back({0.0, state});

    long step_count = 0;
    double t = 0.0;
    try {
        while (t < cfg.step.t_end - 1e-12) {
            const double t_next = std::min(t + cfg.step.sample_every, cfg.step.t_end);
            const double dt_bound = cfl_dt(state, cfg.step);
            const int nsteps = std::max(1, int(std::ceil((t_next - t) / dt_bound - 1e-12)));
            const double dt = (t_next - t) / nsteps;
            for (int i = 0; i < nsteps; ++i) {
                ++step_count;
                if (cfg.step.reproject_every > 0 &&
                    step_count % cfg.step.reproject_every == 0) {
                    const auto [re, rb] = constraint_residual(state);
                    rec.projections.push_back({step_count, state.time, re, rb});
                    state = project_constraints(state);
                }
                state = rk4_step(state, dt, cfg.model);
            }
            state.time = t_next; // pin against dt rounding accumulation
            t = t_next;
            rec.samples.push_back(simdet::take_sample(state, cfg));
            if (snapshot_due(t)) rec.snapshots.push_back({t, state});
        }
    } catch (const vacuum_error& e) {
        rec.blowup = BlowupEvent{state.time, e.what()};
    }
    return rec;
}

} // namespace emx
