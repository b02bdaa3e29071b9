#pragma once

#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "emx/simulation.hpp"

namespace emx {

using ojson = nlohmann::ordered_json;

// All file output is write-temp-then-rename so partially written runs never
// look like results. CSV doubles are %.17g, so identical runs are
// byte-identical.

inline void atomic_write(const std::filesystem::path& path, const std::string& content) {
    std::filesystem::create_directories(path.parent_path().empty() ? "." : path.parent_path());
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
        out << content;
    }
    std::filesystem::rename(tmp, path);
}

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw config_error("cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

namespace iodet {
inline std::string fmt(double v) { return cfgdet::fmt(v); }
} // namespace iodet

inline constexpr int timeseries_schema_version = 1;

// Column layout is append-only versioned: new columns bump the version and
// are appended on the right.
inline std::string timeseries_csv(const TrajectoryRecord& rec, const RunConfig& cfg) {
    std::ostringstream out;
    out << "schema_version,t,E_N,D_N";
    for (int l = 0; l <= cfg.diag_order; ++l) out << ",lvl" << l;
    out << ",r_E,r_B,min_1pn,min_1pth";
    for (int k : cfg.window_ks)
        out << ",win" << k << "_E,win" << k << "_D,win" << k << "_cross_n,win" << k
            << "_cross_E,win" << k << "_cross_B,win" << k << "_Etilde";
    for (const NegNormRequest& r : cfg.neg_norms)
        out << ",neg_" << (r.besov ? "besov" : "hs") << "_" << iodet::fmt(r.s);
    for (std::size_t i = 0; i < cfg.claims.size(); ++i) out << ",claim" << i;
    out << "\n";
    for (const Sample& s : rec.samples) {
        out << timeseries_schema_version << "," << iodet::fmt(s.t) << ","
            << iodet::fmt(s.energy.E_N) << "," << iodet::fmt(s.energy.D_N);
        for (double v : s.energy.level_all) out << "," << iodet::fmt(v);
        out << "," << iodet::fmt(s.energy.r_E) << "," << iodet::fmt(s.energy.r_B) << ","
            << iodet::fmt(s.energy.min_1pn) << "," << iodet::fmt(s.energy.min_1pth);
        for (const WindowFunctionals& w : s.windows)
            out << "," << iodet::fmt(w.E_window) << "," << iodet::fmt(w.D_window) << ","
                << iodet::fmt(w.cross_n) << "," << iodet::fmt(w.cross_E) << ","
                << iodet::fmt(w.cross_B) << "," << iodet::fmt(w.E_tilde);
        for (const NormTrack& n : s.neg_norms) out << "," << iodet::fmt(n.value);
        for (double v : s.claim_values) out << "," << iodet::fmt(v);
        out << "\n";
    }
    return out.str();
}

inline std::string projections_csv(const TrajectoryRecord& rec) {
    std::ostringstream out;
    out << "schema_version,step,t,r_E_pre,r_B_pre\n";
    for (const ProjectionEvent& p : rec.projections)
        out << timeseries_schema_version << "," << p.step << "," << iodet::fmt(p.t) << ","
            << iodet::fmt(p.r_E_pre) << "," << iodet::fmt(p.r_B_pre) << "\n";
    return out.str();
}

// Sparse spectral snapshot: one row per mode that carries any coefficient.
inline std::string snapshot_csv(const PlasmaState& s) {
    std::ostringstream out;
    out << "schema_version,mi,mj,mk";
    const char* names[] = {"n", "u1", "u2", "u3", "theta", "E1", "E2", "E3", "B1", "B2", "B3"};
    for (const char* nm : names) out << ",re_" << nm << ",im_" << nm;
    out << "\n";
    const Grid& g = s.grid;
    detail::for_each_mode(g, [&](std::size_t idx, int mi, int mj, int mk) {
        const SpectralField* fields[] = {&s.n,    &s.u[0], &s.u[1], &s.u[2],
                                         &s.theta, &s.E[0], &s.E[1], &s.E[2],
                                         &s.B[0],  &s.B[1], &s.B[2]};
        bool any = false;
        for (const SpectralField* f : fields)
            if (f->c[idx] != cplx(0.0, 0.0)) {
                any = true;
                break;
            }
        if (!any) return;
        out << timeseries_schema_version << "," << mi << "," << mj << "," << mk;
        for (const SpectralField* f : fields)
            out << "," << iodet::fmt(f->c[idx].real()) << "," << iodet::fmt(f->c[idx].imag());
        out << "\n";
    });
    return out.str();
}

inline ojson manifest_json(const RunConfig& cfg, const TrajectoryRecord& rec,
                           const std::string& command, double wall_seconds,
                           const std::string& version) {
    ojson m;
    m["schema"] = "emx.manifest.v1";
    m["version"] = version;
    m["command"] = command;
    m["seed"] = cfg.seed;
    m["config"] = serialize_config(cfg);
    m["samples"] = rec.samples.size();
    m["projections"] = rec.projections.size();
    if (rec.blowup) {
        m["blowup"] = ojson{{"t", rec.blowup->t}, {"what", rec.blowup->what}};
    }
    m["wall_seconds"] = wall_seconds;
    return m;
}

struct ClaimOutcome {
    DecayClaim claim;
    double predicted = 0.0;
    double required_N = 0.0;
    ClaimVerdict verdict = ClaimVerdict::consistent;
    std::optional<DecayFit> fit;
    std::string note;
};

inline ojson decay_report_json(const RunConfig& cfg, const std::vector<ClaimOutcome>& outcomes) {
    ojson rep;
    rep["schema"] = "emx.decay_report.v1";
    rep["caveat"] = torus_gap_caveat;
    rep["seed"] = cfg.seed;
    rep["config_N"] = cfg.diag_order;
    rep["tolerance"] = cfg.decay_tolerance;
    rep["claims"] = ojson::array();
    for (const ClaimOutcome& o : outcomes) {
        ojson c;
        c["tier"] = o.claim.tier == DecayTier::basic       ? "basic"
                    : o.claim.tier == DecayTier::further1  ? "further1"
                    : o.claim.tier == DecayTier::further11 ? "further11"
                                                           : "further2";
        c["k"] = o.claim.k;
        c["source"] = o.claim.source == RegularitySource::hs      ? "hs"
                      : o.claim.source == RegularitySource::besov ? "besov"
                                                                  : "lp";
        c["value"] = o.claim.value;
        c["s"] = claim_regularity_s(o.claim);
        c["window"] = ojson::array({o.claim.window_t0, o.claim.window_t1});
        c["predicted_exponent"] = o.predicted;
        c["required_N"] = o.required_N;
        if (o.fit) {
            c["fit"] = ojson{{"exponent", o.fit->exponent}, {"stderr", o.fit->stderr_},
                             {"r2", o.fit->r2},             {"exp_rate", o.fit->exp_rate},
                             {"exp_r2", o.fit->exp_r2},     {"samples", o.fit->count}};
        }
        c["verdict"] = verdict_name(o.verdict);
        if (!o.note.empty()) c["note"] = o.note;
        rep["claims"].push_back(c);
    }
    return rep;
}

// Markdown-friendly claim table bundled next to the JSON report.
inline std::string decay_summary_md(const RunConfig& cfg,
                                    const std::vector<ClaimOutcome>& outcomes) {
    std::ostringstream out;
    out << "# Decay study summary\n\n";
    out << "seed " << cfg.seed << ", grid " << cfg.points_per_axis << "^3, L = "
        << iodet::fmt(cfg.box_length) << ", N = " << cfg.diag_order << ", tolerance +-"
        << iodet::fmt(cfg.decay_tolerance) << "\n\n";
    out << "| tier | k | source | s | predicted | fitted | stderr | R^2 | required N | "
           "verdict |\n";
    out << "|---|---|---|---|---|---|---|---|---|---|\n";
    for (const ClaimOutcome& o : outcomes) {
        const char* tier = o.claim.tier == DecayTier::basic       ? "basic"
                           : o.claim.tier == DecayTier::further1  ? "further1"
                           : o.claim.tier == DecayTier::further11 ? "further11"
                                                                  : "further2";
        const char* src = o.claim.source == RegularitySource::hs      ? "hs"
                          : o.claim.source == RegularitySource::besov ? "besov"
                                                                      : "lp";
        out << "| " << tier << " | " << o.claim.k << " | " << src << " | "
            << iodet::fmt(claim_regularity_s(o.claim)) << " | " << iodet::fmt(o.predicted)
            << " | " << (o.fit ? iodet::fmt(o.fit->exponent) : std::string("n/a")) << " | "
            << (o.fit ? iodet::fmt(o.fit->stderr_) : std::string("n/a")) << " | "
            << (o.fit ? iodet::fmt(o.fit->r2) : std::string("n/a")) << " | "
            << iodet::fmt(o.required_N) << " | " << verdict_name(o.verdict) << " |\n";
    }
    out << "\n> " << torus_gap_caveat << "\n";
    return out.str();
}

inline ojson inequality_report_json(const InequalityReport& r) {
    ojson j;
    j["lemma"] = lemma_name(r.lemma);
    j["samples"] = r.samples;
    j["seed"] = r.seed;
    j["max_ratio"] = r.max_ratio;
    j["mean_ratio"] = r.mean_ratio;
    ojson p;
    switch (r.lemma) {
    case Lemma::interp_hs:
    case Lemma::interp_besov:
        p["s"] = r.params.s;
        p["ell"] = r.params.ell;
        p["theta"] = r.theta;
        break;
    case Lemma::gn:
        p["alpha"] = r.params.gn_alpha;
        p["m"] = r.params.gn_m;
        p["l"] = r.params.gn_l;
        p["p"] = std::isinf(r.params.gn_p) ? ojson("inf") : ojson(r.params.gn_p);
        p["theta"] = r.theta;
        break;
    case Lemma::commutator:
    case Lemma::composition: p["k"] = r.params.k; break;
    case Lemma::riesz:
    case Lemma::lp_besov:
        p["s"] = r.params.s;
        p["p"] = 1.0 / (0.5 + r.params.s / 3.0);
        break;
    }
    j["params"] = p;
    return j;
}

} // namespace emx
