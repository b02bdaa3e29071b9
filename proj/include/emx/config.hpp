#pragma once

#include <charconv>
#include <cstdio>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "emx/analysis.hpp"
#include "emx/initial_data.hpp"
#include "emx/integrator.hpp"

namespace emx {

// Flat `key = value` configs: one dotted key per line, '#' comments,
// diff-friendly for experiment provenance. parse(serialize(c)) is lossless;
// unknown keys fail fast.

struct NegNormRequest {
    double s = 0.5;
    bool besov = false;
};

struct RunConfig {
    std::uint64_t seed = 42;
    int points_per_axis = 32;
    double box_length = 16.0 * pi;
    ModelParams model;
    InitialDataSpec init;
    StepControl step;
    int diag_order = 3;
    std::vector<int> window_ks{0};
    double window_eps = 0.05;
    double window_eta = 0.1;
    std::vector<NegNormRequest> neg_norms{{0.5, false}};
    std::vector<DecayClaim> claims;
    double decay_tolerance = 0.35;
    std::string output_dir = "out";
    std::vector<double> snapshot_times;
    std::optional<double> synthetic_exponent; // decay-study self-test series

    Grid grid() const { return Grid(points_per_axis, box_length); }

    void validate() const {
        Grid g = grid(); // throws on bad grid parameters
        step.validate();
        if (diag_order < 0 || diag_order > g.dealias_mode())
            throw config_error("diag.order must be in [0, n/3]");
        for (int k : window_ks)
            if (k < 0 || k + 2 > g.dealias_mode())
                throw config_error("diag.windows: k+2 must be resolvable on the grid");
        for (const auto& nn : neg_norms) {
            if (nn.besov ? !(nn.s > 0.0 && nn.s <= 1.5) : !(nn.s > 0.0 && nn.s < 1.5))
                throw config_error("diag.neg_norms: s out of the admissible range");
        }
        if (init.max_mode < 1 || init.max_mode > g.dealias_mode())
            throw config_error("init.max_mode must be in [1, n/3]");
        if (!(init.amplitude > 0.0)) throw config_error("init.amplitude must be positive");
        for (const auto& c : claims) {
            claim_regularity_s(c); // throws on out-of-range source values
            if (c.k < 0) throw config_error("claim k must be >= 0");
            if (!(c.window_t0 >= 0.0) || !(c.window_t1 > c.window_t0))
                throw config_error("claim window must satisfy 0 <= t0 < t1");
            if (c.window_t1 > box_length / 2.0 + 1e-9)
                throw config_error("claim window exceeds the pre-recurrence horizon L/2");
        }
        if (!(decay_tolerance > 0.0)) throw config_error("decay.tolerance must be positive");
    }
};

namespace cfgdet {

inline std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline double to_double(const std::string& s, const std::string& key) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw config_error("config: bad number '" + s + "' for key " + key);
    }
}

inline long to_long(const std::string& s, const std::string& key) {
    try {
        std::size_t pos = 0;
        const long v = std::stol(s, &pos, 10);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw config_error("config: bad integer '" + s + "' for key " + key);
    }
}

inline bool to_bool(const std::string& s, const std::string& key) {
    if (s == "true" || s == "1") return true;
    if (s == "false" || s == "0") return false;
    throw config_error("config: bad boolean '" + s + "' for key " + key);
}

inline std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

inline std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!trim(cur).empty() || !out.empty()) out.push_back(trim(cur));
    return out;
}

// raw key/value map from config text
inline std::map<std::string, std::string> parse_kv(const std::string& text) {
    std::map<std::string, std::string> kv;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw config_error("config: line " + std::to_string(lineno) +
                               " has no '=': " + line);
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (key.empty()) throw config_error("config: empty key on line " + std::to_string(lineno));
        if (kv.count(key)) throw config_error("config: duplicate key " + key);
        kv[key] = val;
    }
    return kv;
}

} // namespace cfgdet

inline std::string serialize_config(const RunConfig& c) {
    using cfgdet::fmt;
    std::ostringstream out;
    out << "schema = emx.run.v1\n";
    out << "seed = " << c.seed << "\n";
    out << "grid.points_per_axis = " << c.points_per_axis << "\n";
    out << "grid.box_length = " << fmt(c.box_length) << "\n";
    out << "model.b_infinity = " << fmt(c.model.b_infinity[0]) << " "
        << fmt(c.model.b_infinity[1]) << " " << fmt(c.model.b_infinity[2]) << "\n";
    out << "model.dealias = " << (c.model.dealias ? "true" : "false") << "\n";
    out << "init.amplitude = " << fmt(c.init.amplitude) << "\n";
    out << "init.profile = "
        << (c.init.profile == Profile::band_limited_random ? "band_limited_random"
                                                           : "gaussian_bump")
        << "\n";
    out << "init.max_mode = " << c.init.max_mode << "\n";
    out << "init.bump_width = " << fmt(c.init.bump_width) << "\n";
    {
        std::string fields;
        if (c.init.mask.n) fields += "n,";
        if (c.init.mask.u) fields += "u,";
        if (c.init.mask.theta) fields += "theta,";
        if (c.init.mask.E) fields += "E,";
        if (c.init.mask.B) fields += "B,";
        if (!fields.empty()) fields.pop_back();
        out << "init.fields = " << (fields.empty() ? "none" : fields) << "\n";
    }
    if (c.init.normalization) {
        const NormKind& k = c.init.normalization->kind;
        const char* name = k.tag == NormKind::Tag::l2            ? "l2"
                           : k.tag == NormKind::Tag::sobolev     ? "sobolev"
                           : k.tag == NormKind::Tag::neg_sobolev ? "neg_sobolev"
                                                                 : "neg_besov";
        out << "init.normalize.kind = " << name << "\n";
        out << "init.normalize.order = " << fmt(k.param) << "\n";
        out << "init.normalize.target = " << fmt(c.init.normalization->target) << "\n";
    } else {
        out << "init.normalize.kind = none\n";
    }
    out << "step.cfl = " << fmt(c.step.cfl) << "\n";
    out << "step.max_dt = " << fmt(c.step.max_dt) << "\n";
    out << "step.t_end = " << fmt(c.step.t_end) << "\n";
    out << "step.sample_every = " << fmt(c.step.sample_every) << "\n";
    out << "step.reproject_every = " << c.step.reproject_every << "\n";
    out << "diag.order = " << c.diag_order << "\n";
    {
        std::string ks;
        for (int k : c.window_ks) ks += std::to_string(k) + ",";
        if (!ks.empty()) ks.pop_back();
        out << "diag.windows = " << (ks.empty() ? "none" : ks) << "\n";
    }
    out << "diag.window_eps = " << fmt(c.window_eps) << "\n";
    out << "diag.window_eta = " << fmt(c.window_eta) << "\n";
    {
        std::string nn;
        for (const auto& r : c.neg_norms)
            nn += std::string(r.besov ? "besov:" : "hs:") + fmt(r.s) + ",";
        if (!nn.empty()) nn.pop_back();
        out << "diag.neg_norms = " << (nn.empty() ? "none" : nn) << "\n";
    }
    out << "decay.tolerance = " << fmt(c.decay_tolerance) << "\n";
    out << "claim.count = " << c.claims.size() << "\n";
    for (std::size_t i = 0; i < c.claims.size(); ++i) {
        const DecayClaim& cl = c.claims[i];
        const std::string p = "claim." + std::to_string(i) + ".";
        const char* tier = cl.tier == DecayTier::basic       ? "basic"
                           : cl.tier == DecayTier::further1  ? "further1"
                           : cl.tier == DecayTier::further11 ? "further11"
                                                             : "further2";
        const char* src = cl.source == RegularitySource::hs      ? "hs"
                          : cl.source == RegularitySource::besov ? "besov"
                                                                 : "lp";
        out << p << "tier = " << tier << "\n";
        out << p << "k = " << cl.k << "\n";
        out << p << "source = " << src << "\n";
        out << p << "value = " << fmt(cl.value) << "\n";
        out << p << "window = " << fmt(cl.window_t0) << " " << fmt(cl.window_t1) << "\n";
    }
    out << "output.dir = " << c.output_dir << "\n";
    {
        std::string sn;
        for (double t : c.snapshot_times) sn += fmt(t) + " ";
        if (!sn.empty()) sn.pop_back();
        out << "output.snapshots = " << (sn.empty() ? "none" : sn) << "\n";
    }
    out << "selftest.synthetic_exponent = "
        << (c.synthetic_exponent ? fmt(*c.synthetic_exponent) : std::string("none")) << "\n";
    return out.str();
}

inline RunConfig parse_config(const std::string& text) {
    using namespace cfgdet;
    std::map<std::string, std::string> kv = parse_kv(text);
    RunConfig c;
    c.claims.clear();

    auto take = [&](const std::string& key) -> std::optional<std::string> {
        auto it = kv.find(key);
        if (it == kv.end()) return std::nullopt;
        std::string v = it->second;
        kv.erase(it);
        return v;
    };

    if (auto v = take("schema"); v && *v != "emx.run.v1")
        throw config_error("config: unknown schema " + *v);
    if (auto v = take("seed")) c.seed = std::uint64_t(to_long(*v, "seed"));
    if (auto v = take("grid.points_per_axis"))
        c.points_per_axis = int(to_long(*v, "grid.points_per_axis"));
    if (auto v = take("grid.box_length")) c.box_length = to_double(*v, "grid.box_length");
    if (auto v = take("model.b_infinity")) {
        std::istringstream bs(*v);
        if (!(bs >> c.model.b_infinity[0] >> c.model.b_infinity[1] >> c.model.b_infinity[2]))
            throw config_error("config: model.b_infinity needs 3 numbers");
    }
    if (auto v = take("model.dealias")) c.model.dealias = to_bool(*v, "model.dealias");
    if (auto v = take("init.amplitude")) c.init.amplitude = to_double(*v, "init.amplitude");
    if (auto v = take("init.profile")) {
        if (*v == "band_limited_random")
            c.init.profile = Profile::band_limited_random;
        else if (*v == "gaussian_bump")
            c.init.profile = Profile::gaussian_bump;
        else
            throw config_error("config: unknown init.profile " + *v);
    }
    if (auto v = take("init.max_mode")) c.init.max_mode = int(to_long(*v, "init.max_mode"));
    if (auto v = take("init.bump_width")) c.init.bump_width = to_double(*v, "init.bump_width");
    if (auto v = take("init.fields")) {
        c.init.mask = FieldMask{false, false, false, false, false};
        if (*v != "none")
            for (const std::string& f : split(*v, ',')) {
                if (f == "n")
                    c.init.mask.n = true;
                else if (f == "u")
                    c.init.mask.u = true;
                else if (f == "theta")
                    c.init.mask.theta = true;
                else if (f == "E")
                    c.init.mask.E = true;
                else if (f == "B")
                    c.init.mask.B = true;
                else
                    throw config_error("config: unknown field '" + f + "' in init.fields");
            }
    }
    {
        const std::optional<std::string> kindv = take("init.normalize.kind");
        const std::optional<std::string> orderv = take("init.normalize.order");
        const std::optional<std::string> targetv = take("init.normalize.target");
        if (kindv && *kindv != "none") {
            const double order = orderv ? to_double(*orderv, "init.normalize.order") : 0.0;
            Normalization nz;
            if (*kindv == "l2")
                nz.kind = NormKind::l2();
            else if (*kindv == "sobolev")
                nz.kind = NormKind::sobolev(order);
            else if (*kindv == "neg_sobolev")
                nz.kind = NormKind::neg_sobolev(order);
            else if (*kindv == "neg_besov")
                nz.kind = NormKind::neg_besov(order);
            else
                throw config_error("config: unknown init.normalize.kind " + *kindv);
            if (!targetv) throw config_error("config: init.normalize.target is required");
            nz.target = to_double(*targetv, "init.normalize.target");
            c.init.normalization = nz;
        } else if (orderv || targetv) {
            throw config_error("config: init.normalize.* given without a kind");
        }
    }
    if (auto v = take("step.cfl")) c.step.cfl = to_double(*v, "step.cfl");
    if (auto v = take("step.max_dt")) c.step.max_dt = to_double(*v, "step.max_dt");
    if (auto v = take("step.t_end")) c.step.t_end = to_double(*v, "step.t_end");
    if (auto v = take("step.sample_every"))
        c.step.sample_every = to_double(*v, "step.sample_every");
    if (auto v = take("step.reproject_every"))
        c.step.reproject_every = int(to_long(*v, "step.reproject_every"));
    if (auto v = take("diag.order")) c.diag_order = int(to_long(*v, "diag.order"));
    if (auto v = take("diag.windows")) {
        c.window_ks.clear();
        if (*v != "none")
            for (const std::string& t : split(*v, ','))
                c.window_ks.push_back(int(to_long(t, "diag.windows")));
    }
    if (auto v = take("diag.window_eps")) c.window_eps = to_double(*v, "diag.window_eps");
    if (auto v = take("diag.window_eta")) c.window_eta = to_double(*v, "diag.window_eta");
    if (auto v = take("diag.neg_norms")) {
        c.neg_norms.clear();
        if (*v != "none")
            for (const std::string& t : split(*v, ',')) {
                const std::size_t colon = t.find(':');
                if (colon == std::string::npos)
                    throw config_error("config: diag.neg_norms entries look like hs:0.5");
                const std::string kind = cfgdet::trim(t.substr(0, colon));
                NegNormRequest r;
                r.s = to_double(cfgdet::trim(t.substr(colon + 1)), "diag.neg_norms");
                if (kind == "hs")
                    r.besov = false;
                else if (kind == "besov")
                    r.besov = true;
                else
                    throw config_error("config: diag.neg_norms kind must be hs or besov");
                c.neg_norms.push_back(r);
            }
    }
    if (auto v = take("decay.tolerance")) c.decay_tolerance = to_double(*v, "decay.tolerance");
    if (auto v = take("claim.count")) {
        const long count = to_long(*v, "claim.count");
        for (long i = 0; i < count; ++i) {
            const std::string p = "claim." + std::to_string(i) + ".";
            DecayClaim cl;
            const auto tierv = take(p + "tier");
            if (!tierv) throw config_error("config: missing " + p + "tier");
            if (*tierv == "basic")
                cl.tier = DecayTier::basic;
            else if (*tierv == "further1")
                cl.tier = DecayTier::further1;
            else if (*tierv == "further11")
                cl.tier = DecayTier::further11;
            else if (*tierv == "further2")
                cl.tier = DecayTier::further2;
            else
                throw config_error("config: unknown tier " + *tierv);
            if (auto kvv = take(p + "k")) cl.k = int(to_long(*kvv, p + "k"));
            const auto srcv = take(p + "source");
            if (!srcv) throw config_error("config: missing " + p + "source");
            if (*srcv == "hs")
                cl.source = RegularitySource::hs;
            else if (*srcv == "besov")
                cl.source = RegularitySource::besov;
            else if (*srcv == "lp")
                cl.source = RegularitySource::lp;
            else
                throw config_error("config: unknown source " + *srcv);
            if (auto vv = take(p + "value")) cl.value = to_double(*vv, p + "value");
            if (auto wv = take(p + "window")) {
                std::istringstream ws(*wv);
                if (!(ws >> cl.window_t0 >> cl.window_t1))
                    throw config_error("config: " + p + "window needs 't0 t1'");
            }
            cl.target = default_target(cl.tier);
            c.claims.push_back(cl);
        }
    }
    if (auto v = take("output.dir")) c.output_dir = *v;
    if (auto v = take("output.snapshots")) {
        c.snapshot_times.clear();
        if (*v != "none") {
            std::istringstream ss(*v);
            double t;
            while (ss >> t) c.snapshot_times.push_back(t);
        }
    }
    if (auto v = take("selftest.synthetic_exponent"); v && *v != "none")
        c.synthetic_exponent = to_double(*v, "selftest.synthetic_exponent");

    if (!kv.empty()) throw config_error("config: unknown key " + kv.begin()->first);
    c.init.seed = c.seed;
    return c;
}

// --- verification-suite config ----------------------------------------------

struct SuiteConfig {
    std::uint64_t seed = 7;
    int samples = 1000;
    int seed_replicates = 5; // for the calibrated-constant lemmas
    int points_per_axis = 24;
    double box_length = 2.0 * pi;
    std::vector<Lemma> lemmas{Lemma::interp_hs,   Lemma::interp_besov, Lemma::gn,
                              Lemma::commutator,  Lemma::composition,  Lemma::riesz,
                              Lemma::lp_besov};
    bool oracle_enabled = true;
    int oracle_points = 16;
    double oracle_amplitude = 1e-8;
    double oracle_t = 1.0;
    int oracle_steps = 100;
    bool constraint_enabled = true;
    bool corrupt_multiplier = false; // negative-control fixture
};

inline std::string serialize_suite(const SuiteConfig& c) {
    using cfgdet::fmt;
    std::ostringstream out;
    out << "schema = emx.suite.v1\n";
    out << "seed = " << c.seed << "\n";
    out << "samples = " << c.samples << "\n";
    out << "seed_replicates = " << c.seed_replicates << "\n";
    out << "grid.points_per_axis = " << c.points_per_axis << "\n";
    out << "grid.box_length = " << fmt(c.box_length) << "\n";
    {
        std::string ls;
        for (Lemma l : c.lemmas) ls += std::string(lemma_name(l)) + ",";
        if (!ls.empty()) ls.pop_back();
        out << "lemmas = " << (ls.empty() ? "none" : ls) << "\n";
    }
    out << "oracle.enabled = " << (c.oracle_enabled ? "true" : "false") << "\n";
    out << "oracle.points_per_axis = " << c.oracle_points << "\n";
    out << "oracle.amplitude = " << fmt(c.oracle_amplitude) << "\n";
    out << "oracle.t = " << fmt(c.oracle_t) << "\n";
    out << "oracle.steps = " << c.oracle_steps << "\n";
    out << "constraint.enabled = " << (c.constraint_enabled ? "true" : "false") << "\n";
    out << "selftest.corrupt_multiplier = " << (c.corrupt_multiplier ? "true" : "false")
        << "\n";
    return out.str();
}

inline SuiteConfig parse_suite(const std::string& text) {
    using namespace cfgdet;
    std::map<std::string, std::string> kv = parse_kv(text);
    SuiteConfig c;
    auto take = [&](const std::string& key) -> std::optional<std::string> {
        auto it = kv.find(key);
        if (it == kv.end()) return std::nullopt;
        std::string v = it->second;
        kv.erase(it);
        return v;
    };
    if (auto v = take("schema"); v && *v != "emx.suite.v1")
        throw config_error("suite: unknown schema " + *v);
    if (auto v = take("seed")) c.seed = std::uint64_t(to_long(*v, "seed"));
    if (auto v = take("samples")) c.samples = int(to_long(*v, "samples"));
    if (auto v = take("seed_replicates"))
        c.seed_replicates = int(to_long(*v, "seed_replicates"));
    if (auto v = take("grid.points_per_axis"))
        c.points_per_axis = int(to_long(*v, "grid.points_per_axis"));
    if (auto v = take("grid.box_length")) c.box_length = to_double(*v, "grid.box_length");
    if (auto v = take("lemmas")) {
        c.lemmas.clear();
        if (*v != "none")
            for (const std::string& t : split(*v, ',')) {
                bool found = false;
                for (Lemma l : {Lemma::interp_hs, Lemma::interp_besov, Lemma::gn,
                                Lemma::commutator, Lemma::composition, Lemma::riesz,
                                Lemma::lp_besov})
                    if (t == lemma_name(l)) {
                        c.lemmas.push_back(l);
                        found = true;
                        break;
                    }
                if (!found) throw config_error("suite: unknown lemma " + t);
            }
    }
    if (auto v = take("oracle.enabled")) c.oracle_enabled = to_bool(*v, "oracle.enabled");
    if (auto v = take("oracle.points_per_axis"))
        c.oracle_points = int(to_long(*v, "oracle.points_per_axis"));
    if (auto v = take("oracle.amplitude"))
        c.oracle_amplitude = to_double(*v, "oracle.amplitude");
    if (auto v = take("oracle.t")) c.oracle_t = to_double(*v, "oracle.t");
    if (auto v = take("oracle.steps")) c.oracle_steps = int(to_long(*v, "oracle.steps"));
    if (auto v = take("constraint.enabled"))
        c.constraint_enabled = to_bool(*v, "constraint.enabled");
    if (auto v = take("selftest.corrupt_multiplier"))
        c.corrupt_multiplier = to_bool(*v, "selftest.corrupt_multiplier");
    if (!kv.empty()) throw config_error("suite: unknown key " + kv.begin()->first);
    return c;
}

} // namespace emx
