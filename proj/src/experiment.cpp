#include "t2smc/experiment.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>
#include <sstream>

namespace t2smc {

bool ExperimentConfig::operator==(const ExperimentConfig& o) const {
    return plant_preset == o.plant_preset && plant_n == o.plant_n && plant_f == o.plant_f &&
           plant_delta_f == o.plant_delta_f && plant_d == o.plant_d && bounds == o.bounds &&
           with_uncertainty == o.with_uncertainty && with_disturbance == o.with_disturbance &&
           lambda == o.lambda && adaptive_gains == o.adaptive_gains &&
           stc_lambda1 == o.stc_lambda1 && stc_lambda2 == o.stc_lambda2 && stc_eta == o.stc_eta &&
           k_switch == o.k_switch && radii == o.radii && mf_x == o.mf_x && mf_s == o.mf_s &&
           reference_preset == o.reference_preset && sim == o.sim && out_dir == o.out_dir;
}

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fmt_list(const std::vector<double>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ' ';
        out += fmt(v[i]);
    }
    return out;
}

struct Loc {
    int line;
    std::string key;
    [[noreturn]] void fail(const std::string& what) const {
        throw ConfigError("line " + std::to_string(line) + ", key '" + key + "': " + what);
    }
};

double parse_double(const std::string& v, const Loc& loc) {
    std::size_t pos = 0;
    double out = 0.0;
    try {
        out = std::stod(v, &pos);
    } catch (const std::exception&) {
        loc.fail("expected a number, got '" + v + "'");
    }
    if (pos != v.size()) loc.fail("trailing characters after number in '" + v + "'");
    return out;
}

int parse_int(const std::string& v, const Loc& loc) {
    std::size_t pos = 0;
    int out = 0;
    try {
        out = std::stoi(v, &pos);
    } catch (const std::exception&) {
        loc.fail("expected an integer, got '" + v + "'");
    }
    if (pos != v.size()) loc.fail("trailing characters after integer in '" + v + "'");
    return out;
}

std::uint64_t parse_u64(const std::string& v, const Loc& loc) {
    std::size_t pos = 0;
    std::uint64_t out = 0;
    try {
        out = std::stoull(v, &pos);
    } catch (const std::exception&) {
        loc.fail("expected an unsigned integer, got '" + v + "'");
    }
    if (pos != v.size()) loc.fail("trailing characters after integer in '" + v + "'");
    return out;
}

bool parse_on_off(const std::string& v, const Loc& loc) {
    if (v == "on" || v == "true") return true;
    if (v == "off" || v == "false") return false;
    loc.fail("expected on/off, got '" + v + "'");
}

std::vector<double> parse_list(const std::string& v, const Loc& loc) {
    std::vector<double> out;
    std::istringstream in(v);
    std::string tok;
    while (in >> tok) {
        if (!tok.empty() && tok.back() == ',') tok.pop_back();
        if (tok.empty()) continue;
        out.push_back(parse_double(tok, loc));
    }
    if (out.empty()) loc.fail("expected a list of numbers");
    return out;
}

} // namespace

ExperimentConfig parse_config(const std::string& text) {
    ExperimentConfig cfg;

    using Setter = void (*)(ExperimentConfig&, const std::string&, const Loc&);
    static const std::map<std::string, Setter> setters = {
        {"plant.preset", [](ExperimentConfig& c, const std::string& v, const Loc& loc) {
             if (v != "duffing" && v != "custom") loc.fail("expected duffing|custom");
             c.plant_preset = v;
         }},
        {"plant.n", [](ExperimentConfig& c, const std::string& v, const Loc& loc) { c.plant_n = parse_int(v, loc); }},
        {"plant.f", [](ExperimentConfig& c, const std::string& v, const Loc&) { c.plant_f = v; }},
        {"plant.delta_f", [](ExperimentConfig& c, const std::string& v, const Loc&) { c.plant_delta_f = v; }},
        {"plant.d", [](ExperimentConfig& c, const std::string& v, const Loc&) { c.plant_d = v; }},
        {"plant.f_bound", [](ExperimentConfig& c, const std::string& v, const Loc& loc) { c.bounds.f_bound = parse_double(v, loc); }},
        {"plant.delta_f_bound", [](ExperimentConfig& c, const std::string& v, const Loc& loc) { c.bounds.delta_f_bound = parse_double(v, loc); }},
        {"plant.delta_d_bound", [](ExperimentConfig& c, const std::string& v, const Loc& loc) { c.bounds.delta_d_bound = parse_double(v, loc); }},
        {"plant.uncertainty", [](ExperimentConfig& c, const std::string& v, const Loc& loc) { c.with_uncertainty = parse_on_off(v, loc); }},
        {"plant.disturbance", [](ExperimentConfig& c, const std::string& v, const Loc& loc) { c.with_disturbance = parse_on_off(v, loc); }},
        {"controller.kind", [](ExperimentConfig& c, const std::string& v, const Loc& loc) {
             try {
                 c.sim.kind = controller_kind_from_string(v);
             } catch (const std::exception& e) {
                 loc.fail(e.what());
             }
         }},
        {"controller.lambda", [](ExperimentConfig& c, const std::string& v, const Loc& loc) { c.lambda = parse_double(v, loc); }},
        {"controller.gamma_f", [](ExperimentConfig& c, const std::string& v, const Loc& loc) { c.adaptive_gains.gamma_f = parse_double(v, loc); }},
        {"controller.gamma1", [](ExperimentConfig& c, const std::string& v, const Loc& loc) { c.adaptive_gains.gamma1 = parse_double(v, loc); }},
        {"controller.gamma2", [](ExperimentConfig& c, const std::string& v, const Loc& loc) { c.adaptive_gains.gamma2 = parse_double(v, loc); }},
        {"controller.stc_lambda1", [](ExperimentConfig& c, const std::string& v, const Loc& loc) { c.stc_lambda1 = parse_double(v, loc); }},
        {"controller.stc_lambda2", [](ExperimentConfig& c, const std::string& v, const Loc& loc) { c.stc_lambda2 = parse_double(v, loc); }},
        {"controller.stc_eta", [](ExperimentConfig& c, const std::string& v, const Loc& loc) { c.stc_eta = parse_double(v, loc); }},
        {"controller.k_switch", [](ExperimentConfig& c, const std::string& v, const Loc& loc) { c.k_switch = parse_double(v, loc); }},
        {"controller.proj_radius_f", [](ExperimentConfig& c, const std::string& v, const Loc& loc) { c.radii.m_f = parse_double(v, loc); }},
        {"controller.proj_radius_1", [](ExperimentConfig& c, const std::string& v, const Loc& loc) { c.radii.m_1 = parse_double(v, loc); }},
        {"controller.proj_radius_2", [](ExperimentConfig& c, const std::string& v, const Loc& loc) { c.radii.m_2 = parse_double(v, loc); }},
        {"controller.projection", [](ExperimentConfig& c, const std::string& v, const Loc& loc) { c.radii.enabled = parse_on_off(v, loc); }},
        {"mf.x.m1", [](ExperimentConfig& c, const std::string& v, const Loc& loc) { c.mf_x.m1 = parse_list(v, loc); }},
        {"mf.x.m2", [](ExperimentConfig& c, const std::string& v, const Loc& loc) { c.mf_x.m2 = parse_list(v, loc); }},
        {"mf.x.sigma", [](ExperimentConfig& c, const std::string& v, const Loc& loc) { c.mf_x.sigma = parse_list(v, loc); }},
        {"mf.s.m1", [](ExperimentConfig& c, const std::string& v, const Loc& loc) { c.mf_s.m1 = parse_list(v, loc); }},
        {"mf.s.m2", [](ExperimentConfig& c, const std::string& v, const Loc& loc) { c.mf_s.m2 = parse_list(v, loc); }},
        {"mf.s.sigma", [](ExperimentConfig& c, const std::string& v, const Loc& loc) { c.mf_s.sigma = parse_list(v, loc); }},
        {"reference.preset", [](ExperimentConfig& c, const std::string& v, const Loc& loc) {
             if (v != "composite-sine") loc.fail("expected composite-sine");
             c.reference_preset = v;
         }},
        {"sim.t_end", [](ExperimentConfig& c, const std::string& v, const Loc& loc) { c.sim.t_end = parse_double(v, loc); }},
        {"sim.step", [](ExperimentConfig& c, const std::string& v, const Loc& loc) { c.sim.h = parse_double(v, loc); }},
        {"sim.x0", [](ExperimentConfig& c, const std::string& v, const Loc& loc) { c.sim.x0 = parse_list(v, loc); }},
        {"sim.seed", [](ExperimentConfig& c, const std::string& v, const Loc& loc) { c.sim.seed = parse_u64(v, loc); }},
        {"sim.decimate", [](ExperimentConfig& c, const std::string& v, const Loc& loc) { c.sim.decimate = parse_int(v, loc); }},
        {"noise.snr_db", [](ExperimentConfig& c, const std::string& v, const Loc& loc) {
             if (v == "none") {
                 c.sim.noise.snr_db.reset();
             } else {
                 c.sim.noise.snr_db = parse_double(v, loc);
             }
         }},
        {"out.dir", [](ExperimentConfig& c, const std::string& v, const Loc&) { c.out_dir = v; }},
    };

    std::map<std::string, int> seen;
    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string line = raw;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value', got '" +
                              trim(raw) + "'");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        const Loc loc{line_no, key};
        auto it = setters.find(key);
        if (it == setters.end()) loc.fail("unknown key");
        if (auto [pos, inserted] = seen.emplace(key, line_no); !inserted) {
            loc.fail("duplicate key (first set on line " + std::to_string(pos->second) + ")");
        }
        it->second(cfg, value, loc);
    }

    std::string missing;
    for (const char* req : {"controller.kind", "sim.x0"}) {
        if (!seen.count(req)) missing += missing.empty() ? req : std::string(", ") + req;
    }
    if (!missing.empty()) throw ConfigError("missing required keys: " + missing);

    validate(cfg);
    return cfg;
}

std::string serialize_config(const ExperimentConfig& c) {
    std::ostringstream out;
    out << "plant.preset = " << c.plant_preset << '\n';
    out << "plant.n = " << c.plant_n << '\n';
    if (!c.plant_f.empty()) out << "plant.f = " << c.plant_f << '\n';
    if (!c.plant_delta_f.empty()) out << "plant.delta_f = " << c.plant_delta_f << '\n';
    if (!c.plant_d.empty()) out << "plant.d = " << c.plant_d << '\n';
    out << "plant.f_bound = " << fmt(c.bounds.f_bound) << '\n';
    out << "plant.delta_f_bound = " << fmt(c.bounds.delta_f_bound) << '\n';
    out << "plant.delta_d_bound = " << fmt(c.bounds.delta_d_bound) << '\n';
    out << "plant.uncertainty = " << (c.with_uncertainty ? "on" : "off") << '\n';
    out << "plant.disturbance = " << (c.with_disturbance ? "on" : "off") << '\n';
    out << "controller.kind = " << to_string(c.sim.kind) << '\n';
    out << "controller.lambda = " << fmt(c.lambda) << '\n';
    out << "controller.gamma_f = " << fmt(c.adaptive_gains.gamma_f) << '\n';
    out << "controller.gamma1 = " << fmt(c.adaptive_gains.gamma1) << '\n';
    out << "controller.gamma2 = " << fmt(c.adaptive_gains.gamma2) << '\n';
    out << "controller.stc_lambda1 = " << fmt(c.stc_lambda1) << '\n';
    out << "controller.stc_lambda2 = " << fmt(c.stc_lambda2) << '\n';
    out << "controller.stc_eta = " << fmt(c.stc_eta) << '\n';
    out << "controller.k_switch = " << fmt(c.k_switch) << '\n';
    out << "controller.proj_radius_f = " << fmt(c.radii.m_f) << '\n';
    out << "controller.proj_radius_1 = " << fmt(c.radii.m_1) << '\n';
    out << "controller.proj_radius_2 = " << fmt(c.radii.m_2) << '\n';
    out << "controller.projection = " << (c.radii.enabled ? "on" : "off") << '\n';
    out << "mf.x.m1 = " << fmt_list(c.mf_x.m1) << '\n';
    out << "mf.x.m2 = " << fmt_list(c.mf_x.m2) << '\n';
    out << "mf.x.sigma = " << fmt_list(c.mf_x.sigma) << '\n';
    out << "mf.s.m1 = " << fmt_list(c.mf_s.m1) << '\n';
    out << "mf.s.m2 = " << fmt_list(c.mf_s.m2) << '\n';
    out << "mf.s.sigma = " << fmt_list(c.mf_s.sigma) << '\n';
    out << "reference.preset = " << c.reference_preset << '\n';
    out << "sim.t_end = " << fmt(c.sim.t_end) << '\n';
    out << "sim.step = " << fmt(c.sim.h) << '\n';
    out << "sim.x0 = " << fmt_list(c.sim.x0) << '\n';
    out << "sim.seed = " << c.sim.seed << '\n';
    out << "sim.decimate = " << c.sim.decimate << '\n';
    out << "noise.snr_db = " << (c.sim.noise.snr_db ? fmt(*c.sim.noise.snr_db) : "none") << '\n';
    out << "out.dir = " << c.out_dir << '\n';
    return out.str();
}

ExperimentConfig preset(const std::string& name) {
    ExperimentConfig c;
    c.plant_preset = "duffing";
    c.plant_n = 2;
    c.bounds = PlantBounds{50.0, std::numbers::pi / 6.0, 1.0};
    c.lambda = 10.0;
    c.adaptive_gains = AdaptiveGains{15.0, 10.0, 6.0};
    c.stc_lambda1 = 2.0;
    c.stc_lambda2 = 6.0;
    c.stc_eta = 0.1;
    c.k_switch = 2.5;
    // mf_x / mf_s keep their struct defaults (the tabulated seven interval
    // sets per state input and the three sets over s).
    c.reference_preset = "composite-sine";
    c.sim.h = 1e-3;
    c.sim.seed = 0;
    c.sim.decimate = 1;

    if (name == "duffing-track") {
        c.with_uncertainty = true;
        c.with_disturbance = true;
        c.sim.kind = ControllerKind::adaptive_t2_stc;
        c.sim.t_end = 20.0;
        c.sim.x0 = {1.0, 0.0};
        c.sim.noise.snr_db = 20.0;
        c.out_dir = "out/duffing-track";
        return c;
    }
    if (name == "duffing-free") {
        c.with_uncertainty = false;
        c.with_disturbance = false;
        c.sim.kind = ControllerKind::none;
        c.sim.t_end = 100.0;
        c.sim.x0 = {0.1, 0.0};
        c.sim.noise.snr_db.reset();
        c.out_dir = "out/duffing-free";
        return c;
    }
    throw ConfigError("unknown preset '" + name + "' (available: duffing-track, duffing-free)");
}

std::vector<std::string> preset_names() { return {"duffing-track", "duffing-free"}; }

namespace {

void check_mf_table(const MfTable& t, const std::string& prefix) {
    if (t.m1.size() != t.m2.size() || t.m1.size() != t.sigma.size()) {
        throw ConfigError(prefix + ": m1, m2 and sigma lists must have equal length");
    }
    if (t.m1.empty()) throw ConfigError(prefix + ": needs at least one set");
    for (std::size_t i = 0; i < t.m1.size(); ++i) {
        if (t.m1[i] > t.m2[i]) {
            throw ConfigError(prefix + ": set " + std::to_string(i + 1) + " has m1 > m2");
        }
        if (!(t.sigma[i] > 0.0)) {
            throw ConfigError(prefix + ": set " + std::to_string(i + 1) + " has sigma <= 0");
        }
    }
}

void check_positive(double v, const std::string& field) {
    if (!(v > 0.0)) throw ConfigError(field + ": must be positive");
}

} // namespace

void validate(const ExperimentConfig& c) {
    if (c.plant_preset == "custom" && trim(c.plant_f).empty()) {
        throw ConfigError("plant.f: required for custom plants");
    }
    if (c.plant_n < 2) throw ConfigError("plant.n: must be >= 2");
    check_positive(c.lambda, "controller.lambda");
    check_positive(c.adaptive_gains.gamma_f, "controller.gamma_f");
    check_positive(c.adaptive_gains.gamma1, "controller.gamma1");
    check_positive(c.adaptive_gains.gamma2, "controller.gamma2");
    check_positive(c.stc_lambda1, "controller.stc_lambda1");
    check_positive(c.stc_lambda2, "controller.stc_lambda2");
    check_positive(c.stc_eta, "controller.stc_eta");
    check_positive(c.k_switch, "controller.k_switch");
    if (c.radii.m_f < 0.0 || c.radii.m_1 < 0.0 || c.radii.m_2 < 0.0) {
        throw ConfigError("controller.proj_radius_*: must be >= 0");
    }
    check_mf_table(c.mf_x, "mf.x");
    check_mf_table(c.mf_s, "mf.s");
    if (!(c.sim.h > 0.0 && c.sim.h <= 0.01)) throw ConfigError("sim.step: must satisfy 0 < h <= 0.01");
    if (!(c.sim.t_end > 0.0)) throw ConfigError("sim.t_end: must be positive");
    if (c.sim.decimate < 1) throw ConfigError("sim.decimate: must be >= 1");
    if (c.sim.x0.size() != static_cast<std::size_t>(c.plant_n)) {
        throw ConfigError("sim.x0: length must match plant.n");
    }
    if (c.sim.noise.snr_db && !std::isfinite(*c.sim.noise.snr_db)) {
        throw ConfigError("noise.snr_db: must be finite or none");
    }
}

PlantModel build_plant(const ExperimentConfig& c) {
    PlantModel m;
    if (c.plant_preset == "duffing") {
        m = duffing_preset();
        m.bounds = c.bounds;
    } else {
        m = custom_plant(c.plant_n, c.plant_f, c.plant_delta_f, c.plant_d, c.bounds);
    }
    return strip_perturbations(std::move(m), c.with_uncertainty, c.with_disturbance);
}

ReferenceSignal build_reference(const ExperimentConfig&) { return reference_preset(); }

std::vector<IT2GaussianSet> make_sets(const MfTable& t) {
    std::vector<IT2GaussianSet> sets;
    sets.reserve(t.m1.size());
    for (std::size_t i = 0; i < t.m1.size(); ++i) sets.emplace_back(t.m1[i], t.m2[i], t.sigma[i]);
    return sets;
}

AdaptiveController build_adaptive_controller(const ExperimentConfig& c) {
    const auto x_sets = make_sets(c.mf_x);
    const auto s_sets = make_sets(c.mf_s);
    std::vector<std::vector<IT2GaussianSet>> per_input(static_cast<std::size_t>(c.plant_n), x_sets);
    FuzzyApproximator f_hat(build_grid_rulebase(per_input));
    FuzzyApproximator u1_hat(build_grid_rulebase({s_sets}));
    FuzzyApproximator u2_hat(build_grid_rulebase({s_sets}));
    return AdaptiveController(std::move(f_hat), std::move(u1_hat), std::move(u2_hat),
                              c.adaptive_gains, c.radii);
}

ControllerSetup build_controller_setup(const ExperimentConfig& c) {
    ControllerSetup setup;
    setup.sliding = SlidingSpec(c.plant_n, c.lambda);
    const double delta = (c.with_uncertainty ? c.bounds.delta_f_bound : 0.0) +
                         (c.with_disturbance ? c.bounds.delta_d_bound : 0.0);
    setup.stc = SuperTwistingGains{c.stc_lambda1, c.stc_lambda2, c.stc_eta, delta};
    setup.k_switch = c.k_switch;
    if (c.sim.kind == ControllerKind::adaptive_t2_stc) {
        setup.adaptive = build_adaptive_controller(c);
    }
    return setup;
}

RunResult run_experiment(const ExperimentConfig& cfg) {
    validate(cfg);
    const PlantModel plant = build_plant(cfg);
    const ReferenceSignal ref = build_reference(cfg);
    return run_closed_loop(cfg.sim, plant, build_controller_setup(cfg), ref);
}

void write_csv(const Trajectory& traj, const std::filesystem::path& path) {
    std::FILE* f = std::fopen(path.string().c_str(), "wb");
    if (!f) throw IoError("cannot open '" + path.string() + "' for writing");
    std::fputs("t,x1,x2,x1_meas,x2_meas,yd,yd_dot,e1,e2,s,u,norm_thf,norm_th1,norm_th2\n", f);
    for (std::size_t i = 0; i < traj.rows(); ++i) {
        std::fprintf(f, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                     traj.t[i], traj.x1[i], traj.x2[i], traj.x1_meas[i], traj.x2_meas[i],
                     traj.yd[i], traj.yd_dot[i], traj.e1[i], traj.e2[i], traj.s[i], traj.u[i],
                     traj.norm_thf[i], traj.norm_th1[i], traj.norm_th2[i]);
    }
    const bool bad = std::ferror(f) != 0;
    std::fclose(f);
    if (bad) throw IoError("write failed for '" + path.string() + "'");
}

std::string format_metrics(const Metrics& m) {
    std::ostringstream out;
    out << "rmse_e1 = " << fmt(m.rmse_e1) << '\n';
    out << "rmse_e2 = " << fmt(m.rmse_e2) << '\n';
    out << "tv_u = " << fmt(m.tv_u) << '\n';
    out << "settle_time = " << (m.settle_time ? fmt(*m.settle_time) : "unsettled") << '\n';
    out << "s_band_time = " << (m.s_band_time ? fmt(*m.s_band_time) : "unsettled") << '\n';
    return out.str();
}

void write_metrics(const Metrics& m, const std::filesystem::path& path) {
    std::FILE* f = std::fopen(path.string().c_str(), "wb");
    if (!f) throw IoError("cannot open '" + path.string() + "' for writing");
    const std::string text = format_metrics(m);
    std::fwrite(text.data(), 1, text.size(), f);
    const bool bad = std::ferror(f) != 0;
    std::fclose(f);
    if (bad) throw IoError("write failed for '" + path.string() + "'");
}

} // namespace t2smc
