#include "mintau/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace mintau {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
    throw ConfigError("config field '" + where + "': " + what);
}

double get_num(const json& j, const std::string& key, std::optional<double> fallback = {}) {
    if (!j.contains(key)) {
        if (fallback) return *fallback;
        fail(key, "missing required number");
    }
    if (!j[key].is_number()) fail(key, "expected a number");
    return j[key].get<double>();
}

int get_int(const json& j, const std::string& key, std::optional<int> fallback = {}) {
    if (!j.contains(key)) {
        if (fallback) return *fallback;
        fail(key, "missing required integer");
    }
    if (!j[key].is_number_integer()) fail(key, "expected an integer");
    return j[key].get<int>();
}

Point get_point(const json& j, const std::string& where) {
    if (!j.is_array() || j.empty()) fail(where, "expected a nonempty array of numbers");
    Point p;
    for (const auto& v : j) {
        if (!v.is_number()) fail(where, "expected numbers");
        p.push_back(v.get<double>());
    }
    return p;
}

std::vector<double> get_scales(const json& j, const std::string& key,
                               std::vector<double> fallback) {
    if (!j.contains(key)) return fallback;
    std::vector<double> out;
    for (const auto& v : j[key]) out.push_back(v.get<double>());
    if (out.empty()) fail(key, "expected a nonempty array");
    return out;
}

std::vector<std::vector<double>> get_matrix(const json& j, const std::string& key) {
    std::vector<std::vector<double>> m;
    for (const auto& row : j[key]) m.push_back(get_point(row, key));
    return m;
}

HistoryPath parse_history(const json& j, int dim, double delay, int segments,
                          const std::string& where) {
    std::string kind = j.value("kind", "constant");
    if (kind == "constant") {
        return HistoryPath::constant(dim, delay, segments, get_point(j.at("value"), where));
    }
    if (kind == "linear") {
        return HistoryPath::linear(dim, delay, segments, get_point(j.at("from"), where),
                                   get_point(j.at("to"), where));
    }
    if (kind == "samples") {
        std::vector<double> flat;
        for (const auto& row : j.at("samples")) {
            Point p = get_point(row, where);
            if (static_cast<int>(p.size()) != dim) fail(where, "sample dimension mismatch");
            flat.insert(flat.end(), p.begin(), p.end());
        }
        return HistoryPath(dim, delay, std::move(flat));
    }
    fail(where, "unknown history kind '" + kind + "'");
}

SweepConfig parse_sweep(const json& j, const SweepConfig& defaults) {
    SweepConfig s = defaults;
    s.n_samples = get_int(j, "n_samples", s.n_samples);
    s.dist_lo = get_num(j, "dist_lo", s.dist_lo);
    s.dist_hi = get_num(j, "dist_hi", s.dist_hi);
    s.lip_frac = get_num(j, "lip_frac", s.lip_frac);
    return s;
}

std::vector<SecondDiffProbe> parse_probes(const json& j) {
    std::vector<SecondDiffProbe> out;
    if (!j.contains("probes")) return out;
    for (const auto& p : j["probes"])
        out.push_back({p.at("x").get<std::string>(), p.at("h").get<std::string>()});
    return out;
}

ValuePolicy parse_policy(const std::string& policy, const std::string& where) {
    if (policy == "auto") return ValuePolicy::automatic;
    if (policy == "analytic") return ValuePolicy::analytic;
    if (policy == "search") return ValuePolicy::search;
    fail(where, "expected auto|analytic|search");
}

std::optional<ValuePolicy> parse_policy_override(const json& j, const std::string& where) {
    if (!j.contains("oracle_policy")) return std::nullopt;
    return parse_policy(j["oracle_policy"].get<std::string>(), where);
}

}  // namespace

const HistoryPath& ProblemConfig::history(const std::string& name) const {
    auto it = histories.find(name);
    if (it == histories.end()) throw ConfigError("unknown history '" + name + "'");
    return it->second;
}

const HistoryPath& ProblemConfig::perturbation(const std::string& name) const {
    auto it = perturbations.find(name);
    if (it == perturbations.end()) throw ConfigError("unknown perturbation '" + name + "'");
    return it->second;
}

void ProblemConfig::validate() const {
    dynamics.validate();
    target.validate();
    if (target.dim() != dynamics.dim_state)
        throw ConfigError("target dimension does not match the state dimension");
    if (!(delay > 0.0)) throw ConfigError("delay must be positive");
    if (m_bar < dynamics.bound_M) throw ConfigError("mbar must be >= bound_M");
    double ratio = delay / dt();
    if (std::abs(ratio - std::round(ratio)) > 1e-9 * std::max(1.0, ratio))
        throw ConfigError("delay/dt must be an integer");
    if (grids.switch_mesh > 0.0) {
        double mr = grids.switch_mesh / dt();
        if (std::abs(mr - std::round(mr)) > 1e-9 * std::max(1.0, mr))
            throw ConfigError("switch_mesh must be a multiple of dt");
    }
    if (domain.dim() != dynamics.dim_state)
        throw ConfigError("domain box dimension does not match the state dimension");
    for (int d = 0; d < domain.dim(); ++d)
        if (!(domain.lo[d] < domain.hi[d])) throw ConfigError("domain box must be nonempty");
}

ProblemConfig parse_problem_config(const std::string& text, const std::string& origin) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(origin + ": " + e.what());
    }
    try {
        ProblemConfig cfg;
        cfg.name = root.value("name", origin);
        cfg.delay = get_num(root, "delay");
        cfg.seed = root.value("seed", 0ull);

        const json& dj = root.at("dynamics");
        DynamicsSpec dyn;
        dyn.kind = field_kind_from_name(dj.at("field").get<std::string>());
        dyn.dim_state = get_int(dj, "dim_state", 1);
        dyn.bound_M = get_num(dj, "bound_M");
        dyn.lipschitz_L = get_num(dj, "lipschitz_L", 0.0);
        dyn.semiconcavity_cf = get_num(dj, "semiconcavity_cf", 0.0);
        for (const auto& u : dj.at("controls")) dyn.controls.push_back(get_point(u, "controls"));
        dyn.dim_control = static_cast<int>(dyn.controls.front().size());
        if (dyn.kind == FieldKind::clamped_linear) {
            dyn.A = get_matrix(dj, "A");
            dyn.B = get_matrix(dj, "B");
            dyn.dim_state = static_cast<int>(dyn.A.size());
        }
        if (dyn.kind == FieldKind::scalar_decay) dyn.dim_state = 1;
        if (dyn.kind == FieldKind::unit_speed) dyn.dim_control = dyn.dim_state;
        cfg.dynamics = std::move(dyn);

        const json& tj = root.at("target");
        std::string kind = tj.value("kind", "ball");
        if (kind != "ball" && kind != "union_of_balls")
            fail("target.kind", "expected 'ball' or 'union_of_balls'");
        for (const auto& c : tj.at("centers"))
            cfg.target.centers.push_back(get_point(c, "target.centers"));
        for (const auto& r : tj.at("radii")) cfg.target.radii.push_back(r.get<double>());
        if (kind == "ball" && cfg.target.centers.size() != 1)
            fail("target", "kind 'ball' requires exactly one center");

        cfg.m_bar = get_num(root, "mbar", cfg.dynamics.bound_M);

        if (root.contains("grids")) {
            const json& gj = root["grids"];
            cfg.grids.history_samples = get_int(gj, "history_samples", 64);
            cfg.grids.dt = get_num(gj, "dt", 0.0);
            cfg.grids.switch_mesh = get_num(gj, "switch_mesh", 0.0);
            cfg.grids.horizon = get_num(gj, "horizon", 0.0);
            cfg.grids.depth_limit = get_int(gj, "depth_limit", 16);
        }
        if (root.contains("petrov")) {
            cfg.petrov.sigma = get_num(root["petrov"], "sigma", 1.0);
            cfg.petrov.shell_grid = get_int(root["petrov"], "shell_grid", 384);
        }
        {
            const json& bj = root.at("domain");
            cfg.domain.lo = get_point(bj.at("lo"), "domain.lo");
            cfg.domain.hi = get_point(bj.at("hi"), "domain.hi");
        }
        if (root.contains("validation")) {
            const json& vj = root["validation"];
            cfg.validation.h1_samples = get_int(vj, "h1_samples", 500);
            cfg.validation.h3_samples = get_int(vj, "h3_samples", 100);
            cfg.validation.h_scales = get_scales(vj, "h_scales", cfg.validation.h_scales);
        }
        if (root.contains("dk")) {
            const json& kj = root["dk"];
            cfg.dk.shell_r = get_num(kj, "shell_r", 1.0);
            cfg.dk.n_samples = get_int(kj, "n_samples", 200);
            cfg.dk.h_scales = get_scales(kj, "h_scales", cfg.dk.h_scales);
        }
        if (root.contains("tolerances")) {
            const json& oj = root["tolerances"];
            auto& t = cfg.tolerances;
            t.tol_theta_rel = get_num(oj, "tol_theta_rel", t.tol_theta_rel);
            t.tol_ratio = get_num(oj, "tol_ratio", t.tol_ratio);
            t.mesh_slack = get_num(oj, "mesh_slack", t.mesh_slack);
            t.tol_lip_rel = get_num(oj, "tol_lip_rel", t.tol_lip_rel);
            t.eps_target_rel = get_num(oj, "eps_target_rel", t.eps_target_rel);
            t.budget_rel = get_num(oj, "budget_rel", t.budget_rel);
            t.distance_bound_rel = get_num(oj, "distance_bound_rel", t.distance_bound_rel);
            t.stability_floor = get_num(oj, "stability_floor", t.stability_floor);
            t.boundary_tol = get_num(oj, "boundary_tol", t.boundary_tol);
        }
        cfg.oracle_policy = parse_policy(root.value("oracle_policy", "auto"), "oracle_policy");

        if (root.contains("experiments")) {
            const json& ej = root["experiments"];
            int n = cfg.dynamics.dim_state;
            int segs = cfg.grids.history_samples;
            if (ej.contains("histories"))
                for (const auto& hj : ej["histories"])
                    cfg.histories.emplace(hj.at("name").get<std::string>(),
                                          parse_history(hj, n, cfg.delay, segs, "histories"));
            if (ej.contains("perturbations"))
                for (const auto& hj : ej["perturbations"])
                    cfg.perturbations.emplace(
                        hj.at("name").get<std::string>(),
                        parse_history(hj, n, cfg.delay, segs, "perturbations"));
            SweepConfig base;
            if (ej.contains("steering")) cfg.steering_sweep = parse_sweep(ej["steering"], base);
            if (ej.contains("dpp")) {
                const json& pj = ej["dpp"];
                cfg.dpp.n_histories = get_int(pj, "n_histories", cfg.dpp.n_histories);
                cfg.dpp.probes_per_history =
                    get_int(pj, "probes_per_history", cfg.dpp.probes_per_history);
                cfg.dpp.controls_per_history =
                    get_int(pj, "controls_per_history", cfg.dpp.controls_per_history);
                cfg.dpp.sweep = parse_sweep(pj, base);
            }
            if (ej.contains("distance_bound"))
                cfg.distance_bound = parse_sweep(ej["distance_bound"], base);
            if (ej.contains("lipschitz")) {
                const json& lj = ej["lipschitz"];
                cfg.lipschitz.n_pairs = get_int(lj, "n_pairs", cfg.lipschitz.n_pairs);
                cfg.lipschitz.perturb_scale =
                    get_num(lj, "perturb_scale", cfg.lipschitz.perturb_scale);
                cfg.lipschitz.sweep = parse_sweep(lj, base);
            }
            if (ej.contains("semiconcavity")) {
                const json& sj = ej["semiconcavity"];
                cfg.semiconcavity.n_samples = get_int(sj, "n_samples", 0);
                cfg.semiconcavity.scales =
                    get_scales(sj, "scales", cfg.semiconcavity.scales);
                cfg.semiconcavity.h_norm = get_num(sj, "h_norm", cfg.semiconcavity.h_norm);
                cfg.semiconcavity.h_lip_frac =
                    get_num(sj, "h_lip_frac", cfg.semiconcavity.h_lip_frac);
                cfg.semiconcavity.sweep = parse_sweep(sj, base);
                cfg.semiconcavity.probes = parse_probes(sj);
                cfg.semiconcavity.policy =
                    parse_policy_override(sj, "semiconcavity.oracle_policy");
            }
            if (ej.contains("boundary")) {
                const json& bj = ej["boundary"];
                cfg.boundary.n_samples = get_int(bj, "n_samples", 0);
                cfg.boundary.scales = get_scales(bj, "scales", cfg.boundary.scales);
                cfg.boundary.h_norm = get_num(bj, "h_norm", cfg.boundary.h_norm);
                cfg.boundary.sweep = parse_sweep(bj, base);
                cfg.boundary.probes = parse_probes(bj);
                cfg.boundary.policy = parse_policy_override(bj, "boundary.oracle_policy");
            }
        }

        cfg.validate();
        return cfg;
    } catch (const json::exception& e) {
        throw ConfigError(origin + ": " + e.what());
    }
}

ProblemConfig load_problem_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_problem_config(buf.str(), path);
}

ControlSignal parse_control_spec(const std::string& spec, int n_controls) {
    ControlSignal u;
    if (spec.rfind("const:", 0) == 0) {
        u.tail_control = std::stoi(spec.substr(6));
        u.validate(n_controls);
        return u;
    }
    u.breakpoints.clear();
    std::stringstream ss(spec);
    std::string item;
    std::vector<std::pair<double, int>> entries;
    while (std::getline(ss, item, ',')) {
        auto colon = item.find(':');
        if (colon == std::string::npos)
            throw ConfigError("control spec: expected 'const:IDX' or 't0:i0,t1:i1,...'");
        entries.emplace_back(std::stod(item.substr(0, colon)),
                             std::stoi(item.substr(colon + 1)));
    }
    if (entries.empty()) throw ConfigError("control spec: empty");
    for (const auto& [t, idx] : entries) u.breakpoints.push_back(t);
    for (std::size_t i = 0; i + 1 < entries.size(); ++i)
        u.segment_controls.push_back(entries[i].second);
    u.tail_control = entries.back().second;
    u.validate(n_controls);
    return u;
}

}  // namespace mintau
