#include "mintau/mintime.hpp"

#include <algorithm>
#include <cmath>

namespace mintau {

std::string min_time_method_name(MinTimeMethod m) {
    switch (m) {
        case MinTimeMethod::analytic: return "analytic";
        case MinTimeMethod::search: return "search";
        case MinTimeMethod::steering_bound: return "steering_bound";
    }
    return "?";
}

namespace {

struct SearchState {
    const DynamicsSpec& dyn;
    const TargetSpec& target;
    const SearchConfig& cfg;
    int max_cells;
    double tol_theta;
    double best = std::numeric_limits<double>::infinity();
    std::vector<int> best_word;
    std::vector<int> word;
    long nodes = 0;
};

void search_node(SearchState& st, const HistoryPath& hist, double t, int depth) {
    const Point z = hist.endpoint();
    double d = st.target.distance(z);
    // lower bound t + d/M: |y'| <= M means the distance cannot shrink faster
    if (st.cfg.prune && t + d / st.dyn.bound_M >= st.best) return;
    if (depth == st.max_cells) return;

    // expand most inward first so good incumbents appear early
    Point e;
    if (d > 0.0) e = scaled(sub(z, st.target.project(z)), 1.0 / d);
    std::vector<std::pair<double, int>> order;
    order.reserve(st.dyn.controls.size());
    for (std::size_t i = 0; i < st.dyn.controls.size(); ++i) {
        double inward = d > 0.0 ? dot(st.dyn.eval(z, st.dyn.controls[i]), e) : 0.0;
        order.emplace_back(inward, static_cast<int>(i));
    }
    std::sort(order.begin(), order.end());

    for (const auto& [inward, idx] : order) {
        if (st.cfg.prune && t + d / st.dyn.bound_M >= st.best) return;
        ++st.nodes;
        Trajectory traj = integrate(hist, ControlSignal::constant(idx), st.dyn,
                                    st.cfg.switch_mesh, st.cfg.dt);
        st.word.push_back(idx);
        if (auto theta = hitting_time(traj, st.target, st.tol_theta)) {
            double cand = t + *theta;
            if (cand < st.best) {
                st.best = cand;
                st.best_word = st.word;
            }
        } else {
            search_node(st, history_at_grid(traj, st.cfg.switch_mesh), t + st.cfg.switch_mesh,
                        depth + 1);
        }
        st.word.pop_back();
    }
}

ControlSignal word_to_control(const std::vector<int>& word, double mesh) {
    ControlSignal u;
    if (word.empty()) return u;
    u.breakpoints.clear();
    for (std::size_t i = 0; i < word.size(); ++i) u.breakpoints.push_back(i * mesh);
    u.segment_controls.assign(word.begin(), word.end() - 1);
    u.tail_control = word.back();
    return u;
}

}  // namespace

std::optional<MinTimeResult> min_time_search(const HistoryPath& x0, const DynamicsSpec& dyn,
                                             const TargetSpec& target, const SearchConfig& cfg) {
    if (!(cfg.switch_mesh > 0.0) || !(cfg.horizon >= cfg.switch_mesh))
        throw ConfigError("min_time_search: need 0 < switch_mesh <= horizon");
    double cells_f = cfg.horizon / cfg.switch_mesh;
    int cells = static_cast<int>(std::floor(cells_f + 1e-9));
    if (cells_f > cfg.depth_limit + 1e-9)
        throw BudgetError("min_time_search: horizon/switch_mesh = " + std::to_string(cells_f) +
                          " exceeds depth limit " + std::to_string(cfg.depth_limit));
    double mesh_ratio = cfg.switch_mesh / cfg.dt;
    if (std::abs(mesh_ratio - std::round(mesh_ratio)) > 1e-9 * std::max(1.0, mesh_ratio))
        throw ConfigError("min_time_search: switch_mesh must be a multiple of dt");

    MinTimeResult res;
    res.method = MinTimeMethod::search;
    res.mesh = cfg.switch_mesh;
    if (target.contains(x0.endpoint())) {
        res.value = 0.0;
        return res;
    }

    SearchState st{dyn, target, cfg, std::max(1, cells),
                   cfg.tol_theta > 0.0 ? cfg.tol_theta : 1e-8 * cfg.horizon};
    search_node(st, x0, 0.0, 0);
    if (!std::isfinite(st.best)) return std::nullopt;
    res.value = st.best;
    res.control = word_to_control(st.best_word, cfg.switch_mesh);
    res.nodes_explored = st.nodes;
    return res;
}

MinTimeResult min_time_analytic(const HistoryPath& x0, const DynamicsSpec& dyn,
                                const TargetSpec& target) {
    if (dyn.kind != FieldKind::unit_speed)
        throw UnsupportedError("min_time_analytic: only unit_speed dynamics are supported");
    MinTimeResult res;
    res.method = MinTimeMethod::analytic;
    const Point z = x0.endpoint();
    double d = target.distance(z);
    if (d == 0.0) {
        res.value = 0.0;
        return res;
    }
    Point inward = scaled(sub(target.project(z), z), 1.0 / d);
    int best = 0;
    double best_align = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < dyn.controls.size(); ++i) {
        double a = dot(dyn.controls[i], inward);
        if (a > best_align) {
            best_align = a;
            best = static_cast<int>(i);
        }
    }
    res.control = ControlSignal::constant(best);
    if (best_align >= 1.0 - 1e-12) {
        res.value = d;  // exact: straight shot along the inward direction
    } else {
        if (!(best_align > 0.0))
            throw DomainError("min_time_analytic: no control makes progress toward the target");
        res.value = d / best_align;  // misalignment-corrected estimate d / cos(alpha)
    }
    return res;
}

std::optional<MinTimeResult> min_time_value(const HistoryPath& x0, const DynamicsSpec& dyn,
                                            const TargetSpec& target, const SearchConfig& cfg,
                                            ValuePolicy policy) {
    switch (policy) {
        case ValuePolicy::analytic: return min_time_analytic(x0, dyn, target);
        case ValuePolicy::search: return min_time_search(x0, dyn, target, cfg);
        case ValuePolicy::automatic:
            if (dyn.kind == FieldKind::unit_speed) return min_time_analytic(x0, dyn, target);
            return min_time_search(x0, dyn, target, cfg);
    }
    throw UnsupportedError("min_time_value: unknown policy");
}

}  // namespace mintau
