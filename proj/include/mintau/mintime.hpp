#pragma once

#include <optional>
#include <string>

#include "mintau/integrator.hpp"

namespace mintau {

enum class MinTimeMethod { analytic, search, steering_bound };

std::string min_time_method_name(MinTimeMethod m);

// An upper bound on T(x): replaying `control` through the integrator hits the
// target within tol_theta of `value` (analytic results with a misalignment
// correction are the exception; see min_time_analytic).
struct MinTimeResult {
    double value = 0.0;
    ControlSignal control;
    MinTimeMethod method = MinTimeMethod::search;
    double mesh = 0.0;
    long nodes_explored = 0;
};

struct SearchConfig {
    double switch_mesh = 0.0;  // control word cell width, a multiple of dt
    double horizon = 0.0;
    double dt = 0.0;
    int depth_limit = 16;
    double tol_theta = 0.0;  // absolute hit refinement tolerance; <= 0 means 1e-8 * horizon
    bool prune = true;
};

// Depth-first branch and bound over piecewise-constant control words. A node
// at time t with endpoint y is pruned when t + d_K(y)/M >= best, a valid lower
// bound since |y'| <= M. Hits inside a cell are refined by hitting_time.
// Returns nullopt when no word reaches K within the horizon.
std::optional<MinTimeResult> min_time_search(const HistoryPath& x0, const DynamicsSpec& dyn,
                                             const TargetSpec& target, const SearchConfig& cfg);

// Exact oracle for state-independent unit-speed dynamics: T = d_K(x(0)) when
// the exact inward unit vector is in the control list; otherwise the
// misalignment-corrected estimate d_K / cos(alpha) with alpha the angle to the
// best available direction (an estimate, not a replayable hit time).
MinTimeResult min_time_analytic(const HistoryPath& x0, const DynamicsSpec& dyn,
                                const TargetSpec& target);

enum class ValuePolicy { automatic, analytic, search };

// Dispatch: analytic for unit_speed dynamics, otherwise search.
std::optional<MinTimeResult> min_time_value(const HistoryPath& x0, const DynamicsSpec& dyn,
                                            const TargetSpec& target, const SearchConfig& cfg,
                                            ValuePolicy policy = ValuePolicy::automatic);

}  // namespace mintau
