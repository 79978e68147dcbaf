#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mintau/funcspace.hpp"
#include "mintau/problem.hpp"

namespace mintau {

// Piecewise-constant control on right-open intervals. breakpoints[0] == 0;
// segment_controls[i] is used on [breakpoints[i], breakpoints[i+1]) and
// tail_control from the last breakpoint on.
struct ControlSignal {
    std::vector<double> breakpoints{0.0};
    std::vector<int> segment_controls;  // size = breakpoints.size() - 1
    int tail_control = 0;

    static ControlSignal constant(int index) {
        ControlSignal u;
        u.tail_control = index;
        return u;
    }

    int at(double t) const;
    void validate(int n_controls) const;
};

// Dense solution record on [-tau, t_end]: samples on the dt grid, the base
// history on [-tau, 0], linear interpolation in between. Immutable.
class Trajectory {
public:
    Trajectory(HistoryPath base, DynamicsSpec dyn, ControlSignal control, double dt,
               int past_steps, std::vector<double> values, double t_end);

    int dim() const { return dim_; }
    double dt() const { return dt_; }
    double t_end() const { return t_end_; }
    double delay() const { return base_.delay(); }
    int past_steps() const { return past_steps_; }          // P = tau/dt
    int forward_steps() const { return forward_steps_; }    // K >= t_end/dt
    const HistoryPath& base_history() const { return base_; }
    const DynamicsSpec& dynamics() const { return dyn_; }
    const ControlSignal& control() const { return control_; }

    // grid value, k in [-P, K]
    Point grid_point(int k) const;
    // linear interpolation, t in [-tau, t_end]
    Point at(double t) const;

    // CSV with columns t, y_1..y_n, d_K(y), control index
    std::string to_csv(const TargetSpec& target) const;

private:
    HistoryPath base_;
    DynamicsSpec dyn_;
    ControlSignal control_;
    double dt_;
    int past_steps_;
    int forward_steps_;
    int dim_;
    double t_end_;
    std::vector<double> values_;  // (P + K + 1) * dim, index 0 <-> t = -tau
};

// Explicit trapezoid method of steps:
//   y_{k+1} = y_k + dt/2 [ f(y(t_k - tau), u(t_k)) + f(y(t_{k+1} - tau), u(t_k)) ]
// Both delayed arguments lie in the known past because tau/dt is an integer.
// Requires breakpoints of u on the dt grid.
Trajectory integrate(const HistoryPath& x0, const ControlSignal& u, const DynamicsSpec& dyn,
                     double t_end, double dt);

// The history state y_t resampled onto the standard grid of the base history.
HistoryPath history_at(const Trajectory& traj, double t);

// Exact dt-grid extraction (t snapped to the grid); used by the search and the
// certification harness so shifted states reproduce the solver's arithmetic.
HistoryPath history_at_grid(const Trajectory& traj, double t);

// Smallest t with y(t) in K: first grid sample with nonpositive surplus, then
// bisection on the interpolated trajectory down to tol_theta. Absence of a hit
// is a value, not an error.
std::optional<double> hitting_time(const Trajectory& traj, const TargetSpec& target,
                                   double tol_theta);

}  // namespace mintau
