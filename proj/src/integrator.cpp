#include "mintau/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "mintau/report.hpp"

namespace mintau {

int ControlSignal::at(double t) const {
    // right-continuous: the value at a breakpoint is the new segment's
    for (std::size_t i = breakpoints.size(); i-- > 0;) {
        if (t >= breakpoints[i] - 1e-15)
            return i < segment_controls.size() ? segment_controls[i] : tail_control;
    }
    return segment_controls.empty() ? tail_control : segment_controls.front();
}

void ControlSignal::validate(int n_controls) const {
    if (breakpoints.empty() || breakpoints.front() != 0.0)
        throw ConfigError("control signal: breakpoints must start at 0");
    for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i)
        if (!(breakpoints[i] < breakpoints[i + 1]))
            throw ConfigError("control signal: breakpoints must be strictly increasing");
    if (segment_controls.size() + 1 != breakpoints.size())
        throw ConfigError("control signal: need one control per segment");
    auto check = [&](int idx) {
        if (idx < 0 || idx >= n_controls)
            throw ConfigError("control signal: control index out of range");
    };
    for (int idx : segment_controls) check(idx);
    check(tail_control);
}

Trajectory::Trajectory(HistoryPath base, DynamicsSpec dyn, ControlSignal control, double dt,
                       int past_steps, std::vector<double> values, double t_end)
    : base_(std::move(base)),
      dyn_(std::move(dyn)),
      control_(std::move(control)),
      dt_(dt),
      past_steps_(past_steps),
      dim_(dyn_.dim_state),
      t_end_(t_end),
      values_(std::move(values)) {
    forward_steps_ = static_cast<int>(values_.size() / dim_) - 1 - past_steps_;
}

Point Trajectory::grid_point(int k) const {
    int i = k + past_steps_;
    if (i < 0 || i > past_steps_ + forward_steps_)
        throw DomainError("Trajectory::grid_point: index out of range");
    return Point(values_.begin() + static_cast<std::size_t>(i) * dim_,
                 values_.begin() + static_cast<std::size_t>(i + 1) * dim_);
}

Point Trajectory::at(double t) const {
    double tau = delay();
    if (t < -tau - 1e-9 * tau || t > t_end_ + 1e-9 * std::max(t_end_, dt_))
        throw DomainError("Trajectory::at: time outside [-tau, t_end]");
    double pos = (t + tau) / dt_;
    int total = past_steps_ + forward_steps_;
    int i = static_cast<int>(std::floor(pos));
    i = std::clamp(i, 0, total - 1);
    double a = std::clamp(pos - i, 0.0, 1.0);
    Point r(dim_);
    const double* lo = values_.data() + static_cast<std::size_t>(i) * dim_;
    const double* hi = lo + dim_;
    for (int d = 0; d < dim_; ++d) r[d] = (1.0 - a) * lo[d] + a * hi[d];
    return r;
}

std::string Trajectory::to_csv(const TargetSpec& target) const {
    std::ostringstream out;
    out << "t";
    for (int d = 1; d <= dim_; ++d) out << ",y_" << d;
    out << ",d_K,control\n";
    for (int k = -past_steps_; k <= forward_steps_; ++k) {
        double t = k * dt_;
        Point y = grid_point(k);
        out << fmt12(t);
        for (double v : y) out << "," << fmt12(v);
        out << "," << fmt12(target.distance(y));
        out << "," << (k < 0 ? -1 : control_.at(t)) << "\n";
    }
    return out.str();
}

namespace {

int snap_to_grid(double t, double dt, const char* what) {
    double pos = t / dt;
    double r = std::round(pos);
    if (std::abs(pos - r) > 1e-6)
        throw ConfigError(std::string(what) + ": time " + std::to_string(t) +
                          " is not on the dt grid");
    return static_cast<int>(r);
}

}  // namespace

Trajectory integrate(const HistoryPath& x0, const ControlSignal& u, const DynamicsSpec& dyn,
                     double t_end, double dt) {
    if (!(t_end > 0.0)) throw DomainError("integrate: t_end must be positive");
    if (!(dt > 0.0)) throw ConfigError("integrate: dt must be positive");
    if (x0.dim() != dyn.dim_state) throw ShapeError("integrate: history dimension mismatch");
    u.validate(static_cast<int>(dyn.controls.size()));

    const double tau = x0.delay();
    double ratio = tau / dt;
    if (std::abs(ratio - std::round(ratio)) > 1e-9 * std::max(1.0, ratio))
        throw ConfigError("integrate: tau/dt must be an integer (delay must land on the grid)");
    const int P = static_cast<int>(std::round(ratio));
    for (std::size_t i = 1; i < u.breakpoints.size(); ++i)
        snap_to_grid(u.breakpoints[i], dt, "integrate: control breakpoint");

    const int K = static_cast<int>(std::ceil(t_end / dt - 1e-9));
    const int n = dyn.dim_state;
    std::vector<double> vals(static_cast<std::size_t>(P + K + 1) * n);

    // history on the dt grid; exact when the grids nest, interpolated otherwise
    for (int j = 0; j <= P; ++j) {
        Point y = x0.at(-tau + j * dt);
        std::copy(y.begin(), y.end(), vals.begin() + static_cast<std::size_t>(j) * n);
    }

    Point past_k(n), past_k1(n), yk(n);
    for (int k = 0; k < K; ++k) {
        // delayed arguments at indices k and k+1 are always in the known past
        const double* pk = vals.data() + static_cast<std::size_t>(k) * n;
        const double* pk1 = pk + n;
        past_k.assign(pk, pk + n);
        past_k1.assign(pk1, pk1 + n);
        int uk = u.at(k * dt);
        Point f1 = dyn.eval(past_k, uk);
        Point f2 = dyn.eval(past_k1, uk);
        const double* yk_ptr = vals.data() + static_cast<std::size_t>(P + k) * n;
        double* out = vals.data() + static_cast<std::size_t>(P + k + 1) * n;
        for (int d = 0; d < n; ++d) {
            out[d] = yk_ptr[d] + 0.5 * dt * (f1[d] + f2[d]);
            if (!std::isfinite(out[d]))
                throw NumericalError("integrate: non-finite state at t = " +
                                     std::to_string((k + 1) * dt));
        }
    }
    return Trajectory(x0, dyn, u, dt, P, std::move(vals), t_end);
}

HistoryPath history_at(const Trajectory& traj, double t) {
    const double tau = traj.delay();
    if (t < -1e-12 || t > traj.t_end() + 1e-9 * std::max(traj.t_end(), tau))
        throw DomainError("history_at: t outside [0, t_end]");
    t = std::max(t, 0.0);
    const int N = traj.base_history().segments();
    const int n = traj.dim();
    std::vector<double> flat(static_cast<std::size_t>(N + 1) * n);
    for (int i = 0; i <= N; ++i) {
        Point y = traj.at(t - tau + i * (tau / N));
        std::copy(y.begin(), y.end(), flat.begin() + static_cast<std::size_t>(i) * n);
    }
    return HistoryPath(n, tau, std::move(flat));
}

HistoryPath history_at_grid(const Trajectory& traj, double t) {
    int k = snap_to_grid(t, traj.dt(), "history_at_grid");
    if (k < 0 || k > traj.forward_steps())
        throw DomainError("history_at_grid: t outside [0, t_end]");
    const int P = traj.past_steps();
    const int n = traj.dim();
    std::vector<double> flat(static_cast<std::size_t>(P + 1) * n);
    for (int j = 0; j <= P; ++j) {
        Point y = traj.grid_point(k - P + j);
        std::copy(y.begin(), y.end(), flat.begin() + static_cast<std::size_t>(j) * n);
    }
    return HistoryPath(n, traj.delay(), std::move(flat));
}

std::optional<double> hitting_time(const Trajectory& traj, const TargetSpec& target,
                                   double tol_theta) {
    const double dt = traj.dt();
    const int K = static_cast<int>(std::floor(traj.t_end() / dt + 1e-9));
    if (target.signed_surplus(traj.grid_point(0)) <= 0.0) return 0.0;
    int hit = -1;
    for (int k = 1; k <= K; ++k) {
        if (target.signed_surplus(traj.grid_point(k)) <= 0.0) {
            hit = k;
            break;
        }
    }
    if (hit < 0) return std::nullopt;
    double lo = (hit - 1) * dt, hi = hit * dt;
    // bisection on the interpolated trajectory; surplus is positive at lo
    while (hi - lo > tol_theta) {
        double mid = 0.5 * (lo + hi);
        if (target.signed_surplus(traj.at(mid)) <= 0.0)
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

}  // namespace mintau
