#pragma once

#include <string>
#include <vector>

#include "mintau/integrator.hpp"

namespace mintau {

// Constants of the inductive steering construction. delta, k_contraction and
// C_bound are derived, never set directly.
struct SteeringParams {
    double mu = 0.0;
    double sigma = 0.0;
    double M = 0.0;       // effective bound, raised to max(M, mu)
    double M_bar = 0.0;   // effective Lipschitz class, raised to at least M
    double L = 0.0;
    double tau = 0.0;
    double delta = 0.0;          // admissible initial distance radius
    double k_contraction = 0.0;  // per-step distance contraction factor
    double C_bound = 0.0;        // T(x) <= C_bound * d_K(x(0))
    double step_coef = 0.0;      // t_j = step_coef * d_K(x_j(0))

    double eps_target = 0.0;  // absolute termination distance; <= 0 means 1e-4 * d0
    int max_iters = 400;
    double tol_ratio = 0.05;     // absolute slack on logged contraction ratios
    double budget_rel = 0.01;    // relative slack on the total-time budget
    double dt = 0.0;             // inner integration step; <= 0 means tau/1024
    double tol_lip_rel = 1e-9;
};

// Constants from the proof of the distance estimate:
//   delta = min(M/L, sigma)                     (sigma when L = 0)
//   k     = sqrt(1 - mu (mu - 2 Mbar L tau) / (4 M^2))
//   C     = (mu - 2 Mbar L tau) / (4 M^2) / (1 - k)
// after the normalization M := max(M, mu) (and Mbar raised with it). Throws
// DelayTooLargeError when L > 0 and tau >= mu / (2 Mbar L).
SteeringParams derive_constants(double mu, double sigma, double M, double M_bar, double L,
                                double tau);

// argmin over the control list of f(z,u) . (z - pi(z)) / |z - pi(z)|, ties to
// the lowest index. Throws PetrovViolationError when the minimum exceeds -mu.
int select_petrov_control(const DynamicsSpec& dyn, const TargetSpec& target, const Point& z,
                          double mu);

struct SteeringStep {
    int j = 0;
    double dist = 0.0;       // d_j = d_K(x_j(0))
    double step_time = 0.0;  // t_j
    int control = 0;
    double post_dist = 0.0;  // d_{j+1}
    double ratio = 0.0;      // d_{j+1} / d_j
    double cumulative = 0.0;
};

struct SteeringLog {
    std::vector<SteeringStep> steps;
    // CSV with columns j, d_j, t_j, control_index, ratio, cumulative_time
    std::string to_csv() const;
};

struct SteeringResult {
    ControlSignal control;  // the concatenated piecewise-constant control
    double total_time = 0.0;
    SteeringLog log;
    double final_dist = 0.0;
};

// The inductive construction: freeze the Petrov control of x_j(0) for time
// t_j = step_coef * d_j, shift the history, repeat until d <= eps_target.
// Asserts the budget total <= C d0 (1 + budget_rel) and flags contraction
// failure when ratio > k + tol_ratio three times in a row.
SteeringResult steer(const HistoryPath& x0, const DynamicsSpec& dyn, const TargetSpec& target,
                     const SteeringParams& params);

}  // namespace mintau
