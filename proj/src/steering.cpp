#include "mintau/steering.hpp"

#include <cmath>
#include <sstream>

#include "mintau/report.hpp"

namespace mintau {

SteeringParams derive_constants(double mu, double sigma, double M, double M_bar, double L,
                                double tau) {
    if (!(mu > 0.0)) throw ConfigError("derive_constants: mu must be positive");
    if (!(sigma > 0.0)) throw ConfigError("derive_constants: sigma must be positive");
    if (!(M > 0.0)) throw ConfigError("derive_constants: M must be positive");
    if (!(tau > 0.0)) throw ConfigError("derive_constants: tau must be positive");
    if (L < 0.0) throw ConfigError("derive_constants: L must be nonnegative");
    if (M_bar < M) throw ConfigError("derive_constants: M_bar must be >= M");

    SteeringParams p;
    p.mu = mu;
    p.sigma = sigma;
    p.L = L;
    p.tau = tau;
    // normalization from the proof: we may assume M >= mu
    p.M = std::max(M, mu);
    p.M_bar = std::max(M_bar, p.M);

    if (L > 0.0) {
        double threshold = mu / (2.0 * p.M_bar * L);
        if (tau >= threshold) throw DelayTooLargeError(tau, threshold);
        p.delta = std::min(p.M / L, sigma);
    } else {
        p.delta = sigma;
    }

    p.step_coef = (mu - 2.0 * p.M_bar * L * tau) / (4.0 * p.M * p.M);
    p.k_contraction = std::sqrt(1.0 - mu * p.step_coef);
    p.C_bound = p.step_coef / (1.0 - p.k_contraction);
    return p;
}

int select_petrov_control(const DynamicsSpec& dyn, const TargetSpec& target, const Point& z,
                          double mu) {
    double d = target.distance(z);
    if (!(d > 0.0)) throw DomainError("select_petrov_control: point is already in the target");
    Point e = scaled(sub(z, target.project(z)), 1.0 / d);
    int best = 0;
    double best_v = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < dyn.controls.size(); ++i) {
        double v = dot(dyn.eval(z, dyn.controls[i]), e);
        if (v < best_v) {
            best_v = v;
            best = static_cast<int>(i);
        }
    }
    if (best_v > -mu) throw PetrovViolationError(z, best_v, mu);
    return best;
}

std::string SteeringLog::to_csv() const {
    std::ostringstream out;
    out << "j,d_j,t_j,control_index,ratio,cumulative_time\n";
    for (const auto& s : steps) {
        out << s.j << "," << fmt12(s.dist) << "," << fmt12(s.step_time) << "," << s.control
            << "," << fmt12(s.ratio) << "," << fmt12(s.cumulative) << "\n";
    }
    return out.str();
}

SteeringResult steer(const HistoryPath& x0, const DynamicsSpec& dyn, const TargetSpec& target,
                     const SteeringParams& params) {
    const double d0 = target.distance(x0.endpoint());
    double lip0 = lip_constant(x0);
    if (lip0 > params.M_bar * (1.0 + params.tol_lip_rel) + 1e-12)
        throw DomainError("steer: initial history is not in Lip_Mbar (lip = " +
                          std::to_string(lip0) + ")");
    if (!(d0 < params.delta))
        throw DomainError("steer: d_K(x0(0)) must be below delta = " +
                          std::to_string(params.delta));
    const double eps = params.eps_target > 0.0 ? params.eps_target : 1e-4 * d0;
    if (!(d0 > eps)) throw DomainError("steer: d_K(x0(0)) must exceed eps_target");
    const double dt = params.dt > 0.0 ? params.dt : params.tau / 1024.0;

    SteeringResult res;
    res.control.breakpoints.clear();
    HistoryPath x = x0;
    double cumulative = 0.0;
    double dist = d0;
    int bad_streak = 0;

    for (int j = 0; j < params.max_iters; ++j) {
        int u = select_petrov_control(dyn, target, x.endpoint(), params.mu);
        double t_j = params.step_coef * dist;
        Trajectory traj = integrate(x, ControlSignal::constant(u), dyn, t_j, dt);
        x = history_at(traj, t_j);
        double post = target.distance(x.endpoint());

        SteeringStep step;
        step.j = j;
        step.dist = dist;
        step.step_time = t_j;
        step.control = u;
        step.post_dist = post;
        step.ratio = post / dist;
        cumulative += t_j;
        step.cumulative = cumulative;
        res.log.steps.push_back(step);

        res.control.breakpoints.push_back(cumulative - t_j);
        res.control.segment_controls.push_back(u);
        res.control.tail_control = u;

        double lip = lip_constant(x);
        if (lip > params.M_bar * (1.0 + params.tol_lip_rel) + 1e-12)
            throw CertificationError("steer: iterate " + std::to_string(j + 1) +
                                     " left Lip_Mbar (lip = " + std::to_string(lip) + ")");
        if (step.ratio > params.k_contraction + params.tol_ratio) {
            if (++bad_streak >= 3)
                throw CertificationError(
                    "steer: contraction ratio exceeded k + tol for 3 consecutive iterations "
                    "(last ratio = " + std::to_string(step.ratio) + ")");
        } else {
            bad_streak = 0;
        }

        dist = post;
        if (dist <= eps) break;
    }
    // segment_controls got one entry per step; drop the synthetic final segment
    // so that sizes obey the one-control-per-interval convention
    res.control.segment_controls.pop_back();

    if (dist > eps)
        throw CertificationError("steer: max_iters exhausted at distance " +
                                 std::to_string(dist));

    res.total_time = cumulative;
    res.final_dist = dist;
    double budget = params.C_bound * d0 * (1.0 + params.budget_rel);
    if (cumulative > budget)
        throw CertificationError("steer: total time " + std::to_string(cumulative) +
                                 " exceeds budget C*d0*(1+tol) = " + std::to_string(budget));
    return res;
}

}  // namespace mintau
