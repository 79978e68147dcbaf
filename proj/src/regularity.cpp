#include "mintau/regularity.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "mintau/report.hpp"

namespace mintau {

void CertificationReport::finish() {
    n_samples = static_cast<int>(rows.size());
    n_skipped = 0;
    worst_violation = -std::numeric_limits<double>::infinity();
    worst_id.clear();
    for (const auto& r : rows) {
        if (r.skipped) {
            ++n_skipped;
            continue;
        }
        if (r.violation > worst_violation) {
            worst_violation = r.violation;
            worst_id = r.id;
        }
    }
    inconclusive = n_samples > 0 && n_skipped > n_samples / 5;
    int used = n_samples - n_skipped;
    pass = used > 0 && worst_violation <= tolerance && !inconclusive;
}

std::string CertificationReport::to_text() const {
    std::ostringstream out;
    out << "check " << check << ": " << (pass ? "PASS" : (inconclusive ? "INCONCLUSIVE" : "FAIL"))
        << "\n  samples = " << n_samples << " (skipped " << n_skipped << ")"
        << ", worst violation = " << fmt12(worst_violation) << " (tolerance "
        << fmt12(tolerance) << ")";
    if (!worst_id.empty()) out << "\n  worst sample: " << worst_id;
    if (!constants.empty()) {
        out << "\n  constants:";
        for (const auto& [k, v] : constants) out << " " << k << " = " << fmt12(v);
    }
    out << "\n  seed = " << seed << "\n";
    return out.str();
}

std::string CertificationReport::to_csv() const {
    std::ostringstream out;
    out << "sample_id,inputs_hash,lhs,rhs,slack,verdict\n";
    for (const auto& r : rows) {
        out << r.id << "," << hash_hex(fnv1a64(r.id + "|" + fmt12(r.lhs) + "|" + fmt12(r.rhs)))
            << "," << fmt12(r.lhs) << "," << fmt12(r.rhs) << "," << fmt12(r.violation) << ",";
        if (r.skipped)
            out << "skipped";
        else
            out << (r.violation <= tolerance ? "pass" : "fail");
        out << "\n";
    }
    return out.str();
}

std::optional<double> evaluate_min_time(const HistoryPath& x, const DynamicsSpec& dyn,
                                        const TargetSpec& target, const OracleConfig& oracle) {
    auto r = min_time_value(x, dyn, target, oracle.search, oracle.policy);
    if (!r) return std::nullopt;
    return r->value;
}

CertificationReport check_dpp(const HistoryPath& x0, const DynamicsSpec& dyn,
                              const TargetSpec& target, const std::vector<double>& t_probes,
                              const std::vector<ControlSignal>& controls,
                              const OracleConfig& oracle, double tol_dpp) {
    CertificationReport rep;
    rep.check = "dpp";
    rep.tolerance = tol_dpp;

    auto lhs_opt = evaluate_min_time(x0, dyn, target, oracle);
    double dt = oracle.dt > 0.0 ? oracle.dt : oracle.search.dt;
    int probe_idx = 0;
    for (double t : t_probes) {
        int control_idx = 0;
        for (const auto& u : controls) {
            SampleRow row;
            row.id = "t=" + fmt12(t) + ";control=" + std::to_string(control_idx);
            ++control_idx;
            if (!lhs_opt) {
                row.skipped = true;
                row.note = "no oracle value for x0";
                rep.rows.push_back(row);
                continue;
            }
            if (t > *lhs_opt + 1e-12) {
                row.skipped = true;
                row.note = "probe beyond T(x0)";
                rep.rows.push_back(row);
                continue;
            }
            if (t == 0.0) {
                row.lhs = *lhs_opt;
                row.rhs = *lhs_opt;
                row.violation = 0.0;
                rep.rows.push_back(row);
                continue;
            }
            Trajectory traj = integrate(x0, u, dyn, t, dt);
            HistoryPath yt = history_at_grid(traj, t);
            auto shifted = evaluate_min_time(yt, dyn, target, oracle);
            if (!shifted) {
                row.skipped = true;
                row.note = "shifted state left the searchable set";
                rep.rows.push_back(row);
                continue;
            }
            row.lhs = *lhs_opt;
            row.rhs = t + *shifted;
            row.violation = row.lhs - row.rhs;
            rep.rows.push_back(row);
        }
        ++probe_idx;
    }
    rep.finish();
    return rep;
}

CertificationReport check_distance_bound(const std::vector<HistoryPath>& samples,
                                         const DynamicsSpec& dyn, const TargetSpec& target,
                                         const SteeringParams& params,
                                         const OracleConfig& oracle, double rel_slack) {
    CertificationReport rep;
    rep.check = "distance-bound";
    rep.tolerance = 1e-9;
    rep.constants["C"] = params.C_bound;
    rep.constants["delta"] = params.delta;

    for (std::size_t i = 0; i < samples.size(); ++i) {
        const auto& x = samples[i];
        SampleRow row;
        double d = target.distance(x.endpoint());
        row.id = "sample=" + std::to_string(i) + ";d0=" + fmt12(d);
        if (lip_constant(x) > params.M_bar * (1.0 + params.tol_lip_rel) + 1e-12) {
            row.skipped = true;
            row.note = "outside Lip_Mbar";
            rep.rows.push_back(row);
            continue;
        }
        if (!(d < params.delta)) {
            row.skipped = true;
            row.note = "x(0) outside K_delta";
            rep.rows.push_back(row);
            continue;
        }
        auto value = evaluate_min_time(x, dyn, target, oracle);
        if (!value) {
            row.skipped = true;
            row.note = "no oracle value";
            rep.rows.push_back(row);
            continue;
        }
        row.lhs = *value;
        row.rhs = params.C_bound * d * (1.0 + rel_slack);
        row.violation = row.lhs - row.rhs;
        rep.rows.push_back(row);
    }
    rep.finish();
    return rep;
}

CertificationReport estimate_lipschitz(
    const std::vector<std::pair<HistoryPath, HistoryPath>>& pairs, const DynamicsSpec& dyn,
    const TargetSpec& target, const SteeringParams& params, const OracleConfig& oracle,
    double tol_abs) {
    CertificationReport rep;
    rep.check = "lipschitz";
    rep.tolerance = tol_abs;

    double max_empirical_ratio = 0.0;
    double modulus_used = 0.0;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        const auto& [x, xt] = pairs[i];
        SampleRow row;
        row.id = "pair=" + std::to_string(i);
        double dist = sup_norm(combine(x, xt, -1.0));
        if (lip_constant(x) > params.M_bar * (1.0 + params.tol_lip_rel) + 1e-12 ||
            lip_constant(xt) > params.M_bar * (1.0 + params.tol_lip_rel) + 1e-12) {
            row.skipped = true;
            row.note = "outside Lip_Mbar";
            rep.rows.push_back(row);
            continue;
        }
        auto Tx = evaluate_min_time(x, dyn, target, oracle);
        auto Txt = evaluate_min_time(xt, dyn, target, oracle);
        if (!Tx || !Txt) {
            row.skipped = true;
            row.note = "no oracle value";
            rep.rows.push_back(row);
            continue;
        }
        double Tmax = std::max(*Tx, *Txt);
        double radius = params.delta * std::exp(-params.L * (Tmax + 1.0)) /
                        (1.0 + params.L * params.tau);
        if (dist >= radius) {
            row.skipped = true;
            row.note = "pair outside the proof radius";
            rep.rows.push_back(row);
            continue;
        }
        double modulus = params.C_bound * (1.0 + params.L * params.tau) *
                         std::exp(params.L * Tmax);
        modulus_used = std::max(modulus_used, modulus);
        row.lhs = std::abs(*Tx - *Txt);
        row.rhs = modulus * dist;
        row.violation = row.lhs - row.rhs;
        if (dist > 0.0) max_empirical_ratio = std::max(max_empirical_ratio, row.lhs / dist);
        rep.rows.push_back(row);
    }
    rep.constants["theoretical_modulus"] = modulus_used;
    rep.constants["max_empirical_ratio"] = max_empirical_ratio;
    rep.finish();
    return rep;
}

bool ratios_stable(const std::vector<double>& ratios, double floor_abs) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (double r : ratios) {
        if (!std::isfinite(r)) return false;
        double p = std::max(r, 0.0);
        lo = std::min(lo, p);
        hi = std::max(hi, p);
    }
    if (hi <= floor_abs) return true;  // one-sided bound holds with c ~ 0
    return hi <= 2.0 * lo + floor_abs;
}

SemiconcavityEstimate estimate_semiconcavity(const HistoryPath& x, const HistoryPath& h,
                                             const std::vector<double>& scales,
                                             const DynamicsSpec& dyn, const TargetSpec& target,
                                             const OracleConfig& oracle,
                                             double stability_floor) {
    SemiconcavityEstimate est;
    double hnorm = sup_norm(h);
    auto Tx = evaluate_min_time(x, dyn, target, oracle);
    if (!Tx) {
        est.n_skipped = static_cast<int>(scales.size());
        est.note = "no oracle value at x";
        return est;
    }
    if (hnorm == 0.0) {
        // zero perturbation: second difference vanishes identically
        est.h_scales = scales;
        est.ratio_by_scale.assign(scales.size(), 0.0);
        est.stable = true;
        return est;
    }
    for (double lam : scales) {
        auto Tp = evaluate_min_time(combine(x, h, lam), dyn, target, oracle);
        auto Tm = evaluate_min_time(combine(x, h, -lam), dyn, target, oracle);
        if (!Tp || !Tm) {
            ++est.n_skipped;
            est.note = "an evaluation left the searchable set";
            continue;
        }
        double second = *Tp + *Tm - 2.0 * *Tx;
        double denom = lam * hnorm;
        est.h_scales.push_back(denom);
        est.ratio_by_scale.push_back(second / (denom * denom));
    }
    if (!est.ratio_by_scale.empty()) {
        est.stable = ratios_stable(est.ratio_by_scale, stability_floor);
        if (est.stable)
            for (double r : est.ratio_by_scale) est.modulus = std::max(est.modulus, r);
    }
    return est;
}

CertificationReport check_boundary_lemma(const HistoryPath& x,
                                         const std::vector<HistoryPath>& h_family,
                                         const std::vector<double>& scales,
                                         const DynamicsSpec& dyn, const TargetSpec& target,
                                         const OracleConfig& oracle, double boundary_tol,
                                         double stability_floor) {
    if (!target.on_boundary(x.endpoint(), boundary_tol))
        throw DomainError("check_boundary_lemma: x(0) is not on the target boundary");

    CertificationReport rep;
    rep.check = "boundary-lemma";
    rep.tolerance = 0.0;  // the content is stability; rows record ratio gaps

    double k_emp = 0.0;
    for (std::size_t hi = 0; hi < h_family.size(); ++hi) {
        const auto& h = h_family[hi];
        std::vector<double> ratios;
        for (double lam : scales) {
            SampleRow row;
            double hnorm = lam * sup_norm(h);
            row.id = "h=" + std::to_string(hi) + ";scale=" + fmt12(lam);
            if (hnorm == 0.0) {
                row.skipped = true;
                row.note = "degenerate perturbation";
                rep.rows.push_back(row);
                continue;
            }
            HistoryPath xh = combine(x, h, lam);
            if (target.contains(xh.endpoint())) {
                row.skipped = true;
                row.note = "(x+h)(0) inside the target";
                rep.rows.push_back(row);
                continue;
            }
            auto T1 = evaluate_min_time(combine(x, h, 2.0 * lam), dyn, target, oracle);
            auto T2 = evaluate_min_time(xh, dyn, target, oracle);
            if (!T1 || !T2) {
                row.skipped = true;
                row.note = "an evaluation left the searchable set";
                rep.rows.push_back(row);
                continue;
            }
            double ratio = (*T1 - 2.0 * *T2) / (hnorm * hnorm);
            ratios.push_back(ratio);
            k_emp = std::max(k_emp, ratio);
            row.lhs = *T1 - 2.0 * *T2;
            row.rhs = std::max(ratio, 0.0) * hnorm * hnorm;
            row.violation = 0.0;
            row.note = "ratio=" + fmt12(ratio);
            rep.rows.push_back(row);
        }
        if (!ratios.empty() && !ratios_stable(ratios, stability_floor)) {
            SampleRow row;
            row.id = "h=" + std::to_string(hi) + ";stability";
            row.violation = 1.0;  // flagged: ratios explode across scales
            row.note = "unstable ratios";
            rep.rows.push_back(row);
        }
    }
    rep.constants["k_emp"] = k_emp;
    rep.finish();
    return rep;
}

}  // namespace mintau
