#include "mintau/harness.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <json.hpp>

#include "mintau/parallel.hpp"
#include "mintau/report.hpp"
#include "mintau/rng.hpp"

namespace mintau {

OracleConfig make_oracle(const ProblemConfig& cfg) {
    OracleConfig o;
    o.search.switch_mesh = cfg.grids.switch_mesh;
    o.search.horizon = cfg.grids.horizon;
    o.search.dt = cfg.dt();
    o.search.depth_limit = cfg.grids.depth_limit;
    o.search.tol_theta = cfg.tol_theta();
    o.policy = cfg.oracle_policy;
    o.dt = cfg.dt();
    return o;
}

PipelineState run_pipeline(const ProblemConfig& cfg) {
    PipelineState st;
    st.petrov = estimate_petrov(cfg.dynamics, cfg.target, cfg.petrov.sigma,
                                cfg.petrov.shell_grid);
    if (!st.petrov.ok())
        throw PetrovViolationError(st.petrov.worst_point, st.petrov.worst_value, 0.0);
    st.params = derive_constants(st.petrov.certificate->mu, cfg.petrov.sigma,
                                 cfg.dynamics.bound_M, cfg.m_bar, cfg.dynamics.lipschitz_L,
                                 cfg.delay);
    st.params.tol_ratio = cfg.tolerances.tol_ratio;
    st.params.budget_rel = cfg.tolerances.budget_rel;
    st.params.tol_lip_rel = cfg.tolerances.tol_lip_rel;
    st.params.dt = cfg.delay / 1024.0;
    st.dk = estimate_dk_semiconcavity(cfg.target, cfg.dk.shell_r, cfg.dk.n_samples,
                                      cfg.dk.h_scales, cfg.seed ^ fnv1a64("dk"));
    return st;
}

std::string ValidationBundle::to_text() const {
    std::ostringstream out;
    out << h1.to_text() << h3.to_text() << petrov.to_text();
    out << "d_K semiconcavity: c = " << fmt12(dk.constant) << " on shell r = "
        << fmt12(dk.shell_r) << " (" << dk.pairs_used << " pairs)\n";
    if (params) {
        out << "derived constants: delta = " << fmt12(params->delta)
            << ", k = " << fmt12(params->k_contraction) << ", C = " << fmt12(params->C_bound)
            << ", step coef = " << fmt12(params->step_coef) << "\n";
        if (params->L > 0.0) {
            out << "delay thresholds: tau = " << fmt12(params->tau)
                << " < mu/(2*Mbar*L) = " << fmt12(params->mu / (2.0 * params->M_bar * params->L))
                << ", mu/(6*M*L) = " << fmt12(params->mu / (6.0 * params->M * params->L))
                << (params->tau < params->mu / (6.0 * params->M * params->L)
                        ? " (semiconcavity admissible)"
                        : " (semiconcavity threshold exceeded)")
                << "\n";
        }
    }
    out << "validate: " << (pass ? "PASS" : "FAIL") << "\n";
    return out.str();
}

std::string ValidationBundle::to_json() const {
    nlohmann::json j;
    j["h1"] = {{"pass", h1.pass},
               {"max_speed", h1.measured_max_speed},
               {"max_slope", h1.measured_max_slope}};
    j["h3"] = {{"pass", h3.pass},
               {"max_ratio", h3.measured_max_ratio},
               {"stable", h3.stable}};
    j["h4"] = {{"pass", petrov.ok()},
               {"shell_samples", petrov.shell_samples},
               {"worst_value", petrov.worst_value}};
    if (petrov.ok()) j["h4"]["mu"] = petrov.certificate->mu;
    j["h4"]["worst_point"] = petrov.worst_point;
    j["dk"] = {{"c", dk.constant}, {"shell_r", dk.shell_r}};
    if (params) {
        j["constants"] = {{"delta", params->delta},
                          {"k", params->k_contraction},
                          {"C", params->C_bound},
                          {"mu", params->mu},
                          {"step_coef", params->step_coef}};
    }
    j["pass"] = pass;
    return j.dump(2);
}

ValidationBundle run_validate(const ProblemConfig& cfg) {
    ValidationBundle b;
    b.h1 = validate_h1(cfg.dynamics, cfg.domain, cfg.validation.h1_samples,
                       cfg.seed ^ fnv1a64("h1"));
    b.h3 = validate_h3(cfg.dynamics, cfg.domain, cfg.validation.h3_samples,
                       cfg.validation.h_scales, cfg.seed ^ fnv1a64("h3"));
    b.petrov = estimate_petrov(cfg.dynamics, cfg.target, cfg.petrov.sigma,
                               cfg.petrov.shell_grid);
    b.dk = estimate_dk_semiconcavity(cfg.target, cfg.dk.shell_r, cfg.dk.n_samples,
                                     cfg.dk.h_scales, cfg.seed ^ fnv1a64("dk"));
    if (b.petrov.ok()) {
        // DelayTooLargeError propagates as a configuration error
        b.params = derive_constants(b.petrov.certificate->mu, cfg.petrov.sigma,
                                    cfg.dynamics.bound_M, cfg.m_bar, cfg.dynamics.lipschitz_L,
                                    cfg.delay);
    }
    b.pass = b.h1.pass && b.h3.pass && b.petrov.ok();
    return b;
}

HistoryPath random_shell_history(Rng& rng, const ProblemConfig& cfg, double dist,
                                 double lip_max) {
    const int n = cfg.dynamics.dim_state;
    const int segs = cfg.grids.history_samples;
    const double tau = cfg.delay;
    int ball = rng.uniform_int(static_cast<int>(cfg.target.centers.size()));
    Point dir = rng.unit_vector(n);
    Point z = cfg.target.centers[ball];
    axpy(z, cfg.target.radii[ball] + dist, dir);

    std::vector<double> flat(static_cast<std::size_t>(segs + 1) * n);
    std::copy(z.begin(), z.end(), flat.begin() + static_cast<std::size_t>(segs) * n);
    double ds = tau / segs;
    Point cur = z;
    for (int i = segs - 1; i >= 0; --i) {
        Point g = rng.unit_vector(n);
        double slope = rng.uniform(0.0, lip_max);
        for (int d = 0; d < n; ++d) {
            cur[d] -= ds * slope * g[d];
            // componentwise clamp into the domain box never raises a slope
            cur[d] = std::clamp(cur[d], cfg.domain.lo[d], cfg.domain.hi[d]);
        }
        std::copy(cur.begin(), cur.end(), flat.begin() + static_cast<std::size_t>(i) * n);
    }
    return HistoryPath(n, tau, std::move(flat));
}

HistoryPath random_perturbation(Rng& rng, const ProblemConfig& cfg, double norm_target,
                                double lip_max) {
    const int n = cfg.dynamics.dim_state;
    const int segs = cfg.grids.history_samples;
    const double tau = cfg.delay;
    double ds = tau / segs;
    std::vector<double> flat(static_cast<std::size_t>(segs + 1) * n);
    Point cur = scaled(rng.unit_vector(n), rng.uniform(0.3, 1.0));
    std::copy(cur.begin(), cur.end(), flat.begin());
    for (int i = 1; i <= segs; ++i) {
        Point g = rng.unit_vector(n);
        axpy(cur, ds * rng.uniform(0.0, 1.0), g);
        std::copy(cur.begin(), cur.end(), flat.begin() + static_cast<std::size_t>(i) * n);
    }
    HistoryPath h(n, tau, std::move(flat));
    double s = norm_target / std::max(sup_norm(h), 1e-12);
    double lip = lip_constant(h) * s;
    if (lip > lip_max) s *= lip_max / lip;
    return combine(HistoryPath::constant(n, tau, segs, Point(n, 0.0)), h, s);
}

CertificationReport run_steering_sweep(const ProblemConfig& cfg) {
    PipelineState st = run_pipeline(cfg);
    Rng rng(cfg.seed ^ fnv1a64("steering"));
    const SweepConfig& sw = cfg.steering_sweep;

    CertificationReport rep;
    rep.check = "steering-contraction";
    rep.tolerance = 0.0;
    rep.seed = cfg.seed;
    rep.constants["k"] = st.params.k_contraction;
    rep.constants["C"] = st.params.C_bound;
    rep.constants["mu"] = st.params.mu;
    rep.constants["delta"] = st.params.delta;

    double hi = sw.dist_hi > 0.0 ? sw.dist_hi : 0.9 * st.params.delta;
    double lo = sw.dist_lo > 0.0 ? sw.dist_lo : 0.1 * st.params.delta;
    for (int i = 0; i < sw.n_samples; ++i) {
        double dist = rng.uniform(lo, hi);
        HistoryPath x0 = random_shell_history(rng, cfg, dist, sw.lip_frac * st.params.M_bar);
        std::string base = "run=" + std::to_string(i) + ";d0=" + fmt12(dist);
        try {
            SteeringResult r = steer(x0, cfg.dynamics, cfg.target, st.params);
            for (const auto& s : r.log.steps) {
                SampleRow row;
                row.id = base + ";j=" + std::to_string(s.j);
                row.lhs = s.ratio;
                row.rhs = st.params.k_contraction + st.params.tol_ratio;
                row.violation = row.lhs - row.rhs;
                rep.rows.push_back(row);
            }
            SampleRow budget;
            budget.id = base + ";budget";
            budget.lhs = r.total_time;
            budget.rhs = st.params.C_bound * dist * (1.0 + st.params.budget_rel);
            budget.violation = budget.lhs - budget.rhs;
            rep.rows.push_back(budget);
        } catch (const CertificationError& e) {
            SampleRow row;
            row.id = base + ";error";
            row.violation = 1.0;
            row.note = e.what();
            rep.rows.push_back(row);
        }
    }
    rep.finish();
    return rep;
}

namespace {

void merge_rows(CertificationReport& into, const CertificationReport& from,
                const std::string& prefix) {
    for (SampleRow row : from.rows) {
        row.id = prefix + ";" + row.id;
        into.rows.push_back(std::move(row));
    }
}

}  // namespace

CertificationReport run_certify_dpp(const ProblemConfig& cfg) {
    OracleConfig oracle = make_oracle(cfg);
    Rng rng(cfg.seed ^ fnv1a64("dpp"));
    const DppConfig& dc = cfg.dpp;
    double tol_dpp = 2.0 * (cfg.tol_theta() + cfg.tolerances.mesh_slack);

    CertificationReport rep;
    rep.check = "dpp";
    rep.tolerance = tol_dpp;
    rep.seed = cfg.seed;

    const double mesh = cfg.grids.switch_mesh;
    // generate everything up front so thread count cannot affect the stream
    std::vector<HistoryPath> xs;
    std::vector<std::vector<double>> probes(dc.n_histories);
    std::vector<std::vector<ControlSignal>> controls(dc.n_histories);
    for (int i = 0; i < dc.n_histories; ++i) {
        double dist = rng.uniform(dc.sweep.dist_lo, dc.sweep.dist_hi);
        xs.push_back(random_shell_history(rng, cfg, dist, dc.sweep.lip_frac * cfg.m_bar));
        for (int p = 0; p < dc.probes_per_history; ++p) probes[i].push_back(rng.uniform());
        for (int c = 0; c < dc.controls_per_history; ++c)
            controls[i].push_back(ControlSignal::constant(
                rng.uniform_int(static_cast<int>(cfg.dynamics.controls.size()))));
    }

    std::vector<CertificationReport> parts(xs.size());
    parallel_for_index(xs.size(), [&](std::size_t i) {
        auto that = evaluate_min_time(xs[i], cfg.dynamics, cfg.target, oracle);
        std::vector<double> ts;
        for (double frac : probes[i]) {
            if (!that) break;
            // probe times on the switch mesh so concatenated words stay in the
            // search space of the unshifted problem
            int cells = static_cast<int>(std::floor(0.8 * *that / mesh));
            ts.push_back(cells < 1 ? 0.0 : mesh * (1 + static_cast<int>(frac * cells)));
        }
        if (ts.empty()) ts.push_back(0.0);
        parts[i] = check_dpp(xs[i], cfg.dynamics, cfg.target, ts, controls[i], oracle, tol_dpp);
    });
    for (std::size_t i = 0; i < parts.size(); ++i)
        merge_rows(rep, parts[i], "x" + std::to_string(i));
    rep.finish();
    return rep;
}

CertificationReport run_certify_distance_bound(const ProblemConfig& cfg) {
    PipelineState st = run_pipeline(cfg);
    OracleConfig oracle = make_oracle(cfg);
    Rng rng(cfg.seed ^ fnv1a64("distance_bound"));
    const SweepConfig& sw = cfg.distance_bound;

    double hi = sw.dist_hi > 0.0 ? std::min(sw.dist_hi, 0.95 * st.params.delta)
                                 : 0.9 * st.params.delta;
    double lo = sw.dist_lo > 0.0 ? sw.dist_lo : 0.05 * st.params.delta;
    std::vector<HistoryPath> samples;
    for (int i = 0; i < sw.n_samples; ++i)
        samples.push_back(random_shell_history(rng, cfg, rng.uniform(lo, hi),
                                               sw.lip_frac * st.params.M_bar));
    CertificationReport rep =
        check_distance_bound(samples, cfg.dynamics, cfg.target, st.params, oracle,
                             cfg.tolerances.distance_bound_rel);
    rep.seed = cfg.seed;
    return rep;
}

CertificationReport run_certify_lipschitz(const ProblemConfig& cfg) {
    PipelineState st = run_pipeline(cfg);
    OracleConfig oracle = make_oracle(cfg);
    Rng rng(cfg.seed ^ fnv1a64("lipschitz"));
    const LipschitzConfig& lc = cfg.lipschitz;

    double hi = lc.sweep.dist_hi > 0.0 ? lc.sweep.dist_hi : 0.8 * st.params.delta;
    double lo = lc.sweep.dist_lo > 0.0 ? lc.sweep.dist_lo : 0.1 * st.params.delta;
    std::vector<std::pair<HistoryPath, HistoryPath>> pairs;
    for (int i = 0; i < lc.n_pairs; ++i) {
        HistoryPath x = random_shell_history(rng, cfg, rng.uniform(lo, hi),
                                             lc.sweep.lip_frac * st.params.M_bar);
        auto that = evaluate_min_time(x, cfg.dynamics, cfg.target, oracle);
        double t_ref = that ? *that : st.params.C_bound * hi;
        double radius = st.params.delta * std::exp(-st.params.L * (t_ref + 1.0)) /
                        (1.0 + st.params.L * st.params.tau);
        HistoryPath pert = random_perturbation(
            rng, cfg, lc.perturb_scale * radius,
            std::max(0.0, (1.0 - lc.sweep.lip_frac) * st.params.M_bar * 0.9));
        pairs.emplace_back(x, combine(x, pert, 1.0));
    }
    CertificationReport rep = estimate_lipschitz(pairs, cfg.dynamics, cfg.target, st.params,
                                                 oracle, 2.0 * cfg.tol_theta() + 1e-12);
    rep.seed = cfg.seed;
    return rep;
}

SemiconcavityOutcome run_certify_semiconcavity(const ProblemConfig& cfg) {
    PipelineState st = run_pipeline(cfg);
    OracleConfig oracle = make_oracle(cfg);
    const SemiconcavityConfig& sc = cfg.semiconcavity;
    if (sc.policy) oracle.policy = *sc.policy;

    // Thm 4.1 delay hypothesis
    if (st.params.L > 0.0) {
        double threshold = st.params.mu / (6.0 * st.params.M * st.params.L);
        if (!(cfg.delay < threshold))
            throw ConfigError("semiconcavity: tau = " + std::to_string(cfg.delay) +
                              " >= mu/(6*M*L) = " + std::to_string(threshold));
    }

    SemiconcavityOutcome out;
    out.report.check = "semiconcavity";
    out.report.tolerance = 0.0;
    out.report.seed = cfg.seed;

    const double M = cfg.dynamics.bound_M;  // Thm 4.1 works in Lip_M
    std::vector<std::pair<std::string, std::pair<HistoryPath, HistoryPath>>> cases;
    for (const auto& p : sc.probes)
        cases.emplace_back("probe:" + p.x + "/" + p.h,
                           std::make_pair(cfg.history(p.x), cfg.perturbation(p.h)));
    Rng rng(cfg.seed ^ fnv1a64("semiconcavity"));
    for (int i = 0; i < sc.n_samples; ++i) {
        double dist = rng.uniform(sc.sweep.dist_lo, sc.sweep.dist_hi);
        HistoryPath x = random_shell_history(rng, cfg, dist, sc.sweep.lip_frac * M);
        HistoryPath h = random_perturbation(rng, cfg, std::min(sc.h_norm, 0.5 * dist),
                                            sc.h_lip_frac * M);
        cases.emplace_back("sample:" + std::to_string(i), std::make_pair(x, h));
    }

    out.estimates.resize(cases.size());
    parallel_for_index(cases.size(), [&](std::size_t i) {
        const auto& [x, h] = cases[i].second;
        out.estimates[i] = estimate_semiconcavity(x, h, sc.scales, cfg.dynamics, cfg.target,
                                                  oracle, cfg.tolerances.stability_floor);
    });
    for (std::size_t i = 0; i < cases.size(); ++i) {
        const auto& est = out.estimates[i];
        const auto& id = cases[i].first;
        if (est.ratio_by_scale.empty()) {
            SampleRow row;
            row.id = id;
            row.skipped = true;
            row.note = est.note;
            out.report.rows.push_back(row);
            continue;
        }
        for (std::size_t s = 0; s < est.ratio_by_scale.size(); ++s) {
            SampleRow row;
            row.id = id + ";scale=" + fmt12(est.h_scales[s]);
            row.lhs = est.ratio_by_scale[s];
            row.rhs = 0.0;
            row.violation = 0.0;  // audit row; stability is judged per sample
            row.note = "ratio";
            out.report.rows.push_back(row);
        }
        SampleRow stab;
        stab.id = id + ";stability";
        stab.violation = est.stable ? 0.0 : 1.0;
        if (!est.stable) stab.note = "ratios explode across scales";
        out.report.rows.push_back(stab);
        out.report.constants["modulus_max"] =
            std::max(out.report.constants["modulus_max"], est.modulus);
    }
    out.report.finish();
    return out;
}

CertificationReport run_certify_boundary(const ProblemConfig& cfg) {
    PipelineState st = run_pipeline(cfg);
    OracleConfig oracle = make_oracle(cfg);
    const BoundaryConfig& bc = cfg.boundary;
    if (bc.policy) oracle.policy = *bc.policy;

    // Lemma 4.2 smallness radius from the measured d_K shell constants
    double rho = 0.99 * std::min(st.params.delta, cfg.dk.shell_r) /
                 (2.0 * (1.0 + 2.0 * st.params.M * st.params.C_bound));

    CertificationReport rep;
    rep.check = "boundary-lemma";
    rep.tolerance = 0.0;
    rep.seed = cfg.seed;
    rep.constants["rho"] = rho;

    std::vector<std::pair<std::string, std::pair<HistoryPath, std::vector<HistoryPath>>>> cases;
    for (const auto& p : bc.probes) {
        cases.emplace_back("probe:" + p.x + "/" + p.h,
                           std::make_pair(cfg.history(p.x),
                                          std::vector<HistoryPath>{cfg.perturbation(p.h)}));
    }
    Rng rng(cfg.seed ^ fnv1a64("boundary"));
    const int n = cfg.dynamics.dim_state;
    const double M = cfg.dynamics.bound_M;
    for (int i = 0; i < bc.n_samples; ++i) {
        // anchor exactly on the boundary, outward unit perturbation
        int ball = rng.uniform_int(static_cast<int>(cfg.target.centers.size()));
        Point dir = rng.unit_vector(n);
        Point z = cfg.target.centers[ball];
        axpy(z, cfg.target.radii[ball], dir);
        HistoryPath tail = random_shell_history(rng, cfg, 1e-3, bc.sweep.lip_frac * M);
        // rebuild with the exact boundary endpoint
        std::vector<double> flat = tail.flat();
        Point shift = sub(z, tail.endpoint());
        for (int k = 0; k <= tail.segments(); ++k)
            for (int d = 0; d < n; ++d) flat[static_cast<std::size_t>(k) * n + d] += shift[d];
        HistoryPath x(n, cfg.delay, std::move(flat));
        double hn = std::min(bc.h_norm, 0.9 * rho);
        HistoryPath h = HistoryPath::constant(n, cfg.delay, cfg.grids.history_samples,
                                              scaled(dir, hn));
        cases.emplace_back("sample:" + std::to_string(i),
                           std::make_pair(x, std::vector<HistoryPath>{h}));
    }

    std::vector<CertificationReport> parts(cases.size());
    parallel_for_index(cases.size(), [&](std::size_t i) {
        const auto& [x, hs] = cases[i].second;
        parts[i] = check_boundary_lemma(x, hs, bc.scales, cfg.dynamics, cfg.target, oracle,
                                        cfg.tolerances.boundary_tol,
                                        cfg.tolerances.stability_floor);
    });
    double k_emp = 0.0;
    for (std::size_t i = 0; i < cases.size(); ++i) {
        merge_rows(rep, parts[i], cases[i].first);
        auto it = parts[i].constants.find("k_emp");
        if (it != parts[i].constants.end()) k_emp = std::max(k_emp, it->second);
    }
    rep.constants["k_emp"] = k_emp;
    rep.finish();
    return rep;
}

}  // namespace mintau
