#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mintau/funcspace.hpp"
#include "mintau/mintime.hpp"
#include "mintau/problem.hpp"

namespace mintau {

struct GridsConfig {
    int history_samples = 64;  // N per delay interval
    double dt = 0.0;           // defaults to delay/256
    double switch_mesh = 0.0;
    double horizon = 0.0;
    int depth_limit = 16;
};

struct PetrovConfig {
    double sigma = 1.0;
    int shell_grid = 384;
};

struct ValidationConfig {
    int h1_samples = 500;
    int h3_samples = 100;
    std::vector<double> h_scales{0.1, 0.05, 0.025, 0.0125};
};

struct DkConfig {
    double shell_r = 1.0;
    int n_samples = 200;
    std::vector<double> h_scales{0.05, 0.025, 0.0125};
};

struct TolerancesConfig {
    double tol_theta_rel = 1e-8;
    double tol_ratio = 0.05;
    double mesh_slack = 0.0;
    double tol_lip_rel = 1e-9;
    double eps_target_rel = 1e-4;
    double budget_rel = 0.01;
    double distance_bound_rel = 0.01;
    double stability_floor = 1e-6;
    double boundary_tol = 1e-9;
};

struct SweepConfig {
    int n_samples = 20;
    double dist_lo = 0.0;  // absolute distances from the target
    double dist_hi = 0.0;
    double lip_frac = 0.8;  // fraction of Mbar available to the history tail
};

struct DppConfig {
    int n_histories = 10;
    int probes_per_history = 5;
    int controls_per_history = 2;
    SweepConfig sweep;
};

struct LipschitzConfig {
    int n_pairs = 50;
    double perturb_scale = 0.5;  // fraction of the proof radius
    SweepConfig sweep;
};

struct SecondDiffProbe {
    std::string x;  // named history
    std::string h;  // named perturbation
};

struct SemiconcavityConfig {
    int n_samples = 0;  // generated samples in addition to named probes
    std::vector<double> scales{1.0, 0.5, 0.25, 0.125};
    double h_norm = 0.02;
    double h_lip_frac = 0.2;
    SweepConfig sweep;
    std::vector<SecondDiffProbe> probes;
    std::optional<ValuePolicy> policy;  // per-certification oracle override
};

struct BoundaryConfig {
    int n_samples = 0;
    std::vector<double> scales{1.0, 0.5, 0.25, 0.125};
    double h_norm = 0.02;
    SweepConfig sweep;
    std::vector<SecondDiffProbe> probes;
    std::optional<ValuePolicy> policy;
};

struct ProblemConfig {
    std::string name;
    DynamicsSpec dynamics;
    TargetSpec target;
    double delay = 0.0;
    double m_bar = 0.0;  // defaults to dynamics.bound_M
    GridsConfig grids;
    PetrovConfig petrov;
    Box domain;
    ValidationConfig validation;
    DkConfig dk;
    TolerancesConfig tolerances;
    std::uint64_t seed = 0;
    ValuePolicy oracle_policy = ValuePolicy::automatic;

    std::map<std::string, HistoryPath> histories;
    std::map<std::string, HistoryPath> perturbations;
    SweepConfig steering_sweep;
    DppConfig dpp;
    SweepConfig distance_bound;
    LipschitzConfig lipschitz;
    SemiconcavityConfig semiconcavity;
    BoundaryConfig boundary;

    double dt() const { return grids.dt > 0.0 ? grids.dt : delay / 256.0; }
    double tol_theta() const { return tolerances.tol_theta_rel * grids.horizon; }
    const HistoryPath& history(const std::string& name) const;
    const HistoryPath& perturbation(const std::string& name) const;
    void validate() const;
};

ProblemConfig load_problem_config(const std::string& path);
ProblemConfig parse_problem_config(const std::string& json_text, const std::string& origin);

// "const:IDX" or "t0:i0,t1:i1,..." with t0 = 0; the last index is the tail.
ControlSignal parse_control_spec(const std::string& spec, int n_controls);

}  // namespace mintau
