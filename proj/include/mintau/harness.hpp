#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mintau/config.hpp"
#include "mintau/regularity.hpp"

namespace mintau {

// Derived state every certification command shares: the certified Petrov
// margin and the steering constants built from it.
struct PipelineState {
    PetrovResult petrov;
    SteeringParams params;  // valid only when petrov.ok()
    DkSemiconcavityEstimate dk;
};

OracleConfig make_oracle(const ProblemConfig& cfg);

// Runs estimate_petrov and derive_constants for the config. Throws
// PetrovViolationError when the shell estimate fails, DelayTooLargeError when
// the Prop 3.2 delay hypothesis fails.
PipelineState run_pipeline(const ProblemConfig& cfg);

struct ValidationBundle {
    H1Report h1;
    H3Report h3;
    PetrovResult petrov;
    DkSemiconcavityEstimate dk;
    std::optional<SteeringParams> params;
    bool pass = false;
    std::string to_text() const;
    std::string to_json() const;
};

// H1/H3/H4 validation plus derived constants; DelayTooLargeError propagates.
ValidationBundle run_validate(const ProblemConfig& cfg);

// Random histories anchored at a prescribed distance from the target, with a
// Lipschitz-bounded tail kept inside the domain box.
HistoryPath random_shell_history(Rng& rng, const ProblemConfig& cfg, double dist,
                                 double lip_max);
// Random piecewise-linear perturbation with sup norm <= norm_target and
// Lipschitz constant <= lip_max.
HistoryPath random_perturbation(Rng& rng, const ProblemConfig& cfg, double norm_target,
                                double lip_max);

// Prop 3.2 sweep: steer every sampled initial datum, recording one row per
// logged contraction ratio plus one budget row per run.
CertificationReport run_steering_sweep(const ProblemConfig& cfg);

CertificationReport run_certify_dpp(const ProblemConfig& cfg);
CertificationReport run_certify_distance_bound(const ProblemConfig& cfg);
CertificationReport run_certify_lipschitz(const ProblemConfig& cfg);

struct SemiconcavityOutcome {
    CertificationReport report;  // one stability row per sample, ratio rows for audit
    std::vector<SemiconcavityEstimate> estimates;
};

SemiconcavityOutcome run_certify_semiconcavity(const ProblemConfig& cfg);
CertificationReport run_certify_boundary(const ProblemConfig& cfg);

}  // namespace mintau
