#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mintau/mintime.hpp"
#include "mintau/steering.hpp"

namespace mintau {

struct SampleRow {
    std::string id;
    double lhs = 0.0;
    double rhs = 0.0;
    double violation = 0.0;  // lhs - rhs, signed; <= tolerance means pass
    bool skipped = false;
    std::string note;
};

struct CertificationReport {
    std::string check;
    double tolerance = 0.0;
    int n_samples = 0;
    int n_skipped = 0;
    double worst_violation = -std::numeric_limits<double>::infinity();
    std::string worst_id;
    bool pass = false;
    bool inconclusive = false;  // more than 20% of the samples skipped
    std::map<std::string, double> constants;
    std::uint64_t seed = 0;
    std::vector<SampleRow> rows;

    void finish();  // fills worst/pass/inconclusive from rows
    std::string to_text() const;
    // CSV with columns sample_id, inputs_hash, lhs, rhs, slack, verdict
    std::string to_csv() const;
};

// Shared oracle configuration: every T evaluation inside one certification
// uses the same mesh, horizon and control grid so approximation bias is
// common across compared values.
struct OracleConfig {
    SearchConfig search;
    ValuePolicy policy = ValuePolicy::automatic;
    double dt = 0.0;  // trajectory step for probe integrations
};

std::optional<double> evaluate_min_time(const HistoryPath& x, const DynamicsSpec& dyn,
                                        const TargetSpec& target, const OracleConfig& oracle);

// Prop 3.1: T(x) <= t + T(y_t(.;x,u)) for every probe time and control.
// Oracle failures on the shifted state are reported as skipped rows.
CertificationReport check_dpp(const HistoryPath& x0, const DynamicsSpec& dyn,
                              const TargetSpec& target, const std::vector<double>& t_probes,
                              const std::vector<ControlSignal>& controls,
                              const OracleConfig& oracle, double tol_dpp);

// Distance estimate: T(x) <= C d_K(x(0)) (1 + rel_slack) for samples in
// Lip_Mbar with x(0) in K_delta; non-qualifying samples are skipped.
CertificationReport check_distance_bound(const std::vector<HistoryPath>& samples,
                                         const DynamicsSpec& dyn, const TargetSpec& target,
                                         const SteeringParams& params,
                                         const OracleConfig& oracle, double rel_slack);

// Lipschitz modulus: |T(x) - T(xt)| <= C (1 + L tau) e^{L max(T)} |x - xt|_inf
// for pairs inside the proof radius delta e^{-L(T+1)} / (1 + L tau).
CertificationReport estimate_lipschitz(
    const std::vector<std::pair<HistoryPath, HistoryPath>>& pairs, const DynamicsSpec& dyn,
    const TargetSpec& target, const SteeringParams& params, const OracleConfig& oracle,
    double tol_abs);

struct SemiconcavityEstimate {
    double modulus = 0.0;  // max ratio when stable
    std::vector<double> h_scales;      // sup-norm magnitudes lambda * |h|
    std::vector<double> ratio_by_scale;  // (T(x+lh) + T(x-lh) - 2T(x)) / (l |h|)^2
    bool stable = false;
    int n_skipped = 0;
    std::string note;
};

// Thm 4.1 second differences of T at x along h across dyadic scales.
SemiconcavityEstimate estimate_semiconcavity(const HistoryPath& x, const HistoryPath& h,
                                             const std::vector<double>& scales,
                                             const DynamicsSpec& dyn, const TargetSpec& target,
                                             const OracleConfig& oracle,
                                             double stability_floor = 1e-6);

// Lemma 4.2 boundary second differences T(x+2h) - 2T(x+h) <= k |h|^2 for
// x(0) on the target boundary, with the same dyadic-stability reading.
CertificationReport check_boundary_lemma(const HistoryPath& x,
                                         const std::vector<HistoryPath>& h_family,
                                         const std::vector<double>& scales,
                                         const DynamicsSpec& dyn, const TargetSpec& target,
                                         const OracleConfig& oracle, double boundary_tol,
                                         double stability_floor = 1e-6);

// Stability reading used by both second-difference checks: positive parts of
// the ratios agree within a factor 2 (up to the absolute floor).
bool ratios_stable(const std::vector<double>& ratios, double floor_abs);

}  // namespace mintau
