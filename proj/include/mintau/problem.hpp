#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mintau/vec.hpp"

namespace mintau {

enum class FieldKind { unit_speed, clamped_linear, scalar_decay };

std::string field_kind_name(FieldKind k);
FieldKind field_kind_from_name(const std::string& name);

// The controlled field f with its certified constants and the finite control
// family U. Immutable; eval is pure.
struct DynamicsSpec {
    FieldKind kind = FieldKind::unit_speed;
    int dim_state = 1;
    int dim_control = 1;
    double bound_M = 1.0;         // H1 bound on |f|
    double lipschitz_L = 0.0;     // H1 Lipschitz constant in the state
    double semiconcavity_cf = 0.0;  // H3 constant
    std::vector<Point> controls;
    // clamped_linear parameters, row-major dim_state x dim_state / dim_state x dim_control
    std::vector<std::vector<double>> A;
    std::vector<std::vector<double>> B;

    Point eval(const Point& z, const Point& u) const;
    Point eval(const Point& z, int control_index) const;

    void validate() const;

    static DynamicsSpec make_unit_speed(int dim, std::vector<Point> controls, double bound_M = 1.0);
    static DynamicsSpec make_scalar_decay(std::vector<Point> controls, double bound_M,
                                          double lipschitz_L = 1.0, double cf = 0.0);
    static DynamicsSpec make_clamped_linear(std::vector<std::vector<double>> A,
                                            std::vector<std::vector<double>> B,
                                            std::vector<Point> controls, double bound_M,
                                            double lipschitz_L, double cf = 0.0);
};

// Compact target: a ball or a finite union of balls. d_K and the projection
// are exact; ties between equidistant balls break to the lowest index.
struct TargetSpec {
    std::vector<Point> centers;
    std::vector<double> radii;
    double dk_semiconcavity_c = 0.0;  // empirical constant of the midpoint bound on d_K
    double dk_shell_r = 0.0;          // shell radius on which it was measured

    int dim() const { return centers.empty() ? 0 : static_cast<int>(centers[0].size()); }
    void validate() const;

    // min over balls of (|z - c| - r): negative inside K, zero on the boundary
    double signed_surplus(const Point& z) const;
    // distance d_K(z) = max(signed_surplus, 0)
    double distance(const Point& z) const;
    // index of the nearest ball (lowest index on ties)
    int nearest_ball(const Point& z) const;
    // projection onto K; z itself when z is in K
    Point project(const Point& z) const;
    bool contains(const Point& z) const { return signed_surplus(z) <= 0.0; }
    bool in_interior(const Point& z) const { return signed_surplus(z) < 0.0; }
    bool on_boundary(const Point& z, double tol) const {
        return std::abs(signed_surplus(z)) <= tol;
    }
};

struct Box {
    Point lo;
    Point hi;
    int dim() const { return static_cast<int>(lo.size()); }
};

struct H1Report {
    bool pass = false;
    double measured_max_speed = 0.0;
    double measured_max_slope = 0.0;
    double declared_M = 0.0;
    double declared_L = 0.0;
    Point speed_witness;
    Point slope_witness_a, slope_witness_b;
    int samples = 0;
    std::uint64_t seed = 0;
    std::string to_text() const;
};

struct H3Report {
    bool pass = false;
    bool stable = false;
    double measured_max_ratio = 0.0;
    double declared_cf = 0.0;
    std::vector<double> h_scales;
    std::vector<double> ratio_by_scale;
    Point witness;
    int samples = 0;
    std::uint64_t seed = 0;
    std::string to_text() const;
};

// H4 certificate: mu is certified on the sampled shell grid only.
struct PetrovCertificate {
    double mu = 0.0;
    double sigma = 0.0;
    int shell_samples = 0;
    Point worst_point;
};

struct PetrovResult {
    std::optional<PetrovCertificate> certificate;
    // worst shell sample and its best (most inward) inner product
    Point worst_point;
    double worst_value = 0.0;
    int shell_samples = 0;
    bool ok() const { return certificate.has_value(); }
    std::string to_text() const;
};

// Sampled verification of the H1 bounds. Violations are results, not errors.
H1Report validate_h1(const DynamicsSpec& dyn, const Box& domain, int n_samples,
                     std::uint64_t seed);

// Sampled verification of the H3 second-difference bound with a scale-stability
// check (ratios within a factor 2 across h_scales).
H3Report validate_h3(const DynamicsSpec& dyn, const Box& domain, int n_samples,
                     const std::vector<double>& h_scales, std::uint64_t seed);

// Deterministic shell grid on K_sigma \ K (per ball: radial x angular levels,
// half-offset so sector midpoints are sampled exactly).
std::vector<Point> petrov_shell_grid(const TargetSpec& target, double sigma, int shell_grid);

PetrovResult estimate_petrov(const DynamicsSpec& dyn, const TargetSpec& target, double sigma,
                             int shell_grid);

struct DkSemiconcavityEstimate {
    double constant = 0.0;  // empirical c of the midpoint inequality
    double shell_r = 0.0;
    int pairs_used = 0;
    int pairs_skipped = 0;
};

DkSemiconcavityEstimate estimate_dk_semiconcavity(const TargetSpec& target, double shell_r,
                                                  int n_samples,
                                                  const std::vector<double>& h_scales,
                                                  std::uint64_t seed);

}  // namespace mintau
