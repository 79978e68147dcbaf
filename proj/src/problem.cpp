#include "mintau/problem.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "mintau/report.hpp"
#include "mintau/rng.hpp"

namespace mintau {

std::string field_kind_name(FieldKind k) {
    switch (k) {
        case FieldKind::unit_speed: return "unit_speed";
        case FieldKind::clamped_linear: return "clamped_linear";
        case FieldKind::scalar_decay: return "scalar_decay";
    }
    return "?";
}

FieldKind field_kind_from_name(const std::string& name) {
    if (name == "unit_speed") return FieldKind::unit_speed;
    if (name == "clamped_linear") return FieldKind::clamped_linear;
    if (name == "scalar_decay") return FieldKind::scalar_decay;
    throw ConfigError("unknown dynamics field: " + name);
}

namespace {

// Radial clamp to the ball of radius M; preserves direction so Petrov inner
// products stay meaningful.
void clamp_radial(Point& w, double M) {
    double n = norm(w);
    if (n > M && n > 0.0) {
        double s = M / n;
        for (double& v : w) v *= s;
    }
}

}  // namespace

Point DynamicsSpec::eval(const Point& z, const Point& u) const {
    require_dim(z, dim_state, "DynamicsSpec::eval state");
    require_dim(u, dim_control, "DynamicsSpec::eval control");
    switch (kind) {
        case FieldKind::unit_speed:
            return u;
        case FieldKind::scalar_decay: {
            Point w{-z[0] + u[0]};
            clamp_radial(w, bound_M);
            return w;
        }
        case FieldKind::clamped_linear: {
            Point w(dim_state, 0.0);
            for (int i = 0; i < dim_state; ++i) {
                double s = 0.0;
                for (int j = 0; j < dim_state; ++j) s += A[i][j] * z[j];
                for (int j = 0; j < dim_control; ++j) s += B[i][j] * u[j];
                w[i] = s;
            }
            clamp_radial(w, bound_M);
            return w;
        }
    }
    throw UnsupportedError("unknown field kind");
}

Point DynamicsSpec::eval(const Point& z, int control_index) const {
    if (control_index < 0 || control_index >= static_cast<int>(controls.size()))
        throw DomainError("control index out of range");
    return eval(z, controls[control_index]);
}

void DynamicsSpec::validate() const {
    if (dim_state < 1 || dim_control < 1) throw ConfigError("dynamics: dimensions must be >= 1");
    if (!(bound_M > 0.0)) throw ConfigError("dynamics: bound_M must be positive");
    if (lipschitz_L < 0.0 || semiconcavity_cf < 0.0)
        throw ConfigError("dynamics: constants must be nonnegative");
    if (controls.empty()) throw ConfigError("dynamics: control list must be nonempty");
    for (const auto& u : controls) {
        if (static_cast<int>(u.size()) != dim_control)
            throw ConfigError("dynamics: control dimension mismatch");
        if (!all_finite(u)) throw ConfigError("dynamics: non-finite control");
    }
    for (std::size_t i = 0; i < controls.size(); ++i)
        for (std::size_t j = i + 1; j < controls.size(); ++j)
            if (controls[i] == controls[j])
                throw ConfigError("dynamics: duplicate control entries " + std::to_string(i) +
                                  " and " + std::to_string(j));
    if (kind == FieldKind::unit_speed) {
        if (dim_control != dim_state)
            throw ConfigError("unit_speed: control dimension must equal state dimension");
        for (const auto& u : controls)
            if (std::abs(norm(u) - 1.0) > 1e-9)
                throw ConfigError("unit_speed: controls must be unit vectors");
    }
    if (kind == FieldKind::scalar_decay && (dim_state != 1 || dim_control != 1))
        throw ConfigError("scalar_decay: state and control must be one-dimensional");
    if (kind == FieldKind::clamped_linear) {
        if (static_cast<int>(A.size()) != dim_state || static_cast<int>(B.size()) != dim_state)
            throw ConfigError("clamped_linear: A and B must have dim_state rows");
        for (const auto& row : A)
            if (static_cast<int>(row.size()) != dim_state)
                throw ConfigError("clamped_linear: A must be dim_state x dim_state");
        for (const auto& row : B)
            if (static_cast<int>(row.size()) != dim_control)
                throw ConfigError("clamped_linear: B must be dim_state x dim_control");
    }
}

DynamicsSpec DynamicsSpec::make_unit_speed(int dim, std::vector<Point> controls, double bound_M) {
    DynamicsSpec d;
    d.kind = FieldKind::unit_speed;
    d.dim_state = dim;
    d.dim_control = dim;
    d.bound_M = bound_M;
    d.lipschitz_L = 0.0;
    d.semiconcavity_cf = 0.0;
    d.controls = std::move(controls);
    d.validate();
    return d;
}

DynamicsSpec DynamicsSpec::make_scalar_decay(std::vector<Point> controls, double bound_M,
                                             double lipschitz_L, double cf) {
    DynamicsSpec d;
    d.kind = FieldKind::scalar_decay;
    d.dim_state = 1;
    d.dim_control = 1;
    d.bound_M = bound_M;
    d.lipschitz_L = lipschitz_L;
    d.semiconcavity_cf = cf;
    d.controls = std::move(controls);
    d.validate();
    return d;
}

DynamicsSpec DynamicsSpec::make_clamped_linear(std::vector<std::vector<double>> A,
                                               std::vector<std::vector<double>> B,
                                               std::vector<Point> controls, double bound_M,
                                               double lipschitz_L, double cf) {
    DynamicsSpec d;
    d.kind = FieldKind::clamped_linear;
    d.dim_state = static_cast<int>(A.size());
    d.dim_control = B.empty() ? 1 : static_cast<int>(B[0].size());
    d.A = std::move(A);
    d.B = std::move(B);
    d.bound_M = bound_M;
    d.lipschitz_L = lipschitz_L;
    d.semiconcavity_cf = cf;
    d.controls = std::move(controls);
    d.validate();
    return d;
}

void TargetSpec::validate() const {
    if (centers.empty()) throw ConfigError("target: need at least one ball");
    if (centers.size() != radii.size())
        throw ConfigError("target: centers and radii counts differ");
    std::size_t n = centers[0].size();
    for (const auto& c : centers) {
        if (c.size() != n) throw ConfigError("target: center dimension mismatch");
        if (!all_finite(c)) throw ConfigError("target: non-finite center");
    }
    for (double r : radii)
        if (!(r > 0.0)) throw ConfigError("target: radii must be positive");
}

double TargetSpec::signed_surplus(const Point& z) const {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < centers.size(); ++i)
        best = std::min(best, norm(sub(z, centers[i])) - radii[i]);
    return best;
}

double TargetSpec::distance(const Point& z) const { return std::max(signed_surplus(z), 0.0); }

int TargetSpec::nearest_ball(const Point& z) const {
    int best = 0;
    double best_v = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < centers.size(); ++i) {
        double v = norm(sub(z, centers[i])) - radii[i];
        if (v < best_v) {
            best_v = v;
            best = static_cast<int>(i);
        }
    }
    return best;
}

Point TargetSpec::project(const Point& z) const {
    if (contains(z)) return z;
    int i = nearest_ball(z);
    Point d = sub(z, centers[i]);
    double n = norm(d);
    Point p = centers[i];
    axpy(p, radii[i] / n, d);
    return p;
}

std::string H1Report::to_text() const {
    std::ostringstream out;
    out << "H1 " << (pass ? "PASS" : "FAIL") << ": max|f| = " << fmt12(measured_max_speed)
        << " (declared M = " << fmt12(declared_M) << "), slope = " << fmt12(measured_max_slope)
        << " (declared L = " << fmt12(declared_L) << "), samples = " << samples
        << ", seed = " << seed << "\n";
    if (!pass) {
        out << "  speed witness:";
        for (double v : speed_witness) out << " " << fmt12(v);
        out << "\n  slope witness:";
        for (double v : slope_witness_a) out << " " << fmt12(v);
        out << " |";
        for (double v : slope_witness_b) out << " " << fmt12(v);
        out << "\n";
    }
    return out.str();
}

std::string H3Report::to_text() const {
    std::ostringstream out;
    out << "H3 " << (pass ? "PASS" : "FAIL") << ": max second-difference ratio = "
        << fmt12(measured_max_ratio) << " (declared c_f = " << fmt12(declared_cf)
        << "), stable = " << (stable ? "yes" : "no") << ", samples = " << samples
        << ", seed = " << seed << "\n  ratio by scale:";
    for (std::size_t i = 0; i < h_scales.size(); ++i)
        out << " [" << fmt12(h_scales[i]) << "] " << fmt12(ratio_by_scale[i]);
    out << "\n";
    return out.str();
}

std::string PetrovResult::to_text() const {
    std::ostringstream out;
    if (ok()) {
        out << "H4 PASS: mu = " << fmt12(certificate->mu)
            << ", sigma = " << fmt12(certificate->sigma)
            << ", shell samples = " << shell_samples << "\n";
    } else {
        out << "H4 FAIL: best inner product " << fmt12(worst_value)
            << " >= 0 at shell point";
        for (double v : worst_point) out << " " << fmt12(v);
        out << " (" << shell_samples << " samples)\n";
    }
    return out.str();
}

H1Report validate_h1(const DynamicsSpec& dyn, const Box& domain, int n_samples,
                     std::uint64_t seed) {
    if (n_samples < 2) throw DomainError("validate_h1: n_samples must be >= 2");
    if (domain.dim() != dyn.dim_state) throw ShapeError("validate_h1: domain dimension mismatch");
    Rng rng(seed);
    const int n = dyn.dim_state;
    double diam = norm(sub(domain.hi, domain.lo));

    std::vector<Point> pts(n_samples, Point(n));
    for (auto& z : pts)
        for (int d = 0; d < n; ++d) z[d] = rng.uniform(domain.lo[d], domain.hi[d]);

    H1Report rep;
    rep.declared_M = dyn.bound_M;
    rep.declared_L = dyn.lipschitz_L;
    rep.samples = n_samples;
    rep.seed = seed;

    for (const auto& z : pts) {
        for (const auto& u : dyn.controls) {
            double s = norm(dyn.eval(z, u));
            if (s > rep.measured_max_speed) {
                rep.measured_max_speed = s;
                rep.speed_witness = z;
            }
        }
    }

    auto probe_pair = [&](const Point& a, const Point& b) {
        double dz = norm(sub(a, b));
        if (dz < 1e-12) return;
        for (const auto& u : dyn.controls) {
            double df = norm(sub(dyn.eval(a, u), dyn.eval(b, u)));
            double slope = df / dz;
            if (slope > rep.measured_max_slope) {
                rep.measured_max_slope = slope;
                rep.slope_witness_a = a;
                rep.slope_witness_b = b;
            }
        }
    };
    for (int i = 0; i < n_samples; ++i) {
        probe_pair(pts[i], pts[(i + 1) % n_samples]);
        // a nearby partner to expose the local slope
        Point g = rng.unit_vector(n);
        Point near = pts[i];
        axpy(near, 1e-4 * diam, g);
        probe_pair(pts[i], near);
    }

    rep.pass = rep.measured_max_speed <= dyn.bound_M * 1.01 + 1e-12 &&
               rep.measured_max_slope <= dyn.lipschitz_L * 1.01 + 1e-12;
    return rep;
}

H3Report validate_h3(const DynamicsSpec& dyn, const Box& domain, int n_samples,
                     const std::vector<double>& h_scales, std::uint64_t seed) {
    if (h_scales.empty()) throw DomainError("validate_h3: need at least one scale");
    for (std::size_t i = 0; i + 1 < h_scales.size(); ++i)
        if (!(h_scales[i] > h_scales[i + 1]) || !(h_scales.back() > 0.0))
            throw DomainError("validate_h3: h_scales must be positive decreasing");
    if (domain.dim() != dyn.dim_state) throw ShapeError("validate_h3: domain dimension mismatch");

    Rng rng(seed);
    const int n = dyn.dim_state;
    H3Report rep;
    rep.declared_cf = dyn.semiconcavity_cf;
    rep.samples = n_samples;
    rep.seed = seed;
    rep.h_scales = h_scales;
    rep.ratio_by_scale.assign(h_scales.size(), 0.0);

    auto inside = [&](const Point& z) {
        for (int d = 0; d < n; ++d)
            if (z[d] < domain.lo[d] || z[d] > domain.hi[d]) return false;
        return true;
    };

    for (int i = 0; i < n_samples; ++i) {
        Point z(n);
        for (int d = 0; d < n; ++d) z[d] = rng.uniform(domain.lo[d], domain.hi[d]);
        Point g = rng.unit_vector(n);
        for (std::size_t s = 0; s < h_scales.size(); ++s) {
            Point zp = z, zm = z;
            axpy(zp, h_scales[s], g);
            axpy(zm, -h_scales[s], g);
            if (!inside(zp) || !inside(zm)) continue;
            for (const auto& u : dyn.controls) {
                Point sum = dyn.eval(zp, u);
                const Point fm = dyn.eval(zm, u);
                const Point f0 = dyn.eval(z, u);
                for (int d = 0; d < n; ++d) sum[d] += fm[d] - 2.0 * f0[d];
                double ratio = norm(sum) / (h_scales[s] * h_scales[s]);
                rep.ratio_by_scale[s] = std::max(rep.ratio_by_scale[s], ratio);
                if (ratio > rep.measured_max_ratio) {
                    rep.measured_max_ratio = ratio;
                    rep.witness = z;
                }
            }
        }
    }

    double lo = *std::min_element(rep.ratio_by_scale.begin(), rep.ratio_by_scale.end());
    double hi = *std::max_element(rep.ratio_by_scale.begin(), rep.ratio_by_scale.end());
    rep.stable = hi <= 2.0 * lo + 1e-9;
    rep.pass = rep.stable && rep.measured_max_ratio <= dyn.semiconcavity_cf * 1.01 + 1e-9;
    return rep;
}

std::vector<Point> petrov_shell_grid(const TargetSpec& target, double sigma, int shell_grid) {
    const int n = target.dim();
    const int n_radial = 8;
    std::vector<Point> pts;
    std::vector<Point> dirs;
    if (n == 1) {
        dirs = {{-1.0}, {1.0}};
    } else {
        int n_ang = std::max(1, shell_grid / n_radial);
        if (n == 2) {
            for (int j = 0; j < n_ang; ++j) {
                double th = 2.0 * std::numbers::pi * (j + 0.5) / n_ang;
                dirs.push_back({std::cos(th), std::sin(th)});
            }
        } else {
            // Fibonacci sphere lattice
            const double ga = std::numbers::pi * (3.0 - std::sqrt(5.0));
            for (int j = 0; j < n_ang; ++j) {
                double zc = 1.0 - 2.0 * (j + 0.5) / n_ang;
                double r = std::sqrt(std::max(0.0, 1.0 - zc * zc));
                double th = ga * j;
                dirs.push_back({r * std::cos(th), r * std::sin(th), zc});
            }
        }
    }
    for (std::size_t b = 0; b < target.centers.size(); ++b) {
        for (int i = 0; i < n_radial; ++i) {
            double off = sigma * (i + 0.5) / n_radial;
            for (const auto& dir : dirs) {
                Point z = target.centers[b];
                axpy(z, target.radii[b] + off, dir);
                // overlapping unions: keep only genuine shell points
                double d = target.distance(z);
                if (d > 0.0 && d < sigma) pts.push_back(std::move(z));
            }
        }
    }
    return pts;
}

PetrovResult estimate_petrov(const DynamicsSpec& dyn, const TargetSpec& target, double sigma,
                             int shell_grid) {
    if (!(sigma > 0.0)) throw DomainError("estimate_petrov: sigma must be positive");
    target.validate();
    auto grid = petrov_shell_grid(target, sigma, shell_grid);

    PetrovResult res;
    res.shell_samples = static_cast<int>(grid.size());
    double worst = -std::numeric_limits<double>::infinity();
    for (const auto& z : grid) {
        Point ray = sub(z, target.project(z));
        double d = norm(ray);
        Point e = scaled(ray, 1.0 / d);
        double best_u = std::numeric_limits<double>::infinity();
        for (const auto& u : dyn.controls) best_u = std::min(best_u, dot(dyn.eval(z, u), e));
        if (best_u > worst) {
            worst = best_u;
            res.worst_point = z;
        }
    }
    res.worst_value = worst;
    double mu = -worst;
    if (mu > 0.0) {
        PetrovCertificate cert;
        cert.mu = mu;
        cert.sigma = sigma;
        cert.shell_samples = res.shell_samples;
        cert.worst_point = res.worst_point;
        res.certificate = cert;
    }
    return res;
}

DkSemiconcavityEstimate estimate_dk_semiconcavity(const TargetSpec& target, double shell_r,
                                                  int n_samples,
                                                  const std::vector<double>& h_scales,
                                                  std::uint64_t seed) {
    if (!(shell_r > 0.0)) throw DomainError("estimate_dk_semiconcavity: shell_r must be positive");
    Rng rng(seed);
    const int n = target.dim();
    DkSemiconcavityEstimate est;
    est.shell_r = shell_r;

    auto in_shell = [&](const Point& z) {
        // K_{shell_r} minus the interior of K
        return target.signed_surplus(z) >= -1e-12 && target.distance(z) < shell_r;
    };

    double best = 0.0;
    for (int i = 0; i < n_samples; ++i) {
        int b = static_cast<int>(i % target.centers.size());
        Point dir = rng.unit_vector(n);
        double off = rng.uniform(0.0, shell_r);
        Point z = target.centers[b];
        axpy(z, target.radii[b] + off, dir);
        if (!in_shell(z)) {
            ++est.pairs_skipped;
            continue;
        }
        Point g = rng.unit_vector(n);
        for (double s : h_scales) {
            Point z1 = z, z2 = z;
            axpy(z1, s, g);
            axpy(z2, -s, g);
            double gap = norm(sub(z1, z2));
            if (gap < 1e-6 || !in_shell(z1) || !in_shell(z2)) {
                ++est.pairs_skipped;
                continue;
            }
            double second = target.distance(z1) + target.distance(z2) - 2.0 * target.distance(z);
            best = std::max(best, second / (gap * gap));
            ++est.pairs_used;
        }
    }
    est.constant = best;
    return est;
}

}  // namespace mintau
