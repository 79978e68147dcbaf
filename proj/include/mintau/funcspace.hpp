#pragma once

#include <vector>

#include "mintau/vec.hpp"

namespace mintau {

// A sampled element of C([-tau,0]; R^n): n-dimensional values on the uniform
// grid s_i = -tau + i*tau/N, i = 0..N, with linear interpolation in between.
// Immutable after construction.
class HistoryPath {
public:
    // flat sample layout: sample i occupies [i*dim, (i+1)*dim)
    HistoryPath(int dim, double delay, std::vector<double> flat_samples);

    static HistoryPath constant(int dim, double delay, int segments, const Point& value);
    static HistoryPath linear(int dim, double delay, int segments, const Point& from,
                              const Point& to);

    int dim() const { return dim_; }
    double delay() const { return delay_; }
    int segments() const { return segments_; }  // N
    double grid_step() const { return delay_ / segments_; }
    double grid_time(int i) const { return -delay_ + i * grid_step(); }

    Point sample(int i) const;      // exact stored value
    Point at(double s) const;       // linear interpolation, s in [-tau, 0]
    Point endpoint() const { return sample(segments_); }  // x(0)

    const std::vector<double>& flat() const { return flat_; }

    // CSV block with columns s, x_1..x_n
    std::string to_csv() const;

private:
    int dim_;
    double delay_;
    int segments_;
    std::vector<double> flat_;
};

// max_i |x(s_i)|; exact for piecewise-linear paths since the norm of a linear
// segment attains its maximum at an endpoint.
double sup_norm(const HistoryPath& x);

// max_i |x(s_{i+1}) - x(s_i)| * N / tau
double lip_constant(const HistoryPath& x);

// samplewise x + a*h; requires matching dim, delay and grid
HistoryPath combine(const HistoryPath& x, const HistoryPath& h, double a);

// Membership predicate for Lip_{Mbar} with relative slope tolerance.
struct LipschitzClassTag {
    double bound;  // Mbar
    bool contains(const HistoryPath& x, double rel_tol = 1e-9) const {
        return lip_constant(x) <= bound * (1.0 + rel_tol) + 1e-12;
    }
};

}  // namespace mintau
