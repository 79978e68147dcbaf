#include "mintau/funcspace.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "mintau/report.hpp"

namespace mintau {

HistoryPath::HistoryPath(int dim, double delay, std::vector<double> flat_samples)
    : dim_(dim), delay_(delay), flat_(std::move(flat_samples)) {
    if (dim_ < 1) throw ShapeError("HistoryPath: dim must be >= 1");
    if (!(delay_ > 0.0)) throw DomainError("HistoryPath: delay must be positive");
    if (flat_.size() % dim_ != 0 || flat_.size() < 2 * static_cast<std::size_t>(dim_))
        throw ShapeError("HistoryPath: need at least 2 samples of dimension dim");
    segments_ = static_cast<int>(flat_.size() / dim_) - 1;
    for (double v : flat_)
        if (!std::isfinite(v)) throw DomainError("HistoryPath: non-finite sample");
}

HistoryPath HistoryPath::constant(int dim, double delay, int segments, const Point& value) {
    require_dim(value, dim, "HistoryPath::constant");
    std::vector<double> flat;
    flat.reserve(static_cast<std::size_t>(segments + 1) * dim);
    for (int i = 0; i <= segments; ++i)
        for (int d = 0; d < dim; ++d) flat.push_back(value[d]);
    return HistoryPath(dim, delay, std::move(flat));
}

HistoryPath HistoryPath::linear(int dim, double delay, int segments, const Point& from,
                                const Point& to) {
    require_dim(from, dim, "HistoryPath::linear");
    require_dim(to, dim, "HistoryPath::linear");
    std::vector<double> flat;
    flat.reserve(static_cast<std::size_t>(segments + 1) * dim);
    for (int i = 0; i <= segments; ++i) {
        double a = static_cast<double>(i) / segments;
        for (int d = 0; d < dim; ++d) flat.push_back((1.0 - a) * from[d] + a * to[d]);
    }
    return HistoryPath(dim, delay, std::move(flat));
}

Point HistoryPath::sample(int i) const {
    if (i < 0 || i > segments_) throw DomainError("HistoryPath::sample: index out of range");
    return Point(flat_.begin() + static_cast<std::size_t>(i) * dim_,
                 flat_.begin() + static_cast<std::size_t>(i + 1) * dim_);
}

Point HistoryPath::at(double s) const {
    const double slack = 1e-9 * delay_;
    if (s < -delay_ - slack || s > slack)
        throw DomainError("HistoryPath::at: s outside [-tau, 0]");
    double pos = (s + delay_) / grid_step();
    int i = static_cast<int>(std::floor(pos));
    i = std::clamp(i, 0, segments_ - 1);
    double a = std::clamp(pos - i, 0.0, 1.0);
    Point r(dim_);
    const double* lo = flat_.data() + static_cast<std::size_t>(i) * dim_;
    const double* hi = lo + dim_;
    for (int d = 0; d < dim_; ++d) r[d] = (1.0 - a) * lo[d] + a * hi[d];
    return r;
}

std::string HistoryPath::to_csv() const {
    std::ostringstream out;
    out << "s";
    for (int d = 1; d <= dim_; ++d) out << ",x_" << d;
    out << "\n";
    for (int i = 0; i <= segments_; ++i) {
        out << fmt12(grid_time(i));
        for (int d = 0; d < dim_; ++d)
            out << "," << fmt12(flat_[static_cast<std::size_t>(i) * dim_ + d]);
        out << "\n";
    }
    return out.str();
}

double sup_norm(const HistoryPath& x) {
    double best = 0.0;
    const int n = x.dim();
    const auto& flat = x.flat();
    for (int i = 0; i <= x.segments(); ++i) {
        double s = 0.0;
        for (int d = 0; d < n; ++d) {
            double v = flat[static_cast<std::size_t>(i) * n + d];
            s += v * v;
        }
        best = std::max(best, s);
    }
    return std::sqrt(best);
}

double lip_constant(const HistoryPath& x) {
    double best = 0.0;
    const int n = x.dim();
    const auto& flat = x.flat();
    for (int i = 0; i < x.segments(); ++i) {
        double s = 0.0;
        for (int d = 0; d < n; ++d) {
            double dv = flat[static_cast<std::size_t>(i + 1) * n + d] -
                        flat[static_cast<std::size_t>(i) * n + d];
            s += dv * dv;
        }
        best = std::max(best, s);
    }
    return std::sqrt(best) / x.grid_step();
}

HistoryPath combine(const HistoryPath& x, const HistoryPath& h, double a) {
    if (x.dim() != h.dim() || x.segments() != h.segments() || x.delay() != h.delay())
        throw ShapeError("combine: dim/grid mismatch between paths");
    std::vector<double> flat(x.flat());
    const auto& hf = h.flat();
    for (std::size_t i = 0; i < flat.size(); ++i) flat[i] += a * hf[i];
    return HistoryPath(x.dim(), x.delay(), std::move(flat));
}

}  // namespace mintau
