#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "mintau/errors.hpp"

namespace mintau {

// Points in R^n. Dimensions at desk scale are tiny (n <= 3), so plain
// vectors keep every interface simple.
using Point = std::vector<double>;

inline double dot(const Point& a, const Point& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double norm(const Point& a) { return std::sqrt(dot(a, a)); }

inline Point sub(const Point& a, const Point& b) {
    Point r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

inline Point add(const Point& a, const Point& b) {
    Point r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

inline Point scaled(const Point& a, double c) {
    Point r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = c * a[i];
    return r;
}

// r += c * a
inline void axpy(Point& r, double c, const Point& a) {
    for (std::size_t i = 0; i < a.size(); ++i) r[i] += c * a[i];
}

inline bool all_finite(const Point& a) {
    for (double v : a)
        if (!std::isfinite(v)) return false;
    return true;
}

inline void require_dim(const Point& a, std::size_t n, const char* what) {
    if (a.size() != n) throw ShapeError(std::string(what) + ": expected dimension " +
                                        std::to_string(n) + ", got " + std::to_string(a.size()));
}

}  // namespace mintau
