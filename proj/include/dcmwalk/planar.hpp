// 2D planar vector used for COM, DCM, ZMP and footprint quantities.
#pragma once

#include <cmath>
#include <stdexcept>

namespace dcmwalk {

struct PlanarVec {
    double x = 0.0;
    double y = 0.0;

    constexpr PlanarVec() = default;
    constexpr PlanarVec(double x_, double y_) : x(x_), y(y_) {}

    constexpr PlanarVec operator+(const PlanarVec& o) const { return {x + o.x, y + o.y}; }
    constexpr PlanarVec operator-(const PlanarVec& o) const { return {x - o.x, y - o.y}; }
    constexpr PlanarVec operator-() const { return {-x, -y}; }
    constexpr PlanarVec operator*(double s) const { return {x * s, y * s}; }
    constexpr PlanarVec operator/(double s) const { return {x / s, y / s}; }
    constexpr PlanarVec& operator+=(const PlanarVec& o) { x += o.x; y += o.y; return *this; }
    constexpr PlanarVec& operator-=(const PlanarVec& o) { x -= o.x; y -= o.y; return *this; }
    constexpr bool operator==(const PlanarVec& o) const = default;

    double norm() const { return std::hypot(x, y); }
    constexpr double squared_norm() const { return x * x + y * y; }
    bool finite() const { return std::isfinite(x) && std::isfinite(y); }
};

constexpr PlanarVec operator*(double s, const PlanarVec& v) { return v * s; }

inline PlanarVec midpoint(const PlanarVec& a, const PlanarVec& b) {
    return {0.5 * (a.x + b.x), 0.5 * (a.y + b.y)};
}

inline PlanarVec lerp(const PlanarVec& a, const PlanarVec& b, double u) {
    return {a.x + (b.x - a.x) * u, a.y + (b.y - a.y) * u};
}

inline double clamp(double v, double lo, double hi) {
    return v < lo ? lo : (v > hi ? hi : v);
}

/// Scales a displacement down to `max_norm` without changing its direction.
inline PlanarVec clamp_norm(const PlanarVec& v, double max_norm) {
    const double n = v.norm();
    if (n <= max_norm || n == 0.0) return v;
    return v * (max_norm / n);
}

inline void require_finite(const PlanarVec& v, const char* what) {
    if (!v.finite()) throw std::invalid_argument(std::string(what) + ": non-finite value");
}

}  // namespace dcmwalk
