#pragma once

// Rectangular periodic domains (1D particle paths, 4D gauge fields) and
// minimal-image arithmetic on them.

#include <array>
#include <cmath>
#include <span>
#include <stdexcept>

namespace gpimc {

inline constexpr int kMaxDims = 4;

// Coordinates and displacements; entries beyond the domain dimension are zero.
using Point = std::array<double, kMaxDims>;

struct PeriodicDomain {
    int dims = 1;
    Point extents{};

    PeriodicDomain() = default;

    PeriodicDomain(int dims_, std::span<const double> ext) : dims(dims_) {
        if (dims != 1 && dims != 4)
            throw std::invalid_argument("PeriodicDomain: dims must be 1 or 4");
        if (static_cast<int>(ext.size()) != dims)
            throw std::invalid_argument("PeriodicDomain: extent count != dims");
        for (int d = 0; d < dims; ++d) {
            if (!(ext[d] > 0.0))
                throw std::invalid_argument("PeriodicDomain: extents must be positive");
            extents[d] = ext[d];
        }
    }

    // 1D path domain with time period T.
    static PeriodicDomain line(double time_extent) {
        const double e[1] = {time_extent};
        return PeriodicDomain(1, e);
    }

    // 4D box (X, X, X, T); time is the last axis.
    static PeriodicDomain box4(double space_extent, double time_extent) {
        const double e[4] = {space_extent, space_extent, space_extent, time_extent};
        return PeriodicDomain(4, e);
    }

    int time_axis() const { return dims - 1; }

    double volume() const {
        double v = 1.0;
        for (int d = 0; d < dims; ++d) v *= extents[d];
        return v;
    }

    bool operator==(const PeriodicDomain&) const = default;
};

// Minimal-image representative of a scalar offset, in (-extent/2, extent/2].
// The tie at exactly extent/2 resolves to the positive representative.
inline double minimal_image(double d, double extent) {
    d -= extent * std::floor(d / extent + 0.5);
    if (d == -0.5 * extent) d = 0.5 * extent;
    return d;
}

// Wrap a coordinate into the fundamental domain [0, extent).
inline double wrap_coordinate(double x, double extent) {
    x -= extent * std::floor(x / extent);
    if (x == extent) x = 0.0;  // guard against rounding up
    return x;
}

inline Point wrap_point(const Point& x, const PeriodicDomain& dom) {
    Point w{};
    for (int d = 0; d < dom.dims; ++d) w[d] = wrap_coordinate(x[d], dom.extents[d]);
    return w;
}

// Minimal-image displacement a - b, per axis independently.
inline Point periodic_displacement(const Point& a, const Point& b, const PeriodicDomain& dom) {
    Point r{};
    for (int d = 0; d < dom.dims; ++d) r[d] = minimal_image(a[d] - b[d], dom.extents[d]);
    return r;
}

inline double squared_norm(const Point& p, int dims) {
    double s = 0.0;
    for (int d = 0; d < dims; ++d) s += p[d] * p[d];
    return s;
}

// Radius beyond which exp(-r^2/width^2) drops below epsilon.
inline double truncation_radius(double width, double epsilon) {
    if (!(epsilon > 0.0 && epsilon < 1.0))
        throw std::domain_error("truncation_radius: epsilon must be in (0,1)");
    return width * std::sqrt(-std::log(epsilon));
}

}  // namespace gpimc
