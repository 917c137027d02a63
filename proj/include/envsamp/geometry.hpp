// envsamp is Copyright(c) 2026 the envsamp authors.
// The envsamp source code is licensed under the Apache License, Version 2.0.
// SPDX: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace envsamp {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kHalfPi = 0.5 * std::numbers::pi;
inline constexpr double kQuarterPi = 0.25 * std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr double kFourPi = 4.0 * std::numbers::pi;

/// Unit direction on the sphere. The coordinate frame is z-up: latitude is
/// measured from the equator towards +z, longitude from +x towards +y.
struct Direction {
    double x = 0.0;
    double y = 0.0;
    double z = 1.0;

    Direction() = default;

    Direction(double dx, double dy, double dz) {
        const double len = std::sqrt(dx * dx + dy * dy + dz * dz);
        if (!(len > 0.0) || !std::isfinite(len))
            throw std::invalid_argument("Direction: cannot normalize zero or non-finite vector");
        x = dx / len;
        y = dy / len;
        z = dz / len;
    }
};

inline double dot(const Direction& a, const Direction& b) {
    return a.x * b.x + a.y * b.y + a.z * b.z;
}

/// Great-circle angle between two unit directions, stable for nearly
/// parallel and nearly antipodal pairs.
inline double angle_between(const Direction& a, const Direction& b) {
    const double cx = a.y * b.z - a.z * b.y;
    const double cy = a.z * b.x - a.x * b.z;
    const double cz = a.x * b.y - a.y * b.x;
    const double cross = std::sqrt(cx * cx + cy * cy + cz * cz);
    return std::atan2(cross, dot(a, b));
}

/// Latitude theta in [-pi/2, pi/2], longitude phi in [0, 2*pi).
struct LatLon {
    double theta = 0.0;
    double phi = 0.0;
};

/// Clamps theta to its range and wraps phi into [0, 2*pi).
inline LatLon canonical_latlon(double theta, double phi) {
    theta = std::clamp(theta, -kHalfPi, kHalfPi);
    phi = std::fmod(phi, kTwoPi);
    if (phi < 0.0) phi += kTwoPi;
    if (phi >= kTwoPi) phi = 0.0;
    return {theta, phi};
}

inline Direction latlon_to_direction(const LatLon& a) {
    const double ct = std::cos(a.theta);
    return Direction(ct * std::cos(a.phi), ct * std::sin(a.phi), std::sin(a.theta));
}

/// Inverse of latlon_to_direction. phi is 0 at the poles, where longitude is
/// undefined.
inline LatLon direction_to_latlon(const Direction& d) {
    const double z = std::clamp(d.z, -1.0, 1.0);
    if (z == 1.0 || z == -1.0) return {std::asin(z), 0.0};
    const double phi = std::atan2(d.y, d.x);
    return canonical_latlon(std::asin(z), phi < 0.0 ? phi + kTwoPi : phi);
}

/// Completes n to a right-handed orthonormal frame (t, b, n).
/// Duff et al., "Building an Orthonormal Basis, Revisited".
inline void orthonormal_basis(const Direction& n, Direction& t, Direction& b) {
    const double sign = std::copysign(1.0, n.z);
    const double a = -1.0 / (sign + n.z);
    const double c = n.x * n.y * a;
    t = Direction(1.0 + sign * n.x * n.x * a, sign * c, -sign * n.x);
    b = Direction(c, sign + n.y * n.y * a, -n.y);
}

}  // namespace envsamp
