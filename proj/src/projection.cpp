// envsamp is Copyright(c) 2026 the envsamp authors.
// The envsamp source code is licensed under the Apache License, Version 2.0.
// SPDX: Apache-2.0

#include "envsamp/projection.hpp"

#include <algorithm>
#include <cmath>

namespace envsamp {

DiskPoint latlon_to_disk(const LatLon& a) {
    // Lambert azimuthal: colatitude psi maps to radius sin(psi/2).
    const double r = std::sin(0.5 * (kHalfPi - a.theta));
    return {std::clamp(r, 0.0, 1.0), a.phi - kHalfPi};
}

LatLon disk_to_latlon(const DiskPoint& p) {
    const double theta = kHalfPi - 2.0 * std::asin(std::clamp(p.r, 0.0, 1.0));
    return canonical_latlon(theta, p.alpha + kHalfPi);
}

SquarePoint disk_to_square(const DiskPoint& p) {
    const double r = p.r;
    // Wrap the angle into [-pi/4, 7*pi/4) so each quadrant of the concentric
    // map is selected by a simple range test.
    double a = p.alpha - kTwoPi * std::floor((p.alpha + kQuarterPi) / kTwoPi);

    double up, vp;
    if (a < kQuarterPi) {
        up = r;
        vp = a * r / kQuarterPi;
    } else if (a < 3.0 * kQuarterPi) {
        up = -(a - kHalfPi) * r / kQuarterPi;
        vp = r;
    } else if (a < 5.0 * kQuarterPi) {
        up = -r;
        vp = (a - kPi) * -r / kQuarterPi;
    } else {
        up = -(a - 3.0 * kHalfPi) * -r / kQuarterPi;
        vp = -r;
    }
    return {std::clamp(0.5 * (up + 1.0), 0.0, 1.0), std::clamp(0.5 * (vp + 1.0), 0.0, 1.0)};
}

DiskPoint square_to_disk(const SquarePoint& p) {
    const double up = 2.0 * p.u - 1.0;
    const double vp = 2.0 * p.v - 1.0;
    if (up == 0.0 && vp == 0.0) return {0.0, 0.0};

    double r, alpha;
    if (up * up > vp * vp) {
        r = up;
        alpha = kQuarterPi * (vp / up);
    } else {
        r = vp;
        alpha = kHalfPi - kQuarterPi * (up / vp);
    }
    // The concentric inverse yields a signed radius in the -u and -v
    // quadrants; fold it back to a nonnegative one.
    if (r < 0.0) {
        r = -r;
        alpha += kPi;
    }
    return {std::min(r, 1.0), alpha};
}

SquarePoint sphere_to_square(const LatLon& a) {
    return disk_to_square(latlon_to_disk(a));
}

LatLon square_to_sphere(const SquarePoint& p) {
    return disk_to_latlon(square_to_disk(p));
}

SquarePoint square_from_direction(const Direction& d) {
    return sphere_to_square(direction_to_latlon(d));
}

Direction direction_from_square(const SquarePoint& p) {
    return latlon_to_direction(square_to_sphere(p));
}

}  // namespace envsamp
