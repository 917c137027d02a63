// envsamp is Copyright(c) 2026 the envsamp authors.
// The envsamp source code is licensed under the Apache License, Version 2.0.
// SPDX: Apache-2.0

#pragma once

#include "envsamp/geometry.hpp"

namespace envsamp {

/// Point in the unit square [0,1]^2.
struct SquarePoint {
    double u = 0.0;
    double v = 0.0;
};

/// Point on the unit disk in polar form. Radius is kept in [0,1]; the angle
/// is unconstrained on input and wrapped where needed.
struct DiskPoint {
    double r = 0.0;
    double alpha = 0.0;
};

// Equal-area bijection between the sphere and the unit square, built from the
// Lambert azimuthal equal-area projection (sphere -> disk, north pole at the
// disk center) followed by the concentric disk -> square mapping. The south
// pole lands on the square border. Uniform densities are preserved in both
// directions.
DiskPoint latlon_to_disk(const LatLon& a);
LatLon disk_to_latlon(const DiskPoint& p);
SquarePoint disk_to_square(const DiskPoint& p);
DiskPoint square_to_disk(const SquarePoint& p);

SquarePoint sphere_to_square(const LatLon& a);
LatLon square_to_sphere(const SquarePoint& p);

SquarePoint square_from_direction(const Direction& d);
Direction direction_from_square(const SquarePoint& p);

}  // namespace envsamp
