// envsamp is Copyright(c) 2026 the envsamp authors.
// The envsamp source code is licensed under the Apache License, Version 2.0.
// SPDX: Apache-2.0

#pragma once

#include <array>
#include <filesystem>
#include <functional>
#include <utility>

#include "envsamp/geometry.hpp"
#include "envsamp/image.hpp"

namespace envsamp {

/// Radiance field over the sphere. lookup() is deterministic, total over unit
/// directions, and safe for unsynchronized concurrent use; maps are immutable
/// after construction.
class EnvMap {
public:
    virtual ~EnvMap() = default;
    virtual Spectrum lookup(const Direction& d) const = 0;
};

/// Latitude-longitude raster. Texture coordinates are s = phi / 2pi and
/// t = (pi/2 - theta) / pi (t = 0 at the north pole); lookups filter
/// bilinearly with wraparound in s and clamping in t.
class EquirectMap final : public EnvMap {
public:
    explicit EquirectMap(RasterImage image);
    Spectrum lookup(const Direction& d) const override;
    const RasterImage& image() const { return image_; }

private:
    RasterImage image_;
};

/// Six square faces in the order +X, -X, +Y, -Y, +Z, -Z. The face is chosen
/// by the largest-magnitude component; per-face coordinates follow the
/// conventional major-axis table (see docs/formats.md). Filtering is bilinear
/// with clamp-to-edge, no cross-face interpolation.
class CubeMap final : public EnvMap {
public:
    explicit CubeMap(std::array<RasterImage, 6> faces);
    Spectrum lookup(const Direction& d) const override;
    const RasterImage& face(int index) const { return faces_[index]; }
    int face_size() const { return faces_[0].width; }

    /// Face index plus in-face (s, t) for a direction.
    static std::tuple<int, double, double> face_coords(const Direction& d);
    /// Direction through the (s, t) point of a face; inverse of face_coords.
    static Direction face_direction(int face, double s, double t);

private:
    std::array<RasterImage, 6> faces_;
};

/// Procedural radiance field. Negative channels returned by the function are
/// clamped to zero, mirroring the load-time clamp for raster maps.
class AnalyticMap final : public EnvMap {
public:
    using Fn = std::function<Spectrum(const Direction&)>;
    explicit AnalyticMap(Fn fn) : fn_(std::move(fn)) {}
    Spectrum lookup(const Direction& d) const override;

private:
    Fn fn_;
};

AnalyticMap constant_sky(const Spectrum& value);
/// Spherical cap of the given angular radius around axis: disk radiance
/// inside, background outside.
AnalyticMap sun_sky(const Direction& axis, double angular_radius, const Spectrum& disk,
                    const Spectrum& background);
/// Linear blend from nadir (z = -1) to zenith (z = +1).
AnalyticMap gradient_sky(const Spectrum& zenith, const Spectrum& nadir);

/// Evaluates the map at every texel center of the target parameterization.
EquirectMap rasterize_equirect(const EnvMap& map, int width, int height);
CubeMap rasterize_cube(const EnvMap& map, int face_size);

// Cube maps on disk are six color PFMs sharing a stem with suffixes
// _px, _nx, _py, _ny, _pz, _nz. A trailing ".pfm" on the stem is dropped.
CubeMap load_cubemap(const std::filesystem::path& stem);
void write_cubemap(const CubeMap& cube, const std::filesystem::path& stem);
std::array<std::filesystem::path, 6> cubemap_face_paths(const std::filesystem::path& stem);

}  // namespace envsamp
