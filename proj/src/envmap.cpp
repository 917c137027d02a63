// envsamp is Copyright(c) 2026 the envsamp authors.
// The envsamp source code is licensed under the Apache License, Version 2.0.
// SPDX: Apache-2.0

#include "envsamp/envmap.hpp"

#include <cmath>
#include <tuple>

#include "envsamp/pfm.hpp"

namespace envsamp {

namespace {

int wrap_index(int i, int n) {
    const int m = i % n;
    return m < 0 ? m + n : m;
}

// Bilinear fetch with texel centers at half-integer coordinates. s wraps when
// requested (longitude seam), otherwise clamps; t always clamps.
Spectrum bilinear_sample(const RasterImage& img, double s, double t, bool wrap_s) {
    const double px = s * img.width - 0.5;
    const double py = t * img.height - 0.5;
    const double fx0 = std::floor(px);
    const double fy0 = std::floor(py);
    const double dx = px - fx0;
    const double dy = py - fy0;

    int x0 = static_cast<int>(fx0);
    int x1 = x0 + 1;
    int y0 = static_cast<int>(fy0);
    int y1 = y0 + 1;
    if (wrap_s) {
        x0 = wrap_index(x0, img.width);
        x1 = wrap_index(x1, img.width);
    } else {
        x0 = std::clamp(x0, 0, img.width - 1);
        x1 = std::clamp(x1, 0, img.width - 1);
    }
    y0 = std::clamp(y0, 0, img.height - 1);
    y1 = std::clamp(y1, 0, img.height - 1);

    const Spectrum top = img.at(x0, y0) * (1.0 - dx) + img.at(x1, y0) * dx;
    const Spectrum bottom = img.at(x0, y1) * (1.0 - dx) + img.at(x1, y1) * dx;
    return top * (1.0 - dy) + bottom * dy;
}

void require_valid(const RasterImage& img, const char* what) {
    if (img.width < 1 || img.height < 1 ||
        img.pixels.size() != static_cast<std::size_t>(img.width) * img.height)
        throw ConfigError(std::string(what) + ": malformed raster");
}

}  // namespace

EquirectMap::EquirectMap(RasterImage image) : image_(std::move(image)) {
    require_valid(image_, "EquirectMap");
}

Spectrum EquirectMap::lookup(const Direction& d) const {
    const LatLon a = direction_to_latlon(d);
    const double s = a.phi / kTwoPi;
    const double t = (kHalfPi - a.theta) / kPi;
    return bilinear_sample(image_, s, t, /*wrap_s=*/true);
}

CubeMap::CubeMap(std::array<RasterImage, 6> faces) : faces_(std::move(faces)) {
    for (const RasterImage& f : faces_) {
        require_valid(f, "CubeMap");
        if (f.width != f.height) throw ConfigError("CubeMap: faces must be square");
        if (f.width != faces_[0].width)
            throw ConfigError("CubeMap: faces must share one size");
    }
}

std::tuple<int, double, double> CubeMap::face_coords(const Direction& d) {
    const double ax = std::abs(d.x), ay = std::abs(d.y), az = std::abs(d.z);
    int face;
    double sc, tc, ma;
    if (ax >= ay && ax >= az) {
        ma = ax;
        if (d.x >= 0.0) { face = 0; sc = -d.z; tc = -d.y; }
        else            { face = 1; sc =  d.z; tc = -d.y; }
    } else if (ay >= az) {
        ma = ay;
        if (d.y >= 0.0) { face = 2; sc =  d.x; tc =  d.z; }
        else            { face = 3; sc =  d.x; tc = -d.z; }
    } else {
        ma = az;
        if (d.z >= 0.0) { face = 4; sc =  d.x; tc = -d.y; }
        else            { face = 5; sc = -d.x; tc = -d.y; }
    }
    return {face, 0.5 * (sc / ma + 1.0), 0.5 * (tc / ma + 1.0)};
}

Direction CubeMap::face_direction(int face, double s, double t) {
    const double sc = 2.0 * s - 1.0;
    const double tc = 2.0 * t - 1.0;
    switch (face) {
        case 0: return Direction(1.0, -tc, -sc);
        case 1: return Direction(-1.0, -tc, sc);
        case 2: return Direction(sc, 1.0, tc);
        case 3: return Direction(sc, -1.0, -tc);
        case 4: return Direction(sc, -tc, 1.0);
        case 5: return Direction(-sc, -tc, -1.0);
        default: throw ConfigError("CubeMap: face index out of range");
    }
}

Spectrum CubeMap::lookup(const Direction& d) const {
    const auto [face, s, t] = face_coords(d);
    return bilinear_sample(faces_[face], s, t, /*wrap_s=*/false);
}

Spectrum AnalyticMap::lookup(const Direction& d) const {
    Spectrum v = fn_(d);
    v.r = std::max(0.0, v.r);
    v.g = std::max(0.0, v.g);
    v.b = std::max(0.0, v.b);
    return v;
}

AnalyticMap constant_sky(const Spectrum& value) {
    return AnalyticMap([value](const Direction&) { return value; });
}

AnalyticMap sun_sky(const Direction& axis, double angular_radius, const Spectrum& disk,
                    const Spectrum& background) {
    return AnalyticMap([=](const Direction& d) {
        return angle_between(d, axis) < angular_radius ? disk : background;
    });
}

AnalyticMap gradient_sky(const Spectrum& zenith, const Spectrum& nadir) {
    return AnalyticMap([=](const Direction& d) {
        return lerp(nadir, zenith, 0.5 * (d.z + 1.0));
    });
}

EquirectMap rasterize_equirect(const EnvMap& map, int width, int height) {
    RasterImage img(width, height);
    for (int y = 0; y < height; ++y) {
        const double t = (y + 0.5) / height;
        const double theta = kHalfPi - kPi * t;
        for (int x = 0; x < width; ++x) {
            const double phi = kTwoPi * (x + 0.5) / width;
            img.at(x, y) = map.lookup(latlon_to_direction(canonical_latlon(theta, phi)));
        }
    }
    return EquirectMap(std::move(img));
}

CubeMap rasterize_cube(const EnvMap& map, int face_size) {
    std::array<RasterImage, 6> faces;
    for (int f = 0; f < 6; ++f) {
        RasterImage img(face_size, face_size);
        for (int y = 0; y < face_size; ++y) {
            const double t = (y + 0.5) / face_size;
            for (int x = 0; x < face_size; ++x) {
                const double s = (x + 0.5) / face_size;
                img.at(x, y) = map.lookup(CubeMap::face_direction(f, s, t));
            }
        }
        faces[f] = std::move(img);
    }
    return CubeMap(std::move(faces));
}

std::array<std::filesystem::path, 6> cubemap_face_paths(const std::filesystem::path& stem) {
    std::filesystem::path base = stem;
    if (base.extension() == ".pfm") base.replace_extension();
    static constexpr const char* suffixes[6] = {"_px", "_nx", "_py", "_ny", "_pz", "_nz"};
    std::array<std::filesystem::path, 6> paths;
    for (int f = 0; f < 6; ++f) {
        paths[f] = base;
        paths[f] += suffixes[f];
        paths[f] += ".pfm";
    }
    return paths;
}

CubeMap load_cubemap(const std::filesystem::path& stem) {
    const auto paths = cubemap_face_paths(stem);
    std::array<RasterImage, 6> faces;
    for (int f = 0; f < 6; ++f) faces[f] = load_pfm(paths[f]);
    return CubeMap(std::move(faces));
}

void write_cubemap(const CubeMap& cube, const std::filesystem::path& stem) {
    const auto paths = cubemap_face_paths(stem);
    for (int f = 0; f < 6; ++f) write_pfm(cube.face(f), paths[f]);
}

}  // namespace envsamp
