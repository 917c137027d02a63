// envsamp is Copyright(c) 2026 the envsamp authors.
// The envsamp source code is licensed under the Apache License, Version 2.0.
// SPDX: Apache-2.0

#pragma once

#include <cstddef>
#include <vector>

#include "envsamp/errors.hpp"
#include "envsamp/spectrum.hpp"

namespace envsamp {

/// Row-major RGB raster with the top row first.
struct RasterImage {
    int width = 0;
    int height = 0;
    std::vector<Spectrum> pixels;

    RasterImage() = default;

    RasterImage(int w, int h, const Spectrum& fill = {}) : width(w), height(h) {
        if (w < 1 || h < 1) throw ConfigError("RasterImage: dimensions must be positive");
        pixels.assign(static_cast<std::size_t>(w) * h, fill);
    }

    Spectrum& at(int x, int y) { return pixels[static_cast<std::size_t>(y) * width + x]; }
    const Spectrum& at(int x, int y) const {
        return pixels[static_cast<std::size_t>(y) * width + x];
    }
};

}  // namespace envsamp
