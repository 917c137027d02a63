// envsamp is Copyright(c) 2026 the envsamp authors.
// The envsamp source code is licensed under the Apache License, Version 2.0.
// SPDX: Apache-2.0

#pragma once

#include <filesystem>

#include "envsamp/image.hpp"

namespace envsamp {

// Color PFM ("PF") only. Pixel rows are stored bottom-to-top in the file and
// returned top-to-bottom; the sign of the scale token selects endianness and
// its magnitude is applied as a multiplier. Negative pixel values clamp to 0;
// NaN or Inf raises DataError with the offending pixel index.
RasterImage load_pfm(const std::filesystem::path& path);

// Little-endian color PFM with scale token -1.0. Inverse of load_pfm.
void write_pfm(const RasterImage& image, const std::filesystem::path& path);

}  // namespace envsamp
