// envsamp is Copyright(c) 2026 the envsamp authors.
// The envsamp source code is licensed under the Apache License, Version 2.0.
// SPDX: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "envsamp/envmap.hpp"
#include "envsamp/projection.hpp"
#include "envsamp/rng.hpp"

namespace envsamp {

enum class ImportanceMeasure {
    ChannelSum,  // sum of the RGB channels (default)
    Luminance,   // Rec. 709 luma
};

/// A sampled light direction paired with the density it was drawn from.
struct SampleRecord {
    Direction direction;
    double pdf = 0.0;  // per steradian
};

/// Importance tables over the equal-area square map of the sphere. The square
/// is divided into n x n bins; bin (i, j) covers [i/n, (i+1)/n) x [j/n,
/// (j+1)/n) in (u, v) and a spherical patch of solid angle exactly 4pi/n^2.
/// A built table is immutable; pdf() and sample() are safe for concurrent use
/// given one RandomSource per caller.
struct ImportanceTable {
    std::uint32_t n = 0;  // bins per side

    /// Normalized bin importance; bin (i, j) at index i*n + j; sums to 1.
    std::vector<double> bin_importance;
    /// Bin indices sorted by descending importance, ties by ascending index.
    std::vector<std::uint32_t> order;
    /// Prefix sums of bin_importance in sorted order; last entry is 1.
    std::vector<double> cumulative;

    /// Importance sum before normalization. Diagnostic only; not stored in
    /// the cache file, NaN on tables read back from disk.
    double total_importance = 0.0;
    /// Number of bins with nonzero importance (they lead the sorted order).
    std::uint32_t positive_bins = 0;

    std::uint32_t bin_count() const { return n * n; }
    double bin_solid_angle() const { return kFourPi / (static_cast<double>(n) * n); }

    /// Index of the bin whose patch contains d.
    std::uint32_t bin_of(const Direction& d) const;

    /// Density of sample() at d, in sr^-1; zero over zero-importance bins.
    double pdf(const Direction& d) const;

    /// Draws a direction distributed according to pdf(). Zero-importance bins
    /// are never selected. Draw order: one variate for the bin choice, then
    /// one each for the in-bin u and v offsets.
    SampleRecord sample(RandomSource& rng) const;
};

/// Builds the table by point-sampling the importance measure at the center of
/// each bin (supersample = 1) or averaging a supersample x supersample grid
/// of in-bin points. Throws BuildError when the environment is all black.
ImportanceTable build_importance_table(const EnvMap& env, std::uint32_t bins_per_side,
                                       std::uint32_t supersample = 1,
                                       ImportanceMeasure measure = ImportanceMeasure::ChannelSum);

/// Invariant check; returns human-readable failure descriptions, empty when
/// the table is sound.
std::vector<std::string> check_table_invariants(const ImportanceTable& table);

/// True when a square coordinate sits within 4 ulps of a bin boundary of an
/// n-per-side grid. pdf(record.direction) can disagree with record.pdf only
/// for such points: the round trip through the sphere may push them across
/// the boundary.
bool near_bin_boundary(double coord, std::uint32_t bins_per_side);

// Cache file: magic "EIMT", u32 version = 1, u32 n, then bin_importance
// (n^2 float64), order (n^2 u32), cumulative (n^2 float64), little-endian.
void save_table(const ImportanceTable& table, const std::filesystem::path& path);
/// Throws FormatError on structural problems and, when validate is set,
/// CorruptionError if the loaded table violates its invariants.
ImportanceTable load_table(const std::filesystem::path& path, bool validate = true);

/// Diagnostic rasters: bin importance as a grayscale PFM and the descending
/// importance rank normalized to [0, 1] (1 = most important bin). Pixel
/// (x, y) shows bin (i = x, j = n-1-y), so v grows upward.
void write_table_images(const ImportanceTable& table, const std::filesystem::path& pdf_path,
                        const std::filesystem::path& rank_path);

inline constexpr std::uint32_t kMaxTableBinsPerSide = 8192;

}  // namespace envsamp
