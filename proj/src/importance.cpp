// envsamp is Copyright(c) 2026 the envsamp authors.
// The envsamp source code is licensed under the Apache License, Version 2.0.
// SPDX: Apache-2.0

#include "envsamp/importance.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <numeric>

#include "envsamp/pfm.hpp"

namespace envsamp {

namespace {

constexpr char kTableMagic[4] = {'E', 'I', 'M', 'T'};
constexpr std::uint32_t kTableVersion = 1;

double measure_value(const Spectrum& s, ImportanceMeasure measure) {
    return measure == ImportanceMeasure::ChannelSum ? s.channel_sum() : s.luminance();
}

// Fills order/cumulative/positive_bins from bin_importance.
void finalize_table(ImportanceTable& t) {
    const std::uint32_t bins = t.bin_count();
    t.order.resize(bins);
    std::iota(t.order.begin(), t.order.end(), 0u);
    // stable_sort on iota-initialized indices breaks ties by ascending bin
    // index, keeping tables identical across runs and platforms.
    std::stable_sort(t.order.begin(), t.order.end(), [&](std::uint32_t a, std::uint32_t b) {
        return t.bin_importance[a] > t.bin_importance[b];
    });

    t.cumulative.resize(bins);
    double acc = 0.0;
    for (std::uint32_t k = 0; k < bins; ++k) {
        acc += t.bin_importance[t.order[k]];
        t.cumulative[k] = acc;
    }

    t.positive_bins = 0;
    for (std::uint32_t k = 0; k < bins; ++k) {
        if (t.bin_importance[t.order[k]] > 0.0)
            t.positive_bins = k + 1;
        else
            break;
    }
}

template <typename T>
void write_le(std::ostream& out, const T* data, std::size_t count) {
    if constexpr (sizeof(T) == 1) {
        out.write(reinterpret_cast<const char*>(data), static_cast<std::streamsize>(count));
        return;
    }
    if (std::endian::native == std::endian::little) {
        out.write(reinterpret_cast<const char*>(data),
                  static_cast<std::streamsize>(count * sizeof(T)));
    } else {
        for (std::size_t i = 0; i < count; ++i) {
            unsigned char bytes[sizeof(T)];
            std::memcpy(bytes, &data[i], sizeof(T));
            std::reverse(bytes, bytes + sizeof(T));
            out.write(reinterpret_cast<const char*>(bytes), sizeof(T));
        }
    }
}

template <typename T>
bool read_le(std::istream& in, T* data, std::size_t count) {
    in.read(reinterpret_cast<char*>(data), static_cast<std::streamsize>(count * sizeof(T)));
    if (!in) return false;
    if constexpr (sizeof(T) > 1) {
        if (std::endian::native != std::endian::little) {
            for (std::size_t i = 0; i < count; ++i) {
                unsigned char bytes[sizeof(T)];
                std::memcpy(bytes, &data[i], sizeof(T));
                std::reverse(bytes, bytes + sizeof(T));
                std::memcpy(&data[i], bytes, sizeof(T));
            }
        }
    }
    return true;
}

}  // namespace

std::uint32_t ImportanceTable::bin_of(const Direction& d) const {
    const SquarePoint p = square_from_direction(d);
    // The border (u or v equal to 1) belongs to the last bin.
    const std::uint32_t i =
        std::min(static_cast<std::uint32_t>(p.u * n), n - 1);
    const std::uint32_t j =
        std::min(static_cast<std::uint32_t>(p.v * n), n - 1);
    return i * n + j;
}

double ImportanceTable::pdf(const Direction& d) const {
    return bin_importance[bin_of(d)] / bin_solid_angle();
}

SampleRecord ImportanceTable::sample(RandomSource& rng) const {
    if (positive_bins == 0)
        throw ConfigError("ImportanceTable::sample: table has no positive bins");
    const double r = rng.next_uniform();
    // Smallest k with r < cumulative[k]. Zero-importance bins repeat the
    // preceding cumulative value, so they can never be the smallest such k.
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), r);
    std::size_t k = static_cast<std::size_t>(it - cumulative.begin());
    // r can exceed the last cumulative value by rounding (it is 1 only up to
    // accumulation error); fall back to the least important nonzero bin.
    if (k >= positive_bins) k = positive_bins - 1;

    const std::uint32_t bin = order[k];
    const std::uint32_t i = bin / n;
    const std::uint32_t j = bin % n;
    const double u = (i + rng.next_uniform()) / n;
    const double v = (j + rng.next_uniform()) / n;
    return {direction_from_square({u, v}), bin_importance[bin] / bin_solid_angle()};
}

ImportanceTable build_importance_table(const EnvMap& env, std::uint32_t bins_per_side,
                                       std::uint32_t supersample, ImportanceMeasure measure) {
    if (bins_per_side < 1 || bins_per_side > kMaxTableBinsPerSide)
        throw ConfigError("build_importance_table: bins per side must be in [1, " +
                          std::to_string(kMaxTableBinsPerSide) + "]");
    if (supersample < 1)
        throw ConfigError("build_importance_table: supersample must be positive");

    ImportanceTable t;
    t.n = bins_per_side;
    const std::uint32_t n = bins_per_side;
    const std::uint32_t ss = supersample;
    t.bin_importance.resize(t.bin_count());

    for (std::uint32_t i = 0; i < n; ++i) {
        for (std::uint32_t j = 0; j < n; ++j) {
            double acc = 0.0;
            for (std::uint32_t a = 0; a < ss; ++a) {
                const double u = (i + (a + 0.5) / ss) / n;
                for (std::uint32_t b = 0; b < ss; ++b) {
                    const double v = (j + (b + 0.5) / ss) / n;
                    acc += measure_value(env.lookup(direction_from_square({u, v})), measure);
                }
            }
            t.bin_importance[i * n + j] = acc / (static_cast<double>(ss) * ss);
        }
    }

    double total = 0.0;
    for (double w : t.bin_importance) total += w;
    if (!(total > 0.0))
        throw BuildError("build_importance_table: zero total importance (all-black environment)");
    t.total_importance = total;
    for (double& w : t.bin_importance) w /= total;

    finalize_table(t);
    return t;
}

std::vector<std::string> check_table_invariants(const ImportanceTable& t) {
    std::vector<std::string> failures;
    const std::uint32_t bins = t.bin_count();
    if (t.n < 1) {
        failures.push_back("bins per side must be positive");
        return failures;
    }
    if (t.bin_importance.size() != bins || t.order.size() != bins ||
        t.cumulative.size() != bins) {
        failures.push_back("array sizes do not match n^2");
        return failures;
    }

    double sum = 0.0;
    double max_importance = 0.0;
    for (std::uint32_t b = 0; b < bins; ++b) {
        const double w = t.bin_importance[b];
        if (!std::isfinite(w) || w < 0.0) {
            failures.push_back("bin " + std::to_string(b) + " importance is negative or non-finite");
            return failures;
        }
        sum += w;
        max_importance = std::max(max_importance, w);
    }
    if (std::abs(sum - 1.0) > 1e-9)
        failures.push_back("normalization: importance sums to " + std::to_string(sum));

    std::vector<bool> seen(bins, false);
    bool is_permutation = true;
    for (std::uint32_t idx : t.order) {
        if (idx >= bins || seen[idx]) {
            is_permutation = false;
            break;
        }
        seen[idx] = true;
    }
    if (!is_permutation) {
        failures.push_back("sorted order is not a permutation of the bin indices");
        return failures;
    }

    for (std::uint32_t k = 1; k < bins; ++k) {
        if (t.bin_importance[t.order[k - 1]] < t.bin_importance[t.order[k]]) {
            failures.push_back("sorted order is not descending at rank " + std::to_string(k));
            break;
        }
    }
    if (std::abs(t.cumulative[0] - max_importance) > 1e-12)
        failures.push_back("first cumulative entry does not equal the maximum importance");
    if (std::abs(t.cumulative[bins - 1] - 1.0) > 1e-9)
        failures.push_back("last cumulative entry is " + std::to_string(t.cumulative[bins - 1]));
    for (std::uint32_t k = 1; k < bins; ++k) {
        if (t.cumulative[k] < t.cumulative[k - 1]) {
            failures.push_back("cumulative importance decreases at rank " + std::to_string(k));
            break;
        }
        if (std::abs(t.cumulative[k] - t.cumulative[k - 1] - t.bin_importance[t.order[k]]) >
            1e-12) {
            failures.push_back("cumulative increment does not match importance at rank " +
                               std::to_string(k));
            break;
        }
    }
    return failures;
}

bool near_bin_boundary(double coord, std::uint32_t bins_per_side) {
    const double scaled = coord * bins_per_side;
    const double nearest = std::round(scaled);
    constexpr double eps = 2.220446049250313e-16;  // 2^-52
    return std::abs(scaled - nearest) <= 4.0 * eps * std::max(1.0, std::abs(scaled));
}

void save_table(const ImportanceTable& t, const std::filesystem::path& path) {
    const std::uint32_t bins = t.bin_count();
    if (t.n < 1 || t.bin_importance.size() != bins || t.order.size() != bins ||
        t.cumulative.size() != bins)
        throw ConfigError("save_table: malformed table");

    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");

    write_le(out, kTableMagic, 4);
    const std::uint32_t version = kTableVersion;
    write_le(out, &version, 1);
    write_le(out, &t.n, 1);
    write_le(out, t.bin_importance.data(), bins);
    write_le(out, t.order.data(), bins);
    write_le(out, t.cumulative.data(), bins);
    if (!out) throw IoError("failed writing '" + path.string() + "'");
}

ImportanceTable load_table(const std::filesystem::path& path, bool validate) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path.string() + "' for reading");

    char magic[4];
    if (!read_le(in, magic, 4) || std::memcmp(magic, kTableMagic, 4) != 0)
        throw FormatError("'" + path.string() + "' is not an importance table file");
    std::uint32_t version = 0;
    if (!read_le(in, &version, 1))
        throw FormatError("'" + path.string() + "': truncated header");
    if (version != kTableVersion)
        throw FormatError("'" + path.string() + "': table version " + std::to_string(version) +
                          " is not supported (expected " + std::to_string(kTableVersion) + ")");

    ImportanceTable t;
    if (!read_le(in, &t.n, 1))
        throw FormatError("'" + path.string() + "': truncated header");
    if (t.n < 1 || t.n > kMaxTableBinsPerSide)
        throw FormatError("'" + path.string() + "': bins per side " + std::to_string(t.n) +
                          " out of range");

    const std::uint32_t bins = t.bin_count();
    // Check the payload size before allocating anything.
    const std::uintmax_t expected_size =
        12 + static_cast<std::uintmax_t>(bins) * (sizeof(double) * 2 + sizeof(std::uint32_t));
    std::error_code ec;
    const std::uintmax_t actual_size = std::filesystem::file_size(path, ec);
    if (!ec && actual_size != expected_size)
        throw FormatError("'" + path.string() + "': file holds " + std::to_string(actual_size) +
                          " bytes, expected " + std::to_string(expected_size) +
                          (actual_size < expected_size ? " (truncated)" : " (trailing bytes)"));

    t.bin_importance.resize(bins);
    t.order.resize(bins);
    t.cumulative.resize(bins);
    if (!read_le(in, t.bin_importance.data(), bins) || !read_le(in, t.order.data(), bins) ||
        !read_le(in, t.cumulative.data(), bins))
        throw FormatError("'" + path.string() + "': truncated table data");

    // The pre-normalization sum is not part of the cache format.
    t.total_importance = std::numeric_limits<double>::quiet_NaN();
    t.positive_bins = 0;
    for (std::uint32_t k = 0; k < bins; ++k) {
        if (t.order[k] < bins && t.bin_importance[t.order[k]] > 0.0)
            t.positive_bins = k + 1;
        else
            break;
    }

    if (validate) {
        const auto failures = check_table_invariants(t);
        if (!failures.empty())
            throw CorruptionError("'" + path.string() + "': " + failures.front());
        if (t.positive_bins == 0)
            throw CorruptionError("'" + path.string() + "': table has no positive bins");
    }
    return t;
}

void write_table_images(const ImportanceTable& t, const std::filesystem::path& pdf_path,
                        const std::filesystem::path& rank_path) {
    const std::uint32_t n = t.n;
    RasterImage pdf_img(static_cast<int>(n), static_cast<int>(n));
    RasterImage rank_img(static_cast<int>(n), static_cast<int>(n));

    std::vector<double> rank_value(t.bin_count(), 0.0);
    const double denom = t.bin_count() > 1 ? static_cast<double>(t.bin_count() - 1) : 1.0;
    for (std::uint32_t k = 0; k < t.bin_count(); ++k)
        rank_value[t.order[k]] = 1.0 - static_cast<double>(k) / denom;

    for (std::uint32_t i = 0; i < n; ++i) {
        for (std::uint32_t j = 0; j < n; ++j) {
            const int x = static_cast<int>(i);
            const int y = static_cast<int>(n - 1 - j);
            pdf_img.at(x, y) = Spectrum::gray(t.bin_importance[i * n + j]);
            rank_img.at(x, y) = Spectrum::gray(rank_value[i * n + j]);
        }
    }
    write_pfm(pdf_img, pdf_path);
    write_pfm(rank_img, rank_path);
}

}  // namespace envsamp
