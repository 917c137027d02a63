// envsamp is Copyright(c) 2026 the envsamp authors.
// The envsamp source code is licensed under the Apache License, Version 2.0.
// SPDX: Apache-2.0

#include <algorithm>
#include <array>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <string>
#include <thread>
#include <vector>

#include "doctest.h"
#include "envsamp/importance.hpp"
#include "envsamp/pfm.hpp"
#include "envsamp/stats.hpp"

using namespace envsamp;
namespace fs = std::filesystem;

namespace {

fs::path temp_file(const std::string& name) {
    return fs::temp_directory_path() / name;
}

// Sky that is nonzero exactly over the spherical patch of one bin of an
// n x n table.
AnalyticMap single_bin_sky(std::uint32_t n, std::uint32_t bin, double value) {
    return AnalyticMap([=](const Direction& d) {
        const SquarePoint p = square_from_direction(d);
        const std::uint32_t i = std::min(static_cast<std::uint32_t>(p.u * n), n - 1);
        const std::uint32_t j = std::min(static_cast<std::uint32_t>(p.v * n), n - 1);
        return i * n + j == bin ? Spectrum::gray(value) : Spectrum{};
    });
}

}  // namespace

TEST_CASE("constant sky builds a uniform table") {
    for (const std::uint32_t n : {1u, 4u, 16u}) {
        const ImportanceTable t = build_importance_table(constant_sky(Spectrum::gray(2.0)), n);
        const double expected = 1.0 / t.bin_count();
        for (double w : t.bin_importance) CHECK(w == doctest::Approx(expected).epsilon(1e-12));
        for (std::uint32_t k = 0; k < t.bin_count(); ++k)
            CHECK(t.cumulative[k] ==
                  doctest::Approx(static_cast<double>(k + 1) / t.bin_count()).epsilon(1e-9));
        CHECK(t.positive_bins == t.bin_count());
        CHECK(t.total_importance == doctest::Approx(6.0 * t.bin_count()));
        CHECK(check_table_invariants(t).empty());
    }
}

TEST_CASE("single nonzero bin dominates the table") {
    const std::uint32_t n = 4;
    const std::uint32_t bin = 2 * n + 1;
    const ImportanceTable t = build_importance_table(single_bin_sky(n, bin, 3.0), n);
    CHECK(t.bin_importance[bin] == 1.0);
    CHECK(t.order[0] == bin);
    CHECK(t.cumulative[0] == 1.0);
    CHECK(t.positive_bins == 1);
    for (std::uint32_t b = 0; b < t.bin_count(); ++b)
        if (b != bin) CHECK(t.bin_importance[b] == 0.0);
    CHECK(check_table_invariants(t).empty());
}

TEST_CASE("all-black environment fails to build") {
    CHECK_THROWS_AS(build_importance_table(constant_sky(Spectrum{}), 8), BuildError);
}

TEST_CASE("supersampling catches a sub-bin light that center sampling misses") {
    // A 2-degree sun at the pole sits between the N = 32 bin centers: with
    // one center sample per bin and a black background nothing is seen.
    const AnalyticMap sky = sun_sky(Direction(0, 0, 1), 2.0 * kPi / 180.0,
                                    Spectrum::gray(1000.0), Spectrum{});
    CHECK_THROWS_AS(build_importance_table(sky, 32, 1), BuildError);
    const ImportanceTable t = build_importance_table(sky, 32, 2);
    CHECK(t.positive_bins == 4);
}

TEST_CASE("table invariants hold for a structured sky") {
    const AnalyticMap sky = sun_sky(latlon_to_direction({0.4, 1.1}), 0.2,
                                    Spectrum{900.0, 1000.0, 800.0}, Spectrum{1.0, 1.2, 0.8});
    const ImportanceTable t = build_importance_table(sky, 32, 2);
    CHECK(check_table_invariants(t).empty());

    const double sum = std::accumulate(t.bin_importance.begin(), t.bin_importance.end(), 0.0);
    CHECK(std::abs(sum - 1.0) < 1e-9);
    for (std::uint32_t k = 1; k < t.bin_count(); ++k) {
        CHECK(t.bin_importance[t.order[k - 1]] >= t.bin_importance[t.order[k]]);
        CHECK(std::abs(t.cumulative[k] - t.cumulative[k - 1] -
                       t.bin_importance[t.order[k]]) <= 1e-12);
    }
    CHECK(t.cumulative[0] == *std::max_element(t.bin_importance.begin(), t.bin_importance.end()));
    CHECK(std::abs(t.cumulative[t.bin_count() - 1] - 1.0) < 1e-9);
}

TEST_CASE("sorted order breaks ties by ascending bin index") {
    const ImportanceTable t = build_importance_table(constant_sky(Spectrum::gray(1.0)), 8);
    for (std::uint32_t k = 0; k < t.bin_count(); ++k) CHECK(t.order[k] == k);
}

TEST_CASE("sun mass in the table matches brute-force integration") {
    // Independent oracle: integrate the sky over each bin's spherical patch
    // with dense uniform sampling and compare the aggregated disk mass
    // against the table's mass over disk-touching bins.
    const std::uint32_t n = 64;
    const Direction axis = latlon_to_direction({0.7, 2.4});
    const double radius = 10.0 * kPi / 180.0;
    const double bright = 1000.0;
    const AnalyticMap sky = sun_sky(axis, radius, Spectrum::gray(bright), Spectrum::gray(1.0));

    const double q = 0.5 * (1.0 - std::cos(radius));  // cap fraction of the sphere
    const double expected_mass = bright * q / (bright * q + (1.0 - q));

    const ImportanceTable t = build_importance_table(sky, n, 4);

    Mt64RandomSource rng(4242);
    std::vector<bool> touches_disk(t.bin_count(), false);
    for (int s = 0; s < 2000000; ++s) {
        const Direction d = uniform_direction(rng);
        if (angle_between(d, axis) < radius) touches_disk[t.bin_of(d)] = true;
    }
    double measured_mass = 0.0;
    for (std::uint32_t b = 0; b < t.bin_count(); ++b)
        if (touches_disk[b]) measured_mass += t.bin_importance[b];

    CHECK(measured_mass == doctest::Approx(expected_mass).epsilon(0.03));
}

TEST_CASE("pdf of a constant-sky table is 1/4pi everywhere") {
    const ImportanceTable t = build_importance_table(constant_sky(Spectrum::gray(1.0)), 16);
    Mt64RandomSource rng(5);
    for (int s = 0; s < 10000; ++s)
        CHECK(std::abs(t.pdf(uniform_direction(rng)) - 1.0 / kFourPi) < 1e-9);
}

TEST_CASE("pdf of a single-bin table is 1/s inside and 0 outside") {
    const std::uint32_t n = 4;
    const std::uint32_t bin = 2 * n + 1;
    const ImportanceTable t = build_importance_table(single_bin_sky(n, bin, 1.0), n);
    const double s = t.bin_solid_angle();
    CHECK(s == doctest::Approx(kFourPi / 16.0));

    Mt64RandomSource rng(6);
    int inside = 0;
    for (int k = 0; k < 20000; ++k) {
        const Direction d = uniform_direction(rng);
        if (t.bin_of(d) == bin) {
            ++inside;
            CHECK(t.pdf(d) == doctest::Approx(16.0 / kFourPi));
        } else {
            CHECK(t.pdf(d) == 0.0);
        }
    }
    CHECK(inside > 0);
}

TEST_CASE("pdf integrates to one as the exact bin sum") {
    const AnalyticMap sky = sun_sky(latlon_to_direction({-0.2, 4.0}), 0.3,
                                    Spectrum::gray(50.0), Spectrum::gray(0.5));
    const ImportanceTable t = build_importance_table(sky, 32);
    const double s = t.bin_solid_angle();
    double integral = 0.0;
    for (double w : t.bin_importance) integral += (w / s) * s;
    CHECK(std::abs(integral - 1.0) < 1e-9);
}

TEST_CASE("samples from a single-bin table stay in that bin with pdf 1/s") {
    const std::uint32_t n = 4;
    const std::uint32_t bin = 3 * n + 2;
    const ImportanceTable t = build_importance_table(single_bin_sky(n, bin, 1.0), n);
    Mt64RandomSource rng(7);
    for (int s = 0; s < 50000; ++s) {
        const SampleRecord rec = t.sample(rng);
        CHECK(t.bin_of(rec.direction) == bin);
        CHECK(rec.pdf == doctest::Approx(16.0 / kFourPi));
    }
}

TEST_CASE("constant-sky sampling is uniform over bins (chi-square)") {
    const std::uint32_t n = 16;
    const ImportanceTable t = build_importance_table(constant_sky(Spectrum::gray(1.0)), n);
    constexpr int kSamples = 1000000;
    Mt64RandomSource rng(8);
    std::vector<std::uint64_t> counts(t.bin_count(), 0);
    for (int s = 0; s < kSamples; ++s) ++counts[t.bin_of(t.sample(rng).direction)];

    std::vector<double> expected(t.bin_count());
    for (std::uint32_t b = 0; b < t.bin_count(); ++b)
        expected[b] = kSamples * t.bin_importance[b];
    const ChiSquareResult chi = chi_square_goodness_of_fit(counts, expected);
    CHECK(chi.bins_used == t.bin_count());
    CHECK(chi.p_value > 0.001);
}

TEST_CASE("sun-sky sampling matches the built table (chi-square)") {
    const AnalyticMap sky = sun_sky(Direction(0, 0, 1), 2.0 * kPi / 180.0,
                                    Spectrum::gray(1000.0), Spectrum::gray(1.0));
    const ImportanceTable t = build_importance_table(sky, 32, 2);
    constexpr int kSamples = 1000000;
    Mt64RandomSource rng(9);
    std::vector<std::uint64_t> counts(t.bin_count(), 0);
    for (int s = 0; s < kSamples; ++s) ++counts[t.bin_of(t.sample(rng).direction)];

    std::vector<double> expected(t.bin_count());
    for (std::uint32_t b = 0; b < t.bin_count(); ++b)
        expected[b] = kSamples * t.bin_importance[b];
    const ChiSquareResult chi = chi_square_goodness_of_fit(counts, expected);
    CHECK(chi.p_value > 0.001);
}

TEST_CASE("zero-importance bins are never sampled") {
    const AnalyticMap sky = sun_sky(Direction(0, 0, 1), 2.0 * kPi / 180.0,
                                    Spectrum::gray(1000.0), Spectrum{});  // black background
    const ImportanceTable t = build_importance_table(sky, 32, 2);
    CHECK(t.positive_bins < t.bin_count());

    Mt64RandomSource rng(10);
    for (int s = 0; s < 200000; ++s) {
        const SampleRecord rec = t.sample(rng);
        CHECK(rec.pdf > 0.0);
        CHECK(t.bin_importance[t.bin_of(rec.direction)] > 0.0);
    }
}

TEST_CASE("sample pdf agrees with pdf() away from bin boundaries") {
    const AnalyticMap sky = sun_sky(latlon_to_direction({0.5, 0.9}), 0.05,
                                    Spectrum::gray(500.0), Spectrum::gray(1.0));
    const ImportanceTable t = build_importance_table(sky, 64, 2);
    Mt64RandomSource rng(11);
    int mismatches = 0;
    constexpr int kRecords = 100000;
    for (int s = 0; s < kRecords; ++s) {
        const SampleRecord rec = t.sample(rng);
        if (t.pdf(rec.direction) != rec.pdf) ++mismatches;
    }
    // Mismatches require the jittered square point to sit within ulps of a
    // bin boundary; allowed rate is below 0.01%.
    CHECK(mismatches <= kRecords / 10000);
}

TEST_CASE("a built table serves concurrent samplers deterministically") {
    const AnalyticMap sky = sun_sky(latlon_to_direction({0.3, 1.7}), 0.2,
                                    Spectrum::gray(200.0), Spectrum::gray(1.0));
    const ImportanceTable t = build_importance_table(sky, 16);

    constexpr int kThreads = 4;
    constexpr int kPerThread = 20000;
    std::array<std::vector<std::uint32_t>, kThreads> parallel_bins;
    {
        std::vector<std::thread> workers;
        for (int w = 0; w < kThreads; ++w) {
            workers.emplace_back([&, w] {
                Mt64RandomSource rng(100 + w);
                parallel_bins[w].reserve(kPerThread);
                for (int s = 0; s < kPerThread; ++s) {
                    const SampleRecord rec = t.sample(rng);
                    parallel_bins[w].push_back(t.bin_of(rec.direction));
                    (void)t.pdf(rec.direction);
                }
            });
        }
        for (std::thread& w : workers) w.join();
    }
    for (int w = 0; w < kThreads; ++w) {
        Mt64RandomSource rng(100 + w);
        for (int s = 0; s < kPerThread; ++s)
            REQUIRE(parallel_bins[w][s] == t.bin_of(t.sample(rng).direction));
    }
}

TEST_CASE("table save/load round-trips losslessly") {
    const AnalyticMap sky = sun_sky(latlon_to_direction({0.1, 3.0}), 0.25,
                                    Spectrum{800.0, 850.0, 900.0}, Spectrum{0.5, 1.0, 1.5});
    const ImportanceTable t = build_importance_table(sky, 24, 3);
    const fs::path path = temp_file("envsamp_table_rt.eimt");
    save_table(t, path);

    const ImportanceTable back = load_table(path);
    CHECK(back.n == t.n);
    CHECK(back.bin_importance == t.bin_importance);
    CHECK(back.order == t.order);
    CHECK(back.cumulative == t.cumulative);
    CHECK(back.positive_bins == t.positive_bins);
    CHECK(std::isnan(back.total_importance));  // diagnostic, not stored

    // File-level round-trip is byte-exact.
    const fs::path path2 = temp_file("envsamp_table_rt2.eimt");
    save_table(back, path2);
    std::ifstream a(path, std::ios::binary), b(path2, std::ios::binary);
    const std::string bytes_a((std::istreambuf_iterator<char>(a)), {});
    const std::string bytes_b((std::istreambuf_iterator<char>(b)), {});
    CHECK(bytes_a == bytes_b);
}

TEST_CASE("table file errors") {
    const ImportanceTable t = build_importance_table(constant_sky(Spectrum::gray(1.0)), 8);
    const fs::path path = temp_file("envsamp_table_err.eimt");
    save_table(t, path);

    // Truncation.
    {
        std::ifstream in(path, std::ios::binary);
        std::string bytes((std::istreambuf_iterator<char>(in)), {});
        bytes.resize(bytes.size() / 2);
        std::ofstream out(path, std::ios::binary);
        out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    }
    CHECK_THROWS_AS(load_table(path), FormatError);

    // Bad magic.
    save_table(t, path);
    {
        std::fstream io(path, std::ios::binary | std::ios::in | std::ios::out);
        io.put('X');
    }
    CHECK_THROWS_AS(load_table(path), FormatError);

    // Version mismatch names both versions.
    save_table(t, path);
    {
        std::fstream io(path, std::ios::binary | std::ios::in | std::ios::out);
        io.seekp(4);
        const std::uint32_t bad_version = 9;
        io.write(reinterpret_cast<const char*>(&bad_version), 4);
    }
    try {
        load_table(path);
        FAIL("expected FormatError");
    } catch (const FormatError& e) {
        const std::string what = e.what();
        CHECK(what.find("9") != std::string::npos);
        CHECK(what.find("1") != std::string::npos);
    }

    // Corrupted importance entry breaks normalization.
    save_table(t, path);
    {
        std::fstream io(path, std::ios::binary | std::ios::in | std::ios::out);
        io.seekp(12);
        const double bogus = 0.5;
        io.write(reinterpret_cast<const char*>(&bogus), 8);
    }
    CHECK_THROWS_AS(load_table(path), CorruptionError);
    CHECK_NOTHROW(load_table(path, /*validate=*/false));

    CHECK_THROWS_AS(load_table(temp_file("envsamp_missing.eimt")), IoError);
}

TEST_CASE("table images mirror the table contents") {
    const fs::path pdf_path = temp_file("envsamp_tbl_pdf.pfm");
    const fs::path rank_path = temp_file("envsamp_tbl_rank.pfm");

    // Uniform table renders flat gray.
    const ImportanceTable uniform = build_importance_table(constant_sky(Spectrum::gray(1.0)), 8);
    write_table_images(uniform, pdf_path, rank_path);
    const RasterImage flat = load_pfm(pdf_path);
    REQUIRE(flat.width == 8);
    REQUIRE(flat.height == 8);
    for (const Spectrum& p : flat.pixels)
        CHECK(p.r == doctest::Approx(1.0 / 64.0).epsilon(1e-6));

    // Single-bin table renders one white texel.
    const std::uint32_t n = 4;
    const std::uint32_t bin = 1 * n + 2;
    const ImportanceTable single = build_importance_table(single_bin_sky(n, bin, 1.0), n);
    write_table_images(single, pdf_path, rank_path);
    const RasterImage pdf_img = load_pfm(pdf_path);
    int bright = 0;
    for (int y = 0; y < pdf_img.height; ++y)
        for (int x = 0; x < pdf_img.width; ++x)
            if (pdf_img.at(x, y).r > 0.5) {
                ++bright;
                CHECK(x == 1);                        // i index
                CHECK(y == static_cast<int>(n) - 1 - 2);  // j rendered upward
            }
    CHECK(bright == 1);

    // Sun table: the texel of the bin holding the sun axis image carries the
    // maximum importance (several bins inside the disk tie for it).
    const Direction axis = latlon_to_direction({0.9, 5.0});
    const ImportanceTable sun = build_importance_table(
        sun_sky(axis, 0.05, Spectrum::gray(1000.0), Spectrum::gray(1.0)), 256);
    write_table_images(sun, pdf_path, rank_path);
    const RasterImage sun_img = load_pfm(pdf_path);
    const SquarePoint p = square_from_direction(axis);
    const int axis_x = static_cast<int>(std::min(p.u * 256.0, 255.0));
    const int axis_y = 255 - static_cast<int>(std::min(p.v * 256.0, 255.0));
    double best = 0.0;
    for (const Spectrum& px : sun_img.pixels) best = std::max(best, px.r);
    CHECK(sun_img.at(axis_x, axis_y).r == doctest::Approx(best));

    // The same bin ranks among the most important ones.
    const RasterImage rank_img = load_pfm(rank_path);
    CHECK(rank_img.at(axis_x, axis_y).r > 0.99);
}

TEST_CASE("a 1024x1024 table builds and keeps its invariants") {
    const AnalyticMap sky = sun_sky(latlon_to_direction({1.2, 0.4}), 0.01,
                                    Spectrum::gray(5000.0), Spectrum::gray(1.0));
    const ImportanceTable t = build_importance_table(sky, 1024);
    CHECK(t.bin_count() == 1024u * 1024u);
    CHECK(check_table_invariants(t).empty());
    Mt64RandomSource rng(55);
    for (int s = 0; s < 1000; ++s) CHECK(t.sample(rng).pdf > 0.0);
}

TEST_CASE("build rejects invalid parameters") {
    const AnalyticMap sky = constant_sky(Spectrum::gray(1.0));
    CHECK_THROWS_AS(build_importance_table(sky, 0), ConfigError);
    CHECK_THROWS_AS(build_importance_table(sky, 4, 0), ConfigError);
    CHECK_THROWS_AS(build_importance_table(sky, kMaxTableBinsPerSide + 1), ConfigError);
}

TEST_CASE("luminance measure weights channels differently") {
    // Red-only vs green-only half-spheres: channel sum is symmetric, luma
    // favors green.
    const AnalyticMap sky([](const Direction& d) {
        return d.z >= 0.0 ? Spectrum{1.0, 0.0, 0.0} : Spectrum{0.0, 1.0, 0.0};
    });
    const ImportanceTable sum_table = build_importance_table(sky, 8, 1, ImportanceMeasure::ChannelSum);
    const ImportanceTable luma_table =
        build_importance_table(sky, 8, 1, ImportanceMeasure::Luminance);

    double sum_upper = 0.0, luma_upper = 0.0;
    int upper_bins = 0;
    for (std::uint32_t b = 0; b < sum_table.bin_count(); ++b) {
        const std::uint32_t i = b / 8, j = b % 8;
        const Direction d = direction_from_square({(i + 0.5) / 8.0, (j + 0.5) / 8.0});
        if (d.z >= 0.0) {
            ++upper_bins;
            sum_upper += sum_table.bin_importance[b];
            luma_upper += luma_table.bin_importance[b];
        }
    }
    const int lower_bins = 64 - upper_bins;
    CHECK(upper_bins > 0);
    CHECK(lower_bins > 0);
    CHECK(sum_upper == doctest::Approx(upper_bins / 64.0).epsilon(1e-9));
    CHECK(luma_upper == doctest::Approx(0.2126 * upper_bins /
                                        (0.2126 * upper_bins + 0.7152 * lower_bins))
                            .epsilon(1e-9));
}
