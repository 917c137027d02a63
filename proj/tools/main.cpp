// envsamp is Copyright(c) 2026 the envsamp authors.
// The envsamp source code is licensed under the Apache License, Version 2.0.
// SPDX: Apache-2.0

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "envsamp/envmap.hpp"
#include "envsamp/estimator.hpp"
#include "envsamp/importance.hpp"
#include "envsamp/pfm.hpp"
#include "envsamp/projection.hpp"
#include "envsamp/stats.hpp"

using namespace envsamp;
namespace fs = std::filesystem;

namespace {

// Exit codes: 0 success, 1 validation failure, 2 usage error, 3 I/O or
// format error.
constexpr int kExitOk = 0;
constexpr int kExitValidationFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;

double degrees_to_radians(double deg) { return deg * kPi / 180.0; }

std::unique_ptr<EnvMap> load_envmap(const fs::path& path, const std::string& param) {
    if (param == "cube") return std::make_unique<CubeMap>(load_cubemap(path));
    return std::make_unique<EquirectMap>(load_pfm(path));
}

struct GenOptions {
    std::string kind;
    std::string param = "equirect";
    int width = 0, height = 0, size = 0;
    double value = 1.0;
    double top = 1.0, bottom = 0.25;
    double sun_lat = 45.0, sun_lon = 0.0, sun_radius = 2.0;
    double sun_radiance = 1000.0, background = 1.0;
    std::string out;
};

int run_gen(const GenOptions& opt) {
    std::unique_ptr<AnalyticMap> sky;
    if (opt.kind == "constant") {
        sky = std::make_unique<AnalyticMap>(constant_sky(Spectrum::gray(opt.value)));
    } else if (opt.kind == "gradient") {
        sky = std::make_unique<AnalyticMap>(
            gradient_sky(Spectrum::gray(opt.top), Spectrum::gray(opt.bottom)));
    } else {  // sun
        if (opt.sun_radius <= 0.0 || opt.sun_radius >= 180.0) {
            std::cerr << "gen: --sun-radius must be in (0, 180) degrees\n";
            return kExitUsage;
        }
        const Direction axis = latlon_to_direction(canonical_latlon(
            degrees_to_radians(opt.sun_lat), degrees_to_radians(opt.sun_lon)));
        sky = std::make_unique<AnalyticMap>(
            sun_sky(axis, degrees_to_radians(opt.sun_radius), Spectrum::gray(opt.sun_radiance),
                    Spectrum::gray(opt.background)));
    }

    if (opt.param == "equirect") {
        if (opt.width < 1 || opt.height < 1) {
            std::cerr << "gen: equirect output needs --width and --height\n";
            return kExitUsage;
        }
        write_pfm(rasterize_equirect(*sky, opt.width, opt.height).image(), opt.out);
        std::cout << "wrote " << opt.out << " (" << opt.width << "x" << opt.height << ")\n";
    } else {
        if (opt.size < 1) {
            std::cerr << "gen: cube output needs --size\n";
            return kExitUsage;
        }
        write_cubemap(rasterize_cube(*sky, opt.size), opt.out);
        for (const fs::path& p : cubemap_face_paths(opt.out))
            std::cout << "wrote " << p.string() << " (" << opt.size << "x" << opt.size << ")\n";
    }
    return kExitOk;
}

struct BuildOptions {
    std::string in;
    std::string param = "equirect";
    std::uint32_t n_bins = 0;
    std::uint32_t supersample = 1;
    bool luminance = false;
    std::string out;
};

int run_build(const BuildOptions& opt) {
    const auto env = load_envmap(opt.in, opt.param);
    const ImportanceTable table = build_importance_table(
        *env, opt.n_bins, opt.supersample,
        opt.luminance ? ImportanceMeasure::Luminance : ImportanceMeasure::ChannelSum);
    save_table(table, opt.out);

    double max_importance = 0.0;
    double entropy_bits = 0.0;
    for (double w : table.bin_importance) {
        max_importance = std::max(max_importance, w);
        if (w > 0.0) entropy_bits -= w * std::log2(w);
    }
    std::cout << "bins_per_side = " << table.n << "\n";
    std::cout << "bin_solid_angle = " << format_double(table.bin_solid_angle()) << "\n";
    std::cout << "total_importance = " << format_double(table.total_importance) << "\n";
    std::cout << "max_importance = " << format_double(max_importance) << "\n";
    std::cout << "positive_bins = " << table.positive_bins << "\n";
    std::cout << "entropy_bits = " << format_double(entropy_bits) << "\n";
    std::cout << "uniform_entropy_bits = "
              << format_double(std::log2(static_cast<double>(table.bin_count()))) << "\n";
    std::cout << "wrote " << opt.out << "\n";
    return kExitOk;
}

struct DiagOptions {
    std::string in;
    std::string out_prefix;
    std::string env_path;
    std::string param = "equirect";
    std::uint32_t samples = 5000;
    std::optional<std::uint64_t> seed;
};

int run_diag(const DiagOptions& opt) {
    const ImportanceTable table = load_table(opt.in);
    const fs::path pdf_path = opt.out_prefix + "_pdf.pfm";
    const fs::path rank_path = opt.out_prefix + "_rank.pfm";
    write_table_images(table, pdf_path, rank_path);
    std::cout << "wrote " << pdf_path.string() << "\n";
    std::cout << "wrote " << rank_path.string() << "\n";
    if (opt.env_path.empty()) return kExitOk;

    if (!opt.seed) {
        std::cerr << "diag: --seed is required for the sample overlay\n";
        return kExitUsage;
    }

    // Sampled directions are splatted onto the environment parameterization
    // with a pure-red marker brighter than anything in the image.
    const auto marker_for = [](const RasterImage& img) {
        double peak = 1.0;
        for (const Spectrum& p : img.pixels) peak = std::max(peak, p.max_channel());
        return Spectrum{2.0 * peak, 0.0, 0.0};
    };
    Mt64RandomSource rng(*opt.seed);

    if (opt.param == "equirect") {
        RasterImage img = load_pfm(opt.env_path);
        const Spectrum marker = marker_for(img);
        for (std::uint32_t s = 0; s < opt.samples; ++s) {
            const LatLon a = direction_to_latlon(table.sample(rng).direction);
            const int x = std::min(static_cast<int>(a.phi / kTwoPi * img.width), img.width - 1);
            const int y = std::min(static_cast<int>((kHalfPi - a.theta) / kPi * img.height),
                                   img.height - 1);
            img.at(x, y) = marker;
        }
        const fs::path overlay_path = opt.out_prefix + "_overlay.pfm";
        write_pfm(img, overlay_path);
        std::cout << "wrote " << overlay_path.string() << "\n";
    } else {
        const CubeMap cube = load_cubemap(opt.env_path);
        std::array<RasterImage, 6> faces;
        Spectrum marker{2.0, 0.0, 0.0};
        for (int f = 0; f < 6; ++f) {
            faces[f] = cube.face(f);
            marker.r = std::max(marker.r, marker_for(faces[f]).r);
        }
        const int size = cube.face_size();
        for (std::uint32_t s = 0; s < opt.samples; ++s) {
            const auto [face, cs, ct] = CubeMap::face_coords(table.sample(rng).direction);
            const int x = std::min(static_cast<int>(cs * size), size - 1);
            const int y = std::min(static_cast<int>(ct * size), size - 1);
            faces[face].at(x, y) = marker;
        }
        const auto paths = cubemap_face_paths(opt.out_prefix + "_overlay");
        for (int f = 0; f < 6; ++f) {
            write_pfm(faces[f], paths[f]);
            std::cout << "wrote " << paths[f].string() << "\n";
        }
    }
    return kExitOk;
}

struct ValidateOptions {
    std::string in;
    std::uint32_t samples = 1000000;
    std::uint64_t seed = 0;
    std::string env_path;
    std::string param = "equirect";
    std::uint32_t supersample = 1;
    bool luminance = false;
    std::string out;
};

int run_validate(const ValidateOptions& opt) {
    const ImportanceTable table = load_table(opt.in, /*validate=*/false);
    bool all_ok = true;
    std::vector<std::string> report_lines;
    const auto record = [&](const std::string& name, bool ok, const std::string& detail) {
        all_ok = all_ok && ok;
        const std::string line = "check " + name + " = " + (ok ? "pass" : "fail") +
                                 (detail.empty() ? "" : " (" + detail + ")");
        std::cout << line << "\n";
        report_lines.push_back(line);
    };

    const auto failures = check_table_invariants(table);
    const bool structure_ok = failures.empty() && table.positive_bins > 0;
    record("invariants", structure_ok,
           failures.empty() ? (structure_ok ? "" : "no positive bins") : failures.front());

    if (structure_ok) {
        Mt64RandomSource rng(opt.seed);
        std::vector<std::uint64_t> counts(table.bin_count(), 0);
        std::uint64_t plain_mismatches = 0, boundary_records = 0, zero_bin_hits = 0;
        for (std::uint32_t s = 0; s < opt.samples; ++s) {
            const SampleRecord rec = table.sample(rng);
            const std::uint32_t bin = table.bin_of(rec.direction);
            ++counts[bin];
            const SquarePoint p = square_from_direction(rec.direction);
            const bool boundary =
                near_bin_boundary(p.u, table.n) || near_bin_boundary(p.v, table.n);
            if (boundary) ++boundary_records;
            if (table.pdf(rec.direction) != rec.pdf && !boundary) ++plain_mismatches;
            if (table.bin_importance[bin] == 0.0 && !boundary) ++zero_bin_hits;
        }

        record("sample_pdf_consistency",
               plain_mismatches == 0 &&
                   boundary_records * 10000 < static_cast<std::uint64_t>(opt.samples),
               "mismatches = " + std::to_string(plain_mismatches) +
                   ", boundary records = " + std::to_string(boundary_records));
        record("zero_bin_exclusion", zero_bin_hits == 0,
               "zero-bin hits = " + std::to_string(zero_bin_hits));

        std::vector<double> expected(table.bin_count());
        for (std::uint32_t b = 0; b < table.bin_count(); ++b)
            expected[b] = static_cast<double>(opt.samples) * table.bin_importance[b];
        const ChiSquareResult chi = chi_square_goodness_of_fit(counts, expected);
        record("chi_square", chi.p_value > 0.001,
               "statistic = " + format_double(chi.statistic) +
                   ", dof = " + format_double(chi.degrees_of_freedom) +
                   ", p = " + format_double(chi.p_value));
    }

    if (!opt.env_path.empty() && structure_ok) {
        const auto env = load_envmap(opt.env_path, opt.param);
        const ImportanceTable rebuilt = build_importance_table(
            *env, table.n, opt.supersample,
            opt.luminance ? ImportanceMeasure::Luminance : ImportanceMeasure::ChannelSum);
        const bool match = rebuilt.bin_importance == table.bin_importance &&
                           rebuilt.order == table.order && rebuilt.cumulative == table.cumulative;
        record("rebuild_match", match, match ? "" : "table differs from a rebuild");
    }

    if (!opt.out.empty()) {
        std::ofstream out(opt.out);
        if (!out) throw IoError("cannot open '" + opt.out + "' for writing");
        out << "command = validate\n";
        out << "samples = " << opt.samples << "\n";
        out << "seed = " << opt.seed << "\n";
        for (const std::string& line : report_lines) out << line << "\n";
        out << "result = " << (all_ok ? "pass" : "fail") << "\n";
    }
    std::cout << "result = " << (all_ok ? "pass" : "fail") << "\n";
    return all_ok ? kExitOk : kExitValidationFailure;
}

struct BenchOptions {
    std::string in;
    std::string param = "equirect";
    std::string table_path;
    std::uint32_t samples = 1024;
    std::uint32_t trials = 100;
    std::uint64_t seed = 0;
    std::vector<std::string> strategies;
    std::optional<double> normal_lat, normal_lon;
    std::string out;
};

Strategy parse_strategy(const std::string& name) {
    if (name == "uniform") return Strategy::Uniform;
    if (name == "env") return Strategy::EnvImportance;
    if (name == "cosine") return Strategy::Cosine;
    if (name == "mis") return Strategy::MisBalance;
    throw ConfigError("unknown strategy '" + name + "'");
}

int run_bench(const BenchOptions& opt) {
    const auto env = load_envmap(opt.in, opt.param);
    const ImportanceTable table = load_table(opt.table_path);
    const bool irradiance_mode = opt.normal_lat.has_value() || opt.normal_lon.has_value();

    std::vector<Strategy> strategies;
    if (opt.strategies.empty()) {
        strategies = irradiance_mode
                         ? std::vector<Strategy>{Strategy::Uniform, Strategy::EnvImportance,
                                                 Strategy::Cosine, Strategy::MisBalance}
                         : std::vector<Strategy>{Strategy::Uniform, Strategy::EnvImportance};
    } else {
        for (const std::string& name : opt.strategies) strategies.push_back(parse_strategy(name));
    }

    std::ostringstream kv;
    kv << "command = bench\n";
    kv << "mode = " << (irradiance_mode ? "irradiance" : "sphere_integral") << "\n";
    kv << "samples = " << opt.samples << "\n";
    kv << "trials = " << opt.trials << "\n";
    kv << "seed = " << opt.seed << "\n";

    if (irradiance_mode) {
        const Direction normal = latlon_to_direction(
            canonical_latlon(degrees_to_radians(opt.normal_lat.value_or(90.0)),
                             degrees_to_radians(opt.normal_lon.value_or(0.0))));
        for (const Strategy strategy : strategies) {
            const EstimateReport rep = estimate_irradiance(
                *env, &table, normal, {strategy, opt.samples, opt.trials, opt.seed});
            print_report(std::cout, strategy_name(strategy), rep);
            write_report_kv(kv, strategy_name(strategy), rep);
        }
    } else {
        for (const Strategy strategy : strategies) {
            if (strategy == Strategy::Cosine || strategy == Strategy::MisBalance)
                throw ConfigError(
                    "bench: cosine and mis need a surface normal (--normal-lat/--normal-lon)");
        }
        const bool has_uniform =
            std::find(strategies.begin(), strategies.end(), Strategy::Uniform) !=
            strategies.end();
        const bool has_env =
            std::find(strategies.begin(), strategies.end(), Strategy::EnvImportance) !=
            strategies.end();
        if (has_uniform && has_env) {
            const VarianceComparison cmp =
                compare_variance(*env, table, opt.samples, opt.trials, opt.seed);
            print_report(std::cout, "uniform", cmp.uniform);
            print_report(std::cout, "env", cmp.importance);
            std::cout << "std_error_ratio = (" << format_double(cmp.std_error_ratio.r) << ", "
                      << format_double(cmp.std_error_ratio.g) << ", "
                      << format_double(cmp.std_error_ratio.b) << ")\n";
            write_report_kv(kv, "uniform", cmp.uniform);
            write_report_kv(kv, "env", cmp.importance);
            kv << "ratio_r = " << format_double(cmp.std_error_ratio.r) << "\n";
            kv << "ratio_g = " << format_double(cmp.std_error_ratio.g) << "\n";
            kv << "ratio_b = " << format_double(cmp.std_error_ratio.b) << "\n";
        } else {
            for (const Strategy strategy : strategies) {
                const EstimateReport rep = estimate_sphere_integral(
                    *env, strategy == Strategy::EnvImportance ? &table : nullptr,
                    {strategy, opt.samples, opt.trials, opt.seed});
                print_report(std::cout, strategy_name(strategy), rep);
                write_report_kv(kv, strategy_name(strategy), rep);
            }
        }
    }

    if (!opt.out.empty()) {
        std::ofstream out(opt.out);
        if (!out) throw IoError("cannot open '" + opt.out + "' for writing");
        out << kv.str();
        std::cout << "wrote " << opt.out << "\n";
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Parameterization-independent importance sampling of environment maps"};
    app.require_subcommand(1);

    GenOptions gen;
    CLI::App* gen_cmd = app.add_subcommand("gen", "Generate a test sky as PFM file(s)");
    gen_cmd->add_option("--kind", gen.kind, "Sky kind")
        ->required()
        ->check(CLI::IsMember({"constant", "sun", "gradient"}));
    gen_cmd->add_option("--param", gen.param, "Target parameterization")
        ->check(CLI::IsMember({"equirect", "cube"}));
    gen_cmd->add_option("--width", gen.width, "Equirect width");
    gen_cmd->add_option("--height", gen.height, "Equirect height");
    gen_cmd->add_option("--size", gen.size, "Cube face size");
    gen_cmd->add_option("--value", gen.value, "Constant sky level");
    gen_cmd->add_option("--top", gen.top, "Gradient zenith level");
    gen_cmd->add_option("--bottom", gen.bottom, "Gradient nadir level");
    gen_cmd->add_option("--sun-lat", gen.sun_lat, "Sun latitude, degrees");
    gen_cmd->add_option("--sun-lon", gen.sun_lon, "Sun longitude, degrees");
    gen_cmd->add_option("--sun-radius", gen.sun_radius, "Sun angular radius, degrees");
    gen_cmd->add_option("--sun-radiance", gen.sun_radiance, "Radiance inside the sun disk");
    gen_cmd->add_option("--background", gen.background, "Radiance outside the sun disk");
    gen_cmd->add_option("--out", gen.out, "Output path (stem for cube)")->required();

    BuildOptions build;
    CLI::App* build_cmd = app.add_subcommand("build", "Build an importance table from a map");
    build_cmd->add_option("--in", build.in, "Input PFM (or cube stem)")->required();
    build_cmd->add_option("--param", build.param, "Input parameterization")
        ->check(CLI::IsMember({"equirect", "cube"}));
    build_cmd->add_option("--n-bins", build.n_bins, "Bins per table side")->required();
    build_cmd->add_option("--supersample", build.supersample, "In-bin sample grid side");
    build_cmd->add_flag("--luminance", build.luminance, "Weight importance by luminance");
    build_cmd->add_option("--out", build.out, "Output table path")->required();

    DiagOptions diag;
    CLI::App* diag_cmd = app.add_subcommand("diag", "Write diagnostic images for a table");
    diag_cmd->add_option("--in", diag.in, "Importance table")->required();
    diag_cmd->add_option("--out", diag.out_prefix, "Output path prefix")->required();
    diag_cmd->add_option("--env", diag.env_path, "Environment map for the sample overlay");
    diag_cmd->add_option("--param", diag.param, "Environment parameterization")
        ->check(CLI::IsMember({"equirect", "cube"}));
    diag_cmd->add_option("--samples", diag.samples, "Overlay sample count");
    diag_cmd->add_option("--seed", diag.seed, "Random seed for the overlay");

    ValidateOptions validate;
    CLI::App* validate_cmd = app.add_subcommand("validate", "Check a table's invariants");
    validate_cmd->add_option("--in", validate.in, "Importance table")->required();
    validate_cmd->add_option("--samples", validate.samples, "Sampling check count");
    validate_cmd->add_option("--seed", validate.seed, "Random seed")->required();
    validate_cmd->add_option("--env", validate.env_path, "Environment map for a rebuild check");
    validate_cmd->add_option("--param", validate.param, "Environment parameterization")
        ->check(CLI::IsMember({"equirect", "cube"}));
    validate_cmd->add_option("--supersample", validate.supersample,
                             "Supersample used when the table was built");
    validate_cmd->add_flag("--luminance", validate.luminance,
                           "Luminance measure used when the table was built");
    validate_cmd->add_option("--out", validate.out, "Report file");

    BenchOptions bench;
    CLI::App* bench_cmd = app.add_subcommand("bench", "Estimator variance benchmarks");
    bench_cmd->add_option("--in", bench.in, "Environment map")->required();
    bench_cmd->add_option("--param", bench.param, "Environment parameterization")
        ->check(CLI::IsMember({"equirect", "cube"}));
    bench_cmd->add_option("--table", bench.table_path, "Importance table")->required();
    bench_cmd->add_option("--samples", bench.samples, "Samples per trial");
    bench_cmd->add_option("--trials", bench.trials, "Trial count");
    bench_cmd->add_option("--seed", bench.seed, "Random seed")->required();
    bench_cmd
        ->add_option("--strategy", bench.strategies,
                     "Strategies to run (uniform, env, cosine, mis)")
        ->delimiter(',');
    bench_cmd->add_option("--normal-lat", bench.normal_lat,
                          "Surface normal latitude, degrees (enables irradiance mode)");
    bench_cmd->add_option("--normal-lon", bench.normal_lon, "Surface normal longitude, degrees");
    bench_cmd->add_option("--out", bench.out, "Report file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (gen_cmd->parsed()) return run_gen(gen);
        if (build_cmd->parsed()) return run_build(build);
        if (diag_cmd->parsed()) return run_diag(diag);
        if (validate_cmd->parsed()) return run_validate(validate);
        if (bench_cmd->parsed()) return run_bench(bench);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    }
    return kExitUsage;
}
