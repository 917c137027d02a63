// envsamp is Copyright(c) 2026 the envsamp authors.
// The envsamp source code is licensed under the Apache License, Version 2.0.
// SPDX: Apache-2.0

#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <array>
#include <memory>

#include "envsamp/envmap.hpp"
#include "envsamp/estimator.hpp"
#include "envsamp/importance.hpp"
#include "envsamp/pfm.hpp"
#include "envsamp/projection.hpp"
#include "envsamp/rng.hpp"

namespace py = pybind11;
using namespace envsamp;

namespace {

using Vec3 = std::array<double, 3>;
using Rgb = std::array<double, 3>;

Direction to_direction(const Vec3& v) { return Direction(v[0], v[1], v[2]); }
Vec3 from_direction(const Direction& d) { return {d.x, d.y, d.z}; }
Spectrum to_spectrum(const Rgb& c) { return {c[0], c[1], c[2]}; }
Rgb from_spectrum(const Spectrum& s) { return {s.r, s.g, s.b}; }

using DoubleArray = py::array_t<double, py::array::c_style | py::array::forcecast>;

RasterImage image_from_array(const DoubleArray& arr) {
    const auto buf = arr.request();
    if (buf.ndim != 3 || buf.shape[2] != 3)
        throw py::value_error("expected an array of shape (height, width, 3)");
    RasterImage img(static_cast<int>(buf.shape[1]), static_cast<int>(buf.shape[0]));
    const double* data = static_cast<const double*>(buf.ptr);
    for (std::size_t p = 0; p < img.pixels.size(); ++p)
        img.pixels[p] = {data[3 * p], data[3 * p + 1], data[3 * p + 2]};
    return img;
}

py::array_t<double> array_from_image(const RasterImage& img) {
    py::array_t<double> arr({img.height, img.width, 3});
    double* data = arr.mutable_data();
    for (std::size_t p = 0; p < img.pixels.size(); ++p) {
        data[3 * p] = img.pixels[p].r;
        data[3 * p + 1] = img.pixels[p].g;
        data[3 * p + 2] = img.pixels[p].b;
    }
    return arr;
}

py::array_t<double> array_from_reports(const std::vector<Spectrum>& estimates) {
    py::array_t<double> arr({static_cast<py::ssize_t>(estimates.size()), py::ssize_t(3)});
    double* data = arr.mutable_data();
    for (std::size_t t = 0; t < estimates.size(); ++t) {
        data[3 * t] = estimates[t].r;
        data[3 * t + 1] = estimates[t].g;
        data[3 * t + 2] = estimates[t].b;
    }
    return arr;
}

template <typename T>
py::array_t<T> array_from_vector(const std::vector<T>& v) {
    py::array_t<T> arr(static_cast<py::ssize_t>(v.size()));
    std::copy(v.begin(), v.end(), arr.mutable_data());
    return arr;
}

EstimatorConfig make_config(Strategy strategy, std::uint32_t n_samples, std::uint32_t trials,
                            std::uint64_t seed) {
    return {strategy, n_samples, trials, seed};
}

}  // namespace

PYBIND11_MODULE(_envsamp, m) {
    m.doc() = "Parameterization-independent importance sampling of environment maps";

    const py::exception<Error> error(m, "Error", PyExc_RuntimeError);
    py::register_exception<FormatError>(m, "FormatError", error);
    py::register_exception<DataError>(m, "DataError", error);
    py::register_exception<IoError>(m, "IoError", error);
    py::register_exception<CorruptionError>(m, "CorruptionError", error);
    py::register_exception<BuildError>(m, "BuildError", error);
    py::register_exception<ConfigError>(m, "ConfigError", error);

    // Equal-area square map of the sphere.
    m.def(
        "square_from_direction",
        [](const Vec3& d) {
            const SquarePoint p = square_from_direction(to_direction(d));
            return std::make_pair(p.u, p.v);
        },
        py::arg("direction"), "Map a unit direction to the unit square.");
    m.def(
        "direction_from_square",
        [](double u, double v) { return from_direction(direction_from_square({u, v})); },
        py::arg("u"), py::arg("v"), "Map a unit-square point back to a unit direction.");
    m.def(
        "sphere_to_square",
        [](double theta, double phi) {
            const SquarePoint p = sphere_to_square(canonical_latlon(theta, phi));
            return std::make_pair(p.u, p.v);
        },
        py::arg("theta"), py::arg("phi"),
        "Map latitude/longitude (radians) to the unit square.");
    m.def(
        "square_to_sphere",
        [](double u, double v) {
            const LatLon a = square_to_sphere({u, v});
            return std::make_pair(a.theta, a.phi);
        },
        py::arg("u"), py::arg("v"), "Map a unit-square point to latitude/longitude (radians).");

    // Environment maps.
    py::class_<EnvMap>(m, "EnvMap", "Radiance field over the sphere")
        .def(
            "lookup",
            [](const EnvMap& env, const Vec3& d) {
                return from_spectrum(env.lookup(to_direction(d)));
            },
            py::arg("direction"));

    py::class_<EquirectMap, EnvMap>(m, "EquirectMap")
        .def(py::init([](const DoubleArray& arr) { return EquirectMap(image_from_array(arr)); }),
             py::arg("image"), "Create from an array of shape (height, width, 3).")
        .def("to_array", [](const EquirectMap& map) { return array_from_image(map.image()); })
        .def_property_readonly("width", [](const EquirectMap& map) { return map.image().width; })
        .def_property_readonly("height",
                               [](const EquirectMap& map) { return map.image().height; });

    py::class_<CubeMap, EnvMap>(m, "CubeMap")
        .def(py::init([](const std::vector<DoubleArray>& face_arrays) {
                 if (face_arrays.size() != 6)
                     throw py::value_error("expected 6 face arrays (+X,-X,+Y,-Y,+Z,-Z)");
                 std::array<RasterImage, 6> faces;
                 for (int f = 0; f < 6; ++f) faces[f] = image_from_array(face_arrays[f]);
                 return CubeMap(std::move(faces));
             }),
             py::arg("faces"), "Create from six square arrays in +X,-X,+Y,-Y,+Z,-Z order.")
        .def("face_array",
             [](const CubeMap& map, int face) {
                 if (face < 0 || face > 5) throw py::value_error("face index must be in [0, 5]");
                 return array_from_image(map.face(face));
             })
        .def_property_readonly("face_size", &CubeMap::face_size);

    py::class_<AnalyticMap, EnvMap>(m, "AnalyticMap")
        .def(py::init([](const std::function<Rgb(Vec3)>& fn) {
                 return AnalyticMap([fn](const Direction& d) {
                     return to_spectrum(fn(from_direction(d)));
                 });
             }),
             py::arg("fn"), "Create from a callable mapping (x, y, z) to (r, g, b).");

    m.def(
        "constant_sky", [](const Rgb& value) { return constant_sky(to_spectrum(value)); },
        py::arg("value"));
    m.def(
        "sun_sky",
        [](const Vec3& axis, double angular_radius, const Rgb& disk, const Rgb& background) {
            return sun_sky(to_direction(axis), angular_radius, to_spectrum(disk),
                           to_spectrum(background));
        },
        py::arg("axis"), py::arg("angular_radius"), py::arg("disk"), py::arg("background"));
    m.def(
        "gradient_sky",
        [](const Rgb& zenith, const Rgb& nadir) {
            return gradient_sky(to_spectrum(zenith), to_spectrum(nadir));
        },
        py::arg("zenith"), py::arg("nadir"));

    m.def("rasterize_equirect", &rasterize_equirect, py::arg("map"), py::arg("width"),
          py::arg("height"));
    m.def("rasterize_cube", &rasterize_cube, py::arg("map"), py::arg("face_size"));

    m.def(
        "load_pfm", [](const std::filesystem::path& path) {
            return array_from_image(load_pfm(path));
        },
        py::arg("path"), "Load a color PFM as an array of shape (height, width, 3).");
    m.def(
        "write_pfm",
        [](const DoubleArray& image, const std::filesystem::path& path) {
            write_pfm(image_from_array(image), path);
        },
        py::arg("image"), py::arg("path"), "Write an array of shape (height, width, 3) as PFM.");

    // Random source.
    py::class_<Mt64RandomSource>(m, "RandomSource",
                                 "Seeded uniform [0,1) source (mt19937_64-backed)")
        .def(py::init<std::uint64_t>(), py::arg("seed"))
        .def_static("for_trial", &Mt64RandomSource::for_trial, py::arg("seed"), py::arg("trial"))
        .def("next_uniform", &Mt64RandomSource::next_uniform);

    py::class_<SampleRecord>(m, "SampleRecord")
        .def_property_readonly(
            "direction", [](const SampleRecord& rec) { return from_direction(rec.direction); })
        .def_readonly("pdf", &SampleRecord::pdf)
        .def("__repr__", [](const SampleRecord& rec) {
            return "SampleRecord(direction=(" + format_double(rec.direction.x) + ", " +
                   format_double(rec.direction.y) + ", " + format_double(rec.direction.z) +
                   "), pdf=" + format_double(rec.pdf) + ")";
        });

    // Importance tables.
    py::class_<ImportanceTable>(m, "ImportanceTable")
        .def_readonly("n", &ImportanceTable::n)
        .def_property_readonly(
            "bin_importance",
            [](const ImportanceTable& t) { return array_from_vector(t.bin_importance); })
        .def_property_readonly(
            "order", [](const ImportanceTable& t) { return array_from_vector(t.order); })
        .def_property_readonly(
            "cumulative", [](const ImportanceTable& t) { return array_from_vector(t.cumulative); })
        .def_readonly("total_importance", &ImportanceTable::total_importance)
        .def_readonly("positive_bins", &ImportanceTable::positive_bins)
        .def_property_readonly("bin_solid_angle", &ImportanceTable::bin_solid_angle)
        .def(
            "bin_of",
            [](const ImportanceTable& t, const Vec3& d) { return t.bin_of(to_direction(d)); },
            py::arg("direction"))
        .def(
            "pdf", [](const ImportanceTable& t, const Vec3& d) { return t.pdf(to_direction(d)); },
            py::arg("direction"))
        .def(
            "sample",
            [](const ImportanceTable& t, Mt64RandomSource& rng) { return t.sample(rng); },
            py::arg("rng"))
        .def(
            "save",
            [](const ImportanceTable& t, const std::filesystem::path& path) {
                save_table(t, path);
            },
            py::arg("path"));

    m.def(
        "build_table",
        [](const EnvMap& env, std::uint32_t n, std::uint32_t supersample, bool luminance) {
            return build_importance_table(
                env, n, supersample,
                luminance ? ImportanceMeasure::Luminance : ImportanceMeasure::ChannelSum);
        },
        py::arg("env"), py::arg("n"), py::arg("supersample") = 1, py::arg("luminance") = false);
    m.def("load_table", &load_table, py::arg("path"), py::arg("validate") = true);
    m.def(
        "check_table_invariants",
        [](const ImportanceTable& t) { return check_table_invariants(t); }, py::arg("table"),
        "Returns failure descriptions; empty when the table is sound.");

    // Estimators.
    py::enum_<Strategy>(m, "Strategy")
        .value("UNIFORM", Strategy::Uniform)
        .value("ENV_IMPORTANCE", Strategy::EnvImportance)
        .value("COSINE", Strategy::Cosine)
        .value("MIS_BALANCE", Strategy::MisBalance);

    py::class_<EstimateReport>(m, "EstimateReport")
        .def_property_readonly("mean",
                               [](const EstimateReport& r) { return from_spectrum(r.mean); })
        .def_property_readonly(
            "std_error", [](const EstimateReport& r) { return from_spectrum(r.std_error); })
        .def_property_readonly("trial_estimates", [](const EstimateReport& r) {
            return array_from_reports(r.trial_estimates);
        });

    py::class_<VarianceComparison>(m, "VarianceComparison")
        .def_readonly("uniform", &VarianceComparison::uniform)
        .def_readonly("importance", &VarianceComparison::importance)
        .def_property_readonly("std_error_ratio", [](const VarianceComparison& c) {
            return from_spectrum(c.std_error_ratio);
        });

    m.def(
        "estimate_sphere_integral",
        [](const EnvMap& env, Strategy strategy, std::uint32_t n_samples, std::uint32_t trials,
           std::uint64_t seed, const ImportanceTable* table) {
            return estimate_sphere_integral(env, table,
                                            make_config(strategy, n_samples, trials, seed));
        },
        py::arg("env"), py::arg("strategy"), py::arg("n_samples"), py::arg("trials"),
        py::arg("seed"), py::arg("table") = nullptr);
    m.def(
        "estimate_irradiance",
        [](const EnvMap& env, const Vec3& normal, Strategy strategy, std::uint32_t n_samples,
           std::uint32_t trials, std::uint64_t seed, const ImportanceTable* table) {
            return estimate_irradiance(env, table, to_direction(normal),
                                       make_config(strategy, n_samples, trials, seed));
        },
        py::arg("env"), py::arg("normal"), py::arg("strategy"), py::arg("n_samples"),
        py::arg("trials"), py::arg("seed"), py::arg("table") = nullptr);
    m.def("compare_variance", &compare_variance, py::arg("env"), py::arg("table"),
          py::arg("n_samples"), py::arg("trials"), py::arg("seed"));
}
