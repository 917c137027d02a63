// envsamp is Copyright(c) 2026 the envsamp authors.
// The envsamp source code is licensed under the Apache License, Version 2.0.
// SPDX: Apache-2.0

#include "envsamp/estimator.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <ostream>

namespace envsamp {

namespace {

// Welford accumulator per channel. Identical inputs leave the spread at
// exactly zero, which keeps analytically exact estimators reporting an
// exactly zero standard error.
struct RunningMoments {
    Spectrum mean;
    Spectrum m2;
    std::uint64_t count = 0;

    void add(const Spectrum& value) {
        ++count;
        const Spectrum delta = value - mean;
        mean += delta * (1.0 / static_cast<double>(count));
        const Spectrum delta2 = value - mean;
        m2 += {delta.r * delta2.r, delta.g * delta2.g, delta.b * delta2.b};
    }

    Spectrum std_error_of_mean() const {
        if (count < 2) return {};
        const double scale = 1.0 / (static_cast<double>(count - 1) * count);
        return {std::sqrt(m2.r * scale), std::sqrt(m2.g * scale), std::sqrt(m2.b * scale)};
    }
};

void require_positive_budget(const EstimatorConfig& cfg) {
    if (cfg.n_samples < 1) throw ConfigError("estimator: n_samples must be positive");
    if (cfg.trials < 1) throw ConfigError("estimator: trials must be positive");
}

EstimateReport aggregate(std::vector<Spectrum> trial_estimates) {
    RunningMoments moments;
    for (const Spectrum& e : trial_estimates) moments.add(e);
    EstimateReport report;
    report.mean = moments.mean;
    report.std_error = moments.std_error_of_mean();
    report.trial_estimates = std::move(trial_estimates);
    return report;
}

}  // namespace

const char* strategy_name(Strategy s) {
    switch (s) {
        case Strategy::Uniform: return "uniform";
        case Strategy::EnvImportance: return "env";
        case Strategy::Cosine: return "cosine";
        case Strategy::MisBalance: return "mis";
    }
    return "?";
}

Direction cosine_direction(const Direction& normal, RandomSource& rng) {
    const double r1 = rng.next_uniform();
    const double r2 = rng.next_uniform();
    const double radius = std::sqrt(r1);
    const double phi = kTwoPi * r2;
    const double lz = std::sqrt(std::max(0.0, 1.0 - r1));
    Direction t, b;
    orthonormal_basis(normal, t, b);
    const double lx = radius * std::cos(phi);
    const double ly = radius * std::sin(phi);
    return Direction(lx * t.x + ly * b.x + lz * normal.x, lx * t.y + ly * b.y + lz * normal.y,
                     lx * t.z + ly * b.z + lz * normal.z);
}

EstimateReport estimate_sphere_integral(const EnvMap& env, const ImportanceTable* table,
                                        const EstimatorConfig& cfg) {
    require_positive_budget(cfg);
    if (cfg.strategy != Strategy::Uniform && cfg.strategy != Strategy::EnvImportance)
        throw ConfigError("estimate_sphere_integral: strategy must be uniform or env");
    if (cfg.strategy == Strategy::EnvImportance && table == nullptr)
        throw ConfigError("estimate_sphere_integral: env strategy requires an importance table");

    std::vector<Spectrum> trials(cfg.trials);
    for (std::uint32_t t = 0; t < cfg.trials; ++t) {
        Mt64RandomSource rng = Mt64RandomSource::for_trial(cfg.seed, t);
        Spectrum acc;
        for (std::uint32_t s = 0; s < cfg.n_samples; ++s) {
            if (cfg.strategy == Strategy::Uniform) {
                // L / (1/4pi) = 4pi L
                acc += env.lookup(uniform_direction(rng)) * kFourPi;
            } else {
                const SampleRecord rec = table->sample(rng);
                acc += env.lookup(rec.direction) * (1.0 / rec.pdf);
            }
        }
        trials[t] = acc * (1.0 / cfg.n_samples);
    }
    return aggregate(std::move(trials));
}

EstimateReport estimate_irradiance(const EnvMap& env, const ImportanceTable* table,
                                   const Direction& normal, const EstimatorConfig& cfg) {
    require_positive_budget(cfg);
    const bool needs_table =
        cfg.strategy == Strategy::EnvImportance || cfg.strategy == Strategy::MisBalance;
    if (needs_table && table == nullptr)
        throw ConfigError("estimate_irradiance: strategy requires an importance table");

    std::vector<Spectrum> trials(cfg.trials);
    for (std::uint32_t t = 0; t < cfg.trials; ++t) {
        Mt64RandomSource rng = Mt64RandomSource::for_trial(cfg.seed, t);
        Spectrum estimate;
        switch (cfg.strategy) {
            case Strategy::Uniform: {
                Spectrum acc;
                for (std::uint32_t s = 0; s < cfg.n_samples; ++s) {
                    const Direction d = uniform_direction(rng);
                    const double w = dot(normal, d);
                    if (w > 0.0) acc += env.lookup(d) * (kFourPi * w);
                }
                estimate = acc * (1.0 / cfg.n_samples);
                break;
            }
            case Strategy::Cosine: {
                // L * cos / (cos/pi) = pi L
                Spectrum acc;
                for (std::uint32_t s = 0; s < cfg.n_samples; ++s)
                    acc += env.lookup(cosine_direction(normal, rng)) * kPi;
                estimate = acc * (1.0 / cfg.n_samples);
                break;
            }
            case Strategy::EnvImportance: {
                Spectrum acc;
                for (std::uint32_t s = 0; s < cfg.n_samples; ++s) {
                    const SampleRecord rec = table->sample(rng);
                    const double w = dot(normal, rec.direction);
                    if (w > 0.0) acc += env.lookup(rec.direction) * (w / rec.pdf);
                }
                estimate = acc * (1.0 / cfg.n_samples);
                break;
            }
            case Strategy::MisBalance: {
                // Half the budget per technique; each term carries the
                // balance-heuristic weight p_own / (p_env + p_cos).
                const std::uint32_t n_env = cfg.n_samples / 2;
                const std::uint32_t n_cos = cfg.n_samples - n_env;
                Spectrum acc_env, acc_cos;
                for (std::uint32_t s = 0; s < n_env; ++s) {
                    const SampleRecord rec = table->sample(rng);
                    const double w = dot(normal, rec.direction);
                    if (w <= 0.0) continue;
                    const double p_c = w / kPi;
                    const double weight = rec.pdf / (rec.pdf + p_c);
                    acc_env += env.lookup(rec.direction) * (w * weight / rec.pdf);
                }
                for (std::uint32_t s = 0; s < n_cos; ++s) {
                    const Direction d = cosine_direction(normal, rng);
                    const double w = dot(normal, d);
                    if (w <= 0.0) continue;
                    const double p_c = w / kPi;
                    const double p_e = table->pdf(d);
                    const double weight = p_c / (p_e + p_c);
                    acc_cos += env.lookup(d) * (w * weight / p_c);
                }
                if (n_env > 0) estimate += acc_env * (1.0 / n_env);
                estimate += acc_cos * (1.0 / n_cos);
                break;
            }
        }
        trials[t] = estimate;
    }
    return aggregate(std::move(trials));
}

VarianceComparison compare_variance(const EnvMap& env, const ImportanceTable& table,
                                    std::uint32_t n_samples, std::uint32_t trials,
                                    std::uint64_t seed) {
    EstimatorConfig cfg{Strategy::Uniform, n_samples, trials, seed};
    VarianceComparison cmp;
    cmp.uniform = estimate_sphere_integral(env, nullptr, cfg);
    cfg.strategy = Strategy::EnvImportance;
    cmp.importance = estimate_sphere_integral(env, &table, cfg);

    const auto ratio = [](double u, double i) {
        if (u == 0.0 && i == 0.0) return 1.0;
        if (i == 0.0) return std::numeric_limits<double>::infinity();
        return u / i;
    };
    cmp.std_error_ratio = {ratio(cmp.uniform.std_error.r, cmp.importance.std_error.r),
                           ratio(cmp.uniform.std_error.g, cmp.importance.std_error.g),
                           ratio(cmp.uniform.std_error.b, cmp.importance.std_error.b)};
    return cmp;
}

std::string format_double(double value) {
    char buf[64];
    for (int precision = 15; precision <= 17; ++precision) {
        std::snprintf(buf, sizeof(buf), "%.*g", precision, value);
        if (std::strtod(buf, nullptr) == value) break;
    }
    return buf;
}

void print_report(std::ostream& out, const std::string& label, const EstimateReport& report) {
    out << label << " mean = (" << format_double(report.mean.r) << ", "
        << format_double(report.mean.g) << ", " << format_double(report.mean.b) << ")\n";
    out << label << " std_error = (" << format_double(report.std_error.r) << ", "
        << format_double(report.std_error.g) << ", " << format_double(report.std_error.b)
        << ")\n";
}

void write_report_kv(std::ostream& out, const std::string& prefix,
                     const EstimateReport& report) {
    out << prefix << "_mean_r = " << format_double(report.mean.r) << "\n";
    out << prefix << "_mean_g = " << format_double(report.mean.g) << "\n";
    out << prefix << "_mean_b = " << format_double(report.mean.b) << "\n";
    out << prefix << "_std_error_r = " << format_double(report.std_error.r) << "\n";
    out << prefix << "_std_error_g = " << format_double(report.std_error.g) << "\n";
    out << prefix << "_std_error_b = " << format_double(report.std_error.b) << "\n";
}

}  // namespace envsamp
