// envsamp is Copyright(c) 2026 the envsamp authors.
// The envsamp source code is licensed under the Apache License, Version 2.0.
// SPDX: Apache-2.0

#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "envsamp/envmap.hpp"
#include "envsamp/importance.hpp"

namespace envsamp {

enum class Strategy {
    Uniform,        // uniform sphere directions, pdf 1/4pi
    EnvImportance,  // directions from an ImportanceTable
    Cosine,         // cosine-weighted hemisphere about a normal
    MisBalance,     // env + cosine, balance-heuristic weights, half/half split
};

const char* strategy_name(Strategy s);

struct EstimatorConfig {
    Strategy strategy = Strategy::Uniform;
    std::uint32_t n_samples = 1;
    std::uint32_t trials = 1;
    std::uint64_t seed = 0;
};

/// Per-trial estimates with their aggregate. Trial t uses the random stream
/// derived from (seed, t), so reports are identical regardless of execution
/// order. std_error is the standard error of the mean across trials (zero
/// for a single trial).
struct EstimateReport {
    Spectrum mean;
    Spectrum std_error;
    std::vector<Spectrum> trial_estimates;
};

/// Monte Carlo estimate of the full-sphere radiance integral. Supports
/// Uniform and EnvImportance; table is required exactly for EnvImportance.
EstimateReport estimate_sphere_integral(const EnvMap& env, const ImportanceTable* table,
                                        const EstimatorConfig& cfg);

/// Monte Carlo estimate of irradiance about a normal, integrand
/// L(d) * max(0, n.d). All four strategies are supported; table is required
/// for EnvImportance and MisBalance.
EstimateReport estimate_irradiance(const EnvMap& env, const ImportanceTable* table,
                                   const Direction& normal, const EstimatorConfig& cfg);

/// Sphere-integral estimates under Uniform and EnvImportance with identical
/// budgets and the same base seed, plus the per-channel ratio of standard
/// errors (uniform / importance). The ratio is 1 by convention when both
/// errors are zero and +inf when only the importance error is zero.
struct VarianceComparison {
    EstimateReport uniform;
    EstimateReport importance;
    Spectrum std_error_ratio;
};

VarianceComparison compare_variance(const EnvMap& env, const ImportanceTable& table,
                                    std::uint32_t n_samples, std::uint32_t trials,
                                    std::uint64_t seed);

/// Cosine-weighted direction about the normal with density max(0, n.d)/pi.
Direction cosine_direction(const Direction& normal, RandomSource& rng);

/// Shortest decimal form that parses back to the same double.
std::string format_double(double value);

/// Human-readable report lines ("<label> mean = ... std_error = ...").
void print_report(std::ostream& out, const std::string& label, const EstimateReport& report);

/// Machine-readable "key = value" lines; keys are <prefix>_mean_{r,g,b} and
/// <prefix>_std_error_{r,g,b}.
void write_report_kv(std::ostream& out, const std::string& prefix, const EstimateReport& report);

}  // namespace envsamp
