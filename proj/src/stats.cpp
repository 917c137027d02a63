// envsamp is Copyright(c) 2026 the envsamp authors.
// The envsamp source code is licensed under the Apache License, Version 2.0.
// SPDX: Apache-2.0

#include "envsamp/stats.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include "envsamp/errors.hpp"

namespace envsamp {

ChiSquareResult chi_square_goodness_of_fit(std::span<const std::uint64_t> observed,
                                           std::span<const double> expected,
                                           double min_expected) {
    if (observed.size() != expected.size())
        throw ConfigError("chi_square_goodness_of_fit: size mismatch");

    ChiSquareResult result;
    for (std::size_t b = 0; b < observed.size(); ++b) {
        if (expected[b] < min_expected) {
            ++result.bins_skipped;
            continue;
        }
        const double diff = static_cast<double>(observed[b]) - expected[b];
        result.statistic += diff * diff / expected[b];
        ++result.bins_used;
    }

    if (result.bins_used < 2) {
        result.degrees_of_freedom = 0.0;
        result.p_value = 1.0;
        return result;
    }
    result.degrees_of_freedom = static_cast<double>(result.bins_used - 1);
    // Upper tail of the chi-square distribution.
    result.p_value =
        boost::math::gamma_q(0.5 * result.degrees_of_freedom, 0.5 * result.statistic);
    return result;
}

}  // namespace envsamp
