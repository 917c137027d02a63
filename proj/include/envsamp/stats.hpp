// envsamp is Copyright(c) 2026 the envsamp authors.
// The envsamp source code is licensed under the Apache License, Version 2.0.
// SPDX: Apache-2.0

#pragma once

#include <cstdint>
#include <span>

namespace envsamp {

struct ChiSquareResult {
    double statistic = 0.0;
    double degrees_of_freedom = 0.0;
    double p_value = 1.0;
    std::size_t bins_used = 0;
    std::size_t bins_skipped = 0;  // expected count below the threshold
};

/// Pearson chi-square goodness-of-fit of observed counts against expected
/// counts. Bins with expected count below min_expected are excluded, the
/// usual validity rule for the chi-square approximation.
ChiSquareResult chi_square_goodness_of_fit(std::span<const std::uint64_t> observed,
                                           std::span<const double> expected,
                                           double min_expected = 5.0);

}  // namespace envsamp
