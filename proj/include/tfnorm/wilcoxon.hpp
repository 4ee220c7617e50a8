#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>

namespace tfnorm {

struct WilcoxonResult {
    double statistic = 0.0;  // W+: rank sum of the positive differences b - a
    std::size_t n = 0;       // pairs left after dropping zero differences
    double p_value = 1.0;    // one-sided, alternative b > a
    bool exact = true;
    bool sig95 = false;
    bool sig99 = false;
};

/// Largest effective sample size evaluated with the exact null distribution.
constexpr std::size_t kWilcoxonExactMax = 12;

/// Paired one-sided Wilcoxon signed-rank test of b > a. Zero differences are
/// dropped and tied magnitudes get average ranks. The null distribution is
/// exact for n <= 12; larger n use the normal approximation with continuity
/// and tie corrections. Throws on unequal or empty inputs.
WilcoxonResult wilcoxon_signed_rank(std::span<const double> a, std::span<const double> b);

struct SignificanceRecord {
    std::string metric;
    double baseline_mean = 0.0;
    double run_mean = 0.0;
    WilcoxonResult test;
};

} // namespace tfnorm
