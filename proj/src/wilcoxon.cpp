#include "tfnorm/wilcoxon.hpp"

#include "tfnorm/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

namespace tfnorm {

WilcoxonResult wilcoxon_signed_rank(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw Error("wilcoxon: paired samples differ in length");
    if (a.empty()) throw Error("wilcoxon: no pairs");

    std::vector<double> diff;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (b[i] != a[i]) diff.push_back(b[i] - a[i]);

    WilcoxonResult res;
    res.n = diff.size();
    if (res.n == 0) return res;  // p = 1

    // Doubled average ranks are integers, which keeps the exact null
    // distribution in integer arithmetic.
    std::vector<std::size_t> order(res.n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t i, std::size_t j) { return std::abs(diff[i]) < std::abs(diff[j]); });
    std::vector<std::uint64_t> rank2(res.n);
    double tie_term = 0.0;  // sum of t^3 - t over tie groups
    for (std::size_t i = 0; i < res.n;) {
        std::size_t j = i;
        while (j + 1 < res.n && std::abs(diff[order[j + 1]]) == std::abs(diff[order[i]])) ++j;
        const std::uint64_t r2 = (i + 1) + (j + 1);  // 2 * mean of ranks i+1 .. j+1
        for (std::size_t k = i; k <= j; ++k) rank2[order[k]] = r2;
        const double t = static_cast<double>(j - i + 1);
        tie_term += t * t * t - t;
        i = j + 1;
    }

    std::uint64_t w2 = 0;
    for (std::size_t i = 0; i < res.n; ++i)
        if (diff[i] > 0) w2 += rank2[i];
    res.statistic = static_cast<double>(w2) / 2.0;

    const double n = static_cast<double>(res.n);
    if (res.n <= kWilcoxonExactMax) {
        // counts[s] = number of sign assignments whose doubled W+ equals s.
        const std::uint64_t max_sum = std::accumulate(rank2.begin(), rank2.end(), std::uint64_t{0});
        std::vector<std::uint64_t> counts(max_sum + 1, 0);
        counts[0] = 1;
        std::uint64_t reach = 0;
        for (auto r : rank2) {
            for (std::uint64_t s = reach + 1; s-- > 0;)
                if (counts[s]) counts[s + r] += counts[s];
            reach += r;
        }
        std::uint64_t tail = 0;
        for (std::uint64_t s = w2; s <= max_sum; ++s) tail += counts[s];
        res.p_value = static_cast<double>(tail) / std::ldexp(1.0, static_cast<int>(res.n));
        res.exact = true;
    } else {
        const double mean = n * (n + 1.0) / 4.0;
        const double var = n * (n + 1.0) * (2.0 * n + 1.0) / 24.0 - tie_term / 48.0;
        const double z = (res.statistic - mean - 0.5) / std::sqrt(var);
        res.p_value = 0.5 * std::erfc(z / std::sqrt(2.0));
        res.exact = false;
    }
    res.p_value = std::clamp(res.p_value, 0.0, 1.0);
    res.sig95 = res.p_value < 0.05;
    res.sig99 = res.p_value < 0.01;
    return res;
}

} // namespace tfnorm
