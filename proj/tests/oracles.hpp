#pragma once

// Independent reference implementations shared by the unit tests and the
// acceptance suite. They favour obviousness over speed.

#include <cmath>
#include <cstddef>
#include <vector>

namespace oracle {

// Average ranks by counting, no sorting: rank = #smaller + (#equal + 1) / 2.
inline std::vector<double> average_ranks(const std::vector<double>& mags) {
    std::vector<double> r(mags.size());
    for (std::size_t i = 0; i < mags.size(); ++i) {
        double less = 0, equal = 0;
        for (double m : mags) {
            if (m < mags[i]) ++less;
            else if (m == mags[i]) ++equal;
        }
        r[i] = less + (equal + 1.0) / 2.0;
    }
    return r;
}

struct SignedRank {
    double w_plus = 0.0;
    double p = 1.0;  // one-sided, b > a
    std::size_t n = 0;
};

// Enumerates all 2^n sign assignments of the nonzero differences b - a.
inline SignedRank enumerate_signed_rank(const std::vector<double>& a, const std::vector<double>& b) {
    std::vector<double> d;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (b[i] - a[i] != 0.0) d.push_back(b[i] - a[i]);
    std::vector<double> mags;
    for (double x : d) mags.push_back(std::abs(x));
    const auto ranks = average_ranks(mags);
    SignedRank out;
    out.n = d.size();
    for (std::size_t i = 0; i < d.size(); ++i)
        if (d[i] > 0) out.w_plus += ranks[i];
    std::size_t at_least = 0;
    const std::size_t total = std::size_t{1} << d.size();
    for (std::size_t mask = 0; mask < total; ++mask) {
        double s = 0.0;
        for (std::size_t i = 0; i < d.size(); ++i)
            if (mask >> i & 1) s += ranks[i];
        if (s >= out.w_plus - 1e-9) ++at_least;
    }
    out.p = static_cast<double>(at_least) / static_cast<double>(total);
    return out;
}

// Textbook AP over a relevance vector: precision at each relevant rank,
// summed and divided by the number of relevant documents.
inline double average_precision(const std::vector<bool>& rel_at, std::size_t total_relevant) {
    double sum = 0.0;
    for (std::size_t i = 0; i < rel_at.size(); ++i) {
        if (!rel_at[i]) continue;
        std::size_t hits = 0;
        for (std::size_t j = 0; j <= i; ++j) hits += rel_at[j] ? 1 : 0;
        sum += static_cast<double>(hits) / static_cast<double>(i + 1);
    }
    return sum / static_cast<double>(total_relevant);
}

inline double precision(const std::vector<bool>& rel_at, std::size_t k) {
    std::size_t hits = 0;
    for (std::size_t i = 0; i < k && i < rel_at.size(); ++i) hits += rel_at[i] ? 1 : 0;
    return static_cast<double>(hits) / static_cast<double>(k);
}

// exp(entropy) via the base-2 entropy.
template <class Counts>
double perplexity(const Counts& tf) {
    double total = 0.0;
    for (const auto& [t, c] : tf) total += static_cast<double>(c);
    double h2 = 0.0;
    for (const auto& [t, c] : tf) {
        if (c == 0) continue;
        const double p = static_cast<double>(c) / total;
        h2 -= p * std::log2(p);
    }
    return std::exp2(h2);
}

} // namespace oracle
