#include "tfnorm/error.hpp"
#include "tfnorm/random.hpp"
#include "tfnorm/wilcoxon.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <vector>

using namespace tfnorm;
using doctest::Approx;


TEST_CASE("n = 5, all differences positive") {
    const std::vector<double> a{0.1, 0.2, 0.3, 0.4, 0.5};
    const std::vector<double> b{0.2, 0.4, 0.6, 0.8, 1.0};
    const auto r = wilcoxon_signed_rank(a, b);
    CHECK(r.n == 5);
    CHECK(r.statistic == 15.0);
    CHECK(r.exact);
    CHECK(r.p_value == 0.03125);
    CHECK(r.sig95);
    CHECK_FALSE(r.sig99);
}

TEST_CASE("identical samples are never significant") {
    const std::vector<double> a{0.3, 0.1, 0.7};
    const auto r = wilcoxon_signed_rank(a, a);
    CHECK(r.n == 0);
    CHECK(r.p_value == 1.0);
    CHECK_FALSE(r.sig95);
    CHECK_FALSE(r.sig99);
}

TEST_CASE("input validation") {
    const std::vector<double> a{1.0, 2.0};
    const std::vector<double> b{1.0};
    CHECK_THROWS_AS(wilcoxon_signed_rank(a, b), Error);
    CHECK_THROWS_AS(wilcoxon_signed_rank(std::vector<double>{}, std::vector<double>{}), Error);
}

TEST_CASE("exact p-values equal full enumeration for every n up to 12") {
    Rng rng(31);
    for (std::size_t n = 1; n <= kWilcoxonExactMax; ++n) {
        for (int rep = 0; rep < 40; ++rep) {
            std::vector<double> a(n), b(n);
            for (std::size_t i = 0; i < n; ++i) {
                a[i] = static_cast<double>(rng.below(6)) / 4.0;
                // Coarse values produce zero differences and tied magnitudes.
                b[i] = static_cast<double>(rng.below(6)) / 4.0;
            }
            const auto oracle = oracle::enumerate_signed_rank(a, b);
            const auto r = wilcoxon_signed_rank(a, b);
            CHECK(r.n == oracle.n);
            CHECK(r.statistic == oracle.w_plus);
            CHECK(r.exact);
            CHECK(r.p_value == Approx(oracle.p).epsilon(1e-15));
        }
    }
}

TEST_CASE("n = 50 uses the normal approximation") {
    std::vector<double> a(50, 0.0), b;
    for (int i = 1; i <= 50; ++i) b.push_back(static_cast<double>((i * 37) % 11 - 4) * 0.01);
    const auto r = wilcoxon_signed_rank(a, b);
    CHECK_FALSE(r.exact);
    CHECK(r.n == 45);
    CHECK(r.statistic == 702.0);

    // Hand evaluation: mean n(n+1)/4, variance n(n+1)(2n+1)/24 less the tie
    // term, continuity correction 0.5, upper normal tail.
    std::vector<double> mags;
    for (double x : b)
        if (x != 0.0) mags.push_back(std::abs(x));
    double ties = 0.0;
    for (std::size_t i = 0; i < mags.size(); ++i) {
        double t = 0.0;
        bool first = true;
        for (std::size_t j = 0; j < mags.size(); ++j) {
            if (mags[j] == mags[i]) ++t;
            if (mags[j] == mags[i] && j < i) first = false;
        }
        if (first) ties += t * t * t - t;
    }
    const double n = 45.0;
    const double z = (702.0 - n * (n + 1) / 4.0 - 0.5) / std::sqrt(n * (n + 1) * (2 * n + 1) / 24.0 - ties / 48.0);
    CHECK(r.p_value == Approx(0.5 * std::erfc(z / std::sqrt(2.0))).epsilon(1e-12));
    // Reference value from SciPy 1.15 (wilcoxon, alternative="greater",
    // correction=True, method="approx").
    CHECK(r.p_value == Approx(0.018516689528333245).epsilon(1e-12));
    CHECK(r.sig95);
    CHECK_FALSE(r.sig99);
}

TEST_CASE("a 12-pair prefix of the long sample is evaluated exactly") {
    std::vector<double> a(12, 0.0), b;
    for (int i = 1; i <= 12; ++i) b.push_back(static_cast<double>((i * 37) % 11 - 4) * 0.01);
    const auto r = wilcoxon_signed_rank(a, b);
    const auto oracle = oracle::enumerate_signed_rank(a, b);
    CHECK(r.exact);
    CHECK(r.p_value == Approx(oracle.p).epsilon(1e-15));
}

TEST_CASE("direction: a better baseline gives a large p-value") {
    const std::vector<double> a{0.9, 0.8, 0.7, 0.6, 0.5};
    const std::vector<double> b{0.1, 0.2, 0.3, 0.4, 0.45};
    const auto r = wilcoxon_signed_rank(a, b);
    CHECK(r.statistic == 0.0);
    CHECK(r.p_value == 1.0);
}
