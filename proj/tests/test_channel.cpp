#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <vector>

#include "pskq/channel.hpp"
#include "pskq/math.hpp"
#include "pskq/quadrature.hpp"
#include "pskq/rng.hpp"

using namespace pskq;

namespace {

// Kolmogorov-Smirnov distance between samples and a CDF.
template <typename Cdf>
double ks_statistic(std::vector<double> samples, Cdf cdf) {
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    double d = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double f = cdf(samples[i]);
        d = std::max(d, std::abs(f - i / n));
        d = std::max(d, std::abs((i + 1) / n - f));
    }
    return d;
}

} // namespace

TEST_CASE("identical (seed, stream) reproduces identical draws") {
    RngStream a(123456789, 42), b(123456789, 42);
    for (int i = 0; i < 1000; ++i) REQUIRE(a.next_u64() == b.next_u64());
    RngStream c(123456789, 42), d(123456789, 42);
    FadingSpec spec{1.7};
    for (int i = 0; i < 1000; ++i) {
        REQUIRE(sample_fading(spec, c) == sample_fading(spec, d));
        REQUIRE(sample_noise(c) == sample_noise(d));
    }
    RngStream e(123456789, 43);
    CHECK(a.next_u64() != e.next_u64());
}

TEST_CASE("fading magnitude has unit power") {
    for (double m : {0.5, 1.0, 2.7}) {
        RngStream rng(7, 0);
        FadingSpec spec{m};
        double acc = 0.0;
        const int n = 1'000'000;
        for (int i = 0; i < n; ++i) acc += std::norm(sample_fading(spec, rng));
        CHECK(acc / n == Catch::Approx(1.0).margin(0.01));
    }
}

TEST_CASE("noise moments") {
    RngStream rng(8, 1);
    const int n = 1'000'000;
    double sum_re = 0.0, sum_im = 0.0, sum_re2 = 0.0, sum_abs2 = 0.0;
    for (int i = 0; i < n; ++i) {
        const cdouble w = sample_noise(rng);
        sum_re += w.real();
        sum_im += w.imag();
        sum_re2 += w.real() * w.real();
        sum_abs2 += std::norm(w);
    }
    CHECK(sum_re / n == Catch::Approx(0.0).margin(3e-3));
    CHECK(sum_im / n == Catch::Approx(0.0).margin(3e-3));
    CHECK(sum_re2 / n == Catch::Approx(0.5).margin(0.01));
    CHECK(sum_abs2 / n == Catch::Approx(1.0).margin(0.01));
}

TEST_CASE("magnitude pdf closed forms") {
    for (double r : {0.1, 0.5, 1.0, 2.0}) {
        CHECK(nakagami_magnitude_pdf(r, 1.0) ==
              Catch::Approx(2.0 * r * std::exp(-r * r)).epsilon(1e-13));
        CHECK(nakagami_magnitude_pdf(r, 0.5) ==
              Catch::Approx(std::sqrt(2.0 / pi) * std::exp(-r * r / 2.0)).epsilon(1e-13));
    }
    CHECK_THROWS_AS(nakagami_magnitude_pdf(-0.1, 1.0), DomainError);
    CHECK_THROWS_AS(nakagami_magnitude_pdf(1.0, 0.3), ConfigError);
    FadingSpec bad{0.2};
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    RngStream rng(1, 1);
    CHECK_THROWS_AS(sample_fading(bad, rng), ConfigError);
}

TEST_CASE("magnitude pdf integrates to one") {
    for (double m : {0.5, 1.0, 2.0, 4.0}) {
        const double hi = std::sqrt(70.0 / m);
        const double total = integrate(
            [m](double r) { return nakagami_magnitude_pdf(r, m); }, 0.0, hi, 1e-12);
        CHECK(total == Catch::Approx(1.0).margin(1e-10));
    }
}

TEST_CASE("fading power follows the gamma law (KS)") {
    const int n = 1'000'000;
    for (double m : {0.5, 1.0, 2.0}) {
        RngStream rng(31337, 5);
        FadingSpec spec{m};
        std::vector<double> power(n);
        for (int i = 0; i < n; ++i) power[i] = std::norm(sample_fading(spec, rng));
        const double d =
            ks_statistic(std::move(power),
                         [m](double x) { return regularized_gamma_p(m, m * x); });
        INFO("m = " << m << " KS = " << d);
        CHECK(d < 0.002);
    }
}

TEST_CASE("fading phase is uniform (chi-square)") {
    const int n = 1'000'000;
    const int bins = 64;
    RngStream rng(99, 3);
    FadingSpec spec{1.0};
    std::vector<int> counts(bins, 0);
    for (int i = 0; i < n; ++i) {
        const double phase = principal_arg(sample_fading(spec, rng));
        int b = static_cast<int>((phase + pi) / two_pi * bins);
        b = std::clamp(b, 0, bins - 1);
        ++counts[b];
    }
    const double expected = static_cast<double>(n) / bins;
    double stat = 0.0;
    for (int c : counts) stat += (c - expected) * (c - expected) / expected;
    const double pval = chi_square_pvalue(stat, bins - 1);
    INFO("chi-square " << stat << " p = " << pval);
    CHECK(pval > 0.001);
}

TEST_CASE("substreams are uncorrelated") {
    const int n = 100'000;
    RngStream s1(424242, 1), s2(424242, 2);
    std::vector<double> a(n), b(n);
    for (int i = 0; i < n; ++i) {
        a[i] = s1.next_normal();
        b[i] = s2.next_normal();
    }
    for (int lag : {0, 1, 7}) {
        double acc = 0.0;
        for (int i = 0; i + lag < n; ++i) acc += a[i] * b[i + lag];
        const double corr = acc / (n - lag);
        INFO("lag " << lag);
        CHECK(std::abs(corr) < 0.01);
    }
}

TEST_CASE("gamma sampler moments for fractional shapes") {
    // mean = shape, variance = shape for Gamma(shape, 1)
    for (double shape : {0.5, 0.9, 1.0, 3.3}) {
        RngStream rng(17, 11);
        const int n = 400'000;
        double s1 = 0.0, s2 = 0.0;
        for (int i = 0; i < n; ++i) {
            const double g = rng.next_gamma(shape);
            s1 += g;
            s2 += g * g;
        }
        const double mean = s1 / n;
        const double var = s2 / n - mean * mean;
        CHECK(mean == Catch::Approx(shape).margin(0.02 * std::max(1.0, shape)));
        CHECK(var == Catch::Approx(shape).margin(0.05 * std::max(1.0, shape)));
    }
    RngStream rng(17, 11);
    CHECK_THROWS_AS(rng.next_gamma(0.0), DomainError);
}
