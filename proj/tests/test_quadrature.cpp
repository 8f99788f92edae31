#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "pskq/math.hpp"
#include "pskq/quadrature.hpp"

using namespace pskq;

TEST_CASE("integrates elementary functions to tight tolerance") {
    const double s = integrate([](double x) { return std::sin(x); }, 0.0, pi, 1e-12);
    CHECK(s == Catch::Approx(2.0).epsilon(1e-11));

    const double g = integrate([](double x) { return std::exp(-x * x); }, -8.0, 8.0, 1e-12);
    CHECK(g == Catch::Approx(std::sqrt(pi)).epsilon(1e-11));

    const double q = integrate([](double x) { return std::exp(-x * x / 2.0); }, 1.0, 12.0,
                               1e-12) /
                     std::sqrt(two_pi);
    CHECK(q == Catch::Approx(gaussian_q(1.0)).epsilon(1e-10));
}

TEST_CASE("adapts to sharply peaked integrands") {
    // narrow Gaussian far from the interval center
    const double v = integrate(
        [](double x) { return std::exp(-1e6 * (x - 0.8125) * (x - 0.8125)); }, 0.0, 1.0,
        1e-10);
    CHECK(v == Catch::Approx(std::sqrt(pi) / 1e3).epsilon(1e-8));
}

TEST_CASE("reversed limits flip the sign") {
    const double fwd = integrate([](double x) { return x * x; }, 0.0, 2.0, 1e-12);
    const double rev = integrate([](double x) { return x * x; }, 2.0, 0.0, 1e-12);
    CHECK(fwd == Catch::Approx(8.0 / 3.0));
    CHECK(rev == Catch::Approx(-8.0 / 3.0));
    CHECK(integrate([](double x) { return x; }, 1.0, 1.0, 1e-12) == 0.0);
}

TEST_CASE("throws when the subdivision budget cannot reach tolerance") {
    auto rough = [](double x) { return std::sqrt(std::abs(x - 0.377)); };
    CHECK_THROWS_AS(integrate(rough, 0.0, 1.0, 1e-15, 0.0, 3), QuadratureError);
}

TEST_CASE("settings validation") {
    QuadratureSettings s;
    CHECK_NOTHROW(s.validate());
    s.rel_tol = 0.0;
    CHECK_THROWS_AS(s.validate(), ConfigError);
    s = {};
    s.trunc_sigma = 4.0;
    CHECK_THROWS_AS(s.validate(), ConfigError);
    s = {};
    s.max_depth = 0;
    CHECK_THROWS_AS(s.validate(), ConfigError);
}

TEST_CASE("regularized incomplete gamma matches known closed forms") {
    // P(1, x) = 1 - exp(-x)
    for (double x : {0.1, 0.5, 1.0, 3.0, 10.0})
        CHECK(regularized_gamma_p(1.0, x) == Catch::Approx(1.0 - std::exp(-x)).epsilon(1e-12));
    // P(1/2, x) = erf(sqrt(x))
    for (double x : {0.2, 1.0, 4.0})
        CHECK(regularized_gamma_p(0.5, x) ==
              Catch::Approx(std::erf(std::sqrt(x))).epsilon(1e-12));
    // P(2, x) = 1 - exp(-x)(1 + x)
    for (double x : {0.3, 2.0, 7.0})
        CHECK(regularized_gamma_p(2.0, x) ==
              Catch::Approx(1.0 - std::exp(-x) * (1.0 + x)).epsilon(1e-12));
    for (double x : {0.2, 1.0, 5.0})
        CHECK(regularized_gamma_p(1.7, x) + regularized_gamma_q(1.7, x) ==
              Catch::Approx(1.0).epsilon(1e-13));
    CHECK_THROWS_AS(regularized_gamma_p(-1.0, 1.0), DomainError);
    CHECK_THROWS_AS(regularized_gamma_p(1.0, -1.0), DomainError);
}
