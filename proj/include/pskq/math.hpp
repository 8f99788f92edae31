#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

#include "pskq/errors.hpp"

namespace pskq {

using cdouble = std::complex<double>;

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;
inline constexpr double half_pi = 0.5 * std::numbers::pi;

/// Wrap an angle to [-pi, pi).
inline double wrap_pi(double a) {
    double t = std::remainder(a, two_pi); // [-pi, pi], ties unspecified
    if (t >= pi) t -= two_pi;
    if (t < -pi) t += two_pi;
    return t;
}

/// Wrap an angle to [0, 2*pi).
inline double wrap_two_pi(double a) {
    double t = std::fmod(a, two_pi);
    if (t < 0.0) t += two_pi;
    if (t >= two_pi) t = 0.0;
    return t;
}

/// Principal argument in [-pi, pi); the branch point +pi maps to -pi.
inline double principal_arg(const cdouble& z) {
    return wrap_pi(std::arg(z));
}

/// Complementary CDF of the standard normal.
inline double gaussian_q(double x) {
    return 0.5 * std::erfc(x / std::numbers::sqrt2);
}

inline bool is_power_of_two(int v) {
    return v > 0 && (v & (v - 1)) == 0;
}

inline int log2_exact(int v) {
    int b = 0;
    while ((1 << b) < v) ++b;
    return b;
}

namespace detail {

// Lower regularized incomplete gamma by series expansion, for x < a + 1.
inline double gamma_p_series(double a, double x) {
    double ap = a;
    double sum = 1.0 / a;
    double del = sum;
    for (int i = 0; i < 500; ++i) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::abs(del) < std::abs(sum) * 1e-16)
            return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
    }
    throw DomainError("incomplete gamma series failed to converge");
}

// Upper regularized incomplete gamma by Lentz continued fraction, for x >= a + 1.
inline double gamma_q_cf(double a, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 500; ++i) {
        double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < 1e-16)
            return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
    }
    throw DomainError("incomplete gamma continued fraction failed to converge");
}

} // namespace detail

/// Lower regularized incomplete gamma P(a, x) = gamma(a, x) / Gamma(a).
inline double regularized_gamma_p(double a, double x) {
    if (a <= 0.0 || x < 0.0) throw DomainError("regularized_gamma_p: invalid arguments");
    if (x == 0.0) return 0.0;
    if (x < a + 1.0) return detail::gamma_p_series(a, x);
    return 1.0 - detail::gamma_q_cf(a, x);
}

/// Upper regularized incomplete gamma Q(a, x) = 1 - P(a, x).
inline double regularized_gamma_q(double a, double x) {
    if (a <= 0.0 || x < 0.0) throw DomainError("regularized_gamma_q: invalid arguments");
    if (x == 0.0) return 1.0;
    if (x < a + 1.0) return 1.0 - detail::gamma_p_series(a, x);
    return detail::gamma_q_cf(a, x);
}

/// Survival p-value of a chi-square statistic with `dof` degrees of freedom.
inline double chi_square_pvalue(double statistic, int dof) {
    if (dof <= 0) throw DomainError("chi_square_pvalue: dof must be positive");
    return regularized_gamma_q(0.5 * dof, 0.5 * statistic);
}

} // namespace pskq
