#pragma once

#include <cmath>
#include <complex>
#include <string>

#include "pskq/errors.hpp"
#include "pskq/math.hpp"
#include "pskq/rng.hpp"

namespace pskq {

/// Nakagami-m magnitude fading, unit power (spread parameter fixed to 1),
/// circularly symmetric phase.
struct FadingSpec {
    double shape_m = 1.0;

    void validate() const {
        if (!(shape_m >= 0.5))
            throw ConfigError("FadingSpec: shape m must be >= 0.5 (got " +
                              std::to_string(shape_m) + ")");
    }
};

/// Draw a fading coefficient: |h|^2 ~ Gamma(m, 1/m) so E|h|^2 = 1, and
/// Arg(h) uniform on [-pi, pi) independent of the magnitude.
inline cdouble sample_fading(const FadingSpec& spec, RngStream& rng) {
    spec.validate();
    const double power = rng.next_gamma(spec.shape_m) / spec.shape_m;
    const double magnitude = std::sqrt(power);
    const double phase = -pi + two_pi * rng.next_unit();
    return cdouble{magnitude * std::cos(phase), magnitude * std::sin(phase)};
}

/// Zero-mean unit-variance circularly symmetric complex Gaussian sample
/// (variance 1/2 per axis).
inline cdouble sample_noise(RngStream& rng) {
    constexpr double axis_sigma = 0.70710678118654752440; // 1/sqrt(2)
    return cdouble{axis_sigma * rng.next_normal(), axis_sigma * rng.next_normal()};
}

/// Density of the Nakagami-m magnitude with unit spread:
/// f(r) = 2 m^m / Gamma(m) * r^(2m-1) * exp(-m r^2), r >= 0.
inline double nakagami_magnitude_pdf(double r, double m) {
    if (!(m >= 0.5)) throw ConfigError("nakagami_magnitude_pdf: shape m must be >= 0.5");
    if (r < 0.0) throw DomainError("nakagami_magnitude_pdf: magnitude must be >= 0");
    if (r == 0.0)
        return m == 0.5 ? std::sqrt(2.0 / pi) : 0.0;
    const double log_f = std::log(2.0) + m * std::log(m) - std::lgamma(m) +
                         (2.0 * m - 1.0) * std::log(r) - m * r * r;
    return std::exp(log_f);
}

} // namespace pskq
