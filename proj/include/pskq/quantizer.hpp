#pragma once

#include <algorithm>
#include <complex>
#include <string>

#include "pskq/errors.hpp"
#include "pskq/math.hpp"

namespace pskq {

/// One angular sector of the complex plane, half-open on the circle:
/// phases p with wrap(p - lower) in [0, width). Width is in (0, 2*pi].
struct AngularSector {
    double lower_angle; // in [-pi, pi)
    double upper_angle; // lower_angle + width, may exceed pi

    double width() const { return upper_angle - lower_angle; }

    bool contains(double phase) const {
        const double off = wrap_two_pi(phase - lower_angle);
        return off < width();
    }

    bool contains(const cdouble& z) const { return contains(principal_arg(z)); }
};

/// n-bit phase quantizer: 2^n equal convex cones indexed so that region k
/// covers Arg(z) + pi in [k*w, (k+1)*w) with w = 2*pi/2^n. Points exactly on
/// a boundary belong to the higher-indexed region (half-open convention).
class PhaseQuantizer {
public:
    explicit PhaseQuantizer(int bits) : bits_(bits) {
        if (bits < 1)
            throw ConfigError("PhaseQuantizer: need at least 1 bit (got " +
                              std::to_string(bits) + ")");
        if (bits > 24)
            throw ConfigError("PhaseQuantizer: more than 24 bits is not supported");
    }

    int bits() const { return bits_; }
    int region_count() const { return 1 << bits_; }
    double sector_width() const { return two_pi / region_count(); }

    AngularSector region(int k) const {
        check_index(k);
        const double lo = sector_width() * k - pi;
        return AngularSector{lo, lo + sector_width()};
    }

    /// Phase of the half-line bisecting region k: pi*(2k+1)/2^n - pi.
    double bisector_angle(int k) const {
        check_index(k);
        return pi * (2.0 * k + 1.0) / region_count() - pi;
    }

private:
    void check_index(int k) const {
        if (k < 0 || k >= region_count())
            throw IndexError("PhaseQuantizer: region index " + std::to_string(k) +
                             " out of range [0, " + std::to_string(region_count()) + ")");
    }

    int bits_;
};

/// Region index of a nonzero sample: floor((Arg(y) + pi) / sector_width).
inline int quantize(const cdouble& y, const PhaseQuantizer& q) {
    if (y == cdouble{0.0, 0.0})
        throw DegenerateInput("quantize: phase of 0 is undefined");
    const double shifted = principal_arg(y) + pi; // [0, 2*pi)
    int k = static_cast<int>(shifted / q.sector_width());
    // shifted/width can round up to 2^n when Arg(y) sits one ulp below pi
    return std::min(k, q.region_count() - 1);
}

} // namespace pskq
