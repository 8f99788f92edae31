#pragma once

#include <complex>
#include <string>
#include <vector>

#include "pskq/errors.hpp"
#include "pskq/math.hpp"

namespace pskq {

/// Unit-energy M-PSK constellation with phases pi*((2i+1)/M - 1), i in [0, M).
/// All phases lie in [-pi, pi) and adjacent points are 2*pi/M apart.
class PskConstellation {
public:
    explicit PskConstellation(int order) : order_(order) {
        if (order < 2 || !is_power_of_two(order))
            throw ConfigError("PskConstellation: order must be a power of 2, >= 2 (got " +
                              std::to_string(order) + ")");
        angles_.reserve(order);
        points_.reserve(order);
        for (int i = 0; i < order; ++i) {
            const double a = pi * ((2.0 * i + 1.0) / order - 1.0);
            angles_.push_back(a);
            points_.emplace_back(std::cos(a), std::sin(a));
        }
    }

    int order() const { return order_; }
    int bits_per_symbol() const { return log2_exact(order_); }

    double angle(int i) const {
        check_index(i);
        return angles_[i];
    }

    cdouble point(int i) const {
        check_index(i);
        return points_[i];
    }

    const std::vector<double>& angles() const { return angles_; }
    const std::vector<cdouble>& points() const { return points_; }

private:
    void check_index(int i) const {
        if (i < 0 || i >= order_)
            throw IndexError("PskConstellation: symbol index " + std::to_string(i) +
                             " out of range [0, " + std::to_string(order_) + ")");
    }

    int order_;
    std::vector<double> angles_;
    std::vector<cdouble> points_;
};

inline PskConstellation build_constellation(int order) { return PskConstellation(order); }

} // namespace pskq
