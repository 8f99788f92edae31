#pragma once

#include <cmath>
#include <queue>
#include <string>
#include <vector>

#include "pskq/errors.hpp"

namespace pskq {

/// Tolerances for the adaptive integrators. rel_tol drives 1-D and 2-D
/// integrals, rel_tol_3d the triple integrals; trunc_sigma controls where
/// semi-infinite Gaussian-weighted axes are cut.
struct QuadratureSettings {
    double rel_tol = 1e-9;
    double rel_tol_3d = 1e-7;
    double abs_tol = 0.0;
    int max_depth = 48;
    double trunc_sigma = 8.0;

    void validate() const {
        if (!(rel_tol > 0.0) || !(rel_tol_3d > 0.0))
            throw ConfigError("QuadratureSettings: tolerances must be positive");
        if (!(trunc_sigma >= 6.0))
            throw ConfigError("QuadratureSettings: trunc_sigma must be >= 6");
        if (max_depth < 1)
            throw ConfigError("QuadratureSettings: max_depth must be >= 1");
    }
};

namespace detail {

// Gauss-Kronrod 7/15 abscissae and weights on [-1, 1].
inline constexpr double gk_nodes[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};

inline constexpr double k15_weights[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};

inline constexpr double g7_weights[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

template <typename F>
void gk15(F& f, double a, double b, double& value, double& error) {
    const double center = 0.5 * (a + b);
    const double halflen = 0.5 * (b - a);
    double fv[15];
    for (int i = 0; i < 7; ++i) {
        fv[i] = f(center - halflen * gk_nodes[i]);
        fv[14 - i] = f(center + halflen * gk_nodes[i]);
    }
    fv[7] = f(center);
    double k15 = k15_weights[7] * fv[7];
    double g7 = g7_weights[3] * fv[7];
    for (int i = 0; i < 7; ++i)
        k15 += k15_weights[i] * (fv[i] + fv[14 - i]);
    for (int i = 0; i < 4; ++i) {
        const int j = 2 * i + 1;
        if (j < 7) g7 += g7_weights[i] * (fv[j] + fv[14 - j]);
    }
    value = k15 * halflen;
    error = std::abs((k15 - g7) * halflen);
}

struct Panel {
    double a, b, value, error;
    int depth;
    bool operator<(const Panel& o) const { return error < o.error; }
};

} // namespace detail

/// Globally adaptive Gauss-Kronrod integration of f over [a, b].
/// Subdivides the interval with the largest error estimate until the total
/// estimated error satisfies max(abs_tol, rel_tol*|I|). Throws
/// QuadratureError when the tolerance is unreachable within max_depth
/// bisections (or a hard panel budget).
template <typename F>
double integrate(F&& f, double a, double b, double rel_tol, double abs_tol = 0.0,
                 int max_depth = 48) {
    if (a == b) return 0.0;
    double sign = 1.0;
    if (b < a) {
        std::swap(a, b);
        sign = -1.0;
    }

    std::priority_queue<detail::Panel> panels;
    double value, error;
    detail::gk15(f, a, b, value, error);
    panels.push({a, b, value, error, 0});
    double total_value = value;
    double total_error = error;

    const int max_panels = 20000;
    int used = 1;
    while (total_error > std::max(abs_tol, rel_tol * std::abs(total_value))) {
        detail::Panel worst = panels.top();
        if (worst.depth >= max_depth || used >= max_panels)
            throw QuadratureError("integrate: tolerance not reached (error estimate " +
                                  std::to_string(total_error) + ")");
        panels.pop();
        total_value -= worst.value;
        total_error -= worst.error;
        const double mid = 0.5 * (worst.a + worst.b);
        detail::Panel left{worst.a, mid, 0.0, 0.0, worst.depth + 1};
        detail::Panel right{mid, worst.b, 0.0, 0.0, worst.depth + 1};
        detail::gk15(f, left.a, left.b, left.value, left.error);
        detail::gk15(f, right.a, right.b, right.value, right.error);
        total_value += left.value + right.value;
        total_error += left.error + right.error;
        panels.push(left);
        panels.push(right);
        ++used;
    }
    return sign * total_value;
}

} // namespace pskq
