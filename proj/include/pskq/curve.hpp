#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "pskq/errors.hpp"

namespace pskq {

/// One point of an average-SEP curve. `uncertainty` is a standard error for
/// simulated points and the quadrature tolerance for analytic ones.
struct SepPoint {
    double snr_db = 0.0;
    double value = 0.0;
    double uncertainty = 0.0;
    std::string method;
    std::uint64_t trials = 0;

    bool operator==(const SepPoint&) const = default;
};

using SepCurve = std::vector<SepPoint>;

/// Result of a log-log slope fit over a SEP curve.
struct DiversityFit {
    double slope = 0.0;
    double intercept = 0.0;
    double window_lo_db = 0.0;
    double window_hi_db = 0.0;
    double residual = 0.0; // max abs deviation of -log10(p) from the fit line
    int points_used = 0;
};

/// Least-squares slope of -log10(p) against log10(SNR) over the points whose
/// snr_db lies in [lo_db, hi_db]. Needs at least 4 usable (positive) points.
inline DiversityFit fit_diversity_order(const SepCurve& curve, double lo_db, double hi_db) {
    std::vector<double> xs, ys;
    for (const auto& pt : curve) {
        if (!(pt.snr_db >= lo_db && pt.snr_db <= hi_db)) continue;
        if (!(pt.value > 0.0) || !std::isfinite(pt.value) || !std::isfinite(pt.snr_db))
            continue;
        xs.push_back(pt.snr_db / 10.0); // log10 of the linear SNR
        ys.push_back(-std::log10(pt.value));
    }
    const int count = static_cast<int>(xs.size());
    if (count < 4)
        throw InsufficientData("fit_diversity_order: need >= 4 positive points in window");

    double sx = 0.0, sy = 0.0;
    for (int i = 0; i < count; ++i) {
        sx += xs[i];
        sy += ys[i];
    }
    const double mx = sx / count, my = sy / count;
    double sxx = 0.0, sxy = 0.0;
    for (int i = 0; i < count; ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    if (sxx == 0.0)
        throw InsufficientData("fit_diversity_order: window collapses to a single SNR");

    DiversityFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    fit.window_lo_db = lo_db;
    fit.window_hi_db = hi_db;
    fit.points_used = count;
    for (int i = 0; i < count; ++i)
        fit.residual = std::max(fit.residual,
                                std::abs(ys[i] - (fit.intercept + fit.slope * xs[i])));
    return fit;
}

} // namespace pskq
