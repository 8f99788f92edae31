#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "pskq/constellation.hpp"
#include "pskq/math.hpp"
#include "pskq/quadrature.hpp"
#include "pskq/quantizer.hpp"

namespace pskq {

/// Distance from a point to the half-line from the origin at angle `ray_angle`.
/// For angular offsets beyond a right angle the nearest point of the ray is
/// the origin itself, so the distance degenerates to |z|.
inline double ray_distance(const cdouble& z, double ray_angle) {
    const double mag = std::abs(z);
    if (mag == 0.0) return 0.0;
    const double off = wrap_pi(std::arg(z) - ray_angle);
    return std::abs(off) <= half_pi ? mag * std::abs(std::sin(off)) : mag;
}

/// Channel snapshot the detector conditions on.
struct DetectionContext {
    PskConstellation mod;
    PhaseQuantizer quant;
    cdouble h;
    double snr = 1.0;

    DetectionContext(PskConstellation mod_, PhaseQuantizer quant_, cdouble h_, double snr_)
        : mod(std::move(mod_)), quant(std::move(quant_)), h(h_), snr(snr_) {
        if (h == cdouble{0.0, 0.0})
            throw DegenerateInput("DetectionContext: channel coefficient must be nonzero");
        if (!(snr >= 0.0)) throw ConfigError("DetectionContext: snr must be >= 0");
    }
};

/// Maximum-likelihood decision for quantizer output k: the symbol whose
/// channel-rotated constellation point is nearest the bisector ray of cone k.
/// Ties break to the smallest symbol index.
inline int ml_detect_geometric(const PskConstellation& mod, const PhaseQuantizer& quant,
                               const cdouble& h, double snr, int k) {
    const double ray = quant.bisector_angle(k);
    const double scale = std::sqrt(snr);
    int best = 0;
    double best_dist = std::numeric_limits<double>::infinity();
    for (int i = 0; i < mod.order(); ++i) {
        const double d = ray_distance(scale * h * mod.point(i), ray);
        if (d < best_dist) {
            best_dist = d;
            best = i;
        }
    }
    return best;
}

inline int ml_detect_geometric(const DetectionContext& ctx, int k) {
    return ml_detect_geometric(ctx.mod, ctx.quant, ctx.h, ctx.snr, k);
}

/// Probability that a unit-variance proper complex Gaussian centered at `mean`
/// lands in the angular sector [lo, lo + width). The radial part of the polar
/// integral has a closed form, leaving one adaptive sweep over the angle.
inline double cone_mass(const cdouble& mean, double lo, double width, double rel_tol = 1e-9,
                        int max_depth = 48) {
    if (mean == cdouble{0.0, 0.0}) return width / two_pi;
    const double mag = std::abs(mean);
    const double dir = std::arg(mean);
    const double mag2 = mag * mag;
    const double flat = std::exp(-mag2) / two_pi;
    const auto profile = [&](double phi) {
        const double a = mag * std::cos(phi - dir);
        return flat + a / (2.0 * std::sqrt(pi)) * std::exp(a * a - mag2) * std::erfc(-a);
    };
    return integrate(profile, lo, lo + width, rel_tol, 1e-300, max_depth);
}

struct OracleDecision {
    int symbol = 0;
    std::vector<double> likelihood; // Pr(quantizer outputs k | symbol i), one per i
    bool near_tie = false;          // top-two gap within 10x the quadrature tolerance
};

/// Reference ML decision that integrates the received-signal density over the
/// observed cone for every candidate symbol. Slower than the geometric rule
/// but free of geometric reasoning; used to validate it.
inline OracleDecision ml_detect_oracle(const DetectionContext& ctx, int k,
                                       double rel_tol = 1e-9) {
    if (!(rel_tol > 0.0)) throw ConfigError("ml_detect_oracle: tolerance must be positive");
    const AngularSector cone = ctx.quant.region(k);
    const double scale = std::sqrt(ctx.snr);

    OracleDecision out;
    out.likelihood.resize(ctx.mod.order());
    for (int i = 0; i < ctx.mod.order(); ++i) {
        const cdouble mean = scale * ctx.h * ctx.mod.point(i);
        out.likelihood[i] = cone_mass(mean, cone.lower_angle, cone.width(), rel_tol);
    }

    double best = -1.0, second = -1.0;
    for (int i = 0; i < ctx.mod.order(); ++i) {
        if (out.likelihood[i] > best) {
            second = best;
            best = out.likelihood[i];
            out.symbol = i;
        } else if (out.likelihood[i] > second) {
            second = out.likelihood[i];
        }
    }
    out.near_tie = ctx.mod.order() > 1 && (best - second) <= 10.0 * rel_tol;
    return out;
}

} // namespace pskq
