#pragma once

#include <algorithm>
#include <cmath>
#include <string>

#include "pskq/errors.hpp"
#include "pskq/math.hpp"
#include "pskq/quadrature.hpp"

namespace pskq {

/// One average-SEP evaluation point: M-PSK order, quantizer bits, Nakagami
/// shape and linear SNR.
struct SepQuery {
    int M = 4;
    int n = 2;
    double m = 1.0;
    double snr = 1.0;

    void validate() const {
        if (M < 2 || !is_power_of_two(M))
            throw ConfigError("SepQuery: M must be a power of 2, >= 2 (got " +
                              std::to_string(M) + ")");
        if (n < 1 || n > 24)
            throw ConfigError("SepQuery: n must be in [1, 24] (got " + std::to_string(n) + ")");
        if (!(m >= 0.5))
            throw ConfigError("SepQuery: m must be >= 0.5 (got " + std::to_string(m) + ")");
        if (!(snr >= 0.0))
            throw ConfigError("SepQuery: snr must be >= 0 (got " + std::to_string(snr) + ")");
    }

    int min_bits() const { return log2_exact(M); }
    bool in_quadrature_regime() const { return n >= min_bits(); }
};

/// SNR-independent lower bound on the average SEP when the quantizer cannot
/// resolve all M symbols (n < log2 M): (M - 2^n)/2^n * p_min. Zero otherwise.
inline double error_floor(int M, int n, double p_min) {
    if (M < 2 || !is_power_of_two(M))
        throw ConfigError("error_floor: M must be a power of 2, >= 2");
    if (n < 1) throw ConfigError("error_floor: n must be >= 1");
    if (!(p_min > 0.0) || p_min > 1.0 / M)
        throw ConfigError("error_floor: p_min must lie in (0, 1/M]");
    if (n >= log2_exact(M)) return 0.0;
    const double regions = static_cast<double>(std::uint64_t{1} << n);
    return (M - regions) / regions * p_min;
}

namespace detail {

struct ThetaWindow {
    double lo, hi;
};

inline ThetaWindow sep_window(int M, int n) {
    const double half = pi / (std::uint64_t{1} << n);
    return {pi / M - half, pi / M + half};
}

// 2^{n-1} m^m / pi^2, the shared prefactor of the two-dimensional components.
inline double pair_prefactor(int n, double m) {
    return std::exp((n - 1) * std::log(2.0) + m * std::log(m)) / (pi * pi);
}

// Average over the fading magnitude of one Q-function factor, written as an
// angular integral: C * int_W int_0^{pi/2} (snr*trig^2(theta)/sin^2(beta) + m)^-m.
template <bool UseCos>
double craig_component(double lo, double hi, int n, double m, double snr,
                       const QuadratureSettings& s) {
    const double scale = pair_prefactor(n, m);
    auto outer = [&](double theta) {
        const double t = UseCos ? std::cos(theta) : std::sin(theta);
        const double t2 = t * t;
        auto inner = [&](double beta) {
            const double sb = std::sin(beta);
            return std::pow(snr * t2 / (sb * sb) + m, -m);
        };
        return integrate(inner, 0.0, half_pi, 0.25 * s.rel_tol, 1e-300, s.max_depth);
    };
    return scale * integrate(outer, lo, hi, s.rel_tol, 1e-300, s.max_depth);
}

// Average of the product of the two Q-function factors (triple integral).
inline double product_component(double lo, double hi, int n, double m, double snr,
                                const QuadratureSettings& s) {
    const double scale = pair_prefactor(n, m) / pi;
    auto outer = [&](double theta) {
        const double c2 = std::cos(theta) * std::cos(theta);
        const double s2 = std::sin(theta) * std::sin(theta);
        auto mid = [&](double beta) {
            const double sb2 = std::sin(beta) * std::sin(beta);
            auto inner = [&](double gamma) {
                const double sg2 = std::sin(gamma) * std::sin(gamma);
                return std::pow(snr * c2 / sb2 + snr * s2 / sg2 + m, -m);
            };
            return integrate(inner, 0.0, half_pi, 0.0625 * s.rel_tol_3d, 1e-300, s.max_depth);
        };
        return integrate(mid, 0.0, half_pi, 0.25 * s.rel_tol_3d, 1e-300, s.max_depth);
    };
    return scale * integrate(outer, lo, hi, s.rel_tol_3d, 1e-300, s.max_depth);
}

} // namespace detail

/// The residual term of the conditional SEP for wedge angles below a right
/// angle (M >= 8): a Gaussian-weighted integral over the in-phase noise of the
/// Q-function for the slanted decision boundary. Identically zero for M = 4.
inline double conditional_sep_wedge_term(double snr, double r, double theta, int M,
                                         const QuadratureSettings& s = {}) {
    if (M == 4) return 0.0;
    if (M < 8 || !is_power_of_two(M))
        throw ConfigError("conditional_sep_wedge_term: M must be a power of 2, >= 4");
    s.validate();
    const double wedge = two_pi / M;
    const double sec_w = 1.0 / std::cos(wedge);
    const double tan_w = std::tan(wedge);
    const double cap = s.trunc_sigma / std::numbers::sqrt2;
    const double base = std::sqrt(2.0 * snr) * r * sec_w * std::sin(wedge - theta);
    const double lo = std::max(-std::sqrt(snr) * r * std::cos(theta), -cap);
    auto f = [&](double w) {
        return gaussian_q(base + std::numbers::sqrt2 * tan_w * w) * std::exp(-w * w);
    };
    return integrate(f, lo, cap, s.rel_tol, 1e-300, s.max_depth) / std::sqrt(pi);
}

/// SEP conditioned on the fading realization, for a symbol whose rotated phase
/// offset inside its decision cone is theta in (0, 2*pi/M) and |h| = r.
inline double conditional_sep(double snr, double r, double theta, int M,
                              const QuadratureSettings& s = {}) {
    if (M < 4 || !is_power_of_two(M))
        throw ConfigError("conditional_sep: M must be a power of 2, >= 4");
    if (!(theta > 0.0) || !(theta < two_pi / M))
        throw DomainError("conditional_sep: theta must lie in (0, 2*pi/M)");
    if (!(r >= 0.0)) throw DomainError("conditional_sep: r must be >= 0");
    if (!(snr >= 0.0)) throw ConfigError("conditional_sep: snr must be >= 0");
    const double amp = std::sqrt(2.0 * snr) * r;
    const double qc = gaussian_q(amp * std::cos(theta));
    const double qs = gaussian_q(amp * std::sin(theta));
    return qc + qs - qc * qs + conditional_sep_wedge_term(snr, r, theta, M, s);
}

/// The four component integrals of the average SEP over Nakagami-m fading.
/// total() recomposes them as p1 + p2 - p3 + p4.
struct SepComponents {
    double p1 = 0.0, p2 = 0.0, p3 = 0.0, p4 = 0.0;
    double total() const { return p1 + p2 - p3 + p4; }
};

inline SepComponents sep_p_components(const SepQuery& q, const QuadratureSettings& s = {}) {
    q.validate();
    s.validate();
    if (!q.in_quadrature_regime())
        throw ConfigError("sep_p_components: requires n >= log2(M); below that regime only "
                          "the error floor and Monte Carlo estimates apply");

    SepComponents out;
    if (q.M == 2) {
        // Half-plane decision regions: only the sin-factor average survives.
        const auto w = detail::sep_window(2, q.n);
        out.p2 = detail::craig_component<false>(w.lo, w.hi, q.n, q.m, q.snr, s);
        return out;
    }

    const auto w = detail::sep_window(q.M, q.n);
    out.p1 = detail::craig_component<true>(w.lo, w.hi, q.n, q.m, q.snr, s);
    out.p2 = detail::craig_component<false>(w.lo, w.hi, q.n, q.m, q.snr, s);
    out.p3 = detail::product_component(w.lo, w.hi, q.n, q.m, q.snr, s);

    if (q.M >= 8) {
        // Wedge term averaged over the Nakagami magnitude density.
        const double wedge = two_pi / q.M;
        const double sec_w = 1.0 / std::cos(wedge);
        const double tan_w = std::tan(wedge);
        const double cap = s.trunc_sigma / std::numbers::sqrt2;
        const double r_max = std::sqrt(40.0 / q.m);
        const double scale =
            std::exp(q.n * std::log(2.0) + q.m * std::log(q.m) - std::lgamma(q.m)) /
            (pi * std::sqrt(pi));
        auto theta_term = [&](double theta) {
            const double geom = std::sqrt(2.0 * q.snr) * sec_w * std::sin(wedge - theta);
            const double wall = std::sqrt(q.snr) * std::cos(theta);
            auto radial = [&](double r) {
                const double base = geom * r;
                const double lo = std::max(-wall * r, -cap);
                auto gauss = [&](double v) {
                    return gaussian_q(base + std::numbers::sqrt2 * tan_w * v) *
                           std::exp(-v * v);
                };
                const double wint =
                    integrate(gauss, lo, cap, 0.0625 * s.rel_tol_3d, 1e-300, s.max_depth);
                return wint * std::pow(r, 2.0 * q.m - 1.0) * std::exp(-q.m * r * r);
            };
            return integrate(radial, 0.0, r_max, 0.25 * s.rel_tol_3d, 1e-300, s.max_depth);
        };
        out.p4 = scale * integrate(theta_term, w.lo, w.hi, s.rel_tol_3d, 1e-300, s.max_depth);
    }
    return out;
}

/// Average SEP of the geometric ML detector under Nakagami-m fading, by
/// adaptive quadrature of the component integrals. Valid for n >= log2 M.
inline double sep_exact(const SepQuery& q, const QuadratureSettings& s = {}) {
    const SepComponents c = sep_p_components(q, s);
    return std::clamp(c.total(), 0.0, 1.0);
}

struct SepBounds {
    double lower = 0.0;
    double upper = 0.0;
};

/// Closed sandwich around the exact average SEP: lower = p1 + p2/2,
/// upper = p1 + 2*p2. Defined for M >= 4 in the quadrature regime.
inline SepBounds sep_bounds(const SepQuery& q, const QuadratureSettings& s = {}) {
    q.validate();
    if (q.M < 4)
        throw ConfigError("sep_bounds: defined for M >= 4");
    if (!q.in_quadrature_regime())
        throw ConfigError("sep_bounds: requires n >= log2(M)");
    const auto w = detail::sep_window(q.M, q.n);
    const double p1 = detail::craig_component<true>(w.lo, w.hi, q.n, q.m, q.snr, s);
    const double p2 = detail::craig_component<false>(w.lo, w.hi, q.n, q.m, q.snr, s);
    return {p1 + 0.5 * p2, p1 + 2.0 * p2};
}

/// QPSK over Rayleigh fading with an n-bit quantizer (n >= 2), via the
/// two-term arctan integral reduction.
inline double sep_qpsk_rayleigh(double snr, int n, const QuadratureSettings& s = {}) {
    if (n < 2 || n > 24) throw ConfigError("sep_qpsk_rayleigh: n must be in [2, 24]");
    if (!(snr >= 0.0)) throw ConfigError("sep_qpsk_rayleigh: snr must be >= 0");
    s.validate();
    // The n = 2 cone spans a half turn, where the arctan factors saturate.
    const bool saturated = (n == 2);
    const double tan_half = saturated ? 0.0 : std::tan(pi / (std::uint64_t{1} << (n - 1)));

    auto single = [&](double beta) {
        const double sb = std::sin(beta);
        const double root = std::sqrt(snr + sb * sb);
        const double ang =
            saturated ? half_pi
                      : std::atan(2.0 * sb * root / (snr + 2.0 * sb * sb) * tan_half);
        return sb / root * ang;
    };
    const double first = static_cast<double>(std::uint64_t{1} << n) / (pi * pi) *
                         integrate(single, 0.0, half_pi, s.rel_tol, 1e-300, s.max_depth);

    auto outer = [&](double beta) {
        const double sb = std::sin(beta);
        const double rootb = std::sqrt(snr + sb * sb);
        auto inner = [&](double gamma) {
            const double sg = std::sin(gamma);
            const double rootg = std::sqrt(snr + sg * sg);
            const double ang =
                saturated
                    ? half_pi
                    : std::atan(2.0 * sb * sg * rootb * rootg /
                                (snr * (sb * sb + sg * sg) + 2.0 * sb * sb * sg * sg) *
                                tan_half);
            return sb * sg / (rootb * rootg) * ang;
        };
        return integrate(inner, 0.0, half_pi, 0.25 * s.rel_tol, 1e-300, s.max_depth);
    };
    const double second = static_cast<double>(std::uint64_t{1} << (n - 1)) / (pi * pi * pi) *
                          integrate(outer, 0.0, half_pi, s.rel_tol, 1e-300, s.max_depth);

    return std::clamp(first - second, 0.0, 1.0);
}

/// Closed form for QPSK, Rayleigh fading, 2-bit quantization:
/// (2/pi) arctan(1/sqrt(snr)) - ((1/pi) arctan(1/sqrt(snr)))^2.
inline double sep_qpsk_rayleigh_2bit_closed(double snr) {
    if (!(snr >= 0.0)) throw ConfigError("sep_qpsk_rayleigh_2bit_closed: snr must be >= 0");
    const double t = std::atan(1.0 / std::sqrt(snr)); // pi/2 at snr = 0
    const double u = t / pi;
    return u * (2.0 - u);
}

/// Leading high-SNR term of the QPSK Rayleigh average SEP with n-bit
/// quantization: decay exponent 1/2 for n = 2, 1 for n >= 3.
inline double asymptotic_sep_qpsk(double snr, int n) {
    if (!(snr > 0.0)) throw ConfigError("asymptotic_sep_qpsk: snr must be > 0");
    if (n < 2 || n > 24) throw ConfigError("asymptotic_sep_qpsk: n must be in [2, 24]");
    if (n == 2) return 2.0 / pi / std::sqrt(snr);
    const double levels = static_cast<double>(std::uint64_t{1} << (n - 1));
    return levels * (4.0 * pi - 1.0) / (pi * pi * pi) * std::tan(pi / levels) / snr;
}

/// High-SNR QPSK Rayleigh average SEP without quantization (the n -> infinity
/// limit of asymptotic_sep_qpsk).
inline double asymptotic_sep_qpsk_unquantized(double snr) {
    if (!(snr > 0.0))
        throw ConfigError("asymptotic_sep_qpsk_unquantized: snr must be > 0");
    return (4.0 * pi - 1.0) / (pi * pi) / snr;
}

/// dB increase of the asymptotic QPSK Rayleigh SEP with n-bit quantization
/// relative to unquantized reception. SNR-dependent only for n = 2.
inline double quantization_sep_penalty_db(double snr, int n) {
    if (n < 2 || n > 24)
        throw ConfigError("quantization_sep_penalty_db: n must be in [2, 24]");
    if (n == 2) {
        if (!(snr > 0.0)) throw ConfigError("quantization_sep_penalty_db: snr must be > 0");
        return 10.0 * std::log10(2.0 * pi / (4.0 * pi - 1.0) * std::sqrt(snr));
    }
    const double levels = static_cast<double>(std::uint64_t{1} << (n - 1));
    return 10.0 * std::log10(levels / pi * std::tan(pi / levels));
}

/// dB of extra transmit power an (n-1)-bit receiver needs to match the
/// asymptotic SEP of an n-bit one. For n = 3 the reference is the 2-bit SNR
/// achieving the target SEP; for n >= 4 the ratio is SNR-independent.
inline double quantization_power_penalty_db(double snr_two_bits, int n) {
    if (n < 3 || n > 24)
        throw ConfigError("quantization_power_penalty_db: n must be in [3, 24]");
    if (n == 3) {
        if (!(snr_two_bits > 0.0))
            throw ConfigError("quantization_power_penalty_db: snr_two_bits must be > 0");
        return 10.0 * std::log10(pi * pi / (2.0 * (4.0 * pi - 1.0)) *
                                 std::sqrt(snr_two_bits));
    }
    const double coarse = std::tan(pi / (std::uint64_t{1} << (n - 2)));
    const double fine = std::tan(pi / (std::uint64_t{1} << (n - 1)));
    return 10.0 * std::log10(0.5 * coarse / fine);
}

/// High-SNR decay exponent of the average SEP: m with one bit of margin over
/// log2 M, 1/2 at exactly log2 M, 0 below it (error-floor regime).
inline double diversity_order(int M, int n, double m) {
    if (M < 2 || !is_power_of_two(M))
        throw ConfigError("diversity_order: M must be a power of 2, >= 2");
    if (n < 1) throw ConfigError("diversity_order: n must be >= 1");
    if (!(m >= 0.5)) throw ConfigError("diversity_order: m must be >= 0.5");
    const int min_bits = log2_exact(M);
    if (n < min_bits) return 0.0;
    if (n == min_bits) return 0.5;
    return m;
}

} // namespace pskq
