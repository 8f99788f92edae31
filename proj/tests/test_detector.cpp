#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <vector>

#include "pskq/detector.hpp"
#include "pskq/rng.hpp"

using namespace pskq;

namespace {

// Reference distance to a ray: dense scan of candidate foot points.
double ray_distance_brute(const cdouble& z, double psi, int steps = 200000) {
    const double reach = 4.0 * std::abs(z) + 1.0;
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= steps; ++i) {
        const double t = reach * i / steps;
        best = std::min(best, std::abs(z - std::polar(t, psi)));
    }
    return best;
}

cdouble random_point(RngStream& rng, double scale) {
    return cdouble{scale * rng.next_normal(), scale * rng.next_normal()};
}

} // namespace

TEST_CASE("ray distance closed form matches dense minimization") {
    RngStream rng(2718, 0);
    for (int it = 0; it < 150; ++it) {
        const cdouble z = random_point(rng, it % 3 == 0 ? 0.2 : 3.0);
        if (std::abs(z) < 1e-6) continue;
        const double psi = -pi + two_pi * rng.next_unit();
        const double exact = ray_distance(z, psi);
        const double brute = ray_distance_brute(z, psi);
        const double grid = 4.0 * std::abs(z) / 200000.0;
        CHECK(brute >= exact - 1e-12);
        CHECK(brute - exact <= grid + 1e-12);
    }
    CHECK(ray_distance(cdouble{0.0, 0.0}, 1.0) == 0.0);
}

TEST_CASE("geometric decisions at reference channels") {
    const PskConstellation qpsk(4);
    const PhaseQuantizer two_bit(2);

    CHECK(ml_detect_geometric(qpsk, two_bit, cdouble{1.0, 0.0}, 1.0, 2) == 2);
    CHECK(ml_detect_geometric(qpsk, two_bit, std::polar(1.0, pi / 18), 1.0, 2) == 2);

    // with one extra bit the rotated third symbol is recovered from the cone
    // whose bisector sits closest to it
    const PhaseQuantizer three_bit(3);
    const cdouble h = std::polar(1.0, 4 * pi / 18);
    const double target = principal_arg(h * qpsk.point(3));
    int nearest = 0;
    double best = two_pi;
    for (int k = 0; k < three_bit.region_count(); ++k) {
        const double gap = std::abs(wrap_pi(three_bit.bisector_angle(k) - target));
        if (gap < best) {
            best = gap;
            nearest = k;
        }
    }
    CHECK(ml_detect_geometric(qpsk, three_bit, h, 1.0, nearest) == 3);

    CHECK_THROWS_AS(ml_detect_geometric(qpsk, two_bit, h, 1.0, 4), IndexError);
}

TEST_CASE("decision invariances") {
    RngStream rng(9001, 0);
    for (int it = 0; it < 400; ++it) {
        const int order = 1 << (1 + static_cast<int>(rng.next_below(3)));
        const int bits = 1 + static_cast<int>(rng.next_below(4));
        const PskConstellation mod(order);
        const PhaseQuantizer quant(bits);
        const cdouble h = random_point(rng, 1.0);
        if (std::abs(h) < 1e-9) continue;
        const int k = static_cast<int>(rng.next_below(quant.region_count()));

        const int base = ml_detect_geometric(mod, quant, h, 1.0, k);

        // snr scaling
        CHECK(ml_detect_geometric(mod, quant, h, 1e-3, k) == base);
        CHECK(ml_detect_geometric(mod, quant, h, 1e3, k) == base);
        // magnitude of h
        CHECK(ml_detect_geometric(mod, quant, 5.0 * h, 1.0, k) == base);
        CHECK(ml_detect_geometric(mod, quant, 0.02 * h, 1.0, k) == base);
        // joint rotation of channel and cone index
        const cdouble step = std::polar(1.0, quant.sector_width());
        CHECK(ml_detect_geometric(mod, quant, step * h, 1.0,
                                  (k + 1) % quant.region_count()) == base);
    }
}

TEST_CASE("one extra quantizer bit recenters decisions near cone edges") {
    // Channel phase 40 deg pushes the fourth QPSK symbol (at 135 deg) to
    // 175 deg, right next to a 2-bit cone edge. If noise tips the received
    // sample into the adjacent cone, the 2-bit detector decodes the wrong
    // symbol while the 3-bit one still recovers it.
    const PskConstellation qpsk(4);
    const cdouble h = std::polar(1.0, 4 * pi / 18);
    const double rotated = principal_arg(h * qpsk.point(3));

    const PhaseQuantizer coarse(2);
    const int own_coarse = quantize(std::polar(1.0, rotated), coarse);
    const int spill_coarse = (own_coarse + 1) % coarse.region_count();
    CHECK(ml_detect_geometric(qpsk, coarse, h, 1.0, own_coarse) == 3);
    CHECK(ml_detect_geometric(qpsk, coarse, h, 1.0, spill_coarse) != 3);

    const PhaseQuantizer fine(3);
    const int own_fine = quantize(std::polar(1.0, rotated), fine);
    const int spill_fine = (own_fine + 1) % fine.region_count();
    CHECK(ml_detect_geometric(qpsk, fine, h, 1.0, own_fine) == 3);
    CHECK(ml_detect_geometric(qpsk, fine, h, 1.0, spill_fine) == 3);
}

TEST_CASE("exact decision ties do not occur for random channels") {
    RngStream rng(5150, 0);
    int ties = 0;
    for (int it = 0; it < 20000; ++it) {
        const PskConstellation mod(8);
        const PhaseQuantizer quant(3);
        const cdouble h = random_point(rng, 1.0);
        if (h == cdouble{0.0, 0.0}) continue;
        const int k = static_cast<int>(rng.next_below(quant.region_count()));
        const double ray = quant.bisector_angle(k);
        std::vector<double> dists;
        for (int i = 0; i < mod.order(); ++i)
            dists.push_back(ray_distance(h * mod.point(i), ray));
        std::sort(dists.begin(), dists.end());
        if (dists[0] == dists[1]) ++ties;
    }
    CHECK(ties == 0);
}

TEST_CASE("oracle likelihoods are uniform at zero snr") {
    const PskConstellation mod(4);
    for (int bits : {1, 2, 3}) {
        const DetectionContext ctx(mod, PhaseQuantizer(bits), cdouble{1.0, 0.0}, 0.0);
        const OracleDecision dec = ml_detect_oracle(ctx, 0, 1e-10);
        for (double lk : dec.likelihood)
            CHECK(lk == Catch::Approx(1.0 / (1 << bits)).margin(1e-9));
        CHECK(dec.near_tie);
    }
}

TEST_CASE("oracle likelihoods over all cones sum to one") {
    RngStream rng(77, 7);
    for (int bits : {1, 2, 3, 4, 5}) {
        const PhaseQuantizer quant(bits);
        for (int it = 0; it < 10; ++it) {
            const cdouble mean = random_point(rng, 2.0);
            double total = 0.0;
            for (int k = 0; k < quant.region_count(); ++k) {
                const AngularSector cone = quant.region(k);
                total += cone_mass(mean, cone.lower_angle, cone.width(), 1e-10);
            }
            CHECK(total == Catch::Approx(1.0).margin(1e-8));
        }
    }
}

TEST_CASE("geometric rule matches the density-integration oracle") {
    const double tol = 1e-9;
    RngStream rng(1234, 1);
    long checked = 0, disagreements = 0;
    for (int order : {2, 4, 8}) {
        const PskConstellation mod(order);
        for (int bits : {1, 2, 3, 4}) {
            const PhaseQuantizer quant(bits);
            for (double snr : {0.1, 1.0, 10.0}) {
                for (int it = 0; it < 12; ++it) {
                    cdouble h = random_point(rng, 1.0);
                    if (std::abs(h) < 1e-9) h = cdouble{0.3, 0.4};
                    const DetectionContext ctx(mod, quant, h, snr);
                    for (int k = 0; k < quant.region_count(); ++k) {
                        const OracleDecision dec = ml_detect_oracle(ctx, k, tol);
                        if (dec.near_tie) continue;
                        ++checked;
                        if (dec.symbol != ml_detect_geometric(ctx, k)) ++disagreements;
                    }
                }
            }
        }
    }
    INFO("compared " << checked << " decisions");
    CHECK(checked > 3000);
    CHECK(disagreements == 0);
}

TEST_CASE("detection context validation") {
    const PskConstellation mod(4);
    const PhaseQuantizer quant(2);
    CHECK_THROWS_AS(DetectionContext(mod, quant, cdouble{0.0, 0.0}, 1.0), DegenerateInput);
    CHECK_THROWS_AS(DetectionContext(mod, quant, cdouble{1.0, 0.0}, -1.0), ConfigError);
    const DetectionContext ctx(mod, quant, cdouble{1.0, 0.0}, 1.0);
    CHECK_THROWS_AS(ml_detect_oracle(ctx, 0, 0.0), ConfigError);
}
