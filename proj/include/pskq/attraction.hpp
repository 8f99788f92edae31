#pragma once

#include <complex>
#include <string>

#include "pskq/constellation.hpp"
#include "pskq/quantizer.hpp"

namespace pskq {

/// Index of the channel-phase cell containing h. Cells have the same width as
/// the quantizer cones but are shifted by half a cone, so the middle cell
/// (index 2^{n-1}) covers Arg(h) in [-pi/2^n, pi/2^n) and cell 0 wraps around
/// the branch cut at +-pi.
inline int fading_partition_index(const cdouble& h, int bits) {
    PhaseQuantizer q(bits);
    if (h == cdouble{0.0, 0.0})
        throw DegenerateInput("fading_partition_index: phase of 0 is undefined");
    const double w = q.sector_width();
    const double shifted = principal_arg(h) + pi; // [0, 2*pi)
    const int k = static_cast<int>((shifted + 0.5 * w) / w);
    return k % q.region_count();
}

/// Decision cone of symbol i when the channel lies in phase cell k: the
/// 2*pi/M-wide sector centered on the symbol, rotated by (k - 2^{n-1})
/// quantizer cone widths. For fixed k the M cones tile the plane.
inline AngularSector region_of_attraction(int symbol, int cell, int order, int bits) {
    const PskConstellation mod(order);
    const PhaseQuantizer q(bits);
    if (cell < 0 || cell >= q.region_count())
        throw IndexError("region_of_attraction: cell index " + std::to_string(cell) +
                         " out of range [0, " + std::to_string(q.region_count()) + ")");
    const double rot = (cell - q.region_count() / 2) * q.sector_width();
    const double lo = wrap_pi(mod.angle(symbol) - pi / order + rot);
    return AngularSector{lo, lo + two_pi / order};
}

} // namespace pskq
