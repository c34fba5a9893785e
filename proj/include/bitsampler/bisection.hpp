#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "bitsampler/bitstream.hpp"
#include "bitsampler/box.hpp"
#include "bitsampler/cdf.hpp"
#include "bitsampler/dyadic.hpp"
#include "bitsampler/errors.hpp"
#include "bitsampler/telemetry.hpp"

namespace bitsampler {

inline constexpr int kBisectionDepthFailsafe = 4096;

namespace detail {

// Shared core: halve a u-interval at its exact dyadic midpoint, one fresh
// bit per step (0 keeps the lower half), mapping endpoints through G^{-1},
// until the x-width is <= 2*epsilon.  Returns the x-midpoint.  The
// u-space arithmetic is exact at any depth; only the x-endpoints live in
// floating point.
inline SampleResult bisect_core(const CdfSpec& cdf, DyadicInterval u, double x1, double x2,
                                double epsilon, BitSource& source, int depth_failsafe) {
    if (!(epsilon > 0.0)) throw domain_error("epsilon must be positive");
    std::uint64_t start = source.bits_used();
    while (!(x2 - x1 <= 2.0 * epsilon)) {
        if (u.level() >= depth_failsafe)
            throw depth_limit_exceeded("bisection exceeded depth failsafe " +
                                       std::to_string(depth_failsafe) +
                                       "; the CDF looks non-continuous");
        int bit = source.next_bit();
        u = u.half(bit);
        double z = cdf.inverse(bit == 0 ? u.hi() : u.lo());
        if (bit == 0)
            x2 = z;
        else
            x1 = z;
    }
    SampleResult r;
    r.value = {x1 + 0.5 * (x2 - x1)};
    r.epsilon = epsilon;
    r.telemetry.bisection_bits = source.bits_used() - start;
    return r;
}

} // namespace detail

// CDF bisection: start from the full support, keep the half of the
// u-interval the (implicit) uniform landed in.  Expected bits are at most
// 3 + log2+(L / 2 epsilon) for a support of length L.
inline SampleResult bisect_cdf(const CdfSpec& cdf, double epsilon, BitSource& source,
                               int depth_failsafe = kBisectionDepthFailsafe) {
    return detail::bisect_core(cdf, DyadicInterval::unit(), cdf.a(), cdf.b(), epsilon,
                               source, depth_failsafe);
}

// Restriction of bisect_cdf to a u-subinterval: the conditional law of X
// given G(X) in [u1, u2].  This is the phase that localizes a point
// inside an accepting rectangle.
inline SampleResult inversion_bisect(const CdfSpec& cdf, double u1, double u2,
                                     double epsilon, BitSource& source,
                                     int depth_failsafe = kBisectionDepthFailsafe) {
    if (!(0.0 <= u1 && u1 < u2 && u2 <= 1.0))
        throw domain_error("inversion_bisect requires 0 <= u1 < u2 <= 1");
    return detail::bisect_core(cdf, DyadicInterval::from_doubles(u1, u2),
                               cdf.inverse(u1), cdf.inverse(u2), epsilon, source,
                               depth_failsafe);
}

// Uniform point in a box, one axis at a time (axis 1 first), each axis by
// deterministic halving: exactly max{0, ceil(log2(len_i / 2 epsilon))}
// bits on axis i.
inline std::vector<double> bisect_uniform_box(const Box& box, double epsilon,
                                              BitSource& source) {
    if (!(epsilon > 0.0)) throw domain_error("epsilon must be positive");
    if (box.dimension() < 1) throw domain_error("empty box");
    std::vector<double> point;
    point.reserve(box.axes.size());
    for (const Interval& ax : box.axes) {
        if (!(ax.length() >= 0.0)) throw domain_error("inverted box axis");
        double lo = ax.lo, hi = ax.hi;
        while (!(hi - lo <= 2.0 * epsilon)) {
            double mid = lo + 0.5 * (hi - lo);
            if (source.next_bit() == 0)
                hi = mid;
            else
                lo = mid;
        }
        point.push_back(lo + 0.5 * (hi - lo));
    }
    return point;
}

} // namespace bitsampler
