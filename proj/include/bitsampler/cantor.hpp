#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "bitsampler/density.hpp"
#include "bitsampler/errors.hpp"

namespace bitsampler {

// Measure of the residual set: start from [0,1], at step j remove an open
// middle of length delta^j from each of the 2^{j-1} surviving closed
// intervals.  The limit set I_delta has measure (1-3delta)/(1-2delta).
inline double lambda_cantor(double delta) {
    if (!(delta >= 0.0) || !(delta < 1.0 / 3.0))
        throw domain_error("cantor delta must lie in [0, 1/3)");
    return (1.0 - 3.0 * delta) / (1.0 - 2.0 * delta);
}

// Total length surviving after j construction steps, 2^j * lambda_{j,0}.
// Closed form of the recursion lambda_{j} = (lambda_{j-1} - delta^j)/2.
inline double cantor_level_measure(double delta, int steps) {
    if (!(delta >= 0.0) || !(delta < 1.0 / 3.0))
        throw domain_error("cantor delta must lie in [0, 1/3)");
    if (steps < 0) throw domain_error("steps must be nonnegative");
    if (delta == 0.0) return 1.0;
    // 1 - delta * ((2 delta)^j - 1) / (2 delta - 1)
    return 1.0 - delta * (std::pow(2.0 * delta, steps) - 1.0) / (2.0 * delta - 1.0);
}

// The 2^j closed intervals surviving after j construction steps, in
// left-to-right order.  Used by tests to cross-check the oracle against
// explicit enumeration.
inline std::vector<Interval> cantor_intervals(double delta, int steps) {
    if (!(delta >= 0.0) || !(delta < 1.0 / 3.0))
        throw domain_error("cantor delta must lie in [0, 1/3)");
    if (steps < 0 || steps > 24)
        throw feasibility_error("interval enumeration limited to 24 steps");
    std::vector<Interval> cur{Interval{0.0, 1.0}};
    double gap = 1.0;
    for (int j = 1; j <= steps; ++j) {
        gap *= delta;
        std::vector<Interval> next;
        next.reserve(cur.size() * 2);
        for (const Interval& iv : cur) {
            double half = 0.5 * (iv.length() - gap);
            next.push_back(Interval{iv.lo, iv.lo + half});
            next.push_back(Interval{iv.hi - half, iv.hi});
        }
        cur = std::move(next);
    }
    return cur;
}

namespace detail {

// Decides whether [a,b] (possibly degenerate) meets I_delta, by descending
// the construction.  At each step the query lies inside one surviving
// interval; the descent ends when the query grabs a construction endpoint
// (endpoints are never removed, so the answer is yes), falls inside a
// removed gap (no), or straddles a gap (contains its endpoints: yes).
// Terminates because surviving intervals shrink below any positive query
// width, and a degenerate query collapses onto an endpoint once the
// interval is thinner than one ulp.
inline bool cantor_intersects(double delta, double a, double b) {
    double lo = 0.0, hi = 1.0;
    double gap = 1.0;
    for (int level = 0; level < 4000; ++level) {
        if (a == lo || b == hi || (a <= lo && hi <= b)) return true;
        gap *= delta;
        double half = 0.5 * ((hi - lo) - gap);
        double m1 = lo + half;
        double m2 = hi - half;
        if (b <= m1) {
            hi = m1;
        } else if (a >= m2) {
            lo = m2;
        } else if (a > m1 && b < m2) {
            return false; // strictly inside the removed open middle
        } else {
            return true; // contains m1 or m2, both of which survive
        }
    }
    throw error("cantor descent failed to terminate");
}

} // namespace detail

// Density of the Appendix-style pathology: f = 1/lambda on I_delta, 0 off
// it.  delta = 0 degenerates to the uniform density.  For delta > 0 the
// set has empty interior, so the oracle's inf over any positive-width
// rectangle is 0 while the sup over any rectangle meeting I_delta is the
// full height: the gap over such rectangles never decays, no matter how
// fine the rectangle.
inline DensitySpec cantor_density(double delta) {
    double lam = lambda_cantor(delta); // validates delta
    double height = 1.0 / lam;
    auto eval = [delta, height](const std::vector<double>& x) -> double {
        if (delta == 0.0) return 1.0;
        return detail::cantor_intersects(delta, x[0], x[0]) ? height : 0.0;
    };
    auto bounds = [delta, height](const Box& rect) -> OracleBounds {
        if (delta == 0.0) return OracleBounds{1.0, 1.0};
        double a = rect.axes[0].lo;
        double b = rect.axes[0].hi;
        if (!detail::cantor_intersects(delta, a, b)) return OracleBounds{0.0, 0.0};
        double inf = (a == b) ? height : 0.0;
        return OracleBounds{inf, height};
    };
    return DensitySpec("cantor:" + std::to_string(delta), Box::unit_cube(1),
                       std::move(eval), std::move(bounds));
}

} // namespace bitsampler
