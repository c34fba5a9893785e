#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "bitsampler/bisection.hpp"
#include "bitsampler/bitstream.hpp"
#include "bitsampler/box.hpp"
#include "bitsampler/density.hpp"
#include "bitsampler/discrete.hpp"
#include "bitsampler/errors.hpp"
#include "bitsampler/ratio.hpp"
#include "bitsampler/telemetry.hpp"

namespace bitsampler {

inline constexpr int kDefaultDepthCap = 64;

// One cell of the regular partition of [0,1]^d x [0,C]: level-k dyadic
// interval [n_i/2^k, (n_i+1)/2^k] on each spatial axis, and the same on
// the y-axis scaled by C.  Level 64 is the representation limit.
class RectBox {
public:
    static RectBox root(int d, double yscale) {
        if (d < 1) throw validation_error("dimension must be positive");
        if (!(yscale > 0.0)) throw validation_error("y-scale must be positive");
        RectBox r;
        r.nums_.assign(static_cast<std::size_t>(d), 0);
        r.ynum_ = 0;
        r.level_ = 0;
        r.yscale_ = yscale;
        return r;
    }

    int level() const noexcept { return level_; }
    int dimension() const noexcept { return static_cast<int>(nums_.size()); }
    double yscale() const noexcept { return yscale_; }
    std::uint64_t spatial_num(int axis) const { return nums_.at(static_cast<std::size_t>(axis)); }
    std::uint64_t y_num() const noexcept { return ynum_; }

    // Spatial projection, exact: level-<=64 dyadics are exact doubles.
    Box projection() const {
        Box b;
        b.axes.reserve(nums_.size());
        for (std::uint64_t n : nums_)
            b.axes.push_back(Interval{std::ldexp(static_cast<double>(n), -level_),
                                      std::ldexp(static_cast<double>(n + 1), -level_)});
        return b;
    }

    Interval yrange() const {
        return Interval{yscale_ * std::ldexp(static_cast<double>(ynum_), -level_),
                        yscale_ * std::ldexp(static_cast<double>(ynum_ + 1), -level_)};
    }

    // Child selection: bit j of `bits` picks the upper half of axis j;
    // the y-axis is the last bit (index d).
    RectBox child(std::uint64_t bits) const {
        if (level_ >= 64)
            throw validation_error("rectangle level 64 reached; cannot split further");
        RectBox c = *this;
        ++c.level_;
        for (std::size_t j = 0; j < nums_.size(); ++j)
            c.nums_[j] = (nums_[j] << 1) | ((bits >> j) & 1u);
        c.ynum_ = (ynum_ << 1) | ((bits >> nums_.size()) & 1u);
        return c;
    }

private:
    std::vector<std::uint64_t> nums_;
    std::uint64_t ynum_ = 0;
    int level_ = 0;
    double yscale_ = 1.0;
};

enum class Decision { Accept, Reject, Undecided };

struct QuadtreeStep {
    Decision decision;
    RectBox box; // the accepted box, or the child descended into
};

namespace detail {

// Accept before Reject, both comparisons non-strict: a constant density
// must accept at the root, and boundary ties must decide rather than
// split forever.
inline Decision classify(const OracleBounds& b, const Interval& y) {
    if (b.inf_f >= y.hi) return Decision::Accept;
    if (b.sup_f <= y.lo) return Decision::Reject;
    return Decision::Undecided;
}

inline std::uint64_t draw_quadrant(int d, BitSource& source) {
    std::uint64_t bits = 0;
    for (int j = 0; j <= d; ++j)
        bits |= static_cast<std::uint64_t>(source.next_bit()) << j;
    return bits;
}

inline OracleBounds tilde_rect_bounds(const RatioDensitySpec& spec, const RectBox& rect) {
    Box p = rect.projection();
    return spec.tilde_bounds(p.axes[0].lo, p.axes[0].hi);
}

// Restart-until-accept driver shared by the compact and general
// samplers.  Oracle: RectBox -> OracleBounds.
template <typename OracleFn>
RectBox accept_rectangle(int d, double yscale, OracleFn&& oracle, BitSource& source,
                         Telemetry& t, int depth_cap, const std::string& what) {
    if (depth_cap < 0 || depth_cap > 64)
        throw validation_error("depth cap must lie in [0, 64]");
    for (;;) {
        RectBox rect = RectBox::root(d, yscale);
        for (;;) {
            ++t.oracle_calls;
            Decision dec = classify(oracle(rect), rect.yrange());
            if (dec == Decision::Accept) {
                t.quadtree_depth_last = static_cast<std::uint64_t>(rect.level());
                return rect;
            }
            if (dec == Decision::Reject) {
                ++t.restarts;
                break; // fresh walk from the root, no bit recycling
            }
            if (rect.level() >= depth_cap)
                throw non_riemann_suspected(
                    what + ": no decision after " + std::to_string(depth_cap) +
                        " quadtree levels; the oracle gap is not closing (density "
                        "may not be Riemann-integrable)",
                    rect.level());
            rect = rect.child(draw_quadrant(d, source));
        }
    }
}

} // namespace detail

// One step of the rejection quadtree: one oracle call on the projection,
// then accept (graph of f lies above the cell), reject (below), or draw
// d+1 bits and descend into a uniform child.
inline QuadtreeStep quadtree_step(const RectBox& rect, const DensitySpec& density,
                                  BitSource& source) {
    Decision dec = detail::classify(density.bounds(rect.projection()), rect.yrange());
    if (dec != Decision::Undecided) return {dec, rect};
    return {dec, rect.child(detail::draw_quadrant(rect.dimension(), source))};
}

// Same step against the transported ratio density f~ on [0,1]x[0,C].
inline QuadtreeStep quadtree_step(const RectBox& rect, const RatioDensitySpec& spec,
                                  BitSource& source) {
    Decision dec = detail::classify(detail::tilde_rect_bounds(spec, rect), rect.yrange());
    if (dec != Decision::Undecided) return {dec, rect};
    return {dec, rect.child(detail::draw_quadrant(rect.dimension(), source))};
}

// Rejection sampler for a density on the unit cube, known through its
// rectangle oracle.  Walks the quadtree of [0,1]^d x [0,C] until a cell
// is certified, restarts on rejection, then localizes a uniform point of
// the accepted projection to within epsilon per axis.
inline SampleResult sample_compact(const DensitySpec& density, double epsilon,
                                   BitSource& source, int depth_cap = kDefaultDepthCap) {
    if (!(epsilon > 0.0)) throw domain_error("epsilon must be positive");
    Box cube = Box::unit_cube(density.dimension());
    if (!(cube.contains(density.support()) && density.support().contains(cube)))
        throw domain_error("compact sampler requires support exactly [0,1]^d");
    std::uint64_t start = source.bits_used();
    Telemetry t;
    RectBox accepted = detail::accept_rectangle(
        density.dimension(), density.sup(),
        [&](const RectBox& r) { return density.bounds(r.projection()); }, source, t,
        depth_cap, "sample_compact(" + density.name() + ")");
    t.decision_bits = source.bits_used() - start;
    SampleResult r;
    r.value = bisect_uniform_box(accepted.projection(), epsilon, source);
    r.epsilon = epsilon;
    t.bisection_bits = source.bits_used() - start - t.decision_bits;
    r.telemetry = t;
    return r;
}

// General-support sampler: run the quadtree against f~ on [0,1]x[0,C];
// the accepted u-interval is mapped back through G^{-1} by inversion
// bisection.  One-dimensional by construction.
inline SampleResult sample_general(const RatioDensitySpec& spec, double epsilon,
                                   BitSource& source, int depth_cap = kDefaultDepthCap) {
    if (!(epsilon > 0.0)) throw domain_error("epsilon must be positive");
    std::uint64_t start = source.bits_used();
    Telemetry t;
    RectBox accepted = detail::accept_rectangle(
        1, spec.C(), [&](const RectBox& r) { return detail::tilde_rect_bounds(spec, r); },
        source, t, depth_cap, "sample_general(" + spec.name() + ")");
    t.decision_bits = source.bits_used() - start;
    Box p = accepted.projection();
    SampleResult r = inversion_bisect(spec.envelope(), p.axes[0].lo, p.axes[0].hi,
                                      epsilon, source);
    t.bisection_bits = source.bits_used() - start - t.decision_bits;
    r.telemetry = t;
    return r;
}

// The tempting-but-wrong variant: localize X_eps FIRST, then accept with
// probability f(X_eps)/C.  Wrong because acceptance then depends on f's
// values on the countable grid of possible X_eps outputs only; altering
// f on that null set changes (or destroys) the output law.  Kept,
// documented, for demonstration.
inline SampleResult naive_sample_broken(const DensitySpec& density, double epsilon,
                                        BitSource& source,
                                        std::uint64_t max_trials = 1000000) {
    if (!(epsilon > 0.0)) throw domain_error("epsilon must be positive");
    double c = density.sup();
    Telemetry t;
    for (std::uint64_t trial = 1; trial <= max_trials; ++trial) {
        std::uint64_t mark = source.bits_used();
        std::vector<double> x = bisect_uniform_box(density.support(), epsilon, source);
        t.bisection_bits += source.bits_used() - mark;
        ++t.oracle_calls; // the point evaluation is the degenerate oracle
        double ratio = density.eval(x) / c;
        mark = source.bits_used();
        bool accept = decide_leq(ratio, source);
        t.decision_bits += source.bits_used() - mark;
        if (accept) {
            t.restarts = trial - 1;
            SampleResult r;
            r.value = std::move(x);
            r.epsilon = epsilon;
            r.telemetry = t;
            return r;
        }
    }
    throw naive_loop_forever("no acceptance after " + std::to_string(max_trials) +
                             " trials; f vanishes on the reachable grid");
}

} // namespace bitsampler
