#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <utility>

#include "bitsampler/box.hpp"
#include "bitsampler/cdf.hpp"
#include "bitsampler/density.hpp"
#include "bitsampler/errors.hpp"

namespace bitsampler {

// Target density f with an easy envelope g: g dominates f/C, G is g's CDF.
// The substitution u = G(x) turns the ratio into a density
// f~(u) = (f/g)(G^{-1}(u)) on [0,1], bounded by C, which is what the
// rejection quadtree actually processes.  The rectangle oracle for f~ is
// the ratio oracle transported through G^{-1}.
class RatioDensitySpec {
public:
    using RatioBoundsFn = std::function<OracleBounds(const Interval&)>;
    using CdfFn = std::function<double(double)>;

    RatioDensitySpec(std::string name,
                     DensitySpec target,
                     CdfSpec envelope,
                     RatioBoundsFn ratio_bounds,
                     bool tilde_monotone = false,
                     CdfFn target_cdf = nullptr,
                     Interval analysis_range = Interval{0.0, 1.0})
        : name_(std::move(name)),
          target_(std::move(target)),
          envelope_(std::move(envelope)),
          ratio_bounds_(std::move(ratio_bounds)),
          tilde_monotone_(tilde_monotone),
          target_cdf_(std::move(target_cdf)),
          analysis_range_(analysis_range) {
        if (target_.dimension() != 1)
            throw validation_error("ratio specs are one-dimensional");
        c_ = ratio_bounds_(Interval{envelope_.a(), envelope_.b()}).sup_f;
        if (!std::isfinite(c_) || c_ <= 0.0)
            throw validation_error("ratio spec '" + name_ + "' has unbounded or vanishing f/g");
    }

    const std::string& name() const noexcept { return name_; }
    const DensitySpec& target() const noexcept { return target_; }
    const CdfSpec& envelope() const noexcept { return envelope_; }
    double C() const noexcept { return c_; }
    bool tilde_monotone() const noexcept { return tilde_monotone_; }
    const Interval& analysis_range() const noexcept { return analysis_range_; }

    // CDF of the target, when known; used by analysis, never by sampling.
    bool has_target_cdf() const noexcept { return static_cast<bool>(target_cdf_); }
    double target_cdf(double x) const { return target_cdf_(x); }

    // Bounds of f~ over [u1,u2], via the change of variables u = G(x).
    OracleBounds tilde_bounds(double u1, double u2) const {
        if (!(0.0 <= u1 && u1 < u2 && u2 <= 1.0))
            throw domain_error("tilde_bounds requires 0 <= u1 < u2 <= 1");
        double x1 = envelope_.inverse(u1);
        double x2 = envelope_.inverse(u2);
        OracleBounds b = ratio_bounds_(Interval{x1, x2});
        if (!(b.inf_f <= b.sup_f))
            throw validation_error("ratio oracle returned inf > sup for '" + name_ + "'");
        return b;
    }

    // Point evaluation of f~: the degenerate-interval oracle call.
    double tilde_eval(double u) const {
        double x = envelope_.inverse(u);
        return ratio_bounds_(Interval{x, x}).inf_f;
    }

    // f~ packaged as a density on [0,1], so grid analysis can treat the
    // general case exactly like the compact one.
    DensitySpec tilde_density() const {
        RatioDensitySpec copy = *this;
        auto eval = [copy](const std::vector<double>& u) { return copy.tilde_eval(u[0]); };
        auto bounds = [copy](const Box& rect) {
            const Interval& ax = rect.axes[0];
            if (ax.lo == ax.hi) {
                double v = copy.tilde_eval(ax.lo);
                return OracleBounds{v, v};
            }
            return copy.tilde_bounds(ax.lo, ax.hi);
        };
        std::optional<int> mono = tilde_monotone_ ? std::optional<int>(0) : std::nullopt;
        return DensitySpec(name_ + "-tilde", Box::unit_cube(1), std::move(eval),
                           std::move(bounds), mono);
    }

private:
    std::string name_;
    DensitySpec target_;
    CdfSpec envelope_;
    RatioBoundsFn ratio_bounds_;
    bool tilde_monotone_;
    CdfFn target_cdf_;
    Interval analysis_range_;
    double c_ = 0.0;
};

} // namespace bitsampler
