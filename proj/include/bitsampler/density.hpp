#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bitsampler/box.hpp"
#include "bitsampler/errors.hpp"

namespace bitsampler {

// What the rectangle oracle reports for a query box R: the exact infimum
// and supremum of the density over R.  For a singleton R = {x} the two
// coincide with f(x).
struct OracleBounds {
    double inf_f = 0.0;
    double sup_f = 0.0;
};

// A density known through point evaluation plus a sup/inf rectangle
// oracle.  The oracle is the part the rejection sampler actually
// consumes; eval exists for analysis and for tests that cross-check the
// oracle against brute-force evaluation.
class DensitySpec {
public:
    using EvalFn = std::function<double(const std::vector<double>&)>;
    using BoundsFn = std::function<OracleBounds(const Box&)>;

    DensitySpec(std::string name,
                Box support,
                EvalFn eval,
                BoundsFn bounds,
                std::optional<int> monotone_axis = std::nullopt)
        : name_(std::move(name)),
          support_(std::move(support)),
          eval_(std::move(eval)),
          bounds_(std::move(bounds)),
          monotone_axis_(monotone_axis) {
        if (support_.dimension() < 1)
            throw validation_error("density support must have at least one axis");
        if (monotone_axis_ && (*monotone_axis_ < 0 || *monotone_axis_ >= dimension()))
            throw validation_error("monotone axis outside dimension range");
        // One oracle call on the whole support pins down C = sup f.
        sup_ = bounds_(support_).sup_f;
        if (!std::isfinite(sup_) || sup_ <= 0.0)
            throw validation_error("density '" + name_ + "' has non-finite or non-positive sup");
    }

    const std::string& name() const noexcept { return name_; }
    int dimension() const noexcept { return support_.dimension(); }
    const Box& support() const noexcept { return support_; }
    std::optional<int> monotone_axis() const noexcept { return monotone_axis_; }

    // C, the height of the bounding box the sampler rejects against.
    double sup() const noexcept { return sup_; }

    double eval(const std::vector<double>& x) const {
        if (!support_.contains(x))
            throw domain_error("evaluation point outside support of '" + name_ + "'");
        return eval_(x);
    }

    double eval1(double x) const { return eval(std::vector<double>{x}); }

    OracleBounds bounds(const Box& rect) const {
        if (rect.dimension() != dimension() || !support_.contains(rect))
            throw domain_error("oracle query outside support of '" + name_ + "'");
        OracleBounds b = bounds_(rect);
        if (!(b.inf_f <= b.sup_f))
            throw validation_error("oracle returned inf > sup for '" + name_ + "'");
        return b;
    }

private:
    std::string name_;
    Box support_;
    EvalFn eval_;
    BoundsFn bounds_;
    std::optional<int> monotone_axis_;
    double sup_ = 0.0;
};

} // namespace bitsampler
