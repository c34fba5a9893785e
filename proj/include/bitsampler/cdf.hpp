#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <utility>

#include "bitsampler/errors.hpp"

namespace bitsampler {

// A continuous CDF G on [a,b] with G(a)=0, G(b)=1, plus its inverse.
// b = +infinity is allowed when a closed-form inverse is supplied.  When
// no inverse is given, a monotone numeric inversion (tolerance 2^-48 in x)
// stands in; numeric inversion consumes zero random bits, matching a cost
// model that charges only for randomness.
class CdfSpec {
public:
    using Fn = std::function<double(double)>;

    CdfSpec(std::string name, double a, double b, Fn g, Fn g_inv = nullptr)
        : name_(std::move(name)), a_(a), b_(b), g_(std::move(g)), ginv_(std::move(g_inv)) {
        if (!(a_ < b_)) throw validation_error("cdf requires a < b");
        if (!std::isfinite(a_)) throw validation_error("cdf left endpoint must be finite");
        if (!std::isfinite(b_) && !ginv_)
            throw validation_error("cdf on an unbounded support needs a closed-form inverse");
        self_check();
    }

    const std::string& name() const noexcept { return name_; }
    double a() const noexcept { return a_; }
    double b() const noexcept { return b_; }
    double length() const noexcept { return b_ - a_; }

    double G(double x) const { return g_(x); }

    double inverse(double u) const {
        if (!(u >= 0.0 && u <= 1.0))
            throw domain_error("inverse argument outside [0,1]");
        double x = ginv_ ? ginv_(u) : numeric_inverse(u);
        if (std::isnan(x))
            throw envelope_error("inverse CDF evaluation failed at u=" + std::to_string(u));
        return x;
    }

private:
    double numeric_inverse(double u) const {
        double lo = a_, hi = b_;
        const double tol = std::ldexp(1.0, -48);
        while (hi - lo > tol) {
            double mid = lo + 0.5 * (hi - lo);
            if (g_(mid) < u)
                lo = mid;
            else
                hi = mid;
        }
        return lo + 0.5 * (hi - lo);
    }

    // Round-trip and monotonicity audit on a 1024-point grid.
    void self_check() const {
        const int n = 1024;
        const double tol = std::ldexp(1.0, -40);
        double prev_x = -std::numeric_limits<double>::infinity();
        for (int i = 0; i <= n; ++i) {
            double u = static_cast<double>(i) / n;
            double x = ginv_ ? ginv_(u) : numeric_inverse(u);
            if (std::isnan(x))
                throw validation_error("cdf '" + name_ + "' inverse is NaN at u=" + std::to_string(u));
            if (x < prev_x)
                throw validation_error("cdf '" + name_ + "' inverse is not nondecreasing");
            prev_x = x;
            if (std::isfinite(x)) {
                if (std::abs(g_(x) - u) > tol)
                    throw validation_error("cdf '" + name_ + "' fails G(G_inv(u))=u at u=" +
                                           std::to_string(u));
            } else if (u < 1.0) {
                throw validation_error("cdf '" + name_ + "' inverse infinite before u=1");
            }
        }
    }

    std::string name_;
    double a_, b_;
    Fn g_, ginv_;
};

// CLI-facing CDF registry.
inline CdfSpec cdf_by_name(const std::string& name) {
    if (name == "identity")
        return CdfSpec("identity", 0.0, 1.0,
                       [](double x) { return x; },
                       [](double u) { return u; });
    if (name == "square")
        return CdfSpec("square", 0.0, 1.0,
                       [](double x) { return x * x; },
                       [](double u) { return std::sqrt(u); });
    if (name == "exp2-trunc") {
        // 1 - e^{-2x} renormalized to [0, 8] so that G(8) = 1 exactly.
        const double z = -std::expm1(-16.0);
        return CdfSpec("exp2-trunc", 0.0, 8.0,
                       [z](double x) { return -std::expm1(-2.0 * x) / z; },
                       [z](double u) { return -0.5 * std::log1p(-u * z); });
    }
    throw validation_error("unknown cdf name: " + name);
}

inline const char* cdf_names() { return "identity, square, exp2-trunc"; }

} // namespace bitsampler
