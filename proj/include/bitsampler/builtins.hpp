#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "bitsampler/cantor.hpp"
#include "bitsampler/cdf.hpp"
#include "bitsampler/density.hpp"
#include "bitsampler/ratio.hpp"

namespace bitsampler {

// Built-in densities.  Every bounds function is the exact closed form:
// endpoint values for monotone pieces, the critical point for the peaked
// one.  monotone_axis marks an axis along which the density is monotone
// in one direction (either one), which is what the 4C oracle-call
// guarantee needs.

inline DensitySpec make_uniform() {
    return DensitySpec(
        "uniform", Box::unit_cube(1),
        [](const std::vector<double>&) { return 1.0; },
        [](const Box&) { return OracleBounds{1.0, 1.0}; }, 0);
}

inline DensitySpec make_linear() {
    return DensitySpec(
        "linear", Box::unit_cube(1),
        [](const std::vector<double>& x) { return 2.0 * x[0]; },
        [](const Box& r) {
            return OracleBounds{2.0 * r.axes[0].lo, 2.0 * r.axes[0].hi};
        },
        0);
}

inline DensitySpec make_quadratic() {
    return DensitySpec(
        "quadratic", Box::unit_cube(1),
        [](const std::vector<double>& x) { return 3.0 * x[0] * x[0]; },
        [](const Box& r) {
            return OracleBounds{3.0 * r.axes[0].lo * r.axes[0].lo,
                                3.0 * r.axes[0].hi * r.axes[0].hi};
        },
        0);
}

inline DensitySpec make_pyramid() {
    auto peak = [](double x) { return 2.0 - 4.0 * std::abs(x - 0.5); };
    return DensitySpec(
        "pyramid", Box::unit_cube(1),
        [peak](const std::vector<double>& x) { return peak(x[0]); },
        [peak](const Box& r) {
            double lo = r.axes[0].lo, hi = r.axes[0].hi;
            double at_lo = peak(lo), at_hi = peak(hi);
            double sup = r.axes[0].contains(0.5) ? 2.0 : std::max(at_lo, at_hi);
            double inf = std::min(at_lo, at_hi);
            return OracleBounds{inf, sup};
        });
}

inline DensitySpec make_uniform2d() {
    return DensitySpec(
        "uniform2d", Box::unit_cube(2),
        [](const std::vector<double>&) { return 1.0; },
        [](const Box&) { return OracleBounds{1.0, 1.0}; }, 0);
}

inline DensitySpec make_product_linear2d() {
    return DensitySpec(
        "product-linear2d", Box::unit_cube(2),
        [](const std::vector<double>& x) { return 4.0 * x[0] * x[1]; },
        [](const Box& r) {
            return OracleBounds{4.0 * r.axes[0].lo * r.axes[1].lo,
                                4.0 * r.axes[0].hi * r.axes[1].hi};
        },
        0);
}

// Target 2e^{-2x} under envelope e^{-x}, both on [0, inf).  The ratio
// 2e^{-x} is decreasing, so interval bounds are the endpoint values and
// the transported density f~(u) = 2(1-u) is monotone on [0,1].
inline RatioDensitySpec make_exp2_over_exp() {
    const double inf = std::numeric_limits<double>::infinity();
    DensitySpec target(
        "exp2", Box{Interval{0.0, inf}},
        [](const std::vector<double>& x) { return 2.0 * std::exp(-2.0 * x[0]); },
        [](const Box& r) {
            return OracleBounds{2.0 * std::exp(-2.0 * r.axes[0].hi),
                                2.0 * std::exp(-2.0 * r.axes[0].lo)};
        },
        0);
    CdfSpec envelope(
        "exp", 0.0, inf,
        [](double x) { return -std::expm1(-x); },
        [](double u) { return -std::log1p(-u); });
    auto ratio_bounds = [](const Interval& iv) {
        return OracleBounds{2.0 * std::exp(-iv.hi), 2.0 * std::exp(-iv.lo)};
    };
    auto target_cdf = [](double x) { return -std::expm1(-2.0 * x); };
    return RatioDensitySpec("exp2-over-exp", std::move(target), std::move(envelope),
                            ratio_bounds, /*tilde_monotone=*/true, target_cdf,
                            Interval{0.0, 16.0});
}

inline bool is_ratio_name(const std::string& name) { return name == "exp2-over-exp"; }

inline std::string density_names() {
    return "uniform, linear, quadratic, pyramid, cantor:<delta>, uniform2d, "
           "product-linear2d, exp2-over-exp";
}

inline DensitySpec density_by_name(const std::string& name) {
    if (name == "uniform") return make_uniform();
    if (name == "linear") return make_linear();
    if (name == "quadratic") return make_quadratic();
    if (name == "pyramid") return make_pyramid();
    if (name == "uniform2d") return make_uniform2d();
    if (name == "product-linear2d") return make_product_linear2d();
    if (name.rfind("cantor:", 0) == 0) {
        double delta = 0.0;
        try {
            std::size_t used = 0;
            delta = std::stod(name.substr(7), &used);
            if (used != name.size() - 7) throw validation_error("trailing junk");
        } catch (const std::exception&) {
            throw validation_error("malformed cantor delta in '" + name + "'");
        }
        return cantor_density(delta);
    }
    throw validation_error("unknown density name: " + name + " (known: " +
                           density_names() + ")");
}

inline RatioDensitySpec ratio_by_name(const std::string& name) {
    if (name == "exp2-over-exp") return make_exp2_over_exp();
    throw validation_error("unknown ratio spec name: " + name + " (known: exp2-over-exp)");
}

} // namespace bitsampler
