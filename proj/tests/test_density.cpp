// Density specifications and their rectangle oracles: sandwich and
// nesting properties, the residual-set family, CDF self-checks, and the
// transported ratio density.

#include <gtest/gtest.h>

#include <cmath>
#include <cstdint>
#include <vector>

#include "bitsampler/builtins.hpp"
#include "bitsampler/cantor.hpp"
#include "bitsampler/cdf.hpp"
#include "bitsampler/density.hpp"
#include "bitsampler/errors.hpp"
#include "bitsampler/ratio.hpp"

using namespace bitsampler;

namespace {

// Hand-rolled generator so the property tests are reproducible without
// touching the library's bit sources.
struct Lcg {
    std::uint64_t s;
    explicit Lcg(std::uint64_t seed) : s(seed) {}
    double unit() {
        s = s * 6364136223846793005ULL + 1442695040888963407ULL;
        return static_cast<double>(s >> 11) * 0x1p-53;
    }
};

Box random_subbox(Lcg& g, int d) {
    Box b;
    for (int j = 0; j < d; ++j) {
        double a = g.unit(), c = g.unit();
        if (a > c) std::swap(a, c);
        if (a == c) c = a + 0.01 > 1.0 ? 1.0 : a + 0.01;
        b.axes.push_back(Interval{a, c});
    }
    return b;
}

void check_sandwich_and_nesting(const DensitySpec& f, std::uint64_t seed) {
    Lcg g(seed);
    int d = f.dimension();
    for (int rep = 0; rep < 200; ++rep) {
        Box outer = random_subbox(g, d);
        OracleBounds ob = f.bounds(outer);
        EXPECT_LE(ob.inf_f, ob.sup_f);
        // Shrink every axis toward its center to get a nested inner box.
        Box inner = outer;
        for (auto& ax : inner.axes) {
            double q = 0.25 * ax.length();
            ax = Interval{ax.lo + q, ax.hi - q};
        }
        OracleBounds ib = f.bounds(inner);
        EXPECT_GE(ib.inf_f, ob.inf_f) << f.name();
        EXPECT_LE(ib.sup_f, ob.sup_f) << f.name();
        // Point evaluations inside the inner box respect its bounds.
        for (int pt = 0; pt < 5; ++pt) {
            std::vector<double> x;
            for (const auto& ax : inner.axes)
                x.push_back(ax.lo + g.unit() * ax.length());
            double v = f.eval(x);
            EXPECT_GE(v, ib.inf_f - 1e-12) << f.name();
            EXPECT_LE(v, ib.sup_f + 1e-12) << f.name();
        }
    }
}

} // namespace

TEST(Density, BuiltinOraclesSandwichTheirValues) {
    check_sandwich_and_nesting(make_uniform(), 1);
    check_sandwich_and_nesting(make_linear(), 2);
    check_sandwich_and_nesting(make_quadratic(), 3);
    check_sandwich_and_nesting(make_pyramid(), 4);
    check_sandwich_and_nesting(make_uniform2d(), 5);
    check_sandwich_and_nesting(make_product_linear2d(), 6);
}

TEST(Density, SupMatchesKnownConstants) {
    EXPECT_EQ(make_uniform().sup(), 1.0);
    EXPECT_EQ(make_linear().sup(), 2.0);
    EXPECT_EQ(make_quadratic().sup(), 3.0);
    EXPECT_EQ(make_pyramid().sup(), 2.0);
    EXPECT_EQ(make_product_linear2d().sup(), 4.0);
}

TEST(Density, MonotoneTagging) {
    EXPECT_EQ(make_linear().monotone_axis(), std::optional<int>(0));
    EXPECT_FALSE(make_pyramid().monotone_axis().has_value());
}

TEST(Density, DomainErrors) {
    DensitySpec f = make_linear();
    EXPECT_THROW(f.eval({1.5}), domain_error);
    EXPECT_THROW(f.bounds(Box{Interval{0.5, 1.5}}), domain_error);
    EXPECT_THROW(f.eval({0.2, 0.3}), domain_error); // wrong arity
}

TEST(Density, ConstructorValidation) {
    auto ident = [](const std::vector<double>& x) { return x[0]; };
    EXPECT_THROW(DensitySpec("bad-sup", Box::unit_cube(1), ident,
                             [](const Box&) {
                                 return OracleBounds{0.0, 0.0};
                             }),
                 validation_error);
    DensitySpec crossed("crossed", Box::unit_cube(1), ident, [](const Box& b) {
        // Deliberately inverted bounds on small boxes.
        return b.axes[0].length() < 0.5 ? OracleBounds{2.0, 1.0} : OracleBounds{0.0, 1.0};
    });
    EXPECT_THROW(crossed.bounds(Box{Interval{0.1, 0.2}}), validation_error);
}

TEST(Density, RegistryNames) {
    EXPECT_NO_THROW(density_by_name("pyramid"));
    EXPECT_NO_THROW(density_by_name("cantor:0.2"));
    EXPECT_THROW(density_by_name("nope"), validation_error);
    EXPECT_THROW(density_by_name("cantor:abc"), validation_error);
    EXPECT_THROW(density_by_name("cantor:0.2junk"), validation_error);
    EXPECT_THROW(density_by_name("cantor:0.5"), domain_error);
    EXPECT_TRUE(is_ratio_name("exp2-over-exp"));
    EXPECT_FALSE(is_ratio_name("linear"));
    EXPECT_NO_THROW(ratio_by_name("exp2-over-exp"));
    EXPECT_THROW(ratio_by_name("linear"), validation_error);
}

TEST(Cantor, LambdaClosedForm) {
    EXPECT_EQ(lambda_cantor(0.0), 1.0);
    EXPECT_EQ(lambda_cantor(0.2), (1.0 - 3.0 * 0.2) / (1.0 - 2.0 * 0.2));
    EXPECT_EQ(lambda_cantor(0.25), 0.5);
    EXPECT_THROW(lambda_cantor(1.0 / 3.0), domain_error);
    EXPECT_THROW(lambda_cantor(-0.1), domain_error);
}

TEST(Cantor, LevelMeasureMatchesExplicitIntervals) {
    for (double delta : {0.1, 0.2, 0.3}) {
        for (int j = 0; j <= 6; ++j) {
            double total = 0.0;
            for (const Interval& iv : cantor_intervals(delta, j)) total += iv.length();
            EXPECT_NEAR(total, cantor_level_measure(delta, j), 1e-12);
        }
    }
    EXPECT_EQ(cantor_level_measure(0.25, 0), 1.0);
    EXPECT_EQ(cantor_level_measure(0.25, 1), 0.75);
}

TEST(Cantor, IntervalsShrinkTowardLambda) {
    // Level measure decreases to lambda, the residual set's measure.
    double prev = 1.0;
    for (int j = 1; j <= 20; ++j) {
        double m = cantor_level_measure(0.2, j);
        EXPECT_LT(m, prev);
        prev = m;
    }
    EXPECT_NEAR(prev, lambda_cantor(0.2), 1e-5);
}

TEST(Cantor, DensityOracle) {
    DensitySpec f = cantor_density(0.2);
    const double height = 1.0 / lambda_cantor(0.2); // 1.5
    // A rectangle near the left edge meets the set but also gaps.
    OracleBounds near0 = f.bounds(Box{Interval{0.0, 0.1}});
    EXPECT_EQ(near0.sup_f, height);
    EXPECT_EQ(near0.inf_f, 0.0);
    // Inside the first removed gap ((1-delta)/2, (1+delta)/2) = (0.4, 0.6).
    OracleBounds gap = f.bounds(Box{Interval{0.45, 0.55}});
    EXPECT_EQ(gap.sup_f, 0.0);
    EXPECT_EQ(gap.inf_f, 0.0);
    EXPECT_EQ(f.eval({0.0}), height);
    EXPECT_EQ(f.eval({0.5}), 0.0);
    // The oracle never certifies a positive inf on a non-degenerate box:
    // the residual set has empty interior.
    OracleBounds full = f.bounds(Box::unit_cube(1));
    EXPECT_EQ(full.inf_f, 0.0);
    EXPECT_EQ(full.sup_f, height);
}

TEST(Cantor, DeltaZeroIsUniform) {
    DensitySpec f = cantor_density(0.0);
    OracleBounds b = f.bounds(Box{Interval{0.3, 0.4}});
    EXPECT_EQ(b.inf_f, 1.0);
    EXPECT_EQ(b.sup_f, 1.0);
    EXPECT_EQ(f.eval({0.77}), 1.0);
}

TEST(Cdf, RegistryAndSelfCheck) {
    for (const char* name : {"identity", "square", "exp2-trunc"}) {
        CdfSpec cdf = cdf_by_name(name);
        EXPECT_EQ(cdf.G(cdf.a()), 0.0);
        EXPECT_NEAR(cdf.G(cdf.b()), 1.0, 1e-12);
    }
    EXPECT_THROW(cdf_by_name("nope"), validation_error);
}

TEST(Cdf, SelfCheckCatchesBrokenFunctions) {
    // Non-monotone G: the grid round-trip cannot hold everywhere.
    EXPECT_THROW(CdfSpec("wiggle", 0.0, 1.0,
                         [](double x) { return x + 0.3 * std::sin(12.0 * x); }),
                 validation_error);
    // Wrong claimed inverse.
    EXPECT_THROW(CdfSpec(
                     "lying-inverse", 0.0, 1.0, [](double x) { return x * x; },
                     [](double u) { return 0.5 * u; }),
                 validation_error);
    // Unbounded support demands a closed-form inverse.
    EXPECT_THROW(CdfSpec("no-inverse-inf", 0.0,
                         std::numeric_limits<double>::infinity(),
                         [](double x) { return -std::expm1(-x); }),
                 validation_error);
}

TEST(Cdf, NumericInverseFallback) {
    CdfSpec cdf("square-numeric", 0.0, 1.0, [](double x) { return x * x; });
    for (double u : {0.1, 0.37, 0.5, 0.93}) {
        EXPECT_NEAR(cdf.inverse(u), std::sqrt(u), 1e-10);
    }
    EXPECT_THROW(cdf.inverse(1.5), domain_error);
}

TEST(Ratio, TransportedDensity) {
    RatioDensitySpec r = make_exp2_over_exp();
    EXPECT_EQ(r.C(), 2.0);
    EXPECT_TRUE(r.tilde_monotone());
    EXPECT_TRUE(r.has_target_cdf());
    // f~(u) = 2(1-u).
    EXPECT_EQ(r.tilde_eval(0.0), 2.0);
    EXPECT_NEAR(r.tilde_eval(0.5), 1.0, 1e-12);
    EXPECT_NEAR(r.tilde_eval(1.0), 0.0, 1e-12);
    OracleBounds b = r.tilde_bounds(0.25, 0.75);
    EXPECT_NEAR(b.inf_f, 0.5, 1e-12);
    EXPECT_NEAR(b.sup_f, 1.5, 1e-12);
    OracleBounds lo = r.tilde_bounds(0.0, 0.5);
    EXPECT_NEAR(lo.inf_f, 1.0, 1e-12);
    EXPECT_EQ(lo.sup_f, 2.0);
    EXPECT_THROW(r.tilde_bounds(0.75, 0.25), domain_error);

    DensitySpec t = r.tilde_density();
    EXPECT_EQ(t.dimension(), 1);
    EXPECT_EQ(t.sup(), 2.0);
    EXPECT_EQ(t.monotone_axis(), std::optional<int>(0));
    EXPECT_NEAR(t.eval({0.25}), 1.5, 1e-12);

    // Target CDF is the full-support law 1 - e^{-2x}.
    EXPECT_NEAR(r.target_cdf(1.0), -std::expm1(-2.0), 1e-15);
    EXPECT_EQ(r.target_cdf(0.0), 0.0);
}
