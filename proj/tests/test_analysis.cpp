// Grid Riemann sums, the gap series, differential and discretized
// entropies, the universal lower bound, and the experiment runner.

#include <gtest/gtest.h>

#include <cmath>
#include <cstdint>
#include <cstring>
#include <string>
#include <vector>

#include "bitsampler/analysis.hpp"
#include "bitsampler/builtins.hpp"
#include "bitsampler/cantor.hpp"
#include "bitsampler/errors.hpp"

using namespace bitsampler;

namespace {

bool has_row(const ExperimentResult& r, const std::string& prefix, BoundReport* out = nullptr) {
    for (const BoundReport& b : r.reports)
        if (b.bound_name.rfind(prefix, 0) == 0) {
            if (out) *out = b;
            return true;
        }
    return false;
}

} // namespace

TEST(Grid, LinearRiemannSums) {
    DensitySpec f = make_linear();
    GridStats g1 = riemann_gap(f, 1);
    EXPECT_EQ(g1.i_plus, 1.5);
    EXPECT_EQ(g1.i_minus, 0.5);
    GridStats g2 = riemann_gap(f, 2);
    EXPECT_EQ(g2.i_plus, 1.25);
    EXPECT_EQ(g2.i_minus, 0.75);
    // Gap 2^{1-k}: both sums converge to 1 at rate 2^-k.
    for (int k = 0; k <= 12; ++k)
        EXPECT_EQ(riemann_gap(f, k).gap(), std::ldexp(2.0, -k));
}

TEST(Grid, FeasibilityLimits) {
    EXPECT_THROW(riemann_gap(make_linear(), 26), feasibility_error);
    EXPECT_THROW(riemann_gap(make_uniform2d(), 13), feasibility_error);
    EXPECT_NO_THROW(riemann_gap(make_uniform2d(), 12));
    EXPECT_THROW(riemann_gap(make_linear(), -1), domain_error);
}

TEST(Grid, GapSeriesForLinearIsFour) {
    AEstimate a = a_of_f(make_linear(), 12, 0.01);
    // Partial sum of 2^{1-k}, k = 0..12: exactly 4 - 2^-11.
    EXPECT_EQ(a.value, 4.0 - std::ldexp(1.0, -11));
    EXPECT_NEAR(a.value, 4.0, 0.01);
    EXPECT_TRUE(a.converged);
}

TEST(Grid, GapSeriesOfUniformTerminatesAtZero) {
    AEstimate a = a_of_f(make_uniform(), 12, 0.01);
    EXPECT_EQ(a.value, 0.0);
    EXPECT_TRUE(a.converged);
    AEstimate a2 = a_of_f(make_uniform2d(), 10, 0.01);
    EXPECT_EQ(a2.value, 0.0);
}

TEST(Grid, SmoothDensitiesHaveSmallDeepGaps) {
    EXPECT_LT(riemann_gap(make_linear(), 12).gap(), 0.01);
    EXPECT_LT(riemann_gap(make_quadratic(), 12).gap(), 0.01);
    EXPECT_LT(riemann_gap(make_pyramid(), 12).gap(), 0.01);
}

TEST(Grid, ResidualSetGapNeverCloses) {
    DensitySpec f = cantor_density(0.2);
    for (int k : {2, 6, 10}) {
        GridStats g = riemann_gap(f, k);
        EXPECT_EQ(g.i_minus, 0.0);
        EXPECT_GE(g.gap(), 1.0);
    }
}

TEST(Entropy, DifferentialEntropyByQuadrature) {
    EXPECT_NEAR(differential_entropy(make_uniform()), 0.0, 1e-9);
    // Integral of 2x log2(1/(2x)) over [0,1] is 1/(2 ln 2) - 1.
    EXPECT_NEAR(differential_entropy(make_linear()), 0.5 / std::log(2.0) - 1.0, 2e-6);
    EXPECT_NEAR(differential_entropy(make_uniform2d()), 0.0, 1e-9);
    // Target of the general pair: 2 e^{-2x} has entropy 1/ln2 - 1.
    RatioDensitySpec r = make_exp2_over_exp();
    double e = differential_entropy_on(
        [&](double x) { return r.target().eval({x}); }, 0.0, 16.0);
    EXPECT_NEAR(e, 1.0 / std::log(2.0) - 1.0, 2e-6);
}

TEST(Entropy, QuadratureBudgetStopsRoughIntegrands) {
    // An integrand rough at every scale defeats the local acceptance test
    // of adaptive Simpson: every panel keeps splitting, and the evaluation
    // budget turns that into an error instead of a hang.
    auto rough = [](double x) {
        std::uint64_t u;
        std::memcpy(&u, &x, sizeof u);
        u ^= u >> 33;
        u *= 0xff51afd7ed558ccdull;
        u ^= u >> 33;
        u *= 0xc4ceb9fe1a85ec53ull;
        u ^= u >> 33;
        return static_cast<double>(u >> 11) * 0x1.0p-53;
    };
    EXPECT_THROW(integrate(rough, 0.0, 1.0), feasibility_error);
}

TEST(Entropy, DiscretizedOutputLaw) {
    auto uniform_cdf = [](double x) { return x; };
    EXPECT_NEAR(discretized_entropy(uniform_cdf, 1.0 / 16, 0.0, 1.0), 3.0, 1e-12);
    EXPECT_NEAR(discretized_entropy(uniform_cdf, 0.25, 0.0, 1.0), 1.0, 1e-12);

    // Frozen grid entropy of 1 - e^{-2x} at eps = 2^-8 over [0,16]; agrees
    // with log2(1/2eps) + differential entropy to ~1e-5.
    auto exp2_cdf = [](double x) { return -std::expm1(-2.0 * x); };
    double h = discretized_entropy(exp2_cdf, std::ldexp(1.0, -8), 0.0, 16.0);
    EXPECT_NEAR(h, 7.442709716652, 1e-9);
    EXPECT_NEAR(h, 7.0 + (1.0 / std::log(2.0) - 1.0), 5e-5);

    // Truncating real mass is refused.
    EXPECT_THROW(discretized_entropy(exp2_cdf, 0.01, 0.0, 2.0), domain_error);
    EXPECT_THROW(discretized_entropy(uniform_cdf, 0.0, 0.0, 1.0), domain_error);
}

TEST(Entropy, LowerBoundFormula) {
    EXPECT_EQ(ky_lower_bound(0.0, 1, std::ldexp(1.0, -10)), 9.0);
    EXPECT_EQ(ky_lower_bound(0.0, 2, std::ldexp(1.0, -10)), 18.0);
    EXPECT_NEAR(ky_lower_bound(-0.5, 1, 0.25), -0.5 + 2.0 - 1.0, 1e-15);
    EXPECT_THROW(ky_lower_bound(0.0, 1, 0.0), domain_error);
}

TEST(Experiment, CompactPathRowsAndVerdict) {
    ExperimentConfig cfg;
    cfg.name = "linear";
    cfg.epsilons = {1.0 / 64, 1.0 / 256};
    cfg.n = 400;
    cfg.seed = 1;
    ExperimentResult res = run_experiment(cfg);
    EXPECT_EQ(res.verdict, "ok");

    BoundReport row;
    ASSERT_TRUE(has_row(res, "oracle-calls<=4C@", &row));
    EXPECT_EQ(row.theoretical, 8.0);
    EXPECT_TRUE(row.satisfied);
    ASSERT_TRUE(has_row(res, "oracle-calls<=4C+A@", &row));
    EXPECT_TRUE(row.satisfied);
    EXPECT_TRUE(has_row(res, "phase2-bisection-bits(half-eps-form)@"));
    EXPECT_TRUE(has_row(res, "phase2-bisection-bits(eps-form)@"));
    EXPECT_TRUE(has_row(res, "total-bits(half-eps-form)@"));
    EXPECT_TRUE(has_row(res, "total-bits(eps-form)@"));
    ASSERT_TRUE(has_row(res, "lower-bound-reference@", &row));
    // A healthy sampler sits above the lower bound, so the reference row
    // reports unsatisfied by design.
    EXPECT_FALSE(row.satisfied);
    EXPECT_GT(row.empirical_mean, row.theoretical);

    // Slope of total bits vs log2(1/eps) is near d = 1.
    EXPECT_NEAR(res.fitted_slope, 1.0, 0.35);

    for (const BoundReport& r : res.reports)
        if (r.bound_name.rfind("lower-bound-reference", 0) != 0)
            EXPECT_TRUE(r.satisfied) << r.bound_name;
}

TEST(Experiment, RatioPathRows) {
    ExperimentConfig cfg;
    cfg.name = "exp2-over-exp";
    cfg.epsilons = {1.0 / 64};
    cfg.n = 400;
    cfg.seed = 2;
    ExperimentResult res = run_experiment(cfg);
    EXPECT_EQ(res.verdict, "ok");
    BoundReport row;
    ASSERT_TRUE(has_row(res, "oracle-calls<=4C@", &row));
    EXPECT_EQ(row.theoretical, 8.0);
    EXPECT_TRUE(row.satisfied);
    EXPECT_TRUE(has_row(res, "inversion-bits<=3+grid-entropy@"));
    EXPECT_TRUE(has_row(res, "decision-bits<=2(4C+A)@"));
    EXPECT_TRUE(has_row(res, "decision-bits<=(d+1)(4C+A)@"));
    EXPECT_TRUE(has_row(res, "total-bits<=delta+3+grid-entropy@"));
    EXPECT_TRUE(has_row(res, "lower-bound-reference@"));
    // No compact-path rows on the ratio path.
    EXPECT_FALSE(has_row(res, "phase2-bisection-bits(half-eps-form)@"));
    for (const BoundReport& r : res.reports)
        if (r.bound_name.rfind("lower-bound-reference", 0) != 0)
            EXPECT_TRUE(r.satisfied) << r.bound_name;
}

TEST(Experiment, ResidualSetVerdict) {
    ExperimentConfig cfg;
    cfg.name = "cantor:0.2";
    cfg.epsilons = {0.01};
    cfg.n = 60;
    cfg.seed = 3;
    cfg.depth_cap = 20;
    ExperimentResult res = run_experiment(cfg);
    EXPECT_EQ(res.verdict, "NonRiemannSuspected");
    BoundReport row;
    ASSERT_TRUE(has_row(res, "nonriemann-cap-frequency@", &row));
    EXPECT_EQ(row.empirical_mean, 1.0);
    EXPECT_FALSE(row.satisfied);
}

TEST(Experiment, WorkerSplitDoesNotChangeResults) {
    ExperimentConfig cfg;
    cfg.name = "pyramid";
    cfg.epsilons = {1.0 / 32};
    cfg.n = 300;
    cfg.seed = 4;
    cfg.jobs = 1;
    ExperimentResult one = run_experiment(cfg);
    cfg.jobs = 3;
    ExperimentResult three = run_experiment(cfg);
    ASSERT_EQ(one.reports.size(), three.reports.size());
    for (std::size_t i = 0; i < one.reports.size(); ++i) {
        EXPECT_EQ(one.reports[i].bound_name, three.reports[i].bound_name);
        EXPECT_EQ(one.reports[i].empirical_mean, three.reports[i].empirical_mean);
        EXPECT_EQ(one.reports[i].empirical_stderr, three.reports[i].empirical_stderr);
        EXPECT_EQ(one.reports[i].satisfied, three.reports[i].satisfied);
    }
}

TEST(Experiment, ValidatesInput) {
    ExperimentConfig cfg;
    cfg.name = "linear";
    cfg.epsilons = {};
    EXPECT_THROW(run_experiment(cfg), validation_error);
    cfg.epsilons = {0.01};
    cfg.n = 0;
    EXPECT_THROW(run_experiment(cfg), validation_error);
}
