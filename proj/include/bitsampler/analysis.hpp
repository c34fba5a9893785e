#pragma once

#include <cmath>
#include <cstdint>
#include <exception>
#include <functional>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "bitsampler/bitstream.hpp"
#include "bitsampler/builtins.hpp"
#include "bitsampler/csv.hpp"
#include "bitsampler/density.hpp"
#include "bitsampler/errors.hpp"
#include "bitsampler/ratio.hpp"
#include "bitsampler/rejection.hpp"

namespace bitsampler {

// ---------------------------------------------------------------------
// Quadrature

// Adaptive Simpson integration.  Workhorse for every entropy-flavored
// constant: no closed-form values are trusted anywhere in the library,
// they are all recomputed from the integrand.  The evaluation budget
// turns a non-integrable integrand into an error instead of a hang.
inline double integrate(const std::function<double(double)>& fn, double a, double b,
                        double tol = 1e-6) {
    struct Ctx {
        const std::function<double(double)>& f;
        long budget;

        double eval(double x) {
            if (--budget < 0)
                throw feasibility_error("quadrature budget exhausted; integrand too rough");
            return f(x);
        }
        static double simpson(double a, double fa, double b, double fb, double fm) {
            return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
        }
        double go(double a, double fa, double b, double fb, double m, double fm,
                  double whole, double tol, int depth) {
            double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
            double flm = eval(lm), frm = eval(rm);
            double left = simpson(a, fa, m, fm, flm);
            double right = simpson(m, fm, b, fb, frm);
            double delta = left + right - whole;
            if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
                return left + right + delta / 15.0;
            return go(a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
                   go(m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
        }
    };
    if (!(a < b)) {
        if (a == b) return 0.0;
        throw domain_error("integration bounds out of order");
    }
    Ctx ctx{fn, 4000000};
    double m = 0.5 * (a + b);
    double fa = ctx.eval(a), fb = ctx.eval(b), fm = ctx.eval(m);
    double whole = Ctx::simpson(a, fa, b, fb, fm);
    return ctx.go(a, fa, b, fb, m, fm, whole, tol, 48);
}

// Differential entropy in bits, integral of f log2(1/f), by adaptive
// quadrature over the support (d <= 2).
inline double differential_entropy(const DensitySpec& f, double tol = 1e-6) {
    auto plogp = [](double v) { return v > 0.0 ? -v * std::log2(v) : 0.0; };
    if (f.dimension() == 1) {
        const Interval& ax = f.support().axes[0];
        if (!std::isfinite(ax.lo) || !std::isfinite(ax.hi))
            throw feasibility_error("entropy quadrature needs a finite range");
        return integrate([&](double x) { return plogp(f.eval1(x)); }, ax.lo, ax.hi, tol);
    }
    if (f.dimension() == 2) {
        const Interval& ax0 = f.support().axes[0];
        const Interval& ax1 = f.support().axes[1];
        return integrate(
            [&](double x) {
                return integrate([&](double y) { return plogp(f.eval({x, y})); }, ax1.lo,
                                 ax1.hi, 0.1 * tol);
            },
            ax0.lo, ax0.hi, tol);
    }
    throw feasibility_error("entropy quadrature implemented for d <= 2 only");
}

// Entropy over a finite interval in x, for targets whose support is
// unbounded but whose mass is concentrated (the tail must be negligible).
inline double differential_entropy_on(const std::function<double(double)>& f, double lo,
                                      double hi, double tol = 1e-6) {
    auto plogp = [](double v) { return v > 0.0 ? -v * std::log2(v) : 0.0; };
    return integrate([&](double x) { return plogp(f(x)); }, lo, hi, tol);
}

// ---------------------------------------------------------------------
// Riemann grids

struct GridStats {
    int k = 0;
    double i_plus = 0.0;
    double i_minus = 0.0;
    double gap() const noexcept { return i_plus - i_minus; }
};

// Upper and lower Riemann sums of the density over the regular level-k
// grid of its support: 2^{dk} cells of measure 2^{-dk} each.
inline GridStats riemann_gap(const DensitySpec& density, int k) {
    int d = density.dimension();
    if (k < 0) throw domain_error("grid level must be nonnegative");
    if (k > 24 || d * k > 25)
        throw feasibility_error("riemann_gap limited to k <= 24 and 2^{dk} <= 2^25 cells");
    const std::uint64_t per_axis = std::uint64_t{1} << k;
    const double w = std::ldexp(1.0, -k);
    const double cell_measure = std::ldexp(1.0, -d * k);
    std::vector<std::uint64_t> idx(static_cast<std::size_t>(d), 0);
    Box cell = density.support(); // per-cell scratch
    double up = 0.0, down = 0.0;
    for (;;) {
        for (int j = 0; j < d; ++j) {
            double lo = static_cast<double>(idx[static_cast<std::size_t>(j)]) * w;
            cell.axes[static_cast<std::size_t>(j)] = Interval{lo, lo + w};
        }
        OracleBounds b = density.bounds(cell);
        up += b.sup_f * cell_measure;
        down += b.inf_f * cell_measure;
        int j = 0;
        for (; j < d; ++j) {
            if (++idx[static_cast<std::size_t>(j)] < per_axis) break;
            idx[static_cast<std::size_t>(j)] = 0;
        }
        if (j == d) break;
    }
    return GridStats{k, up, down};
}

struct AEstimate {
    double value = 0.0;    // partial sum of grid gaps, k = 0..k_max
    double last_gap = 0.0; // gap at the deepest level actually computed
    bool converged = false;
};

// Partial sum of the level gaps, the quantity that prices the extra
// oracle calls of a non-monotone density.  Gaps are nonincreasing in k,
// so once one is exactly zero the remaining terms vanish too.
inline AEstimate a_of_f(const DensitySpec& density, int k_max, double tail_tol) {
    if (k_max < 0) throw domain_error("k_max must be nonnegative");
    AEstimate est;
    for (int k = 0; k <= k_max; ++k) {
        GridStats g = riemann_gap(density, k);
        est.value += g.gap();
        est.last_gap = g.gap();
        if (est.last_gap == 0.0) break;
    }
    est.converged = est.last_gap <= tail_tol;
    return est;
}

// ---------------------------------------------------------------------
// Entropy of the discretized output law

// Entropy in bits of the probability vector {F(I_j)} where I_j is the
// absolute grid [2 epsilon j, 2 epsilon (j+1)) clipped to [lo, hi].  F
// must carry essentially all its mass inside [lo, hi].
inline double discretized_entropy(const std::function<double(double)>& F, double epsilon,
                                  double lo, double hi) {
    if (!(epsilon > 0.0)) throw domain_error("epsilon must be positive");
    if (!(lo < hi)) throw domain_error("empty range");
    double total = F(hi) - F(lo);
    if (!(total >= 1.0 - 1e-9))
        throw domain_error("range truncates mass " + std::to_string(1.0 - total) +
                           "; enlarge [lo, hi]");
    const double w = 2.0 * epsilon;
    auto j0 = static_cast<long long>(std::floor(lo / w));
    double h = 0.0;
    for (long long j = j0;; ++j) {
        double a = std::max(lo, static_cast<double>(j) * w);
        double b = std::min(hi, (static_cast<double>(j) + 1.0) * w);
        if (a >= hi) break;
        if (b > a) {
            double m = F(b) - F(a);
            if (m > 0.0) h -= m * std::log2(m);
        }
    }
    return h;
}

// Universal lower bound on the expected bits of any epsilon-approximate
// sampler: differential entropy plus d log2(1/epsilon) minus d.
inline double ky_lower_bound(double differential_entropy_bits, int d, double epsilon) {
    if (!(epsilon > 0.0)) throw domain_error("epsilon must be positive");
    return differential_entropy_bits + static_cast<double>(d) * std::log2(1.0 / epsilon) -
           static_cast<double>(d);
}

// ---------------------------------------------------------------------
// Experiments

struct BoundReport {
    std::string bound_name;
    double theoretical = 0.0;
    double empirical_mean = 0.0;
    double empirical_stderr = 0.0;
    bool satisfied = false; // empirical_mean <= theoretical + 3 stderr
};

struct ExperimentConfig {
    std::string name; // density or ratio registry name
    std::vector<double> epsilons;
    std::uint64_t n = 10000;
    std::uint64_t seed = 0;
    int depth_cap = kDefaultDepthCap;
    int jobs = 1;
};

struct ExperimentResult {
    std::vector<BoundReport> reports;
    std::string verdict;       // "ok" or "NonRiemannSuspected"
    double fitted_slope = 0.0; // mean total bits vs log2(1/eps), NaN if < 2 epsilons
};

namespace detail {

inline double log2plus(double v) { return v > 1.0 ? std::log2(v) : 0.0; }

struct Accum {
    std::uint64_t n = 0;
    double sum = 0.0, sumsq = 0.0;

    void add(double v) {
        ++n;
        sum += v;
        sumsq += v * v;
    }
    void merge(const Accum& o) {
        n += o.n;
        sum += o.sum;
        sumsq += o.sumsq;
    }
    double mean() const { return n ? sum / static_cast<double>(n) : 0.0; }
    double stderr_mean() const {
        if (n < 2) return 0.0;
        double nn = static_cast<double>(n);
        double var = (sumsq - sum * sum / nn) / (nn - 1.0);
        return var > 0.0 ? std::sqrt(var / nn) : 0.0;
    }
};

struct EpsAccums {
    Accum total, decision, bisection, oracle, restarts;
    double trials = 0.0, splits = 0.0;
    std::uint64_t cap_hits = 0;

    void merge(const EpsAccums& o) {
        total.merge(o.total);
        decision.merge(o.decision);
        bisection.merge(o.bisection);
        oracle.merge(o.oracle);
        restarts.merge(o.restarts);
        trials += o.trials;
        splits += o.splits;
        cap_hits += o.cap_hits;
    }
};

inline BoundReport make_report(const std::string& name, double eps, double theoretical,
                               const Accum& a) {
    BoundReport r;
    r.bound_name = name + "@eps=" + format_double(eps);
    r.theoretical = theoretical;
    r.empirical_mean = a.mean();
    r.empirical_stderr = a.stderr_mean();
    r.satisfied = r.empirical_mean <= r.theoretical + 3.0 * r.empirical_stderr;
    return r;
}

inline double least_squares_slope(const std::vector<double>& xs,
                                  const std::vector<double>& ys) {
    double n = static_cast<double>(xs.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    double denom = n * sxx - sx * sx;
    if (denom == 0.0) return std::nan("");
    return (n * sxy - sx * sy) / denom;
}

} // namespace detail

// Runs n samples per epsilon (replica i draws from a source seeded
// base_seed + i, so any worker split yields the same stream per replica)
// and compares the telemetry means against every applicable bound.  The
// lower-bound row is a reference line: its satisfied flag follows the
// same formula as the others, so a healthy sampler, which must sit above
// the lower bound, will usually (and correctly) show it unsatisfied.
inline ExperimentResult run_experiment(const ExperimentConfig& config) {
    if (config.epsilons.empty())
        throw validation_error("experiment needs at least one epsilon");
    if (config.n == 0) throw validation_error("experiment needs n >= 1");
    const bool ratio = is_ratio_name(config.name);
    ExperimentResult out;
    out.fitted_slope = std::nan("");

    std::optional<RatioDensitySpec> rspec;
    std::optional<DensitySpec> dspec;  // density sampled (compact path)
    std::optional<DensitySpec> grid_f; // density whose grid prices oracle calls
    double cantor_delta = 0.0;
    if (ratio) {
        rspec.emplace(ratio_by_name(config.name));
        grid_f.emplace(rspec->tilde_density());
    } else {
        dspec.emplace(density_by_name(config.name));
        grid_f = dspec;
        if (config.name.rfind("cantor:", 0) == 0)
            cantor_delta = std::stod(config.name.substr(7));
    }
    // A positive-delta residual-set density defeats both grid analysis
    // and quadrature; for it the experiment only measures cap hits.
    const bool pathological = cantor_delta > 0.0;
    const int d = ratio ? 1 : dspec->dimension();
    const double C = ratio ? rspec->C() : dspec->sup();
    const bool monotone =
        ratio ? rspec->tilde_monotone() : dspec->monotone_axis().has_value();

    AEstimate a;
    bool have_a = false;
    double entropy_bits = 0.0;
    bool have_entropy = false;
    if (!pathological) {
        a = a_of_f(*grid_f, d == 1 ? 12 : 10, 0.01);
        have_a = a.converged;
        if (ratio) {
            const Interval& r = rspec->analysis_range();
            const DensitySpec& t = rspec->target();
            entropy_bits = differential_entropy_on(
                [&](double x) { return t.eval({x}); }, r.lo, r.hi);
        } else {
            entropy_bits = differential_entropy(*dspec);
        }
        have_entropy = true;
    }

    std::vector<double> slope_xs, slope_ys;
    for (double eps : config.epsilons) {
        detail::EpsAccums acc;
        const int jobs = config.jobs > 0 ? config.jobs : 1;
        std::vector<detail::EpsAccums> partial(static_cast<std::size_t>(jobs));
        std::vector<std::exception_ptr> failures(static_cast<std::size_t>(jobs));
        auto worker = [&](int w, detail::EpsAccums& mine, std::exception_ptr& failure) {
            try {
                std::uint64_t begin = config.n * static_cast<std::uint64_t>(w) /
                                      static_cast<std::uint64_t>(jobs);
                std::uint64_t end = config.n * (static_cast<std::uint64_t>(w) + 1) /
                                    static_cast<std::uint64_t>(jobs);
                for (std::uint64_t i = begin; i < end; ++i) {
                    SeededBitSource src(config.seed + i);
                    try {
                        SampleResult s =
                            ratio ? sample_general(*rspec, eps, src, config.depth_cap)
                                  : sample_compact(*dspec, eps, src, config.depth_cap);
                        const Telemetry& t = s.telemetry;
                        mine.total.add(static_cast<double>(t.total_bits()));
                        mine.decision.add(static_cast<double>(t.decision_bits));
                        mine.bisection.add(static_cast<double>(t.bisection_bits));
                        mine.oracle.add(static_cast<double>(t.oracle_calls));
                        mine.restarts.add(static_cast<double>(t.restarts));
                        double trials = static_cast<double>(t.restarts) + 1.0;
                        mine.trials += trials;
                        mine.splits += static_cast<double>(t.oracle_calls) - trials;
                    } catch (const non_riemann_suspected&) {
                        ++mine.cap_hits;
                    }
                }
            } catch (...) {
                failure = std::current_exception();
            }
        };
        if (jobs == 1) {
            worker(0, partial[0], failures[0]);
        } else {
            std::vector<std::thread> pool;
            pool.reserve(static_cast<std::size_t>(jobs));
            for (int w = 0; w < jobs; ++w)
                pool.emplace_back(worker, w, std::ref(partial[static_cast<std::size_t>(w)]),
                                  std::ref(failures[static_cast<std::size_t>(w)]));
            for (auto& th : pool) th.join();
        }
        for (const auto& failure : failures)
            if (failure) std::rethrow_exception(failure);
        for (const auto& p : partial) acc.merge(p);

        if (acc.cap_hits > 0) {
            out.verdict = "NonRiemannSuspected";
            BoundReport r;
            r.bound_name = "nonriemann-cap-frequency@eps=" + format_double(eps);
            r.theoretical = 0.0;
            r.empirical_mean =
                static_cast<double>(acc.cap_hits) / static_cast<double>(config.n);
            r.empirical_stderr = 0.0;
            r.satisfied = false;
            out.reports.push_back(std::move(r));
        }
        if (acc.total.n == 0) continue; // nothing sampled at this epsilon

        using detail::log2plus;
        double dd = static_cast<double>(d);
        double phase2_tight = 3.0 + dd * log2plus(1.0 / (2.0 * eps));
        double phase2_loose = 3.0 + dd * log2plus(1.0 / eps);

        if (monotone)
            out.reports.push_back(
                detail::make_report("oracle-calls<=4C", eps, 4.0 * C, acc.oracle));
        if (have_a)
            out.reports.push_back(detail::make_report("oracle-calls<=4C+A", eps,
                                                      4.0 * C + a.value, acc.oracle));
        if (!ratio) {
            out.reports.push_back(detail::make_report("phase2-bisection-bits(half-eps-form)",
                                                      eps, phase2_tight, acc.bisection));
            out.reports.push_back(detail::make_report("phase2-bisection-bits(eps-form)",
                                                      eps, phase2_loose, acc.bisection));
            if (monotone || have_a) {
                double a_term = monotone ? 0.0 : a.value;
                double base = 4.0 * C * (dd + 1.0) + (dd + 1.0) * a_term;
                out.reports.push_back(detail::make_report("total-bits(half-eps-form)", eps,
                                                          base + phase2_tight, acc.total));
                out.reports.push_back(detail::make_report("total-bits(eps-form)", eps,
                                                          base + phase2_loose, acc.total));
            }
        } else {
            double hent = 0.0;
            bool have_hent = false;
            if (rspec->has_target_cdf()) {
                const Interval& rr = rspec->analysis_range();
                hent = discretized_entropy(
                    [&](double x) { return rspec->target_cdf(x); }, eps, rr.lo, rr.hi);
                have_hent = true;
                out.reports.push_back(detail::make_report("inversion-bits<=3+grid-entropy",
                                                          eps, 3.0 + hent, acc.bisection));
            }
            if (have_a) {
                double inner = 4.0 * C + a.value;
                out.reports.push_back(detail::make_report("decision-bits<=2(4C+A)", eps,
                                                          2.0 * inner, acc.decision));
                out.reports.push_back(detail::make_report("decision-bits<=(d+1)(4C+A)",
                                                          eps, (dd + 1.0) * inner,
                                                          acc.decision));
                if (have_hent)
                    out.reports.push_back(
                        detail::make_report("total-bits<=delta+3+grid-entropy", eps,
                                            2.0 * inner + 3.0 + hent, acc.total));
            }
        }
        if (have_entropy)
            out.reports.push_back(detail::make_report(
                "lower-bound-reference", eps, ky_lower_bound(entropy_bits, d, eps),
                acc.total));
        slope_xs.push_back(std::log2(1.0 / eps));
        slope_ys.push_back(acc.total.mean());
    }
    if (out.verdict.empty()) out.verdict = "ok";
    if (slope_xs.size() >= 2)
        out.fitted_slope = detail::least_squares_slope(slope_xs, slope_ys);
    return out;
}

} // namespace bitsampler
