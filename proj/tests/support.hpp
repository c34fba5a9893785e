#pragma once

// Shared helpers for the test suites: running-moment accumulator,
// KS / chi-square statistics, bit tapes, and subprocess capture.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <functional>
#include <initializer_list>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "bitsampler/bitstream.hpp"

namespace testsupport {

struct MeanVar {
    double sum = 0.0, sumsq = 0.0;
    std::uint64_t n = 0;

    void add(double x) {
        sum += x;
        sumsq += x * x;
        ++n;
    }
    double mean() const { return sum / static_cast<double>(n); }
    double variance() const {
        double m = mean();
        double v = sumsq / static_cast<double>(n) - m * m;
        return v > 0.0 ? v : 0.0;
    }
    double stderr_mean() const { return std::sqrt(variance() / static_cast<double>(n)); }
};

// One-sided slack for an empirical frequency at virtual certainty.
inline double freq_slack(double p_hat, std::uint64_t n) {
    double v = p_hat * (1.0 - p_hat);
    return 3.0 * std::sqrt((v > 0.0 ? v : 1.0 / static_cast<double>(n)) /
                           static_cast<double>(n));
}

inline double ks_distance(std::vector<double> xs, const std::function<double(double)>& cdf) {
    std::sort(xs.begin(), xs.end());
    const auto n = static_cast<double>(xs.size());
    double d = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        double f = cdf(xs[i]);
        d = std::max(d, f - static_cast<double>(i) / n);
        d = std::max(d, static_cast<double>(i + 1) / n - f);
    }
    return d;
}

inline double chi_square(const std::vector<std::uint64_t>& observed, double expected_each) {
    double s = 0.0;
    for (std::uint64_t o : observed) {
        double diff = static_cast<double>(o) - expected_each;
        s += diff * diff / expected_each;
    }
    return s;
}

inline bitsampler::ReplayBitSource tape(std::initializer_list<int> bits) {
    std::vector<std::uint8_t> v;
    v.reserve(bits.size());
    for (int b : bits) v.push_back(static_cast<std::uint8_t>(b));
    return bitsampler::ReplayBitSource(std::move(v));
}

// Binary expansion of v in [0,1), padded with zeros to `total` bits.
struct RunResult {
    int exit_code = -1;
    std::string out;
};

// Runs a shell command, captures stdout (stderr folded in) and exit code.
inline RunResult run_command(const std::string& cmd) {
    RunResult r;
    FILE* pipe = popen((cmd + " 2>&1").c_str(), "r");
    if (!pipe) return r;
    char buf[4096];
    std::size_t got;
    while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, got);
    int status = pclose(pipe);
    if (WIFEXITED(status)) r.exit_code = WEXITSTATUS(status);
    return r;
}

inline std::string slurp(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

} // namespace testsupport
