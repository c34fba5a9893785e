#pragma once

#include <cstdint>
#include <vector>

namespace bitsampler {

// Exact resource accounting for one produced sample.
//
// decision_bits   bits spent deciding accept/reject (quadtree splits or
//                 threshold comparisons), across all restarts
// bisection_bits  bits spent localizing the accepted point to width 2*eps
// oracle_calls    rectangle-oracle (or density-evaluation) calls
// restarts        rejected trials before the accepting one
// quadtree_depth_last  depth at which the accepting trial halted
struct Telemetry {
    std::uint64_t decision_bits = 0;
    std::uint64_t bisection_bits = 0;
    std::uint64_t oracle_calls = 0;
    std::uint64_t restarts = 0;
    std::uint64_t quadtree_depth_last = 0;

    std::uint64_t total_bits() const noexcept {
        return decision_bits + bisection_bits;
    }
};

// One epsilon-approximate sample plus its cost.
struct SampleResult {
    std::vector<double> value;
    double epsilon = 0.0;
    Telemetry telemetry;

    // Convenience for the one-dimensional samplers.
    double scalar() const { return value.at(0); }
};

} // namespace bitsampler
