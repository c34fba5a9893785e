#pragma once

#include <stdexcept>
#include <string>

namespace bitsampler {

// Base class for everything this library throws on purpose.
class error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed inputs: probabilities that do not sum to one, an inverse that
// disagrees with its CDF, depth caps outside the representable range, ...
class validation_error : public error {
public:
    using error::error;
};

// Structurally valid inputs outside an operation's domain, e.g. an oracle
// query for a rectangle that leaves the support, or epsilon <= 0.
class domain_error : public error {
public:
    using error::error;
};

// A replayed bit tape ran dry before the consumer was done.
class replay_exhausted : public error {
public:
    using error::error;
};

// The dominating density failed to dominate: an observed ratio exceeded
// the claimed constant.
class envelope_error : public error {
public:
    using error::error;
};

// An analysis routine was asked for more work than it can do exactly
// (grid too fine, dimension too high).
class feasibility_error : public error {
public:
    using error::error;
};

// An event of probability zero occurred, which means the caller's model of
// the input is wrong (typically a discrete walk falling off its tree).
class probability_zero_event : public error {
public:
    using error::error;
};

// A bisection ran past its depth failsafe.  For a continuous CDF this is
// unreachable; hitting it means the "CDF" has a flat jump.
class depth_limit_exceeded : public error {
public:
    using error::error;
};

// The rejection quadtree descended past its depth cap without the oracle
// gap closing.  For Riemann-integrable densities the gap must shrink, so
// this is evidence the density is not Riemann-integrable (or the cap is
// far too small for its modulus of continuity).
class non_riemann_suspected : public error {
public:
    non_riemann_suspected(const std::string& what, int depth)
        : error(what), depth_(depth) {}
    int depth() const noexcept { return depth_; }

private:
    int depth_;
};

// The naive bisect-then-accept variant exceeded its trial budget.  Kept
// distinct from non_riemann_suspected: this one indicts the algorithm,
// not the density.
class naive_loop_forever : public error {
public:
    using error::error;
};

} // namespace bitsampler
