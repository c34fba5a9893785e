#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "bitsampler/bitstream.hpp"
#include "bitsampler/errors.hpp"

namespace bitsampler {

// Probability vector with per-bit access to each entry's binary expansion.
// Internally every p_i is a dyadic rational num_i / 2^level with
// sum(num_i) = 2^level exactly, so downstream tree construction is exact.
// Two construction modes:
//   from_dyadic  exact numerators, caller-chosen level (<= 62)
//   from_doubles rounds to level 52 and repairs the sum by largest
//                remainder, moving each entry by less than 2^-52
class ProbVector {
public:
    static ProbVector from_dyadic(std::vector<std::uint64_t> nums, int level) {
        if (level < 0 || level > 62)
            throw validation_error("dyadic level must lie in [0, 62]");
        std::uint64_t total = 0;
        for (std::uint64_t v : nums) {
            if (v > (std::uint64_t{1} << level))
                throw validation_error("dyadic probability exceeds 1");
            total += v;
        }
        if (total != (std::uint64_t{1} << level))
            throw validation_error("dyadic probabilities must sum to exactly 1");
        return ProbVector(std::move(nums), level);
    }

    static ProbVector from_doubles(const std::vector<double>& p) {
        if (p.empty()) throw validation_error("empty probability vector");
        double sum = 0.0;
        for (double v : p) {
            if (!(v >= 0.0 && v <= 1.0))
                throw validation_error("probabilities must lie in [0,1]");
            sum += v;
        }
        if (std::abs(sum - 1.0) > std::ldexp(static_cast<double>(p.size()), -52))
            throw validation_error("probabilities sum to " + std::to_string(sum) +
                                   ", not 1");
        const int level = 52;
        const std::uint64_t one = std::uint64_t{1} << level;
        std::vector<std::uint64_t> nums(p.size());
        std::vector<std::pair<double, std::size_t>> remainders(p.size());
        std::uint64_t total = 0;
        for (std::size_t i = 0; i < p.size(); ++i) {
            double scaled = std::ldexp(p[i], level);
            double fl = std::floor(scaled);
            nums[i] = static_cast<std::uint64_t>(fl);
            remainders[i] = {scaled - fl, i};
            total += nums[i];
        }
        // Hand the rounding deficit to the largest remainders (or, if the
        // input sums a hair above 1, claw back from the smallest).
        auto deficit = static_cast<std::int64_t>(one) - static_cast<std::int64_t>(total);
        std::sort(remainders.begin(), remainders.end(),
                  [](const auto& a, const auto& b) {
                      return a.first > b.first || (a.first == b.first && a.second < b.second);
                  });
        if ((deficit < 0 ? -deficit : deficit) > static_cast<std::int64_t>(p.size()))
            throw validation_error("probability vector too far from normalized");
        for (std::int64_t k = 0; k < deficit; ++k) ++nums[remainders[static_cast<std::size_t>(k)].second];
        for (std::int64_t k = 0; k < -deficit; ++k) {
            auto& slot = nums[remainders[remainders.size() - 1 - static_cast<std::size_t>(k)].second];
            if (slot == 0) throw validation_error("probability vector too far from normalized");
            --slot;
        }
        return ProbVector(std::move(nums), level);
    }

    std::size_t size() const noexcept { return nums_.size(); }
    int level() const noexcept { return level_; }
    std::uint64_t numerator(std::size_t i) const { return nums_.at(i); }
    double prob(std::size_t i) const {
        return std::ldexp(static_cast<double>(nums_.at(i)), -level_);
    }

    // j-th bit (1-based, j=1 is the half bit) of p_i's binary expansion.
    int bit(std::size_t i, int j) const {
        if (j < 1) throw domain_error("bit index is 1-based");
        if (j > level_) return 0;
        return static_cast<int>((nums_.at(i) >> (level_ - j)) & 1u);
    }

    double entropy() const {
        double h = 0.0;
        for (std::size_t i = 0; i < size(); ++i) {
            double p = prob(i);
            if (p > 0.0) h -= p * std::log2(p);
        }
        return h;
    }

private:
    ProbVector(std::vector<std::uint64_t> nums, int level)
        : nums_(std::move(nums)), level_(level) {}

    std::vector<std::uint64_t> nums_;
    int level_;
};

// Discrete-distribution-generating tree.  Depth-j leaves carry one label
// per set bit at position j of each probability's expansion, appended in
// increasing outcome order.  The random walk visits the nodes of a depth
// level in that canonical order: the leaves occupy the first positions,
// internal nodes the rest, and bit 0 steps into the first half of the
// expanded node list.
class DdgTree {
public:
    explicit DdgTree(const ProbVector& p) : p_(p) {
        leaves_.resize(static_cast<std::size_t>(p.level()) + 1);
        for (int j = 1; j <= p.level(); ++j)
            for (std::size_t i = 0; i < p.size(); ++i)
                if (p.bit(i, j)) leaves_[static_cast<std::size_t>(j)].push_back(i);
        for (std::size_t i = 0; i < p.size(); ++i)
            if (p.prob(i) == 1.0) certain_ = static_cast<long>(i);
        // Kraft equality, exact in integer arithmetic.
        std::uint64_t mass = (certain_ >= 0) ? (std::uint64_t{1} << p.level()) : 0;
        for (int j = 1; j <= p.level(); ++j)
            mass += static_cast<std::uint64_t>(leaves_[static_cast<std::size_t>(j)].size())
                    << (p.level() - j);
        if (mass != (std::uint64_t{1} << p.level()))
            throw validation_error("leaf mass violates Kraft equality");
    }

    const std::vector<std::size_t>& leaves_at(int depth) const {
        return leaves_.at(static_cast<std::size_t>(depth));
    }

    // Exact expected depth of the walk, sum of j * m_j / 2^j.
    double expected_depth() const {
        double e = 0.0;
        for (int j = 1; j <= p_.level(); ++j)
            e += std::ldexp(static_cast<double>(j) *
                            static_cast<double>(leaves_[static_cast<std::size_t>(j)].size()), -j);
        return e;
    }

    std::size_t sample(BitSource& source) const {
        if (certain_ >= 0) return static_cast<std::size_t>(certain_);
        std::uint64_t idx = 0;
        for (int j = 1; j <= p_.level(); ++j) {
            idx = (idx << 1) | static_cast<std::uint64_t>(source.next_bit());
            const auto& labels = leaves_[static_cast<std::size_t>(j)];
            if (idx < labels.size()) return labels[static_cast<std::size_t>(idx)];
            idx -= labels.size();
        }
        // Kraft equality makes the last level exhaustive.
        throw probability_zero_event("ddg walk fell off the tree");
    }

private:
    ProbVector p_;
    std::vector<std::vector<std::size_t>> leaves_;
    long certain_ = -1;
};

inline std::size_t ky_sample(const ProbVector& p, BitSource& source) {
    return DdgTree(p).sample(source);
}

// Decides U <= t for a fresh uniform U whose bits are drawn lazily: scan
// for the first position where U's bit differs from t's.  Geometric with
// mean 2 bits.  threshold_bit(j) is the j-th bit (1-based) of t's binary
// expansion; 128 agreeing bits means the source is broken.
inline bool decide_leq(const std::function<int(int)>& threshold_bit, BitSource& source) {
    for (int j = 1; j <= 128; ++j) {
        int u = source.next_bit();
        int t = threshold_bit(j);
        if (u < t) return true;
        if (u > t) return false;
    }
    throw probability_zero_event("comparator saw 128 agreeing bits");
}

// Binary-expansion accessor for a double t in [0,1].  Dyadic t gets its
// terminating expansion (1/2 -> .1000...); t = 1 is the all-ones string.
inline std::function<int(int)> threshold_bits_of(double t) {
    if (!(t >= 0.0 && t <= 1.0)) throw domain_error("threshold must lie in [0,1]");
    if (t == 1.0)
        return [](int) { return 1; };
    if (t == 0.0)
        return [](int) { return 0; };
    int exp = 0;
    double mant = std::frexp(t, &exp); // t = mant * 2^exp, mant in [0.5, 1)
    auto m = static_cast<std::uint64_t>(std::ldexp(mant, 53));
    int shift = 53 - exp; // t = m / 2^shift, shift >= 53
    return [m, shift](int j) -> int {
        if (j > shift) return 0;
        return static_cast<int>((m >> (shift - j)) & 1u);
    };
}

inline bool decide_leq(double t, BitSource& source) {
    return decide_leq(threshold_bits_of(t), source);
}

// Rejection sampling from p through proposal q with p_i <= C q_i:
// propose X ~ q by tree walk, accept with probability p_X / (C q_X) via
// the comparator.  Expected trials C.
class DiscreteRejectionSampler {
public:
    struct Outcome {
        std::size_t index;
        std::uint64_t trials;
    };

    DiscreteRejectionSampler(ProbVector p, ProbVector q, double c)
        : p_(std::move(p)), q_(std::move(q)), c_(c), tree_(q_) {
        if (p_.size() != q_.size())
            throw validation_error("p and q must have equal length");
        if (!(c_ >= 1.0))
            throw validation_error("domination constant must be >= 1");
        for (std::size_t i = 0; i < p_.size(); ++i)
            if (p_.prob(i) > c_ * q_.prob(i))
                throw validation_error("domination fails at index " + std::to_string(i) +
                                       ": p=" + std::to_string(p_.prob(i)) +
                                       " > C*q=" + std::to_string(c_ * q_.prob(i)));
    }

    Outcome sample_detailed(BitSource& source) const {
        for (std::uint64_t trial = 1;; ++trial) {
            std::size_t x = tree_.sample(source);
            double t = p_.prob(x) / (c_ * q_.prob(x));
            if (decide_leq(t, source)) return Outcome{x, trial};
        }
    }

    std::size_t sample(BitSource& source) const { return sample_detailed(source).index; }

private:
    ProbVector p_, q_;
    double c_;
    DdgTree tree_;
};

} // namespace bitsampler
