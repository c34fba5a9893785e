#pragma once

#include <cmath>
#include <cstdint>
#include <utility>

#include <boost/multiprecision/cpp_int.hpp>

#include "bitsampler/errors.hpp"

namespace bitsampler {

using bigint = boost::multiprecision::cpp_int;

// Rounds num / 2^level to the nearest double without overflowing the
// conversion, even when num has thousands of bits.
inline double dyadic_to_double(const bigint& num, long level) {
    if (num == 0) return 0.0;
    long bits = static_cast<long>(boost::multiprecision::msb(num)) + 1;
    if (bits <= 62)
        return std::ldexp(static_cast<double>(num.convert_to<std::uint64_t>()),
                          static_cast<int>(-level));
    // Keep the top 62 bits; the discarded tail is below double precision.
    long shift = bits - 62;
    bigint top = num >> shift;
    return std::ldexp(static_cast<double>(top.convert_to<std::uint64_t>()),
                      static_cast<int>(shift - level));
}

// Closed subinterval of [0,1] with exact dyadic endpoints
// lo_num / 2^level and hi_num / 2^level.  Halving at the exact midpoint is
// loss-free at any depth, which is what keeps the probability-1/2 split of
// the bisection loop honest long past double precision.
class DyadicInterval {
public:
    DyadicInterval() : lo_(0), hi_(1), level_(0) {}

    DyadicInterval(bigint lo, bigint hi, long level)
        : lo_(std::move(lo)), hi_(std::move(hi)), level_(level) {
        if (level_ < 0 || lo_ < 0 || lo_ >= hi_ || hi_ > (bigint(1) << level_))
            throw validation_error("dyadic interval endpoints out of order or outside [0,1]");
    }

    static DyadicInterval unit() { return DyadicInterval(); }

    // Exact decomposition of two doubles in [0,1].  Doubles are dyadic
    // rationals, so no rounding happens here.
    static DyadicInterval from_doubles(double lo, double hi) {
        if (!(lo >= 0.0) || !(hi <= 1.0) || !(lo < hi))
            throw domain_error("interval endpoints must satisfy 0 <= lo < hi <= 1");
        auto [lnum, llev] = decompose(lo);
        auto [hnum, hlev] = decompose(hi);
        long level = llev > hlev ? llev : hlev;
        return DyadicInterval(lnum << (level - llev), hnum << (level - hlev), level);
    }

    // bit 0 keeps the lower half, bit 1 the upper half.
    DyadicInterval half(int bit) const {
        bigint sum = lo_ + hi_;
        if (bit == 0)
            return DyadicInterval(lo_ << 1, std::move(sum), level_ + 1);
        return DyadicInterval(std::move(sum), hi_ << 1, level_ + 1);
    }

    double lo() const { return dyadic_to_double(lo_, level_); }
    double hi() const { return dyadic_to_double(hi_, level_); }
    double mid() const { return dyadic_to_double(lo_ + hi_, level_ + 1); }
    double width() const { return dyadic_to_double(hi_ - lo_, level_); }

    long level() const noexcept { return level_; }
    const bigint& lo_num() const noexcept { return lo_; }
    const bigint& hi_num() const noexcept { return hi_; }

private:
    // value = num / 2^level with num, level minimal-ish (level = 53 - exp).
    static std::pair<bigint, long> decompose(double v) {
        if (v == 0.0) return {bigint(0), 0};
        if (v == 1.0) return {bigint(1), 0};
        int exp = 0;
        double mant = std::frexp(v, &exp); // v = mant * 2^exp, mant in [0.5, 1)
        auto num = static_cast<std::uint64_t>(std::ldexp(mant, 53));
        long level = 53 - exp;
        while ((num & 1u) == 0 && level > 0) {
            num >>= 1;
            --level;
        }
        return {bigint(num), level};
    }

    bigint lo_, hi_;
    long level_;
};

} // namespace bitsampler
