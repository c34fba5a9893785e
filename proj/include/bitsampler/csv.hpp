#pragma once

#include <charconv>
#include <cstdint>
#include <string>
#include <system_error>

#include "bitsampler/errors.hpp"

namespace bitsampler {

// Shortest decimal string that round-trips to the same double.  Keeps CSV
// output diffable and exact.
inline std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc())
        throw error("number formatting failed");
    return std::string(buf, ptr);
}

inline std::string format_u64(std::uint64_t v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc())
        throw error("number formatting failed");
    return std::string(buf, ptr);
}

} // namespace bitsampler
