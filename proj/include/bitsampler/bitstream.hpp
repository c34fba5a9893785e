#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "bitsampler/errors.hpp"

namespace bitsampler {

// Supplier of i.i.d. fair bits.  All randomness in the library flows
// through this interface, so the number of bits a sampler consumed is
// always exactly bits_used() minus its value when the sampler started.
class BitSource {
public:
    virtual ~BitSource() = default;

    int next_bit() {
        ++consumed_;
        return generate();
    }

    std::uint64_t bits_used() const noexcept { return consumed_; }

    // Zeroes the counter without touching generator state.
    void reset_count() noexcept { consumed_ = 0; }

protected:
    virtual int generate() = 0;

private:
    std::uint64_t consumed_ = 0;
};

// Mixes a base seed with a replica index so that per-replica streams are
// decorrelated even for adjacent indices.  splitmix64 finalizer.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
    std::uint64_t z = base + index * 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// PRNG-backed source.  Draws one 64-bit word at a time from mt19937_64 and
// serves it LSB first.
class SeededBitSource : public BitSource {
public:
    explicit SeededBitSource(std::uint64_t seed) : engine_(seed) {}

protected:
    int generate() override {
        if (cached_ == 0) {
            word_ = engine_();
            cached_ = 64;
        }
        int bit = static_cast<int>(word_ & 1u);
        word_ >>= 1;
        --cached_;
        return bit;
    }

private:
    std::mt19937_64 engine_;
    std::uint64_t word_ = 0;
    int cached_ = 0;
};

// Replays a fixed tape of bits; throws replay_exhausted when it runs dry.
class ReplayBitSource : public BitSource {
public:
    explicit ReplayBitSource(std::vector<std::uint8_t> bits)
        : bits_(std::move(bits)) {}

    std::size_t remaining() const noexcept { return bits_.size() - pos_; }

protected:
    int generate() override {
        if (pos_ >= bits_.size())
            throw replay_exhausted("bit tape exhausted after " +
                                   std::to_string(bits_.size()) + " bits");
        return bits_[pos_++];
    }

private:
    std::vector<std::uint8_t> bits_;
    std::size_t pos_ = 0;
};

// Parses "0"/"1" characters into a tape, ignoring whitespace.  Anything
// else is a validation error.
inline std::vector<std::uint8_t> parse_bit_string(std::string_view text) {
    std::vector<std::uint8_t> bits;
    bits.reserve(text.size());
    for (char c : text) {
        if (c == '0' || c == '1')
            bits.push_back(static_cast<std::uint8_t>(c - '0'));
        else if (c != ' ' && c != '\n' && c != '\r' && c != '\t')
            throw validation_error(std::string("invalid character in bit tape: '") + c + "'");
    }
    return bits;
}

// Forwards to another source while keeping its own independent counter.
// Lets a test meter a phase of an algorithm without disturbing the
// underlying stream.
class CountingBitSource : public BitSource {
public:
    explicit CountingBitSource(BitSource& inner) : inner_(inner) {}

protected:
    int generate() override { return inner_.next_bit(); }

private:
    BitSource& inner_;
};

// Forwards to another source and records every bit served, so a run can
// be replayed exactly.
class RecordingBitSource : public BitSource {
public:
    explicit RecordingBitSource(BitSource& inner) : inner_(inner) {}

    const std::vector<std::uint8_t>& tape() const noexcept { return tape_; }

protected:
    int generate() override {
        int bit = inner_.next_bit();
        tape_.push_back(static_cast<std::uint8_t>(bit));
        return bit;
    }

private:
    BitSource& inner_;
    std::vector<std::uint8_t> tape_;
};

} // namespace bitsampler
