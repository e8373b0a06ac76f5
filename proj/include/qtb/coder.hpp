#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "qtb/quadtree.hpp"

namespace qtb {

// Probability of symbol 1 in units of 2^-16, kept inside [1, 65535] so both
// symbols stay codable.
struct QuantProb {
    std::uint32_t p1 = 32768;

    std::uint32_t weight(Bit v) const { return v ? p1 : 65536u - p1; }
    friend bool operator==(const QuantProb&, const QuantProb&) = default;
};

// round(p1 * 65536) with halves rounded up, clamped to [1, 65535].
// Throws std::domain_error unless 0 < p1 < 1.
QuantProb quantize(double p1);

// -log2 of the quantized probability assigned to v.
double quantized_cost_bits(QuantProb q, Bit v);

struct StreamError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Binary range encoder: 32-bit range, 64-bit low with deferred carry,
// byte-wise renormalisation, most significant byte first. Symbol 1 takes the
// lower part of the interval.
class RangeEncoder {
public:
    void encode(QuantProb q, Bit v);
    // Flushes the remaining low bytes and returns the payload. The encoder
    // must not be used afterwards.
    std::vector<std::uint8_t> finish();

private:
    void shift_low();

    std::vector<std::uint8_t> out_;
    std::uint64_t low_ = 0;
    std::uint32_t range_ = 0xFFFFFFFFu;
    std::uint8_t cache_ = 0;
    std::uint64_t pending_ = 1;  // cache byte plus queued 0xFF bytes
    bool first_ = true;          // the very first cache byte is always 0 and is not stored
    bool finished_ = false;
};

class RangeDecoder {
public:
    // Reads the 4-byte preamble. Throws StreamError on short input.
    explicit RangeDecoder(std::span<const std::uint8_t> payload);

    Bit decode(QuantProb q);

    std::size_t bytes_consumed() const { return pos_; }

private:
    std::uint8_t next_byte();

    std::span<const std::uint8_t> in_;
    std::size_t pos_ = 0;
    std::uint32_t range_ = 0xFFFFFFFFu;
    std::uint32_t code_ = 0;
};

}  // namespace qtb
