#include "qtb/coder.hpp"

#include <cmath>

namespace qtb {

namespace {
constexpr std::uint32_t kTop = 1u << 24;

std::uint32_t split_point(std::uint32_t range, QuantProb q) {
    return static_cast<std::uint32_t>((static_cast<std::uint64_t>(range) * q.p1) >> 16);
}
}  // namespace

QuantProb quantize(double p1) {
    if (!(p1 > 0.0 && p1 < 1.0)) throw std::domain_error("probability must lie in (0,1)");
    const double scaled = std::floor(p1 * 65536.0 + 0.5);
    if (scaled < 1.0) return QuantProb{1};
    if (scaled > 65535.0) return QuantProb{65535};
    return QuantProb{static_cast<std::uint32_t>(scaled)};
}

double quantized_cost_bits(QuantProb q, Bit v) {
    return 16.0 - std::log2(static_cast<double>(q.weight(v)));
}

void RangeEncoder::encode(QuantProb q, Bit v) {
    if (finished_) throw std::logic_error("encoder already finished");
    const std::uint32_t bound = split_point(range_, q);
    if (v) {
        range_ = bound;
    } else {
        low_ += bound;
        range_ -= bound;
    }
    while (range_ < kTop) {
        range_ <<= 8;
        shift_low();
    }
}

void RangeEncoder::shift_low() {
    if (static_cast<std::uint32_t>(low_) < 0xFF000000u || (low_ >> 32) != 0) {
        const auto carry = static_cast<std::uint8_t>(low_ >> 32);
        std::uint8_t byte = cache_;
        do {
            if (first_)
                first_ = false;
            else
                out_.push_back(static_cast<std::uint8_t>(byte + carry));
            byte = 0xFF;
        } while (--pending_ != 0);
        cache_ = static_cast<std::uint8_t>(low_ >> 24);
    }
    ++pending_;
    low_ = (low_ & 0x00FFFFFFu) << 8;
}

std::vector<std::uint8_t> RangeEncoder::finish() {
    if (finished_) throw std::logic_error("encoder already finished");
    for (int k = 0; k < 5; ++k) shift_low();
    finished_ = true;
    return std::move(out_);
}

RangeDecoder::RangeDecoder(std::span<const std::uint8_t> payload) : in_(payload) {
    for (int k = 0; k < 4; ++k) code_ = (code_ << 8) | next_byte();
}

std::uint8_t RangeDecoder::next_byte() {
    if (pos_ >= in_.size()) throw StreamError("range decoder ran past the end of the payload");
    return in_[pos_++];
}

Bit RangeDecoder::decode(QuantProb q) {
    const std::uint32_t bound = split_point(range_, q);
    Bit v;
    if (code_ < bound) {
        range_ = bound;
        v = 1;
    } else {
        code_ -= bound;
        range_ -= bound;
        v = 0;
    }
    while (range_ < kTop) {
        range_ <<= 8;
        code_ = (code_ << 8) | next_byte();
    }
    return v;
}

}  // namespace qtb
