#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "qtb/coder.hpp"
#include "qtb/image.hpp"
#include "qtb/quadtree.hpp"

namespace qtb {

// Container layout (see FORMAT.md):
//   0..1  magic "QB"
//   2..3  width,  u16 big-endian
//   4..5  height, u16 big-endian
//   6     configuration hash
//   7..   range-coded payload
inline constexpr std::size_t kHeaderSize = 7;

struct FormatError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Header {
    std::uint16_t width = 0;
    std::uint16_t height = 0;
    std::uint8_t config_hash = 0;
};

struct CompressedImage {
    Header header;
    std::vector<std::uint8_t> payload;

    std::vector<std::uint8_t> serialize() const;
    // Throws FormatError on bad magic, zero dimensions or short input.
    static CompressedImage parse(std::span<const std::uint8_t> bytes);
    std::size_t total_bytes() const { return kHeaderSize + payload.size(); }
};

struct CodecOptions {
    HyperParams hp;
    // Images that are not a 2^d square are zero-padded to one; the decoder
    // strips the padding using the header dimensions.
    bool allow_padding = true;
};

// Filled in by compress/decompress when requested.
struct CodecTrace {
    std::uint64_t state_checksum = 0;  // CodingState::checksum() after the last pixel
    double ideal_bits = 0.0;           // sum of -log2 q* over coded pixels
    double quantized_bits = 0.0;       // same with the quantized probabilities
    std::uint64_t coded_pixels = 0;
    int d_max = 0;
};

// One byte summarising alpha, beta and the split prior.
std::uint8_t config_hash(const HyperParams& hp);

// Throws std::invalid_argument if a dimension is 0 or above 65535, or if the
// image needs padding and padding is disabled.
CompressedImage compress(const BinaryImage& img, const CodecOptions& opt, CodecTrace* trace = nullptr);

// Throws FormatError on a configuration mismatch or trailing bytes and
// StreamError on a truncated payload.
BinaryImage decompress(const CompressedImage& c, const CodecOptions& opt, CodecTrace* trace = nullptr);

std::vector<std::uint8_t> compress_bytes(const BinaryImage& img, const CodecOptions& opt);
BinaryImage decompress_bytes(std::span<const std::uint8_t> bytes, const CodecOptions& opt);

struct Rate {
    double actual_bpp = 0.0;  // whole file, header included
    double ideal_bpp = 0.0;   // model code length without coder overhead
    std::size_t file_bytes = 0;
};

Rate measure_rate(const BinaryImage& img, const CodecOptions& opt);

}  // namespace qtb
