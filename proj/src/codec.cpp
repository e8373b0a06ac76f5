#include "qtb/codec.hpp"

#include <cmath>
#include <cstring>

#include "qtb/weighting.hpp"

namespace qtb {

namespace {

constexpr std::uint8_t kMagic0 = 'Q';
constexpr std::uint8_t kMagic1 = 'B';

int coding_depth(std::uint32_t width, std::uint32_t height) {
    if (auto d = exact_depth(width, height)) return *d;
    return padded_depth(width, height);
}

void check_dims(std::uint32_t width, std::uint32_t height) {
    if (width == 0 || height == 0) throw std::invalid_argument("image has a zero dimension");
    if (width > 0xFFFF || height > 0xFFFF) throw std::invalid_argument("image dimension exceeds 65535");
}

}  // namespace

std::vector<std::uint8_t> CompressedImage::serialize() const {
    std::vector<std::uint8_t> out;
    out.reserve(total_bytes());
    out.push_back(kMagic0);
    out.push_back(kMagic1);
    out.push_back(static_cast<std::uint8_t>(header.width >> 8));
    out.push_back(static_cast<std::uint8_t>(header.width & 0xFF));
    out.push_back(static_cast<std::uint8_t>(header.height >> 8));
    out.push_back(static_cast<std::uint8_t>(header.height & 0xFF));
    out.push_back(header.config_hash);
    out.insert(out.end(), payload.begin(), payload.end());
    return out;
}

CompressedImage CompressedImage::parse(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < kHeaderSize) throw FormatError("file shorter than the header");
    if (bytes[0] != kMagic0 || bytes[1] != kMagic1) throw FormatError("bad magic");
    CompressedImage c;
    c.header.width = static_cast<std::uint16_t>((bytes[2] << 8) | bytes[3]);
    c.header.height = static_cast<std::uint16_t>((bytes[4] << 8) | bytes[5]);
    c.header.config_hash = bytes[6];
    if (c.header.width == 0 || c.header.height == 0) throw FormatError("zero image dimension");
    c.payload.assign(bytes.begin() + kHeaderSize, bytes.end());
    return c;
}

std::uint8_t config_hash(const HyperParams& hp) {
    std::uint64_t h = 1469598103934665603ull;
    auto mix_byte = [&](std::uint8_t b) {
        h ^= b;
        h *= 1099511628211ull;
    };
    auto mix_double = [&](double v) {
        std::uint64_t bits;
        std::memcpy(&bits, &v, sizeof bits);
        for (int k = 0; k < 8; ++k) mix_byte(static_cast<std::uint8_t>(bits >> (8 * k)));
    };
    mix_double(hp.alpha);
    mix_double(hp.beta);
    mix_byte(static_cast<std::uint8_t>(hp.g.kind()));
    switch (hp.g.kind()) {
        case SplitPrior::Kind::Uniform:
            mix_double(hp.g.uniform_value());
            break;
        case SplitPrior::Kind::FixedBlock:
            mix_byte(static_cast<std::uint8_t>(hp.g.block_log2()));
            break;
        case SplitPrior::Kind::PerNode:
            mix_byte(static_cast<std::uint8_t>(hp.g.values_depth()));
            for (double v : hp.g.values()) mix_double(v);
            break;
    }
    std::uint8_t folded = 0;
    for (int k = 0; k < 8; ++k) folded ^= static_cast<std::uint8_t>(h >> (8 * k));
    return folded;
}

CompressedImage compress(const BinaryImage& img, const CodecOptions& opt, CodecTrace* trace) {
    check_dims(img.width, img.height);
    if (img.bits.size() != static_cast<std::size_t>(img.width) * img.height)
        throw std::invalid_argument("pixel buffer does not match dimensions");
    const bool exact = exact_depth(img.width, img.height).has_value();
    if (!exact && !opt.allow_padding)
        throw std::invalid_argument("image is not a power-of-two square and padding is disabled");

    const int d = coding_depth(img.width, img.height);
    const BinaryImage grid = exact ? img : pad_to_square(img, d);

    CodingState st(d, opt.hp);
    RangeEncoder enc;
    double ideal = 0.0, quantized = 0.0;
    for (Bit v : grid.bits) {
        if (v > 1) throw std::invalid_argument("pixel value must be 0 or 1");
        const StepProbabilities p = st.predict();
        const QuantProb q = quantize(p.p1);
        enc.encode(q, v);
        quantized += quantized_cost_bits(q, v);
        ideal -= std::log2(st.advance(v));
    }

    CompressedImage c;
    c.header.width = static_cast<std::uint16_t>(img.width);
    c.header.height = static_cast<std::uint16_t>(img.height);
    c.header.config_hash = config_hash(opt.hp);
    c.payload = enc.finish();
    if (trace) {
        trace->state_checksum = st.checksum();
        trace->ideal_bits = ideal;
        trace->quantized_bits = quantized;
        trace->coded_pixels = grid.size();
        trace->d_max = d;
    }
    return c;
}

BinaryImage decompress(const CompressedImage& c, const CodecOptions& opt, CodecTrace* trace) {
    check_dims(c.header.width, c.header.height);
    if (c.header.config_hash != config_hash(opt.hp))
        throw FormatError("codec configuration does not match the one used to compress");
    const int d = coding_depth(c.header.width, c.header.height);
    const std::uint32_t side = std::uint32_t{1} << d;

    CodingState st(d, opt.hp);
    RangeDecoder dec(c.payload);
    BinaryImage grid(side, side, 0);
    double ideal = 0.0, quantized = 0.0;
    for (Bit& v : grid.bits) {
        const StepProbabilities p = st.predict();
        const QuantProb q = quantize(p.p1);
        v = dec.decode(q);
        quantized += quantized_cost_bits(q, v);
        ideal -= std::log2(st.advance(v));
    }
    if (dec.bytes_consumed() != c.payload.size()) throw FormatError("trailing bytes after payload");
    if (trace) {
        trace->state_checksum = st.checksum();
        trace->ideal_bits = ideal;
        trace->quantized_bits = quantized;
        trace->coded_pixels = grid.size();
        trace->d_max = d;
    }
    if (grid.width == c.header.width && grid.height == c.header.height) return grid;
    return crop(grid, c.header.width, c.header.height);
}

std::vector<std::uint8_t> compress_bytes(const BinaryImage& img, const CodecOptions& opt) {
    return compress(img, opt).serialize();
}

BinaryImage decompress_bytes(std::span<const std::uint8_t> bytes, const CodecOptions& opt) {
    return decompress(CompressedImage::parse(bytes), opt);
}

Rate measure_rate(const BinaryImage& img, const CodecOptions& opt) {
    CodecTrace trace;
    const CompressedImage c = compress(img, opt, &trace);
    const double pixels = static_cast<double>(img.width) * img.height;
    Rate r;
    r.file_bytes = c.total_bytes();
    r.actual_bpp = 8.0 * static_cast<double>(r.file_bytes) / pixels;
    r.ideal_bpp = trace.ideal_bits / pixels;
    return r;
}

}  // namespace qtb
