#include "qtb/imageio.hpp"

#include <cctype>
#include <fstream>
#include <iterator>
#include <string>

namespace qtb {

namespace {

class Cursor {
public:
    explicit Cursor(std::span<const std::uint8_t> b) : b_(b) {}

    bool at_end() const { return pos_ >= b_.size(); }
    std::size_t pos() const { return pos_; }
    void advance(std::size_t n) { pos_ += n; }
    std::span<const std::uint8_t> rest() const { return b_.subspan(pos_); }

    void skip_space_and_comments() {
        while (!at_end()) {
            const char c = static_cast<char>(b_[pos_]);
            if (c == '#') {
                while (!at_end() && b_[pos_] != '\n' && b_[pos_] != '\r') ++pos_;
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                ++pos_;
            } else {
                break;
            }
        }
    }

    std::uint32_t read_uint(const char* what) {
        skip_space_and_comments();
        if (at_end() || !std::isdigit(b_[pos_])) throw PnmError(std::string("expected ") + what);
        std::uint64_t v = 0;
        while (!at_end() && std::isdigit(b_[pos_])) {
            v = v * 10 + (b_[pos_] - '0');
            if (v > 0xFFFFFFFFull) throw PnmError(std::string(what) + " too large");
            ++pos_;
        }
        return static_cast<std::uint32_t>(v);
    }

    // The single whitespace byte separating the header from a binary raster.
    void expect_single_space() {
        if (at_end() || !std::isspace(b_[pos_])) throw PnmError("missing whitespace before raster");
        ++pos_;
    }

    // Next '0' or '1' of a plain bitmap; digits need not be separated.
    std::uint8_t read_plain_bit() {
        skip_space_and_comments();
        if (at_end()) throw PnmError("truncated raster");
        const char c = static_cast<char>(b_[pos_++]);
        if (c != '0' && c != '1') throw PnmError("plain PBM raster must contain 0 or 1");
        return static_cast<std::uint8_t>(c - '0');
    }

private:
    std::span<const std::uint8_t> b_;
    std::size_t pos_ = 0;
};

std::vector<std::uint8_t> to_bytes(const std::string& s) { return {s.begin(), s.end()}; }

}  // namespace

GrayImage PnmImage::as_gray() const {
    GrayImage g{width, height, maxval, samples};
    if (kind == Kind::Bitmap) {
        g.maxval = 255;
        for (auto& s : g.samples) s = s ? 0 : 255;  // black ink on white
    }
    return g;
}

PnmImage read_pnm(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < 2 || bytes[0] != 'P') throw PnmError("not a Netpbm file");
    const char type = static_cast<char>(bytes[1]);
    if (type != '1' && type != '2' && type != '4' && type != '5')
        throw PnmError(std::string("unsupported Netpbm type P") + type);

    Cursor cur(bytes);
    cur.advance(2);
    PnmImage img;
    img.kind = (type == '1' || type == '4') ? PnmImage::Kind::Bitmap : PnmImage::Kind::Graymap;
    img.width = cur.read_uint("width");
    img.height = cur.read_uint("height");
    if (img.width == 0 || img.height == 0) throw PnmError("zero image dimension");
    if (img.kind == PnmImage::Kind::Graymap) {
        img.maxval = cur.read_uint("maxval");
        if (img.maxval == 0 || img.maxval > 255) throw PnmError("maxval must be in [1,255]");
    }
    const std::size_t count = static_cast<std::size_t>(img.width) * img.height;
    img.samples.resize(count);

    switch (type) {
        case '1':
            for (auto& s : img.samples) s = cur.read_plain_bit();
            break;
        case '2':
            for (auto& s : img.samples) {
                const std::uint32_t v = cur.read_uint("sample");
                if (v > img.maxval) throw PnmError("sample exceeds maxval");
                s = static_cast<std::uint8_t>(v);
            }
            break;
        case '4': {
            cur.expect_single_space();
            const std::size_t stride = (img.width + 7) / 8;
            const auto raster = cur.rest();
            if (raster.size() < stride * img.height) throw PnmError("truncated raster");
            for (std::uint32_t r = 0; r < img.height; ++r)
                for (std::uint32_t c = 0; c < img.width; ++c) {
                    const std::uint8_t byte = raster[r * stride + c / 8];
                    img.samples[static_cast<std::size_t>(r) * img.width + c] = (byte >> (7 - c % 8)) & 1;
                }
            break;
        }
        case '5': {
            cur.expect_single_space();
            const auto raster = cur.rest();
            if (raster.size() < count) throw PnmError("truncated raster");
            for (std::size_t k = 0; k < count; ++k) {
                if (raster[k] > img.maxval) throw PnmError("sample exceeds maxval");
                img.samples[k] = raster[k];
            }
            break;
        }
    }
    return img;
}

BinaryImage binarize(const GrayImage& img, int threshold) {
    if (threshold < 0 || threshold > 256) throw std::invalid_argument("threshold must be in [0,256]");
    BinaryImage out(img.width, img.height, 0);
    for (std::size_t k = 0; k < img.samples.size(); ++k) out.bits[k] = img.samples[k] >= threshold ? 1 : 0;
    return out;
}

BinaryImage to_binary(const PnmImage& img, int threshold) {
    if (img.kind == PnmImage::Kind::Graymap) return binarize(img.as_gray(), threshold);
    BinaryImage out(img.width, img.height, 0);
    out.bits = img.samples;
    return out;
}

std::vector<std::uint8_t> write_pbm(const BinaryImage& img, bool plain) {
    std::string header = std::string(plain ? "P1\n" : "P4\n") + std::to_string(img.width) + " " +
                         std::to_string(img.height) + "\n";
    std::vector<std::uint8_t> out = to_bytes(header);
    if (plain) {
        for (std::uint32_t r = 0; r < img.height; ++r) {
            for (std::uint32_t c = 0; c < img.width; ++c) {
                if (c) out.push_back(' ');
                out.push_back(static_cast<std::uint8_t>('0' + img.at(r, c)));
            }
            out.push_back('\n');
        }
        return out;
    }
    const std::size_t stride = (img.width + 7) / 8;
    for (std::uint32_t r = 0; r < img.height; ++r) {
        std::vector<std::uint8_t> row(stride, 0);
        for (std::uint32_t c = 0; c < img.width; ++c)
            if (img.at(r, c)) row[c / 8] |= static_cast<std::uint8_t>(0x80u >> (c % 8));
        out.insert(out.end(), row.begin(), row.end());
    }
    return out;
}

std::vector<std::uint8_t> write_pgm(const GrayImage& img) {
    std::vector<std::uint8_t> out = to_bytes("P5\n" + std::to_string(img.width) + " " +
                                             std::to_string(img.height) + "\n" +
                                             std::to_string(img.maxval) + "\n");
    out.insert(out.end(), img.samples.begin(), img.samples.end());
    return out;
}

GrayImage render_overlay(const BinaryImage& img, const QuadtreeModel& m) {
    const std::uint32_t side = std::uint32_t{1} << m.d_max();
    if (img.width > side || img.height > side) throw std::invalid_argument("model grid smaller than image");
    GrayImage out{img.width, img.height, 255, std::vector<std::uint8_t>(img.size())};
    for (std::size_t k = 0; k < img.size(); ++k) out.samples[k] = img.bits[k] ? 255 : 0;
    for (const BlockId& leaf : m.leaves()) {
        const Pixel o = leaf.origin(m.d_max());
        const std::uint32_t n = leaf.side(m.d_max());
        for (std::uint32_t k = 0; k < n; ++k) {
            if (o.row < img.height && o.col + k < img.width)
                out.samples[static_cast<std::size_t>(o.row) * img.width + o.col + k] = kOverlayLine;
            if (o.row + k < img.height && o.col < img.width)
                out.samples[static_cast<std::size_t>(o.row + k) * img.width + o.col] = kOverlayLine;
        }
    }
    return out;
}

std::vector<std::uint8_t> write_overlay(const BinaryImage& img, const QuadtreeModel& m) {
    return write_pgm(render_overlay(img, m));
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace qtb
