#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <vector>

#include "qtb/image.hpp"
#include "qtb/quadtree.hpp"

namespace qtb {

struct PnmError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct GrayImage {
    std::uint32_t width = 0;
    std::uint32_t height = 0;
    std::uint32_t maxval = 255;
    std::vector<std::uint8_t> samples;  // row-major

    std::uint8_t at(std::uint32_t row, std::uint32_t col) const {
        return samples[static_cast<std::size_t>(row) * width + col];
    }
};

// Decoded Netpbm file. For bitmaps each sample is the PBM bit (1 = black).
struct PnmImage {
    enum class Kind { Bitmap, Graymap };
    Kind kind = Kind::Bitmap;
    std::uint32_t width = 0;
    std::uint32_t height = 0;
    std::uint32_t maxval = 1;
    std::vector<std::uint8_t> samples;

    GrayImage as_gray() const;
};

// P1/P4 bitmaps and P2/P5 graymaps with maxval <= 255. Header comments and any
// whitespace are accepted. Throws PnmError on malformed or truncated input.
PnmImage read_pnm(std::span<const std::uint8_t> bytes);

// value >= threshold maps to 1.
BinaryImage binarize(const GrayImage& img, int threshold);

// Bitmaps pass through bit for bit; graymaps are binarized.
BinaryImage to_binary(const PnmImage& img, int threshold = 128);

std::vector<std::uint8_t> write_pbm(const BinaryImage& img, bool plain = false);
std::vector<std::uint8_t> write_pgm(const GrayImage& img);

// Grey rendering of `img` (1 -> 255, 0 -> 0) with the top row and left column
// of every leaf block of `m` drawn in mid grey. The model may cover a padded
// grid larger than the image; only the image area is drawn.
GrayImage render_overlay(const BinaryImage& img, const QuadtreeModel& m);
inline constexpr std::uint8_t kOverlayLine = 128;

std::vector<std::uint8_t> write_overlay(const BinaryImage& img, const QuadtreeModel& m);

std::vector<std::uint8_t> read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

}  // namespace qtb
