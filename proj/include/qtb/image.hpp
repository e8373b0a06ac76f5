#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "qtb/quadtree.hpp"

namespace qtb {

// Row-major binary raster, one byte (0 or 1) per pixel.
struct BinaryImage {
    std::uint32_t width = 0;
    std::uint32_t height = 0;
    std::vector<Bit> bits;

    BinaryImage() = default;
    BinaryImage(std::uint32_t w, std::uint32_t h, Bit fill = 0)
        : width(w), height(h), bits(static_cast<std::size_t>(w) * h, fill) {}

    std::size_t size() const { return bits.size(); }
    Bit at(std::uint32_t row, std::uint32_t col) const {
        return bits[static_cast<std::size_t>(row) * width + col];
    }
    Bit& at(std::uint32_t row, std::uint32_t col) {
        return bits[static_cast<std::size_t>(row) * width + col];
    }

    friend bool operator==(const BinaryImage&, const BinaryImage&) = default;
};

// Depth of the square power-of-two grid this image fills exactly, if any.
inline std::optional<int> exact_depth(std::uint32_t width, std::uint32_t height) {
    if (width == 0 || width != height || (width & (width - 1)) != 0) return std::nullopt;
    int d = 0;
    while ((std::uint32_t{1} << d) < width) ++d;
    return d;
}

// Smallest d with 2^d >= max(width, height).
inline int padded_depth(std::uint32_t width, std::uint32_t height) {
    const std::uint32_t side = width > height ? width : height;
    int d = 0;
    while ((std::uint64_t{1} << d) < side) ++d;
    return d;
}

// Copies `img` into the top-left of a 2^d x 2^d grid filled with zeros.
inline BinaryImage pad_to_square(const BinaryImage& img, int d) {
    const std::uint32_t side = std::uint32_t{1} << d;
    if (img.width > side || img.height > side) throw std::invalid_argument("image larger than padded grid");
    BinaryImage out(side, side, 0);
    for (std::uint32_t r = 0; r < img.height; ++r)
        for (std::uint32_t c = 0; c < img.width; ++c) out.at(r, c) = img.at(r, c);
    return out;
}

inline BinaryImage crop(const BinaryImage& img, std::uint32_t width, std::uint32_t height) {
    if (width > img.width || height > img.height) throw std::invalid_argument("crop larger than image");
    BinaryImage out(width, height, 0);
    for (std::uint32_t r = 0; r < height; ++r)
        for (std::uint32_t c = 0; c < width; ++c) out.at(r, c) = img.at(r, c);
    return out;
}

}  // namespace qtb
