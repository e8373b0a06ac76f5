#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace qtb {

using Bit = std::uint8_t;

// Pixel coordinate: row i, column j. Raster index t = i * width + j.
struct Pixel {
    std::uint32_t row = 0;
    std::uint32_t col = 0;
    friend bool operator==(const Pixel&, const Pixel&) = default;
};

// Deepest addressable tree; a 2^16 grid covers every u16 image side.
inline constexpr int kMaxDepth = 16;

// Number of nodes above `depth` in the flat layout: (4^depth - 1) / 3.
constexpr std::size_t depth_offset(int depth) {
    return ((std::size_t{1} << (2 * depth)) - 1) / 3;
}

// Node count of the complete quadtree of depth d_max.
constexpr std::size_t node_count(int d_max) { return depth_offset(d_max + 1); }

// Interleaves row bits (odd positions) with column bits (even positions),
// so the two bits contributed at each depth form the quadrant 2*x + y.
std::uint64_t morton_encode(std::uint32_t row, std::uint32_t col);
Pixel morton_decode(std::uint64_t code);

// A block of the complete quadtree, identified by its quadrant path from the
// root. Stored as (depth, Z-order index at that depth); the path's k-th pair
// is the k-th two-bit group of `index` counted from the most significant end.
class BlockId {
public:
    BlockId() = default;  // the root

    static BlockId from_index(int depth, std::uint64_t index);
    // Path given as (row bit, column bit) pairs, root first.
    static BlockId from_path(const std::vector<std::pair<int, int>>& path);

    int depth() const { return depth_; }
    std::uint64_t index() const { return index_; }

    bool is_root() const { return depth_ == 0; }
    BlockId parent() const;
    // quadrant = 2 * row_bit + col_bit
    BlockId child(int quadrant) const;
    // Quadrant taken at level k (1-based, k <= depth).
    int quadrant_at(int level) const;

    // Position of this node in the flat node array.
    std::size_t flat_index() const { return depth_offset(depth_) + index_; }
    static BlockId from_flat_index(std::size_t flat);

    // Side length in pixels of the block in a 2^d_max grid.
    std::uint32_t side(int d_max) const { return std::uint32_t{1} << (d_max - depth_); }
    std::uint64_t cardinality(int d_max) const {
        return std::uint64_t{1} << (2 * (d_max - depth_));
    }
    // Top-left pixel of the block.
    Pixel origin(int d_max) const;

    // "." for the root, otherwise pairs like "00.11".
    std::string path_string() const;
    static BlockId parse_path(const std::string& text);

    friend bool operator==(const BlockId&, const BlockId&) = default;

private:
    BlockId(int depth, std::uint64_t index) : depth_(depth), index_(index) {}

    int depth_ = 0;
    std::uint64_t index_ = 0;
};

// Whether `coord` lies in block `s` of a 2^d_max grid. Throws std::out_of_range
// if the coordinate is outside the grid or the block is deeper than d_max.
bool block_contains(const BlockId& s, Pixel coord, int d_max);

inline Pixel raster_pixel(std::uint64_t t, int d_max) {
    return Pixel{static_cast<std::uint32_t>(t >> d_max),
                 static_cast<std::uint32_t>(t & ((std::uint64_t{1} << d_max) - 1))};
}

// Blocks containing pixel t, root first, d_max + 1 entries.
std::vector<BlockId> path_nodes(std::uint64_t t, int d_max);

// Per-node split probability g_s. A singleton block never splits, so its g
// reads as 0 whatever the configuration says.
class SplitPrior {
public:
    enum class Kind : std::uint8_t { Uniform = 0, FixedBlock = 1, PerNode = 2 };

    // g_s = g for every non-singleton block.
    static SplitPrior uniform(double g);
    // Fixed 2^log2_side blocks: g = 1 above depth d_max - log2_side, else 0.
    static SplitPrior fixed_block(int log2_side);
    // Explicit values indexed by flat node index of a depth-d_max tree.
    static SplitPrior per_node(int d_max, std::vector<double> values);

    double at(const BlockId& s, int d_max) const;

    Kind kind() const { return kind_; }
    double uniform_value() const { return value_; }
    int block_log2() const { return log2_side_; }
    const std::vector<double>& values() const { return values_; }
    int values_depth() const { return values_depth_; }

    std::string describe() const;

private:
    Kind kind_ = Kind::Uniform;
    double value_ = 0.5;
    int log2_side_ = 0;
    int values_depth_ = -1;
    std::vector<double> values_;
};

struct HyperParams {
    SplitPrior g = SplitPrior::uniform(0.5);
    double alpha = 0.5;  // Beta pseudo-count for symbol 1
    double beta = 0.5;   // Beta pseudo-count for symbol 0

    // Throws std::invalid_argument on alpha/beta <= 0 or g outside [0,1].
    void validate() const;
};

// A full quadtree of depth <= d_max, kept as one inner/leaf flag per node of
// the complete tree. Nodes under a leaf are flagged as not inner.
class QuadtreeModel {
public:
    explicit QuadtreeModel(int d_max = 0);

    int d_max() const { return d_max_; }

    bool is_inner(const BlockId& s) const { return inner_[s.flat_index()] != 0; }
    // Marks s as split; does not touch descendants.
    void set_inner(const BlockId& s, bool inner);

    // Whether s is a node of the tree, i.e. the root or a child of an inner node.
    bool contains_node(const BlockId& s) const;

    // Pre-order.
    std::vector<BlockId> leaves() const;
    std::vector<BlockId> inner_nodes() const;

    // Full, rooted, depth-bounded and no stray inner flags below leaves.
    bool is_valid() const;

    // Leaf containing the given pixel.
    BlockId leaf_of(Pixel p) const;

    // One line per node in pre-order: "<path> L" or "<path> I".
    std::string dump() const;
    static QuadtreeModel parse_dump(int d_max, const std::string& text);

    // Complete tree split down to depth `depth` (<= d_max).
    static QuadtreeModel uniform(int d_max, int depth);

    // Packed inner flags; handy as a map key.
    const std::vector<std::uint8_t>& flags() const { return inner_; }

    friend bool operator==(const QuadtreeModel&, const QuadtreeModel&) = default;

private:
    int d_max_;
    std::vector<std::uint8_t> inner_;
};

// Product over leaves of (1 - g_s) times product over inner nodes of g_s.
double model_prior(const QuadtreeModel& m, const HyperParams& hp);

// Every full quadtree of depth <= d_max, each once. Refuses d_max > 3
// (83,522 models at d_max = 3) with std::length_error.
std::vector<QuadtreeModel> enumerate_models(int d_max);

}  // namespace qtb
