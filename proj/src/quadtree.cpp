#include "qtb/quadtree.hpp"

#include <cmath>
#include <functional>
#include <sstream>
#include <stdexcept>

namespace qtb {

namespace {

std::uint64_t spread_bits(std::uint32_t v) {
    std::uint64_t x = v;
    x = (x | (x << 16)) & 0x0000FFFF0000FFFFull;
    x = (x | (x << 8)) & 0x00FF00FF00FF00FFull;
    x = (x | (x << 4)) & 0x0F0F0F0F0F0F0F0Full;
    x = (x | (x << 2)) & 0x3333333333333333ull;
    x = (x | (x << 1)) & 0x5555555555555555ull;
    return x;
}

std::uint32_t compact_bits(std::uint64_t x) {
    x &= 0x5555555555555555ull;
    x = (x | (x >> 1)) & 0x3333333333333333ull;
    x = (x | (x >> 2)) & 0x0F0F0F0F0F0F0F0Full;
    x = (x | (x >> 4)) & 0x00FF00FF00FF00FFull;
    x = (x | (x >> 8)) & 0x0000FFFF0000FFFFull;
    x = (x | (x >> 16)) & 0x00000000FFFFFFFFull;
    return static_cast<std::uint32_t>(x);
}

void check_depth(int d_max) {
    if (d_max < 0 || d_max > kMaxDepth)
        throw std::out_of_range("quadtree depth out of range: " + std::to_string(d_max));
}

}  // namespace

std::uint64_t morton_encode(std::uint32_t row, std::uint32_t col) {
    return (spread_bits(row) << 1) | spread_bits(col);
}

Pixel morton_decode(std::uint64_t code) {
    return Pixel{compact_bits(code >> 1), compact_bits(code)};
}

BlockId BlockId::from_index(int depth, std::uint64_t index) {
    check_depth(depth);
    if (index >= (std::uint64_t{1} << (2 * depth)))
        throw std::out_of_range("block index out of range for its depth");
    return BlockId(depth, index);
}

BlockId BlockId::from_path(const std::vector<std::pair<int, int>>& path) {
    BlockId s;
    for (auto [x, y] : path) {
        if ((x != 0 && x != 1) || (y != 0 && y != 1))
            throw std::invalid_argument("quadrant bits must be 0 or 1");
        s = s.child(2 * x + y);
    }
    return s;
}

BlockId BlockId::parent() const {
    if (is_root()) throw std::logic_error("root has no parent");
    return BlockId(depth_ - 1, index_ >> 2);
}

BlockId BlockId::child(int quadrant) const {
    if (quadrant < 0 || quadrant > 3) throw std::out_of_range("quadrant must be in [0,3]");
    if (depth_ >= kMaxDepth) throw std::out_of_range("child deeper than kMaxDepth");
    return BlockId(depth_ + 1, (index_ << 2) | static_cast<std::uint64_t>(quadrant));
}

int BlockId::quadrant_at(int level) const {
    if (level < 1 || level > depth_) throw std::out_of_range("path level out of range");
    return static_cast<int>((index_ >> (2 * (depth_ - level))) & 3u);
}

BlockId BlockId::from_flat_index(std::size_t flat) {
    int d = 0;
    while (depth_offset(d + 1) <= flat) {
        ++d;
        check_depth(d);
    }
    return BlockId(d, flat - depth_offset(d));
}

Pixel BlockId::origin(int d_max) const {
    Pixel p = morton_decode(index_);
    const int shift = d_max - depth_;
    return Pixel{p.row << shift, p.col << shift};
}

std::string BlockId::path_string() const {
    if (is_root()) return ".";
    std::string out;
    for (int k = 1; k <= depth_; ++k) {
        if (k > 1) out += '.';
        const int q = quadrant_at(k);
        out += static_cast<char>('0' + (q >> 1));
        out += static_cast<char>('0' + (q & 1));
    }
    return out;
}

BlockId BlockId::parse_path(const std::string& text) {
    if (text == ".") return BlockId{};
    BlockId s;
    std::size_t pos = 0;
    while (true) {
        if (pos + 2 > text.size()) throw std::invalid_argument("bad block path: " + text);
        const char x = text[pos], y = text[pos + 1];
        if ((x != '0' && x != '1') || (y != '0' && y != '1'))
            throw std::invalid_argument("bad block path: " + text);
        s = s.child(2 * (x - '0') + (y - '0'));
        pos += 2;
        if (pos == text.size()) break;
        if (text[pos] != '.') throw std::invalid_argument("bad block path: " + text);
        ++pos;
    }
    return s;
}

bool block_contains(const BlockId& s, Pixel coord, int d_max) {
    check_depth(d_max);
    const std::uint32_t side = std::uint32_t{1} << d_max;
    if (coord.row >= side || coord.col >= side)
        throw std::out_of_range("pixel outside the 2^d_max grid");
    if (s.depth() > d_max) throw std::out_of_range("block deeper than d_max");
    const int shift = d_max - s.depth();
    return morton_encode(coord.row >> shift, coord.col >> shift) == s.index();
}

std::vector<BlockId> path_nodes(std::uint64_t t, int d_max) {
    check_depth(d_max);
    if (t >= (std::uint64_t{1} << (2 * d_max))) throw std::out_of_range("pixel index out of range");
    const Pixel p = raster_pixel(t, d_max);
    const std::uint64_t leaf = morton_encode(p.row, p.col);
    std::vector<BlockId> path;
    path.reserve(static_cast<std::size_t>(d_max) + 1);
    for (int d = 0; d <= d_max; ++d)
        path.push_back(BlockId::from_index(d, leaf >> (2 * (d_max - d))));
    return path;
}

// --- SplitPrior --------------------------------------------------------------

SplitPrior SplitPrior::uniform(double g) {
    SplitPrior p;
    p.kind_ = Kind::Uniform;
    p.value_ = g;
    return p;
}

SplitPrior SplitPrior::fixed_block(int log2_side) {
    if (log2_side < 0) throw std::invalid_argument("fixed block size must be >= 1");
    SplitPrior p;
    p.kind_ = Kind::FixedBlock;
    p.log2_side_ = log2_side;
    return p;
}

SplitPrior SplitPrior::per_node(int d_max, std::vector<double> values) {
    check_depth(d_max);
    if (values.size() != node_count(d_max))
        throw std::invalid_argument("per-node g needs one value per node");
    SplitPrior p;
    p.kind_ = Kind::PerNode;
    p.values_depth_ = d_max;
    p.values_ = std::move(values);
    return p;
}

double SplitPrior::at(const BlockId& s, int d_max) const {
    if (s.depth() >= d_max) return 0.0;
    switch (kind_) {
        case Kind::Uniform:
            return value_;
        case Kind::FixedBlock:
            return s.depth() < d_max - log2_side_ ? 1.0 : 0.0;
        case Kind::PerNode:
            if (values_depth_ != d_max)
                throw std::invalid_argument("per-node g was built for a different depth");
            return values_[s.flat_index()];
    }
    return 0.0;
}

std::string SplitPrior::describe() const {
    std::ostringstream os;
    switch (kind_) {
        case Kind::Uniform:
            os << "quadtree(g=" << value_ << ")";
            break;
        case Kind::FixedBlock:
            os << "fixed-" << (1u << log2_side_);
            break;
        case Kind::PerNode:
            os << "per-node(d_max=" << values_depth_ << ")";
            break;
    }
    return os.str();
}

void HyperParams::validate() const {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) throw std::invalid_argument("alpha must be > 0");
    if (!(beta > 0.0) || !std::isfinite(beta)) throw std::invalid_argument("beta must be > 0");
    auto check_g = [](double v) {
        if (!(v >= 0.0 && v <= 1.0)) throw std::invalid_argument("g must lie in [0,1]");
    };
    if (g.kind() == SplitPrior::Kind::Uniform) check_g(g.uniform_value());
    for (double v : g.values()) check_g(v);
}

// --- QuadtreeModel -----------------------------------------------------------

QuadtreeModel::QuadtreeModel(int d_max) : d_max_(d_max) {
    check_depth(d_max);
    inner_.assign(node_count(d_max), 0);
}

void QuadtreeModel::set_inner(const BlockId& s, bool inner) {
    if (s.depth() > d_max_) throw std::out_of_range("block deeper than model depth");
    if (inner && s.depth() == d_max_) throw std::invalid_argument("singleton blocks cannot split");
    inner_[s.flat_index()] = inner ? 1 : 0;
}

bool QuadtreeModel::contains_node(const BlockId& s) const {
    if (s.depth() > d_max_) return false;
    for (BlockId a = s; !a.is_root();) {
        a = a.parent();
        if (!is_inner(a)) return false;
    }
    return true;
}

namespace {

template <class Visit>
void preorder(const QuadtreeModel& m, const BlockId& s, const Visit& visit) {
    const bool inner = m.is_inner(s);
    visit(s, inner);
    if (inner)
        for (int q = 0; q < 4; ++q) preorder(m, s.child(q), visit);
}

}  // namespace

std::vector<BlockId> QuadtreeModel::leaves() const {
    std::vector<BlockId> out;
    preorder(*this, BlockId{}, [&](const BlockId& s, bool inner) {
        if (!inner) out.push_back(s);
    });
    return out;
}

std::vector<BlockId> QuadtreeModel::inner_nodes() const {
    std::vector<BlockId> out;
    preorder(*this, BlockId{}, [&](const BlockId& s, bool inner) {
        if (inner) out.push_back(s);
    });
    return out;
}

bool QuadtreeModel::is_valid() const {
    if (inner_.size() != node_count(d_max_)) return false;
    for (std::size_t f = 0; f < inner_.size(); ++f) {
        if (!inner_[f]) continue;
        const BlockId s = BlockId::from_flat_index(f);
        if (s.depth() >= d_max_) return false;
        if (!s.is_root() && !is_inner(s.parent())) return false;
    }
    return true;
}

BlockId QuadtreeModel::leaf_of(Pixel p) const {
    const std::uint64_t code = morton_encode(p.row, p.col);
    for (int d = 0; d <= d_max_; ++d) {
        const BlockId s = BlockId::from_index(d, code >> (2 * (d_max_ - d)));
        if (!is_inner(s)) return s;
    }
    throw std::logic_error("model has inner flags at singleton depth");
}

std::string QuadtreeModel::dump() const {
    std::string out;
    preorder(*this, BlockId{}, [&](const BlockId& s, bool inner) {
        out += s.path_string();
        out += inner ? " I\n" : " L\n";
    });
    return out;
}

QuadtreeModel QuadtreeModel::parse_dump(int d_max, const std::string& text) {
    QuadtreeModel m(d_max);
    std::istringstream in(text);
    std::string path, flag;
    while (in >> path >> flag) {
        const BlockId s = BlockId::parse_path(path);
        if (flag == "I")
            m.set_inner(s, true);
        else if (flag != "L")
            throw std::invalid_argument("bad tree dump flag: " + flag);
    }
    if (!m.is_valid()) throw std::invalid_argument("tree dump does not describe a full quadtree");
    return m;
}

QuadtreeModel QuadtreeModel::uniform(int d_max, int depth) {
    if (depth < 0 || depth > d_max) throw std::out_of_range("uniform split depth out of range");
    QuadtreeModel m(d_max);
    for (std::size_t f = 0; f < depth_offset(depth); ++f) m.inner_[f] = 1;
    return m;
}

double model_prior(const QuadtreeModel& m, const HyperParams& hp) {
    double p = 1.0;
    preorder(m, BlockId{}, [&](const BlockId& s, bool inner) {
        const double g = hp.g.at(s, m.d_max());
        p *= inner ? g : 1.0 - g;
    });
    return p;
}

std::vector<QuadtreeModel> enumerate_models(int d_max) {
    if (d_max < 0) throw std::out_of_range("negative depth");
    if (d_max > 3) throw std::length_error("enumerate_models is limited to d_max <= 3");

    // Inner-node sets of every full subtree rooted at s.
    std::function<std::vector<std::vector<std::size_t>>(const BlockId&)> subtrees =
        [&](const BlockId& s) {
            std::vector<std::vector<std::size_t>> out;
            out.emplace_back();
            if (s.depth() == d_max) return out;
            std::vector<std::vector<std::size_t>> kids[4];
            for (int q = 0; q < 4; ++q) kids[q] = subtrees(s.child(q));
            for (const auto& a : kids[0])
                for (const auto& b : kids[1])
                    for (const auto& c : kids[2])
                        for (const auto& d : kids[3]) {
                            std::vector<std::size_t> set{s.flat_index()};
                            for (const auto* part : {&a, &b, &c, &d})
                                set.insert(set.end(), part->begin(), part->end());
                            out.push_back(std::move(set));
                        }
            return out;
        };

    std::vector<QuadtreeModel> models;
    for (const auto& set : subtrees(BlockId{})) {
        QuadtreeModel m(d_max);
        for (std::size_t f : set) m.set_inner(BlockId::from_flat_index(f), true);
        models.push_back(std::move(m));
    }
    return models;
}

}  // namespace qtb
