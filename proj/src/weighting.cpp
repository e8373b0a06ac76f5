#include "qtb/weighting.hpp"

#include <cassert>
#include <cmath>
#include <cstring>
#include <stdexcept>

namespace qtb {

CodingState::CodingState(int d_max, HyperParams hp) : d_max_(d_max), hp_(std::move(hp)) {
    if (d_max < 0 || d_max > kMaxDepth) throw std::out_of_range("d_max out of range");
    hp_.validate();
    nodes_.resize(node_count(d_max));
    for (std::size_t f = 0; f < nodes_.size(); ++f)
        nodes_[f].g_post = hp_.g.at(BlockId::from_flat_index(f), d_max);

    const auto levels = static_cast<std::size_t>(d_max) + 1;
    scratch_.flat.resize(levels);
    scratch_.q0.resize(levels);
    scratch_.q1.resize(levels);
    scratch_.qt0.resize(levels);
    scratch_.qt1.resize(levels);
}

void CodingState::traverse() const {
    if (finished()) throw std::logic_error("all pixels have been consumed");
    Scratch& sc = scratch_;
    const Pixel p = raster_pixel(t_, d_max_);
    const std::uint64_t leaf = morton_encode(p.row, p.col);
    const double alpha = hp_.alpha, beta = hp_.beta;

    for (int d = d_max_; d >= 0; --d) {
        const auto k = static_cast<std::size_t>(d);
        const std::size_t f = depth_offset(d) + (leaf >> (2 * (d_max_ - d)));
        const NodeState& n = nodes_[f];
        ++visits_;
        sc.flat[k] = f;
        const double qt0 = predictive(n.counts, alpha, beta, 0);
        const double qt1 = predictive(n.counts, alpha, beta, 1);
        sc.qt0[k] = qt0;
        sc.qt1[k] = qt1;
        if (d == d_max_) {
            sc.q0[k] = qt0;
            sc.q1[k] = qt1;
        } else {
            const double g = n.g_post;
            const double stay = 1.0 - g;
            sc.q0[k] = stay * qt0 + g * sc.q0[k + 1];
            sc.q1[k] = stay * qt1 + g * sc.q1[k + 1];
        }
    }
    sc.t = t_;
}

StepProbabilities CodingState::predict() const {
    if (scratch_.t != t_) traverse();
    return StepProbabilities{scratch_.q0[0], scratch_.q1[0]};
}

double CodingState::advance(Bit v) {
    if (v > 1) throw std::invalid_argument("pixel value must be 0 or 1");
    if (scratch_.t != t_) traverse();
    const Scratch& sc = scratch_;
    const std::vector<double>& q = v ? sc.q1 : sc.q0;

    for (int d = 0; d <= d_max_; ++d) {
        const auto k = static_cast<std::size_t>(d);
        NodeState& n = nodes_[sc.flat[k]];
        if (d < d_max_) {
            const double raw = n.g_post * q[k + 1] / q[k];
            double g = raw;
            if (g < 0.0) g = 0.0;
            if (g > 1.0) g = 1.0;
            assert(std::fabs(g - raw) <= 1e-12);
            n.g_post = g;
        }
        n.counts = update(n.counts, v);
    }
    const double used = q[0];
    ++t_;
    return used;
}

std::uint64_t CodingState::checksum() const {
    std::uint64_t h = 1469598103934665603ull;
    auto mix = [&](std::uint64_t x) {
        for (int b = 0; b < 8; ++b) {
            h ^= (x >> (8 * b)) & 0xFF;
            h *= 1099511628211ull;
        }
    };
    for (const NodeState& n : nodes_) {
        std::uint64_t bits;
        std::memcpy(&bits, &n.g_post, sizeof bits);
        mix(bits);
        mix(n.counts.n0);
        mix(n.counts.n1);
    }
    mix(t_);
    return h;
}

double model_posterior(const CodingState& st, const QuadtreeModel& m) {
    if (m.d_max() != st.d_max()) throw std::invalid_argument("model depth differs from state depth");
    double p = 1.0;
    for (const BlockId& s : m.leaves()) p *= 1.0 - st.node(s).g_post;
    for (const BlockId& s : m.inner_nodes()) p *= st.node(s).g_post;
    return p;
}

double total_ideal_codelength(const BinaryImage& img, const HyperParams& hp) {
    const auto d = exact_depth(img.width, img.height);
    if (!d) throw std::invalid_argument("image must be a square power-of-two grid");
    CodingState st(*d, hp);
    double bits = 0.0;
    for (Bit v : img.bits) bits -= std::log2(st.advance(v));
    return bits;
}

}  // namespace qtb
