#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "qtb/image.hpp"
#include "qtb/leaf_model.hpp"
#include "qtb/quadtree.hpp"

namespace qtb {

struct NodeState {
    double g_post = 0.0;  // posterior probability that the block is split
    Counts counts;
};

struct StepProbabilities {
    double p0 = 0.5;
    double p1 = 0.5;
    double operator[](Bit v) const { return v ? p1 : p0; }
};

// Sequential Bayes-mixture over all full quadtrees of depth <= d_max.
//
// Pixels are consumed in raster order. Each step touches only the d_max + 1
// blocks containing the current pixel: the mixture is formed bottom-up as
//   q(s) = (1 - g_s) * q~(s) + g_s * q(child)
// and after the pixel is revealed every non-singleton block on the path moves
// its split weight to g_s * q(child) / q(s).
//
// predict() and advance() share one traversal per pixel. The state is
// single-writer; predict() caches into mutable scratch.
class CodingState {
public:
    CodingState(int d_max, HyperParams hp);

    int d_max() const { return d_max_; }
    std::uint64_t t() const { return t_; }
    std::uint64_t pixel_count() const { return std::uint64_t{1} << (2 * d_max_); }
    bool finished() const { return t_ >= pixel_count(); }
    const HyperParams& params() const { return hp_; }

    std::span<const NodeState> nodes() const { return nodes_; }
    const NodeState& node(const BlockId& s) const { return nodes_.at(s.flat_index()); }

    // Coding distribution of pixel t. Throws std::logic_error once finished.
    StepProbabilities predict() const;
    double coding_probability(Bit v) const { return predict()[v]; }

    // Consumes pixel t with value v; returns the probability it was coded with.
    double advance(Bit v);

    // Node visits performed by the traversal so far.
    std::uint64_t node_visits() const { return visits_; }

    // FNV-1a over every node's g_post bit pattern and counts, plus t.
    std::uint64_t checksum() const;

private:
    void traverse() const;

    int d_max_;
    HyperParams hp_;
    std::vector<NodeState> nodes_;
    std::uint64_t t_ = 0;

    struct Scratch {
        std::uint64_t t = ~std::uint64_t{0};
        std::vector<std::size_t> flat;  // by depth
        std::vector<double> q0, q1;     // mixture probability at each depth
        std::vector<double> qt0, qt1;   // leaf predictive at each depth
    };
    mutable Scratch scratch_;
    mutable std::uint64_t visits_ = 0;
};

// Posterior probability of model m given the pixels consumed by st:
// product over leaves of (1 - g_post) times product over inner nodes of g_post.
double model_posterior(const CodingState& st, const QuadtreeModel& m);

// Sum over raster order of -log2 q*(v_t | v^{t-1}). The image must be a
// 2^d_max square.
double total_ideal_codelength(const BinaryImage& img, const HyperParams& hp);

}  // namespace qtb
