#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "qtb/quadtree.hpp"
#include "qtb/weighting.hpp"

namespace qtb {

// Per-node max-product values, indexed by flat node index.
// log_phi(s) = 0 at singletons, otherwise
//   max{ log(1 - g_s), log g_s + sum of log_phi over the four children }
// and split(s) records which branch won, with ties going to "stay".
struct MapScratch {
    std::vector<double> log_phi;
    std::vector<std::uint8_t> split;
};

MapScratch compute_map_scratch(const CodingState& st);

struct MapEstimate {
    QuadtreeModel model;
    double log_max_posterior = 0.0;  // natural log of max_m p(m | v^t)

    double max_posterior() const { return std::exp(log_max_posterior); }
};

// argmax_m p(m | pixels consumed so far), backtracked from the root.
MapEstimate compute_map(const CodingState& st);

}  // namespace qtb
