#include "qtb/map_tree.hpp"

#include <limits>

namespace qtb {

MapScratch compute_map_scratch(const CodingState& st) {
    const int d_max = st.d_max();
    const auto nodes = st.nodes();
    MapScratch out;
    out.log_phi.assign(nodes.size(), 0.0);
    out.split.assign(nodes.size(), 0);

    // Deepest level first so children are ready before their parent.
    for (int d = d_max - 1; d >= 0; --d) {
        const std::size_t begin = depth_offset(d), end = depth_offset(d + 1);
        for (std::size_t f = begin; f < end; ++f) {
            const double g = nodes[f].g_post;
            const std::size_t first_child = end + 4 * (f - begin);
            double children = 0.0;
            for (int q = 0; q < 4; ++q) children += out.log_phi[first_child + q];
            const double stay = g < 1.0 ? std::log1p(-g) : -std::numeric_limits<double>::infinity();
            const double split = g > 0.0 ? std::log(g) + children
                                         : -std::numeric_limits<double>::infinity();
            if (stay >= split) {
                out.log_phi[f] = stay;
            } else {
                out.log_phi[f] = split;
                out.split[f] = 1;
            }
        }
    }
    return out;
}

MapEstimate compute_map(const CodingState& st) {
    const MapScratch sc = compute_map_scratch(st);
    MapEstimate est{QuadtreeModel(st.d_max()), sc.log_phi[0]};

    std::vector<BlockId> stack{BlockId{}};
    while (!stack.empty()) {
        const BlockId s = stack.back();
        stack.pop_back();
        if (!sc.split[s.flat_index()]) continue;
        est.model.set_inner(s, true);
        for (int q = 0; q < 4; ++q) stack.push_back(s.child(q));
    }
    return est;
}

}  // namespace qtb
