#include "qtb/leaf_model.hpp"

#include <cmath>

namespace qtb {

double log2_block_likelihood(const Counts& c, const HyperParams& hp) {
    // Any order gives the same product; zeros first then ones.
    double acc = 0.0;
    Counts run;
    for (std::uint64_t k = 0; k < c.n0; ++k) {
        acc += std::log2(predictive(run, hp, 0));
        run = update(run, 0);
    }
    for (std::uint64_t k = 0; k < c.n1; ++k) {
        acc += std::log2(predictive(run, hp, 1));
        run = update(run, 1);
    }
    return acc;
}

}  // namespace qtb
