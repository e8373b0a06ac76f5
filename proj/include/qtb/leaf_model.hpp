#pragma once

#include <cstdint>

#include "qtb/quadtree.hpp"

namespace qtb {

// Bernoulli sufficient statistics of the pixels seen so far inside a block.
struct Counts {
    std::uint64_t n0 = 0;
    std::uint64_t n1 = 0;

    std::uint64_t total() const { return n0 + n1; }
    friend bool operator==(const Counts&, const Counts&) = default;
};

// Beta-Bernoulli posterior predictive: (n_v + a_v) / (n0 + n1 + alpha + beta),
// with a_1 = alpha and a_0 = beta.
inline double predictive(const Counts& c, double alpha, double beta, Bit v) {
    const double num = v ? static_cast<double>(c.n1) + alpha : static_cast<double>(c.n0) + beta;
    const double den = static_cast<double>(c.n0 + c.n1) + (alpha + beta);
    return num / den;
}

inline double predictive(const Counts& c, const HyperParams& hp, Bit v) {
    return predictive(c, hp.alpha, hp.beta, v);
}

inline Counts update(Counts c, Bit v) {
    if (v)
        ++c.n1;
    else
        ++c.n0;
    return c;
}

// log2 of the block marginal likelihood B(n1 + alpha, n0 + beta) / B(alpha, beta),
// computed by accumulating the sequential predictives. Order independent.
double log2_block_likelihood(const Counts& c, const HyperParams& hp);

}  // namespace qtb
