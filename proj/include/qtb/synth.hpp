#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "qtb/image.hpp"
#include "qtb/quadtree.hpp"

namespace qtb {

// Seedable generator with a fixed algorithm (64-bit Mersenne Twister) and
// hand-written variate transforms, so draws are identical on every platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    // Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    bool bernoulli(double p) { return uniform() < p; }
    double normal();  // Box-Muller, cached second value
    double gamma(double shape);  // Marsaglia-Tsang; shape < 1 via boosting
    // Gamma ratio; never returns exactly 0 or 1.
    double beta(double a, double b);

    std::uint64_t next_u64() { return engine_(); }

private:
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

// Top-down: each non-singleton block splits with probability g_s.
QuadtreeModel sample_model(const HyperParams& hp, int d_max, Rng& rng);

struct LeafParams {
    std::vector<BlockId> leaves;  // pre-order
    std::vector<double> theta;    // P(pixel = 1) for the matching leaf
};

// Independent Beta(alpha, beta) draw per leaf, in pre-order.
LeafParams sample_params(const QuadtreeModel& m, const HyperParams& hp, Rng& rng);

// Raster order, each pixel Bernoulli(theta of its leaf).
BinaryImage sample_image(const QuadtreeModel& m, const LeafParams& params, Rng& rng);

struct SyntheticImage {
    std::uint64_t seed = 0;
    QuadtreeModel model;
    LeafParams params;
    BinaryImage image;
};

// sample_model, sample_params and sample_image on one Rng seeded with `seed`.
SyntheticImage generate(const HyperParams& hp, int d_max, std::uint64_t seed);

}  // namespace qtb
