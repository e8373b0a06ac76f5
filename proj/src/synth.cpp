#include "qtb/synth.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qtb {

double Rng::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
}

double Rng::gamma(double shape) {
    if (!(shape > 0.0)) throw std::invalid_argument("gamma shape must be > 0");
    if (shape < 1.0) {
        const double u = 1.0 - uniform();
        return gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    while (true) {
        double x, v;
        do {
            x = normal();
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = 1.0 - uniform();
        if (u < 1.0 - 0.0331 * (x * x) * (x * x)) return d * v;
        if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
    }
}

double Rng::beta(double a, double b) {
    while (true) {
        const double x = gamma(a);
        const double y = gamma(b);
        const double theta = x / (x + y);
        if (theta > 0.0 && theta < 1.0) return theta;
    }
}

namespace {

void grow(QuadtreeModel& m, const BlockId& s, const HyperParams& hp, Rng& rng) {
    if (s.depth() >= m.d_max()) return;
    if (!rng.bernoulli(hp.g.at(s, m.d_max()))) return;
    m.set_inner(s, true);
    for (int q = 0; q < 4; ++q) grow(m, s.child(q), hp, rng);
}

}  // namespace

QuadtreeModel sample_model(const HyperParams& hp, int d_max, Rng& rng) {
    QuadtreeModel m(d_max);
    grow(m, BlockId{}, hp, rng);
    return m;
}

LeafParams sample_params(const QuadtreeModel& m, const HyperParams& hp, Rng& rng) {
    LeafParams p;
    p.leaves = m.leaves();
    p.theta.reserve(p.leaves.size());
    for (std::size_t k = 0; k < p.leaves.size(); ++k) p.theta.push_back(rng.beta(hp.alpha, hp.beta));
    return p;
}

BinaryImage sample_image(const QuadtreeModel& m, const LeafParams& params, Rng& rng) {
    if (params.leaves.size() != params.theta.size())
        throw std::invalid_argument("leaf/theta size mismatch");
    std::vector<double> by_node(node_count(m.d_max()), 0.0);
    for (std::size_t k = 0; k < params.leaves.size(); ++k)
        by_node[params.leaves[k].flat_index()] = params.theta[k];

    const std::uint32_t side = std::uint32_t{1} << m.d_max();
    BinaryImage img(side, side, 0);
    for (std::uint32_t r = 0; r < side; ++r)
        for (std::uint32_t c = 0; c < side; ++c) {
            const double theta = by_node[m.leaf_of(Pixel{r, c}).flat_index()];
            img.at(r, c) = rng.bernoulli(theta) ? 1 : 0;
        }
    return img;
}

SyntheticImage generate(const HyperParams& hp, int d_max, std::uint64_t seed) {
    Rng rng(seed);
    SyntheticImage out{seed, sample_model(hp, d_max, rng), {}, {}};
    out.params = sample_params(out.model, hp, rng);
    out.image = sample_image(out.model, out.params, rng);
    return out;
}

}  // namespace qtb
