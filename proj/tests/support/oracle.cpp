#include "oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace qtb::oracle {

namespace {

void guard(int d_max) {
    if (d_max < 0 || d_max > 3) throw std::length_error("oracle is limited to d_max <= 3");
}

double safe_log(double x) { return x > 0.0 ? std::log(x) : -std::numeric_limits<double>::infinity(); }

}  // namespace

bool in_block(const BlockId& s, Pixel p, int d_max) {
    std::uint64_t lo_row = 0, lo_col = 0;
    for (int level = 1; level <= s.depth(); ++level) {
        const int q = s.quadrant_at(level);
        lo_row += static_cast<std::uint64_t>(q >> 1) << (d_max - level);
        lo_col += static_cast<std::uint64_t>(q & 1) << (d_max - level);
    }
    const std::uint64_t extent = std::uint64_t{1} << (d_max - s.depth());
    return lo_row <= p.row && p.row < lo_row + extent && lo_col <= p.col && p.col < lo_col + extent;
}

double log_block_marginal(std::uint64_t n0, std::uint64_t n1, const HyperParams& hp) {
    const double a = hp.alpha, b = hp.beta;
    const double x1 = static_cast<double>(n1), x0 = static_cast<double>(n0);
    return std::lgamma(x1 + a) + std::lgamma(x0 + b) - std::lgamma(x0 + x1 + a + b) -
           (std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b));
}

double exact_block_marginal(std::uint64_t n0, std::uint64_t n1, const HyperParams& hp) {
    return std::exp(log_block_marginal(n0, n1, hp));
}

std::vector<Counts> block_counts(std::span<const Bit> prefix, int d_max) {
    guard(d_max);
    const std::uint32_t side = std::uint32_t{1} << d_max;
    if (prefix.size() > static_cast<std::size_t>(side) * side) throw std::out_of_range("prefix too long");
    std::vector<Counts> out(node_count(d_max));
    for (std::size_t f = 0; f < out.size(); ++f) {
        const BlockId s = BlockId::from_flat_index(f);
        for (std::size_t t = 0; t < prefix.size(); ++t) {
            const Pixel p{static_cast<std::uint32_t>(t / side), static_cast<std::uint32_t>(t % side)};
            if (!in_block(s, p, d_max)) continue;
            if (prefix[t])
                ++out[f].n1;
            else
                ++out[f].n0;
        }
    }
    return out;
}

double log_sum_exp(std::span<const double> xs) {
    double hi = -std::numeric_limits<double>::infinity();
    for (double x : xs) hi = std::max(hi, x);
    if (!std::isfinite(hi)) return hi;
    double acc = 0.0;
    for (double x : xs) acc += std::exp(x - hi);
    return hi + std::log(acc);
}

ModelSpace::ModelSpace(int d_max) : d_max_(d_max), models_((guard(d_max), enumerate_models(d_max))) {
    for (const auto& m : models_) {
        std::vector<std::size_t> l, i;
        for (const auto& s : m.leaves()) l.push_back(s.flat_index());
        for (const auto& s : m.inner_nodes()) i.push_back(s.flat_index());
        leaves_.push_back(std::move(l));
        inner_.push_back(std::move(i));
    }
}

std::vector<double> ModelSpace::log_joint(std::span<const Bit> prefix, const HyperParams& hp) const {
    const auto counts = block_counts(prefix, d_max_);
    std::vector<double> log_g(counts.size()), log_stay(counts.size()), log_lik(counts.size());
    for (std::size_t f = 0; f < counts.size(); ++f) {
        const double g = hp.g.at(BlockId::from_flat_index(f), d_max_);
        log_g[f] = safe_log(g);
        log_stay[f] = safe_log(1.0 - g);
        log_lik[f] = log_block_marginal(counts[f].n0, counts[f].n1, hp);
    }
    std::vector<double> out(models_.size());
    for (std::size_t k = 0; k < models_.size(); ++k) {
        double acc = 0.0;
        for (std::size_t f : leaves_[k]) acc += log_stay[f] + log_lik[f];
        for (std::size_t f : inner_[k]) acc += log_g[f];
        out[k] = acc;
    }
    return out;
}

double ModelSpace::log_evidence(std::span<const Bit> prefix, const HyperParams& hp) const {
    const auto lj = log_joint(prefix, hp);
    return log_sum_exp(lj);
}

std::vector<double> ModelSpace::posterior(std::span<const Bit> prefix, const HyperParams& hp) const {
    auto lj = log_joint(prefix, hp);
    const double z = log_sum_exp(lj);
    for (double& x : lj) x = std::exp(x - z);
    return lj;
}

std::size_t ModelSpace::map_index(std::span<const Bit> prefix, const HyperParams& hp) const {
    const auto lj = log_joint(prefix, hp);
    return static_cast<std::size_t>(std::max_element(lj.begin(), lj.end()) - lj.begin());
}

double exact_mixture_predictive(const ModelSpace& space, std::span<const Bit> prefix, Bit v,
                                const HyperParams& hp) {
    std::vector<Bit> extended(prefix.begin(), prefix.end());
    extended.push_back(v);
    return std::exp(space.log_evidence(extended, hp) - space.log_evidence(prefix, hp));
}

double exact_mixture_predictive(std::span<const Bit> prefix, Bit v, const HyperParams& hp, int d_max) {
    if (d_max > 2) throw std::length_error("exact_mixture_predictive is limited to d_max <= 2");
    return exact_mixture_predictive(ModelSpace(d_max), prefix, v, hp);
}

}  // namespace qtb::oracle
