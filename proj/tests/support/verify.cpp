#include "verify.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "oracle.hpp"
#include "qtb/map_tree.hpp"
#include "qtb/synth.hpp"
#include "qtb/weighting.hpp"

namespace qtb::oracle {

namespace {

HyperParams random_g(int d_max, Rng& rng) {
    std::vector<double> g(node_count(d_max));
    for (double& x : g) x = rng.uniform();
    HyperParams hp;
    hp.g = SplitPrior::per_node(d_max, std::move(g));
    return hp;
}

BinaryImage random_image(int d_max, Rng& rng) {
    const std::uint32_t side = std::uint32_t{1} << d_max;
    BinaryImage img(side, side);
    const double density = rng.uniform();
    for (auto& b : img.bits) b = rng.bernoulli(density) ? 1 : 0;
    return img;
}

}  // namespace

std::vector<CheckResult> run_verification(int d_max, std::size_t images, std::uint64_t seed) {
    if (d_max < 0 || d_max > 3) throw std::out_of_range("verify supports d_max in [0,3]");
    Rng rng(seed);
    const ModelSpace space(d_max);
    const std::vector<HyperParams> priors = {HyperParams{}, random_g(d_max, rng)};

    CheckResult prior_sum{"prior sums to 1", true, 0.0, 1e-12};
    CheckResult path_sum{"leaf path sums", true, 0.0, 1e-12};
    for (const auto& hp : priors) {
        double total = 0.0;
        std::vector<double> leaf_mass(node_count(d_max), 0.0);
        for (const auto& m : space.models()) {
            const double p = model_prior(m, hp);
            total += p;
            for (const auto& s : m.leaves()) leaf_mass[s.flat_index()] += p;
        }
        prior_sum.worst_error = std::max(prior_sum.worst_error, std::fabs(total - 1.0));
        for (std::size_t f = 0; f < leaf_mass.size(); ++f) {
            BlockId s = BlockId::from_flat_index(f);
            double expect = 1.0 - hp.g.at(s, d_max);
            while (!s.is_root()) {
                s = s.parent();
                expect *= hp.g.at(s, d_max);
            }
            path_sum.worst_error = std::max(path_sum.worst_error, std::fabs(leaf_mass[f] - expect));
        }
    }

    CheckResult coding{"coding probability matches mixture", true, 0.0, 1e-9};
    CheckResult posterior{"posterior matches product form", true, 0.0, 1e-9};
    CheckResult map{"MAP matches enumeration", true, 0.0, 1e-9};
    for (std::size_t k = 0; k < images; ++k) {
        const HyperParams& hp = priors[k % priors.size()];
        const BinaryImage img = random_image(d_max, rng);
        CodingState st(d_max, hp);
        for (std::size_t t = 0; t < img.size(); ++t) {
            const std::span<const Bit> prefix(img.bits.data(), t);
            const double expect = exact_mixture_predictive(space, prefix, img.bits[t], hp);
            coding.worst_error = std::max(coding.worst_error, std::fabs(st.coding_probability(img.bits[t]) - expect));
            st.advance(img.bits[t]);
        }
        const auto post = space.posterior(img.bits, hp);
        for (std::size_t m = 0; m < space.size(); ++m)
            posterior.worst_error =
                std::max(posterior.worst_error, std::fabs(model_posterior(st, space.model(m)) - post[m]));
        const MapEstimate est = compute_map(st);
        const double best = *std::max_element(post.begin(), post.end());
        map.worst_error = std::max(map.worst_error, std::fabs(est.max_posterior() - best));
        const auto found = std::find(space.models().begin(), space.models().end(), est.model);
        if (found == space.models().end()) {
            map.passed = false;
        } else {
            const double attained = post[static_cast<std::size_t>(found - space.models().begin())];
            map.worst_error = std::max(map.worst_error, std::fabs(attained - best));
        }
    }

    std::vector<CheckResult> out{prior_sum, path_sum, coding, posterior, map};
    for (auto& c : out) c.passed = c.passed && c.worst_error <= c.tolerance;
    return out;
}

}  // namespace qtb::oracle
