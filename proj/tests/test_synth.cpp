#include <doctest.h>

#include <cmath>
#include <map>

#include "oracle.hpp"
#include "qtb/synth.hpp"
#include "qtb/weighting.hpp"

using namespace qtb;

TEST_CASE("Rng is reproducible") {
    Rng a(42), b(42);
    for (int k = 0; k < 100; ++k) CHECK(a.beta(0.5, 0.5) == b.beta(0.5, 0.5));
    const SyntheticImage x = generate(HyperParams{}, 4, 9), y = generate(HyperParams{}, 4, 9);
    CHECK(x.image == y.image);
    CHECK(x.model == y.model);
    CHECK(x.params.theta == y.params.theta);
}

TEST_CASE("degenerate split priors") {
    Rng rng(1);
    HyperParams never, always;
    never.g = SplitPrior::uniform(0.0);
    always.g = SplitPrior::uniform(1.0);
    for (int k = 0; k < 10; ++k) {
        CHECK(sample_model(never, 4, rng) == QuadtreeModel(4));
        CHECK(sample_model(always, 3, rng) == QuadtreeModel::uniform(3, 3));
    }
}

TEST_CASE("sampled trees follow the prior") {
    const HyperParams hp;
    const auto models = enumerate_models(2);
    REQUIRE(models.size() == 17);
    std::map<std::vector<std::uint8_t>, std::size_t> freq;
    Rng rng(7);
    const std::size_t n = 100000;
    for (std::size_t k = 0; k < n; ++k) ++freq[sample_model(hp, 2, rng).flags()];
    CHECK(freq.size() == 17);
    for (const auto& m : models) {
        const double p = model_prior(m, hp);
        const double sigma = std::sqrt(n * p * (1 - p));
        CHECK(std::fabs(static_cast<double>(freq[m.flags()]) - n * p) <= 3.5 * sigma);
    }
}

TEST_CASE("Beta leaf parameters") {
    Rng rng(3);
    const std::size_t n = 100000;
    double sum = 0.0, sum_sq = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double t = rng.beta(0.5, 0.5);
        REQUIRE(t > 0.0);
        REQUIRE(t < 1.0);
        sum += t;
        sum_sq += t * t;
    }
    CHECK(std::fabs(sum / n - 0.5) < 0.005);
    // Var of Beta(1/2, 1/2) is 1/8.
    CHECK(std::fabs(sum_sq / n - 0.25 - 0.125) < 0.005);

    double m2 = 0.0;
    for (std::size_t k = 0; k < n; ++k) m2 += rng.beta(2.0, 5.0);
    CHECK(std::fabs(m2 / n - 2.0 / 7.0) < 0.005);

    double lag = 0.0, mean = 0.0, var = 0.0;
    std::vector<double> xs(n);
    for (auto& x : xs) x = rng.beta(0.5, 0.5);
    for (double x : xs) mean += x;
    mean /= n;
    for (std::size_t k = 0; k < n; ++k) {
        var += (xs[k] - mean) * (xs[k] - mean);
        if (k + 1 < n) lag += (xs[k] - mean) * (xs[k + 1] - mean);
    }
    CHECK(std::fabs(lag / var) < 0.02);
}

TEST_CASE("pixels follow their leaf parameter") {
    Rng rng(5);
    const QuadtreeModel root(6);
    LeafParams p{{BlockId{}}, {0.0}};
    CHECK(sample_image(root, p, rng) == BinaryImage(64, 64, 0));
    p.theta = {1.0};
    CHECK(sample_image(root, p, rng) == BinaryImage(64, 64, 1));
    p.theta = {0.3};
    const BinaryImage img = sample_image(root, p, rng);
    double ones = 0;
    for (Bit b : img.bits) ones += b;
    CHECK(std::fabs(ones / img.size() - 0.3) < 0.02);

    // Leaf-by-leaf parameters land in the right quadrants.
    const QuadtreeModel split = QuadtreeModel::uniform(2, 1);
    const LeafParams four{split.leaves(), {0.0, 1.0, 1.0, 0.0}};
    const BinaryImage q = sample_image(split, four, rng);
    CHECK(q.at(0, 0) == 0);
    CHECK(q.at(0, 3) == 1);
    CHECK(q.at(3, 0) == 1);
    CHECK(q.at(3, 3) == 0);
}

TEST_CASE("sampled params are in pre-order leaf order") {
    Rng rng(11);
    const SyntheticImage s = generate(HyperParams{}, 5, 123);
    CHECK(s.params.leaves == s.model.leaves());
    CHECK(s.params.theta.size() == s.params.leaves.size());
    for (double t : s.params.theta) {
        CHECK(t > 0.0);
        CHECK(t < 1.0);
    }
}

TEST_CASE("generated images follow the marginal of the mixture") {
    const HyperParams hp;
    const oracle::ModelSpace space(1);
    const std::size_t n = 100000;
    std::map<unsigned, std::size_t> freq;
    double log_loss = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const BinaryImage img = generate(hp, 1, 1000 + k).image;
        unsigned key = 0;
        for (Bit b : img.bits) key = 2 * key + b;
        ++freq[key];
        log_loss += total_ideal_codelength(img, hp);
    }
    double entropy = 0.0, total = 0.0;
    for (unsigned key = 0; key < 16; ++key) {
        std::vector<Bit> bits(4);
        for (int b = 0; b < 4; ++b) bits[b] = (key >> (3 - b)) & 1;
        const double p = std::exp(space.log_evidence(bits, hp));
        total += p;
        entropy -= p * std::log2(p);
        const double sigma = std::sqrt(n * p * (1 - p));
        CHECK(std::fabs(static_cast<double>(freq[key]) - n * p) <= 4.0 * sigma);
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    // Average code length under the true mixture is the entropy.
    CHECK(std::fabs(log_loss / n - entropy) < 0.03);
}
