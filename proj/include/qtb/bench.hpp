#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qtb/codec.hpp"
#include "qtb/image.hpp"
#include "qtb/quadtree.hpp"

namespace qtb {

struct BenchConfig {
    std::string name;
    HyperParams hp;
};

// The proposed quadtree prior plus the fixed 4, 8 and 16 pixel block
// baselines, all sharing alpha and beta from `base`.
std::vector<BenchConfig> standard_configs(const HyperParams& base);

struct ConfigResult {
    std::string config;
    std::vector<double> per_image_bpp;
    std::vector<double> per_image_ideal_bpp;
    double mean_bpp = 0.0;
    double mean_ideal_bpp = 0.0;
    double wall_time_ms = 0.0;  // summed compression time over all images
};

struct BenchReport {
    std::string experiment;
    std::uint64_t seed = 0;
    int d_max = 0;
    std::size_t count = 0;
    std::vector<ConfigResult> results;

    const ConfigResult& result(const std::string& config) const;

    // {experiment, d_max, count, seed, results: [{config, seed, per_image_bpp,
    // mean_bpp, mean_ideal_bpp, wall_time_ms}]}. Without timing the output is
    // byte-identical for a fixed seed.
    std::string to_json(bool include_timing = true) const;
    std::string table() const;
};

struct Experiment1Options {
    std::size_t count = 1000;
    int d_max = 6;
    std::uint64_t seed = 1;
    unsigned threads = 0;  // 0: hardware concurrency
    HyperParams hp;        // generator and quadtree coder prior
};

// Image k is drawn from the generative model with seed `seed + k` and then
// compressed under every standard configuration.
BenchReport experiment1(const Experiment1Options& opt);

// Rates of one binary image under every standard configuration.
BenchReport experiment2(const BinaryImage& img, const HyperParams& base = {});

}  // namespace qtb
