#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace qtb::oracle {

struct CheckResult {
    std::string name;
    bool passed = false;
    double worst_error = 0.0;
    double tolerance = 0.0;
};

// Runs the sequential engine against the brute-force references on `images`
// random images of side 2^d_max (d_max <= 3): prior normalisation, leaf path
// sums, step-by-step coding probabilities, posterior form and MAP.
std::vector<CheckResult> run_verification(int d_max, std::size_t images, std::uint64_t seed);

}  // namespace qtb::oracle
