// qtb: quadtree Bayes coder for binary images.

#include <CLI11.hpp>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <json.hpp>
#include <string>

#include "qtb/bench.hpp"
#include "qtb/codec.hpp"
#include "qtb/imageio.hpp"
#include "qtb/map_tree.hpp"
#include "qtb/synth.hpp"
#include "qtb/weighting.hpp"
#include "verify.hpp"

namespace fs = std::filesystem;
using namespace qtb;

namespace {

struct ModelFlags {
    double alpha = 0.5;
    double beta = 0.5;
    double g = 0.5;
    int threshold = 128;

    HyperParams params() const {
        HyperParams hp;
        hp.alpha = alpha;
        hp.beta = beta;
        hp.g = SplitPrior::uniform(g);
        hp.validate();
        return hp;
    }
};

BinaryImage load_binary(const fs::path& path, int threshold) {
    return to_binary(read_pnm(read_file(path)), threshold);
}

int log2_exact(int n) {
    if (n < 1 || (n & (n - 1)) != 0) throw std::invalid_argument("--fixed expects a power of two");
    int k = 0;
    while ((1 << k) < n) ++k;
    return k;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Quadtree Bayes coder for binary images"};
    app.require_subcommand(1);
    app.fallthrough();

    ModelFlags flags;
    app.add_option("--alpha", flags.alpha, "Beta prior pseudo-count for 1-pixels")->capture_default_str();
    app.add_option("--beta", flags.beta, "Beta prior pseudo-count for 0-pixels")->capture_default_str();
    app.add_option("--g", flags.g, "Split probability of every non-singleton block")->capture_default_str();
    app.add_option("--threshold", flags.threshold, "Greyscale binarization threshold (value >= t is 1)")
        ->capture_default_str();

    // compress
    auto* compress_cmd = app.add_subcommand("compress", "Compress a PBM/PGM image to .qtb");
    std::string in_path, out_path;
    bool no_pad = false;
    compress_cmd->add_option("input", in_path)->required();
    compress_cmd->add_option("output", out_path)->required();
    compress_cmd->add_flag("--no-pad", no_pad, "Reject images that are not a power-of-two square");

    // decompress
    auto* decompress_cmd = app.add_subcommand("decompress", "Decompress a .qtb file to PBM");
    bool plain = false;
    decompress_cmd->add_option("input", in_path)->required();
    decompress_cmd->add_option("output", out_path)->required();
    decompress_cmd->add_flag("--plain", plain, "Write plain (P1) PBM");

    // rate
    auto* rate_cmd = app.add_subcommand("rate", "Report coding rate in bit/pel");
    int fixed = 0;
    bool json_out = false;
    rate_cmd->add_option("input", in_path)->required();
    auto* fixed_opt = rate_cmd->add_option("--fixed", fixed, "Fixed block size baseline (power of two)");
    rate_cmd->add_flag("--quadtree", "Quadtree prior (default)")->excludes(fixed_opt);
    rate_cmd->add_flag("--json", json_out, "Print JSON");

    // map
    auto* map_cmd = app.add_subcommand("map", "Render the MAP segmentation over the image");
    std::string dump_path;
    map_cmd->add_option("input", in_path)->required();
    map_cmd->add_option("overlay", out_path, "Output PGM")->required();
    map_cmd->add_option("--dump", dump_path, "Also write the MAP tree dump here");

    // gen
    auto* gen_cmd = app.add_subcommand("gen", "Sample images from the generative model");
    int gen_dmax = 6;
    std::size_t gen_count = 1;
    std::uint64_t gen_seed = 1;
    std::string gen_dir;
    gen_cmd->add_option("--dmax", gen_dmax)->capture_default_str();
    gen_cmd->add_option("--count", gen_count)->capture_default_str();
    gen_cmd->add_option("--seed", gen_seed)->capture_default_str();
    gen_cmd->add_option("dir", gen_dir)->required();

    // verify
    auto* verify_cmd = app.add_subcommand("verify", "Check the engine against brute-force enumeration");
    int verify_dmax = 2;
    std::size_t verify_images = 20;
    std::uint64_t verify_seed = 1;
    verify_cmd->add_option("--dmax", verify_dmax)->capture_default_str()->check(CLI::Range(0, 3));
    verify_cmd->add_option("--images", verify_images)->capture_default_str();
    verify_cmd->add_option("--seed", verify_seed)->capture_default_str();

    // bench
    auto* bench_cmd = app.add_subcommand("bench", "Reproduce the rate experiments");
    bench_cmd->require_subcommand(1);
    std::string json_path;
    bool no_timing = false;
    auto* exp1_cmd = bench_cmd->add_subcommand("exp1", "Synthetic images from the generative model");
    Experiment1Options exp1;
    exp1_cmd->add_option("--count", exp1.count)->capture_default_str();
    exp1_cmd->add_option("--dmax", exp1.d_max)->capture_default_str();
    exp1_cmd->add_option("--seed", exp1.seed)->capture_default_str();
    exp1_cmd->add_option("--threads", exp1.threads, "Worker threads (0 = all cores)")->capture_default_str();
    exp1_cmd->add_option("--json", json_path, "Write JSON results here");
    exp1_cmd->add_flag("--no-timing", no_timing, "Omit wall time from JSON");
    auto* exp2_cmd = bench_cmd->add_subcommand("exp2", "One greyscale image, binarized");
    exp2_cmd->add_option("input", in_path, "256x256 PGM")->required();
    exp2_cmd->add_option("--json", json_path, "Write JSON results here");
    exp2_cmd->add_flag("--no-timing", no_timing, "Omit wall time from JSON");

    CLI11_PARSE(app, argc, argv);

    try {
        const HyperParams hp = flags.params();

        if (*compress_cmd) {
            const BinaryImage img = load_binary(in_path, flags.threshold);
            write_file(out_path, compress_bytes(img, CodecOptions{hp, !no_pad}));
        } else if (*decompress_cmd) {
            const BinaryImage img = decompress_bytes(read_file(in_path), CodecOptions{hp, true});
            write_file(out_path, write_pbm(img, plain));
        } else if (*rate_cmd) {
            HyperParams cfg = hp;
            std::string name = "quadtree";
            if (*fixed_opt) {
                cfg.g = SplitPrior::fixed_block(log2_exact(fixed));
                name = "fixed-" + std::to_string(fixed);
            }
            const BinaryImage img = load_binary(in_path, flags.threshold);
            const Rate r = measure_rate(img, CodecOptions{cfg, true});
            if (json_out) {
                nlohmann::ordered_json j{{"config", name},
                                         {"width", img.width},
                                         {"height", img.height},
                                         {"file_bytes", r.file_bytes},
                                         {"actual_bpp", r.actual_bpp},
                                         {"ideal_bpp", r.ideal_bpp}};
                std::cout << j.dump(2) << "\n";
            } else {
                std::printf("%s: %.4f bit/pel (ideal %.4f, %zu bytes)\n", name.c_str(), r.actual_bpp,
                            r.ideal_bpp, r.file_bytes);
            }
        } else if (*map_cmd) {
            const BinaryImage img = load_binary(in_path, flags.threshold);
            const int d = padded_depth(img.width, img.height);
            const BinaryImage grid = exact_depth(img.width, img.height) ? img : pad_to_square(img, d);
            CodingState st(d, hp);
            for (Bit v : grid.bits) st.advance(v);
            const MapEstimate est = compute_map(st);
            write_file(out_path, write_overlay(img, est.model));
            if (!dump_path.empty()) {
                const std::string dump = est.model.dump();
                write_file(dump_path, std::span(reinterpret_cast<const std::uint8_t*>(dump.data()), dump.size()));
            }
            std::printf("MAP tree: %zu leaves, log max posterior %.6f\n", est.model.leaves().size(),
                        est.log_max_posterior);
        } else if (*gen_cmd) {
            fs::create_directories(gen_dir);
            for (std::size_t k = 0; k < gen_count; ++k) {
                const SyntheticImage s = generate(hp, gen_dmax, gen_seed + k);
                char stem[32];
                std::snprintf(stem, sizeof stem, "img_%04zu", k);
                const fs::path base = fs::path(gen_dir) / stem;
                write_file(base.string() + ".pbm", write_pbm(s.image));
                nlohmann::ordered_json side{{"seed", s.seed}, {"d_max", gen_dmax}, {"model", s.model.dump()}};
                side["leaves"] = nlohmann::ordered_json::array();
                for (std::size_t l = 0; l < s.params.leaves.size(); ++l)
                    side["leaves"].push_back({{"block", s.params.leaves[l].path_string()},
                                              {"theta", s.params.theta[l]}});
                const std::string text = side.dump(2) + "\n";
                write_file(base.string() + ".json",
                           std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
            }
        } else if (*verify_cmd) {
            bool ok = true;
            for (const auto& c : oracle::run_verification(verify_dmax, verify_images, verify_seed)) {
                std::printf("[%s] %-40s worst %.3e (tol %.0e)\n", c.passed ? "PASS" : "FAIL", c.name.c_str(),
                            c.worst_error, c.tolerance);
                ok = ok && c.passed;
            }
            return ok ? 0 : 2;
        } else if (*bench_cmd) {
            BenchReport rep;
            if (*exp1_cmd) {
                exp1.hp = hp;
                rep = experiment1(exp1);
            } else {
                rep = experiment2(load_binary(in_path, flags.threshold), hp);
            }
            std::cout << rep.table();
            if (!json_path.empty()) {
                const std::string text = rep.to_json(!no_timing);
                write_file(json_path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
            }
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
