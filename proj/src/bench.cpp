#include "qtb/bench.hpp"

#include <atomic>
#include <chrono>
#include <cstdio>
#include <json.hpp>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "qtb/synth.hpp"

namespace qtb {

std::vector<BenchConfig> standard_configs(const HyperParams& base) {
    std::vector<BenchConfig> out;
    out.push_back({"quadtree", base});
    for (int log2_side : {2, 3, 4}) {
        HyperParams hp = base;
        hp.g = SplitPrior::fixed_block(log2_side);
        out.push_back({"fixed-" + std::to_string(1 << log2_side), hp});
    }
    return out;
}

const ConfigResult& BenchReport::result(const std::string& config) const {
    for (const auto& r : results)
        if (r.config == config) return r;
    throw std::out_of_range("no bench result for " + config);
}

std::string BenchReport::to_json(bool include_timing) const {
    nlohmann::ordered_json j;
    j["experiment"] = experiment;
    j["d_max"] = d_max;
    j["count"] = count;
    j["seed"] = seed;
    j["results"] = nlohmann::ordered_json::array();
    for (const auto& r : results) {
        nlohmann::ordered_json e;
        e["config"] = r.config;
        e["seed"] = seed;
        e["per_image_bpp"] = r.per_image_bpp;
        e["mean_bpp"] = r.mean_bpp;
        e["mean_ideal_bpp"] = r.mean_ideal_bpp;
        if (include_timing) e["wall_time_ms"] = r.wall_time_ms;
        j["results"].push_back(std::move(e));
    }
    return j.dump(2) + "\n";
}

std::string BenchReport::table() const {
    std::ostringstream os;
    char buf[64];
    os << experiment << ": " << count << " image(s), d_max=" << d_max;
    if (experiment == "exp1") os << ", seed=" << seed;
    os << "\n";
    std::string head, sep, vals, ideal;
    for (const auto& r : results) {
        std::snprintf(buf, sizeof buf, "| %-10s ", r.config.c_str());
        head += buf;
        sep += "|------------";
        std::snprintf(buf, sizeof buf, "| %10.3f ", r.mean_bpp);
        vals += buf;
        std::snprintf(buf, sizeof buf, "| %10.3f ", r.mean_ideal_bpp);
        ideal += buf;
    }
    os << "          " << head << "|\n"
       << "          " << sep << "|\n"
       << "bit/pel   " << vals << "|\n"
       << "ideal     " << ideal << "|\n";
    return os.str();
}

namespace {

double mean(const std::vector<double>& v) {
    return v.empty() ? 0.0 : std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

template <class Work>
void parallel_for(std::size_t n, unsigned threads, const Work& work) {
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(n, 1)));
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::atomic<bool> failed{false};
    auto body = [&] {
        try {
            for (std::size_t k; !failed && (k = next++) < n;) work(k);
        } catch (...) {
            if (!failed.exchange(true)) failure = std::current_exception();
        }
    };
    std::vector<std::thread> pool;
    for (unsigned k = 1; k < threads; ++k) pool.emplace_back(body);
    body();
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

void finalize(ConfigResult& r, const std::vector<double>& times_ms) {
    r.mean_bpp = mean(r.per_image_bpp);
    r.mean_ideal_bpp = mean(r.per_image_ideal_bpp);
    r.wall_time_ms = std::accumulate(times_ms.begin(), times_ms.end(), 0.0);
}

}  // namespace

BenchReport experiment1(const Experiment1Options& opt) {
    const auto configs = standard_configs(opt.hp);
    BenchReport rep{"exp1", opt.seed, opt.d_max, opt.count, {}};
    rep.results.resize(configs.size());
    std::vector<std::vector<double>> times(configs.size(), std::vector<double>(opt.count));
    for (std::size_t c = 0; c < configs.size(); ++c) {
        rep.results[c].config = configs[c].name;
        rep.results[c].per_image_bpp.resize(opt.count);
        rep.results[c].per_image_ideal_bpp.resize(opt.count);
    }

    parallel_for(opt.count, opt.threads, [&](std::size_t k) {
        const SyntheticImage sample = generate(opt.hp, opt.d_max, opt.seed + k);
        for (std::size_t c = 0; c < configs.size(); ++c) {
            const auto start = std::chrono::steady_clock::now();
            const Rate r = measure_rate(sample.image, CodecOptions{configs[c].hp, true});
            const auto stop = std::chrono::steady_clock::now();
            rep.results[c].per_image_bpp[k] = r.actual_bpp;
            rep.results[c].per_image_ideal_bpp[k] = r.ideal_bpp;
            times[c][k] = std::chrono::duration<double, std::milli>(stop - start).count();
        }
    });
    for (std::size_t c = 0; c < configs.size(); ++c) finalize(rep.results[c], times[c]);
    return rep;
}

BenchReport experiment2(const BinaryImage& img, const HyperParams& base) {
    BenchReport rep{"exp2", 0, padded_depth(img.width, img.height), 1, {}};
    for (const auto& cfg : standard_configs(base)) {
        const auto start = std::chrono::steady_clock::now();
        const Rate r = measure_rate(img, CodecOptions{cfg.hp, true});
        const auto stop = std::chrono::steady_clock::now();
        ConfigResult res;
        res.config = cfg.name;
        res.per_image_bpp = {r.actual_bpp};
        res.per_image_ideal_bpp = {r.ideal_bpp};
        finalize(res, {std::chrono::duration<double, std::milli>(stop - start).count()});
        rep.results.push_back(std::move(res));
    }
    return rep;
}

}  // namespace qtb
