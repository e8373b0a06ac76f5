#include <doctest.h>

#include <json.hpp>

#include "qtb/bench.hpp"
#include "qtb/synth.hpp"

using namespace qtb;

TEST_CASE("standard configurations") {
    const auto cfgs = standard_configs(HyperParams{});
    REQUIRE(cfgs.size() == 4);
    CHECK(cfgs[0].name == "quadtree");
    CHECK(cfgs[1].name == "fixed-4");
    CHECK(cfgs[2].name == "fixed-8");
    CHECK(cfgs[3].name == "fixed-16");
    CHECK(cfgs[2].hp.g.block_log2() == 3);
}

TEST_CASE("exp1 is deterministic across runs and thread counts") {
    Experiment1Options opt;
    opt.count = 12;
    opt.d_max = 5;
    opt.seed = 40;
    opt.threads = 1;
    const std::string a = experiment1(opt).to_json(false);
    opt.threads = 3;
    const BenchReport rep = experiment1(opt);
    CHECK(rep.to_json(false) == a);
    CHECK(experiment1(opt).to_json(false) == a);

    const auto j = nlohmann::json::parse(a);
    CHECK(j["experiment"] == "exp1");
    CHECK(j["d_max"] == 5);
    CHECK(j["count"] == 12);
    CHECK(j["seed"] == 40);
    REQUIRE(j["results"].size() == 4);
    for (const auto& r : j["results"]) {
        CHECK(r.contains("config"));
        CHECK(r["per_image_bpp"].size() == 12);
        CHECK_FALSE(r.contains("wall_time_ms"));
        double sum = 0;
        for (double v : r["per_image_bpp"]) sum += v;
        CHECK(r["mean_bpp"].get<double>() == doctest::Approx(sum / 12));
    }
    CHECK(nlohmann::json::parse(rep.to_json(true))["results"][0].contains("wall_time_ms"));
    CHECK(rep.table().find("fixed-16") != std::string::npos);
}

TEST_CASE("exp2 on a synthetic image") {
    const SyntheticImage s = generate(HyperParams{}, 6, 77);
    const BenchReport rep = experiment2(s.image);
    CHECK(rep.experiment == "exp2");
    CHECK(rep.count == 1);
    for (const auto& r : rep.results) {
        REQUIRE(r.per_image_bpp.size() == 1);
        CHECK(r.mean_bpp >= r.mean_ideal_bpp);
    }
    CHECK_THROWS(rep.result("fixed-32"));
}
