#include "kplab/experiments.hpp"
#include "kplab/errors.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace kplab;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("kplab_test_experiments_" + name);
    fs::remove_all(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Small smooth packet that stays clear of the absorbing layers for T = 0.2.
json smooth_config(const std::string& out) {
    return {{"name", "smooth"},
            {"kind", "propagation"},
            {"data", {{"kind", "smooth_packet"},
                      {"packet", {{"amplitude", 0.5}, {"x_center", 2}, {"width_x", 3}, {"width_y", 3}, {"carrier", 0.6}}}}},
            {"window_x0", -6.0},
            {"solver", {{"nx", 128}, {"ny", 64}, {"lx", 32}, {"ly", 32}, {"dt", 0.002}, {"t_end", 0.2},
                        {"absorber", {{"enabled", true}}}}},
            {"sample_count", 21},
            {"energy_probe", 0.01},
            {"refine", {{"nx", 64}, {"ny", 64}}},
            {"box_check", 2},
            {"output_dir", out}};
}

} // namespace

TEST_CASE("scenario JSON round trips") {
    const ScenarioConfig c = scenario_from_json(smooth_config("x"));
    CHECK(c.window_x0() == -6.0);
    CHECK(c.box_check == 2);
    REQUIRE(c.refine_grid);
    CHECK(c.refine_grid->nx() == 64);
    const json j = scenario_to_json(c);
    CHECK(scenario_to_json(scenario_from_json(j)) == j);
}

TEST_CASE("scenario JSON rejects bad input") {
    auto bad = [](auto edit) {
        json j = smooth_config("x");
        edit(j);
        return j;
    };
    CHECK_THROWS_AS(scenario_from_json(bad([](json& j) { j["refine_grid"] = {{"nx", 64}, {"ny", 64}}; })), InvalidConfig);
    CHECK_THROWS_AS(scenario_from_json(bad([](json& j) { j["solver"]["absorber"]["strenght"] = 1; })), InvalidConfig);
    CHECK_THROWS_AS(scenario_from_json(bad([](json& j) { j["weights"] = {{{"eps", 0.25}, {"b", 1.25}, {"n", 1}}}; })),
                    InvalidConfig);
    CHECK_THROWS_AS(scenario_from_json(bad([](json& j) { j["sample_count"] = 19; })), InvalidConfig);
    CHECK_THROWS_AS(scenario_from_json(bad([](json& j) { j["box_check"] = 1; })), InvalidConfig);
    CHECK_THROWS_AS(scenario_from_json(bad([](json& j) { j["sample_grading"] = 0.5; })), InvalidConfig);
    CHECK_THROWS_AS(scenario_from_json(bad([](json& j) { j["monitor_n"] = 2; })), InvalidConfig);
    CHECK_THROWS_AS(scenario_from_json(bad([](json& j) { j["refine"] = {{"nx", 64}}; })), InvalidConfig);
    CHECK_THROWS_AS(scenario_from_json(bad([](json& j) {
                        j["kind"] = "mollification";
                        j["taus"] = {0.1, 0.2};
                    })),
                    InvalidConfig);
}

TEST_CASE("series CSV round trips exactly") {
    const std::vector<double> t{0.0, 0.1, 1.0 / 3.0}, v{1e-300, -2.5, 3.141592653589793};
    const std::vector<bool> w{false, true, false};
    const fs::path dir = scratch("csv");
    fs::create_directories(dir);
    {
        std::ofstream(dir / "s.csv") << series_csv(t, v, w);
    }
    const SeriesData s = read_series_csv((dir / "s.csv").string());
    CHECK(s.t == t);
    CHECK(s.value == v);
    CHECK(s.wrapped == w);
    std::ofstream(dir / "bad.csv") << "time,value\n0,1\n";
    CHECK_THROWS_AS(read_series_csv((dir / "bad.csv").string()), InvalidConfig);
    fs::remove_all(dir);
}

TEST_CASE("smooth propagation passes and its verdicts recompute from files") {
    const fs::path dir = scratch("smooth");
    const Report r = run_scenario(scenario_from_json(smooth_config(dir.string())));
    REQUIRE(r.error.empty());
    CHECK(r.all_pass());
    for (const char* c : {"hypotheses", "functional_bounded", "functional_near_constant", "smoothing_finite",
                          "functional_refinement_stable"})
        CHECK_MESSAGE(r.find(c), c);
    CHECK(r.details.at("contamination").at("box_gap").get<double>() < 0.05);
    for (const auto& f : r.files) CHECK_MESSAGE(fs::exists(dir / f), f);

    const json rep = json::parse(slurp(dir / "report.json"));
    const auto again = recompute_verdicts(dir.string(), rep);
    REQUIRE(again.size() == r.verdicts.size());
    for (std::size_t i = 0; i < again.size(); ++i) {
        CHECK(again[i].criterion == r.verdicts[i].criterion);
        CHECK(again[i].pass == r.verdicts[i].pass);
    }
    fs::remove_all(dir);
}

TEST_CASE("data failing the hypotheses are refused") {
    // rough data with the window left of the singular line
    json j = {{"name", "gated"},
              {"data", {{"kind", "one_sided_rough"}}},
              {"window_x0", -3.0},
              {"solver", {{"nx", 128}, {"ny", 128}, {"lx", 32}, {"ly", 32}, {"dt", 0.002}, {"t_end", 0.2}}},
              {"sample_count", 21}};
    const Report r = run_scenario(scenario_from_json(j));
    REQUIRE(r.error.empty());
    CHECK_FALSE(r.all_pass());
    REQUIRE(r.verdicts.size() == 1);
    CHECK(r.verdicts[0].criterion == "hypotheses");
    CHECK_FALSE(r.verdicts[0].pass);
    CHECK(r.details.contains("refused"));
    CHECK_FALSE(r.details.contains("l2_drift"));
}

TEST_CASE("sweep output does not depend on parallelism") {
    const fs::path base = scratch("sweep");
    auto configs = [&](const std::string& tag) {
        std::vector<ScenarioConfig> out;
        for (int k = 0; k < 3; ++k) {
            json j = smooth_config((base / tag / std::to_string(k)).string());
            j["name"] = "s" + std::to_string(k);
            j["data"]["packet"]["x_center"] = 1.5 + 0.5 * k;
            j["solver"]["t_end"] = 0.1;
            j.erase("box_check");
            out.push_back(scenario_from_json(j));
        }
        return out;
    };
    const auto a = sweep(configs("j1"), 1);
    const auto b = sweep(configs("j4"), 4);
    REQUIRE(a.size() == 3);
    REQUIRE(b.size() == 3);
    for (int k = 0; k < 3; ++k) {
        CHECK(a[k].name == "s" + std::to_string(k));
        REQUIRE(a[k].files == b[k].files);
        for (const auto& f : a[k].files) {
            const auto sub = fs::path(std::to_string(k)) / f;
            CHECK_MESSAGE(slurp(base / "j1" / sub) == slurp(base / "j4" / sub), sub.string());
        }
    }
    fs::remove_all(base);
}
