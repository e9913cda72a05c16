#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "adt/config.hpp"

using namespace adt;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::filesystem::path write_temp(const std::string& name, const std::string& text) {
    const auto path = std::filesystem::temp_directory_path() / name;
    std::ofstream(path) << text;
    return path;
}

} // namespace

TEST_CASE("default hyperparameters") {
    const auto cfg = load_config(std::nullopt);
    CHECK(cfg.agent.episodes == 20000);
    CHECK(cfg.env.k == 2);
    CHECK(cfg.agent.hold == 1);
    CHECK(cfg.env.alpha == 0.9);
    CHECK(cfg.env.beta == 0.1);
    CHECK(cfg.tau == 10);
    CHECK(cfg.agent.gamma == 0.99);
    CHECK(cfg.agent.minibatch == 32);
    CHECK(cfg.agent.replay_capacity == 10000);
    CHECK(cfg.agent.target_copy_interval == 10);
}

TEST_CASE("json round trip preserves every field") {
    ExperimentConfig cfg;
    cfg.tau = 12;
    cfg.env.k = 5;
    cfg.agent.hold = 10;
    cfg.agent.hidden = {32, 16};
    cfg.ae.output_activation = nn::OutputActivation::identity;
    cfg.data.synth.base = BasePattern::mixture;
    cfg.data.synth.kinds = {AnomalyKind::spike};
    cfg.baselines.spot.depth = 0;
    cfg.seed = 99;
    const auto doc = to_json(cfg);
    const auto back = config_from_json(doc);
    CHECK(to_json(back) == doc);
    CHECK(back.agent.hold == 10);
    CHECK(back.data.synth.kinds.size() == 1);
}

TEST_CASE("unknown keys are rejected at every level") {
    auto doc = to_json(ExperimentConfig{});
    doc["bogus"] = 1;
    CHECK_THROWS_AS(config_from_json(doc), ConfigError);

    doc = to_json(ExperimentConfig{});
    doc["agent"]["gama"] = 0.5;
    CHECK_THROWS_WITH_AS(config_from_json(doc), doctest::Contains("agent.gama"), ConfigError);

    doc = to_json(ExperimentConfig{});
    doc["data"]["synth"]["rate"] = 0.1;
    CHECK_THROWS_AS(config_from_json(doc), ConfigError);
}

TEST_CASE("wrong value types are reported with the key") {
    auto doc = to_json(ExperimentConfig{});
    doc["tau"] = "ten";
    CHECK_THROWS_WITH_AS(config_from_json(doc), doctest::Contains("tau"), ConfigError);
}

TEST_CASE("overrides parse json values with a string fallback") {
    json doc = to_json(ExperimentConfig{});
    apply_override(doc, "agent.episodes=50");
    apply_override(doc, "alpha=0.5");
    apply_override(doc, "data.name=plant");
    apply_override(doc, "baselines.dspot=false");
    const auto cfg = config_from_json(doc);
    CHECK(cfg.agent.episodes == 50);
    CHECK(cfg.env.alpha == 0.5);
    CHECK(cfg.data.name == "plant");
    CHECK_FALSE(cfg.baselines.dspot_enabled);
}

TEST_CASE("malformed overrides are rejected") {
    json doc = to_json(ExperimentConfig{});
    CHECK_THROWS_AS(apply_override(doc, "episodes"), ConfigError);
    CHECK_THROWS_AS(apply_override(doc, "=3"), ConfigError);
    CHECK_THROWS_AS(apply_override(doc, "agent..episodes=3"), ConfigError);
    CHECK_THROWS_AS(load_config(std::nullopt, {"agent.nonsense=3"}), ConfigError);
}

TEST_CASE("file values apply before overrides") {
    const auto path = write_temp("adt_cfg_test.json", R"({"k": 7, "agent": {"episodes": 30}, "seed": 3})");
    const auto cfg = load_config(path, {"k=4"});
    CHECK(cfg.env.k == 4);
    CHECK(cfg.agent.episodes == 30);
    CHECK(cfg.seed == 3);
    CHECK(cfg.agent.gamma == 0.99);
    std::filesystem::remove(path);
}

TEST_CASE("invalid files and values fail") {
    const auto bad = write_temp("adt_cfg_bad.json", "{ not json");
    CHECK_THROWS_AS(load_config(bad), ConfigError);
    std::filesystem::remove(bad);
    CHECK_THROWS_AS(load_config(std::filesystem::path("/nonexistent/cfg.json")), ConfigError);

    CHECK_THROWS_AS(load_config(std::nullopt, {"split.ae_train=0.9", "split.adt_train=0.2"}), ConfigError);
    CHECK_THROWS_AS(load_config(std::nullopt, {"split.adt_train=0"}), ConfigError);
    CHECK_THROWS_AS(load_config(std::nullopt, {"alpha=1.5"}), ConfigError);
    CHECK_THROWS_AS(load_config(std::nullopt, {"agent.gamma=1"}), ConfigError);
    CHECK_THROWS_AS(load_config(std::nullopt, {"l=0"}), ConfigError);
    CHECK_THROWS_AS(load_config(std::nullopt, {"data.kind=csv", "data.csv.path=/nonexistent.csv"}), ConfigError);
}

TEST_CASE("shipped example configs parse") {
    const fs::path dir = ADT_CONFIG_DIR;
    const auto synth = load_config(dir / "synthetic.json");
    CHECK(synth.agent.episodes == 2000);
    CHECK(synth.data.kind == SourceKind::synth);

    json doc = to_json(ExperimentConfig{});
    std::ifstream in(dir / "csv_example.json");
    doc.merge_patch(json::parse(in));
    const auto csv = config_from_json(doc);
    CHECK(csv.data.kind == SourceKind::csv);
    CHECK(csv.agent.hold == 10);
    CHECK(csv.data.csv.schema.label_map.at("Attack") == 1);
}
