#include "adt/config.hpp"

#include <cmath>
#include <fstream>
#include <set>

namespace adt {

using nlohmann::json;

namespace {

/// Reads fields from one JSON object and remembers which keys were consumed.
class ObjectReader {
public:
    ObjectReader(const json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
        if (!obj_.is_object()) {
            throw ConfigError(where() + " must be an object");
        }
    }

    bool has(const std::string& key) const { return obj_.contains(key); }

    template <typename T>
    void get(const std::string& key, T& out) {
        if (!obj_.contains(key)) {
            return;
        }
        used_.insert(key);
        try {
            out = obj_.at(key).get<T>();
        } catch (const json::exception& e) {
            throw ConfigError(field(key) + ": " + e.what());
        }
    }

    ObjectReader child(const std::string& key) {
        used_.insert(key);
        return ObjectReader(obj_.at(key), field(key));
    }

    std::string field(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

    void finish() const {
        for (const auto& [key, value] : obj_.items()) {
            if (!used_.contains(key)) {
                throw ConfigError("unknown configuration key '" + field(key) + "'");
            }
        }
    }

private:
    std::string where() const { return path_.empty() ? "configuration" : "'" + path_ + "'"; }

    const json& obj_;
    std::string path_;
    std::set<std::string> used_;
};

std::string activation_name(nn::OutputActivation a) {
    return a == nn::OutputActivation::sigmoid ? "sigmoid" : "identity";
}

nn::OutputActivation parse_activation(const std::string& s) {
    if (s == "sigmoid") {
        return nn::OutputActivation::sigmoid;
    }
    if (s == "identity") {
        return nn::OutputActivation::identity;
    }
    throw ConfigError("unknown output activation '" + s + "' (expected sigmoid or identity)");
}

void read_synth(ObjectReader r, SynthConfig& s) {
    r.get("n", s.n);
    r.get("m", s.m);
    if (r.has("base")) {
        std::string base;
        r.get("base", base);
        s.base = parse_base_pattern(base);
    }
    r.get("noise_std", s.noise_std);
    r.get("anomaly_rate", s.anomaly_rate);
    if (r.has("kinds")) {
        std::vector<std::string> kinds;
        r.get("kinds", kinds);
        s.kinds.clear();
        for (const auto& k : kinds) {
            s.kinds.push_back(parse_anomaly_kind(k));
        }
    }
    r.get("min_segment", s.min_segment);
    r.get("max_segment", s.max_segment);
    r.get("clean_prefix", s.clean_prefix);
    r.get("seed", s.seed);
    r.finish();
}

void read_csv(ObjectReader r, CsvSource& c) {
    std::string path;
    r.get("path", path);
    c.path = path;
    if (r.has("normal_path")) {
        std::string normal;
        r.get("normal_path", normal);
        if (!normal.empty()) {
            c.normal_path = normal;
        }
    }
    r.get("features", c.schema.feature_columns);
    if (r.has("label_column")) {
        std::string label;
        r.get("label_column", label);
        if (!label.empty()) {
            c.schema.label_column = label;
        }
    }
    if (r.has("label_map")) {
        std::map<std::string, int> raw;
        r.get("label_map", raw);
        for (const auto& [k, v] : raw) {
            if (v != 0 && v != 1) {
                throw ConfigError("label_map values must be 0 or 1");
            }
            c.schema.label_map[k] = static_cast<Label>(v);
        }
    }
    r.finish();
}

} // namespace

void ExperimentConfig::validate() const {
    try {
        env.validate();
        agent.validate();
        if (data.kind == SourceKind::synth) {
            data.synth.validate();
        }
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    if (tau < 1) {
        throw ConfigError("tau must be at least 1");
    }
    if (!(split.ae_train > 0.0) || !(split.adt_train > 0.0) || split.ae_train + split.adt_train > 1.0) {
        throw ConfigError("split fractions must be positive and sum to at most 1");
    }
    if (ae.epochs < 1 || ae.batch_size < 1 || ae.latent_dim < 1 || !(ae.learning_rate > 0.0)) {
        throw ConfigError("autoencoder epochs, batch size, latent size and learning rate must be positive");
    }
    if (!(baselines.spot.q > 0.0 && baselines.spot.q < 1.0)) {
        throw ConfigError("dspot q must lie in (0, 1)");
    }
    if (!(baselines.spot.init_quantile > 0.0 && baselines.spot.init_quantile < 1.0)) {
        throw ConfigError("dspot initial quantile must lie in (0, 1)");
    }
    if (robustness_subsets < 1 || jobs < 1) {
        throw ConfigError("robustness_subsets and jobs must be positive");
    }
    if (data.kind == SourceKind::csv) {
        if (data.csv.path.empty() || !std::filesystem::exists(data.csv.path)) {
            throw ConfigError("data file '" + data.csv.path.string() + "' does not exist");
        }
        if (data.csv.normal_path && !std::filesystem::exists(*data.csv.normal_path)) {
            throw ConfigError("normal data file '" + data.csv.normal_path->string() + "' does not exist");
        }
        if (!data.csv.schema.label_column) {
            throw ConfigError("csv data needs a label_column for evaluation");
        }
    }
}

json to_json(const ExperimentConfig& c) {
    std::vector<std::string> kinds;
    for (const auto k : c.data.synth.kinds) {
        kinds.push_back(to_string(k));
    }
    json label_map = json::object();
    for (const auto& [k, v] : c.data.csv.schema.label_map) {
        label_map[k] = static_cast<int>(v);
    }
    const auto& s = c.data.synth;
    return {
        {"data",
         {{"kind", c.data.kind == SourceKind::synth ? "synth" : "csv"},
          {"name", c.data.name},
          {"synth",
           {{"n", s.n},
            {"m", s.m},
            {"base", to_string(s.base)},
            {"noise_std", s.noise_std},
            {"anomaly_rate", s.anomaly_rate},
            {"kinds", kinds},
            {"min_segment", s.min_segment},
            {"max_segment", s.max_segment},
            {"clean_prefix", s.clean_prefix},
            {"seed", s.seed}}},
          {"csv",
           {{"path", c.data.csv.path.string()},
            {"normal_path", c.data.csv.normal_path ? c.data.csv.normal_path->string() : ""},
            {"features", c.data.csv.schema.feature_columns},
            {"label_column", c.data.csv.schema.label_column.value_or("")},
            {"label_map", label_map}}}}},
        {"tau", c.tau},
        {"k", c.env.k},
        {"l", c.agent.hold},
        {"alpha", c.env.alpha},
        {"beta", c.env.beta},
        {"agent",
         {{"gamma", c.agent.gamma},
          {"epsilon_start", c.agent.epsilon_start},
          {"epsilon_min", c.agent.epsilon_min},
          {"epsilon_decay", c.agent.epsilon_decay},
          {"target_copy_interval", c.agent.target_copy_interval},
          {"minibatch", c.agent.minibatch},
          {"replay_capacity", c.agent.replay_capacity},
          {"episodes", c.agent.episodes},
          {"updates_per_episode", c.agent.updates_per_episode},
          {"learning_rate", c.agent.learning_rate},
          {"hidden", c.agent.hidden}}},
        {"autoencoder",
         {{"encoder_hidden", c.ae.encoder_hidden},
          {"latent_dim", c.ae.latent_dim},
          {"decoder_hidden", c.ae.decoder_hidden},
          {"output_activation", activation_name(c.ae.output_activation)},
          {"epochs", c.ae.epochs},
          {"batch_size", c.ae.batch_size},
          {"learning_rate", c.ae.learning_rate},
          {"min_improvement", c.ae.min_improvement}}},
        {"baselines",
         {{"static", c.baselines.static_enabled},
          {"dspot", c.baselines.dspot_enabled},
          {"dspot_q", c.baselines.spot.q},
          {"dspot_depth", c.baselines.spot.depth},
          {"dspot_init_quantile", c.baselines.spot.init_quantile}}},
        {"split", {{"ae_train", c.split.ae_train}, {"adt_train", c.split.adt_train}}},
        {"seed", c.seed},
        {"output_dir", c.output_dir.string()},
        {"report_wall_time", c.report_wall_time},
        {"robustness_subsets", c.robustness_subsets},
        {"jobs", c.jobs},
    };
}

ExperimentConfig config_from_json(const json& doc) {
    ExperimentConfig c;
    ObjectReader r(doc, "");
    if (r.has("data")) {
        auto d = r.child("data");
        if (d.has("kind")) {
            std::string kind;
            d.get("kind", kind);
            if (kind == "synth") {
                c.data.kind = SourceKind::synth;
            } else if (kind == "csv") {
                c.data.kind = SourceKind::csv;
            } else {
                throw ConfigError("data.kind must be 'synth' or 'csv'");
            }
        }
        d.get("name", c.data.name);
        if (d.has("synth")) {
            read_synth(d.child("synth"), c.data.synth);
        }
        if (d.has("csv")) {
            read_csv(d.child("csv"), c.data.csv);
        }
        d.finish();
    }
    r.get("tau", c.tau);
    r.get("k", c.env.k);
    r.get("l", c.agent.hold);
    r.get("alpha", c.env.alpha);
    r.get("beta", c.env.beta);
    if (r.has("agent")) {
        auto a = r.child("agent");
        a.get("gamma", c.agent.gamma);
        a.get("epsilon_start", c.agent.epsilon_start);
        a.get("epsilon_min", c.agent.epsilon_min);
        a.get("epsilon_decay", c.agent.epsilon_decay);
        a.get("target_copy_interval", c.agent.target_copy_interval);
        a.get("minibatch", c.agent.minibatch);
        a.get("replay_capacity", c.agent.replay_capacity);
        a.get("episodes", c.agent.episodes);
        a.get("updates_per_episode", c.agent.updates_per_episode);
        a.get("learning_rate", c.agent.learning_rate);
        a.get("hidden", c.agent.hidden);
        a.finish();
    }
    if (r.has("autoencoder")) {
        auto a = r.child("autoencoder");
        a.get("encoder_hidden", c.ae.encoder_hidden);
        a.get("latent_dim", c.ae.latent_dim);
        a.get("decoder_hidden", c.ae.decoder_hidden);
        if (a.has("output_activation")) {
            std::string act;
            a.get("output_activation", act);
            c.ae.output_activation = parse_activation(act);
        }
        a.get("epochs", c.ae.epochs);
        a.get("batch_size", c.ae.batch_size);
        a.get("learning_rate", c.ae.learning_rate);
        a.get("min_improvement", c.ae.min_improvement);
        a.finish();
    }
    if (r.has("baselines")) {
        auto b = r.child("baselines");
        b.get("static", c.baselines.static_enabled);
        b.get("dspot", c.baselines.dspot_enabled);
        b.get("dspot_q", c.baselines.spot.q);
        b.get("dspot_depth", c.baselines.spot.depth);
        b.get("dspot_init_quantile", c.baselines.spot.init_quantile);
        b.finish();
    }
    if (r.has("split")) {
        auto s = r.child("split");
        s.get("ae_train", c.split.ae_train);
        s.get("adt_train", c.split.adt_train);
        s.finish();
    }
    r.get("seed", c.seed);
    std::string out = c.output_dir.string();
    r.get("output_dir", out);
    c.output_dir = out;
    r.get("report_wall_time", c.report_wall_time);
    r.get("robustness_subsets", c.robustness_subsets);
    r.get("jobs", c.jobs);
    r.finish();
    return c;
}

void apply_override(json& doc, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0) {
        throw ConfigError("override '" + assignment + "' is not of the form key=value");
    }
    const std::string key = assignment.substr(0, eq);
    const std::string text = assignment.substr(eq + 1);
    std::string pointer;
    std::size_t start = 0;
    while (start <= key.size()) {
        const auto dot = key.find('.', start);
        const std::string part = key.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
        if (part.empty()) {
            throw ConfigError("override key '" + key + "' has an empty component");
        }
        pointer += "/" + part;
        if (dot == std::string::npos) {
            break;
        }
        start = dot + 1;
    }
    json value = json::parse(text, nullptr, false);
    if (value.is_discarded()) {
        value = text;
    }
    try {
        doc[json::json_pointer(pointer)] = value;
    } catch (const json::exception& e) {
        throw ConfigError("cannot apply override '" + assignment + "': " + e.what());
    }
}

ExperimentConfig load_config(const std::optional<std::filesystem::path>& file,
                             const std::vector<std::string>& overrides) {
    json doc = to_json(ExperimentConfig{});
    if (file) {
        std::ifstream in(*file);
        if (!in) {
            throw ConfigError("cannot open config file " + file->string());
        }
        json user = json::parse(in, nullptr, false);
        if (user.is_discarded()) {
            throw ConfigError("config file " + file->string() + " is not valid JSON");
        }
        if (!user.is_object()) {
            throw ConfigError("config file " + file->string() + " must hold a JSON object");
        }
        doc.merge_patch(user);
    }
    for (const auto& o : overrides) {
        apply_override(doc, o);
    }
    ExperimentConfig cfg = config_from_json(doc);
    cfg.validate();
    return cfg;
}

} // namespace adt
