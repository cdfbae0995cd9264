#include "clic/cli/config.hpp"

#include <set>

#include <json.hpp>

#include "clic/common/errors.hpp"
#include "clic/common/io.hpp"
#include "clic/data/synth.hpp"

namespace clic::cli {

namespace {

using nlohmann::json;

void require_keys(const json& obj, const std::string& path,
                  const std::set<std::string>& allowed) {
    for (const auto& [key, value] : obj.items()) {
        (void)value;
        if (!allowed.count(key)) {
            throw ConfigValidationError("unknown key '" + (path.empty() ? key : path + "." + key) +
                                        "'");
        }
    }
}

template <typename T>
T get_or(const json& obj, const std::string& key, T fallback) {
    if (!obj.contains(key)) return fallback;
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigValidationError("bad value for '" + key + "': " + e.what());
    }
}

training::TrainConfig parse_train(const json& obj) {
    require_keys(obj, "train",
                 {"lr", "batch_size", "max_epochs", "patience", "beta1", "beta2", "eps", "seeds"});
    training::TrainConfig t;
    t.lr = get_or(obj, "lr", t.lr);
    t.batch_size = get_or(obj, "batch_size", t.batch_size);
    t.max_epochs = get_or(obj, "max_epochs", t.max_epochs);
    t.patience = get_or(obj, "patience", t.patience);
    t.beta1 = get_or(obj, "beta1", t.beta1);
    t.beta2 = get_or(obj, "beta2", t.beta2);
    t.eps = get_or(obj, "eps", t.eps);
    t.seeds = get_or(obj, "seeds", t.seeds);
    return t;
}

data::SynthConfig parse_synth(const json& obj) {
    require_keys(obj, "synth",
                 {"n_records", "signal_length", "seed", "class_priors", "confound_pairs",
                  "disjoint_demographics"});
    const int n = get_or(obj, "n_records", 0);
    const int len = get_or(obj, "signal_length", 1000);
    const std::uint64_t seed = get_or<std::uint64_t>(obj, "seed", 0);
    data::SynthConfig cfg = data::default_synth_config(n, len, seed);
    if (obj.contains("class_priors")) {
        cfg.class_priors = obj.at("class_priors").get<std::vector<double>>();
    }
    if (obj.contains("confound_pairs")) {
        for (const auto& pair : obj.at("confound_pairs")) {
            const auto p = pair.get<std::vector<int>>();
            if (p.size() != 2) throw ConfigValidationError("synth.confound_pairs entries are [a, b]");
            cfg.confound_pairs.emplace_back(p[0], p[1]);
        }
    }
    if (get_or(obj, "disjoint_demographics", false)) data::apply_disjoint_demographics(cfg);
    return cfg;
}

TextProviderConfig parse_provider(const json& obj) {
    require_keys(obj, "text_provider", {"kind", "path", "base_url", "model"});
    TextProviderConfig p;
    const std::string kind = get_or<std::string>(obj, "kind", "hash");
    if (kind == "hash") p.kind = TextProviderConfig::Kind::Hash;
    else if (kind == "precomputed") p.kind = TextProviderConfig::Kind::Precomputed;
    else if (kind == "http") p.kind = TextProviderConfig::Kind::Http;
    else throw ConfigValidationError("text_provider.kind must be hash|precomputed|http");
    p.path = get_or<std::string>(obj, "path", "");
    p.base_url = get_or<std::string>(obj, "base_url", "");
    p.model = get_or<std::string>(obj, "model", "");
    if (p.kind == TextProviderConfig::Kind::Precomputed && p.path.empty()) {
        throw ConfigValidationError("text_provider.path required for kind=precomputed");
    }
    if (p.kind == TextProviderConfig::Kind::Http && p.base_url.empty()) {
        throw ConfigValidationError("text_provider.base_url required for kind=http");
    }
    return p;
}

textgen::LlmEndpointConfig parse_llm(const json& obj) {
    require_keys(obj, "llm", {"base_url", "model", "temperature", "timeout_s", "rate_limit_per_s"});
    textgen::LlmEndpointConfig cfg;
    cfg.base_url = get_or<std::string>(obj, "base_url", "");
    cfg.model = get_or<std::string>(obj, "model", "");
    cfg.temperature = get_or(obj, "temperature", 0.0);
    cfg.timeout_s = get_or(obj, "timeout_s", 60.0);
    cfg.rate_limit_per_s = get_or(obj, "rate_limit_per_s", 0.0);
    if (cfg.base_url.empty()) throw ConfigValidationError("llm.base_url must be set");
    if (cfg.model.empty()) throw ConfigValidationError("llm.model must be set");
    return cfg;
}

}  // namespace

std::filesystem::path RunConfig::data_root_path() const {
    std::filesystem::path p(data_root);
    return p.is_absolute() ? p : config_dir / p;
}

std::filesystem::path RunConfig::out_path() const {
    std::filesystem::path p(out_dir);
    return p.is_absolute() ? p : config_dir / p;
}

RunConfig parse_config_text(const std::string& text, const std::filesystem::path& config_dir) {
    json obj;
    try {
        obj = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigParseError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!obj.is_object()) throw ConfigParseError("config root must be a JSON object");

    require_keys(obj, "",
                 {"data_root", "out_dir", "mode", "label_threshold", "jobs", "train", "synth",
                  "text_provider", "llm"});

    RunConfig cfg;
    cfg.config_dir = config_dir;
    cfg.data_root = get_or<std::string>(obj, "data_root", "");
    cfg.out_dir = get_or<std::string>(obj, "out_dir", "out");
    if (obj.contains("mode")) {
        try {
            cfg.mode = model::mode_from_name(obj.at("mode").get<std::string>());
        } catch (const Error& e) {
            throw ConfigValidationError(e.what());
        }
    }
    cfg.label_threshold = get_or(obj, "label_threshold", 50.0);
    cfg.jobs = get_or(obj, "jobs", 1);
    if (obj.contains("train")) cfg.train = parse_train(obj.at("train"));
    if (obj.contains("synth")) cfg.synth = parse_synth(obj.at("synth"));
    if (obj.contains("text_provider")) cfg.text_provider = parse_provider(obj.at("text_provider"));
    if (obj.contains("llm")) cfg.llm = parse_llm(obj.at("llm"));

    validate(cfg);
    return cfg;
}

RunConfig parse_config(const std::filesystem::path& path) {
    if (!std::filesystem::exists(path)) {
        throw ConfigValidationError("config file does not exist: " + path.string());
    }
    return parse_config_text(read_file(path), std::filesystem::absolute(path).parent_path());
}

void validate(const RunConfig& cfg) {
    if (cfg.data_root.empty()) throw ConfigValidationError("data_root must be set");
    if (cfg.jobs < 1) throw ConfigValidationError("jobs must be >= 1");
    if (cfg.label_threshold < 0 || cfg.label_threshold > 100) {
        throw ConfigValidationError("label_threshold must be in [0, 100]");
    }
    try {
        cfg.train.validate();
    } catch (const Error& e) {
        throw ConfigValidationError(std::string("train: ") + e.what());
    }
    if (cfg.synth.has_value()) {
        try {
            data::validate(*cfg.synth);
        } catch (const Error& e) {
            throw ConfigValidationError(std::string("synth: ") + e.what());
        }
    } else if (!std::filesystem::exists(cfg.data_root_path())) {
        throw ConfigValidationError("data_root does not exist: " + cfg.data_root_path().string() +
                                    " (add a synth section or point at a dataset)");
    }
    if (cfg.mode == model::Mode::ClicLLM && !cfg.llm.has_value() &&
        !std::filesystem::exists(cfg.out_path() / "texts_llm.jsonl")) {
        throw ConfigValidationError(
            "clic-llm mode needs an llm endpoint or cached texts at out_dir/texts_llm.jsonl");
    }
}

}  // namespace clic::cli
