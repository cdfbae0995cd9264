#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "clic/data/types.hpp"
#include "clic/model/config.hpp"
#include "clic/textgen/llm.hpp"
#include "clic/training/trainer.hpp"

namespace clic::cli {

struct TextProviderConfig {
    enum class Kind { Hash, Precomputed, Http };
    Kind kind = Kind::Hash;
    std::string path;      // precomputed store
    std::string base_url;  // http
    std::string model;     // http
};

struct RunConfig {
    std::filesystem::path config_dir;  // directory of the config file; relative paths resolve here
    std::string data_root;
    std::string out_dir = "out";
    model::Mode mode = model::Mode::ClicDtT;
    double label_threshold = 50.0;
    int jobs = 1;
    training::TrainConfig train;
    std::optional<data::SynthConfig> synth;
    TextProviderConfig text_provider;
    std::optional<textgen::LlmEndpointConfig> llm;

    std::filesystem::path data_root_path() const;
    std::filesystem::path out_path() const;
};

// Strict parse: unknown keys are rejected with their field path; cross-field
// rules (paths exist, clic-llm needs cached texts or an endpoint) are applied
// after defaults.
RunConfig parse_config(const std::filesystem::path& path);
RunConfig parse_config_text(const std::string& text, const std::filesystem::path& config_dir);

void validate(const RunConfig& cfg);

}  // namespace clic::cli
