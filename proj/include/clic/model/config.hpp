#pragma once

#include <array>
#include <cstdint>
#include <string>

namespace clic::model {

enum class Mode { EcgOnly, EcgAttr, ClicDtT, ClicLLM };

const char* mode_name(Mode m);          // ecg / ecg-attr / clic-dtt / clic-llm
Mode mode_from_name(const std::string& name);
bool is_multimodal(Mode m);

struct ModelConfig {
    Mode mode = Mode::EcgOnly;
    int input_leads = 12;
    int n_stages = 4;         // 4 stages -> 512-wide embedding; fewer only for reduced test models
    int text_dim = 768;
    int attr_dim = 0;         // required for EcgAttr
    std::array<int, 3> head_dims = {256, 64, 5};
    std::uint64_t seed = 0;

    int ecg_dim() const { return 64 << (n_stages - 1); }
    int fusion_dim() const { return ecg_dim(); }
    int context_dim() const;
    int fusion_input_dim() const { return ecg_dim() + context_dim(); }

    void validate() const;
    bool operator==(const ModelConfig&) const = default;
};

}  // namespace clic::model
