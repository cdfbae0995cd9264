#pragma once

#include <filesystem>
#include <optional>

#include "clic/model/attr.hpp"
#include "clic/model/network.hpp"

namespace clic::model {

// Self-describing container: magic + JSON header (model config, attribute
// schema, preprocessing constants, tensor directory) + float64 LE payload.
void save_checkpoint(ClicNet& net, const AttrSchema& schema,
                     const std::filesystem::path& path);

struct LoadedCheckpoint {
    ClicNet net;
    AttrSchema schema;
};

// Loading with a mismatched expected config fails loudly.
LoadedCheckpoint load_checkpoint(const std::filesystem::path& path,
                                 const std::optional<ModelConfig>& expected = std::nullopt);

}  // namespace clic::model
