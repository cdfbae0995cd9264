#include "clic/model/checkpoint.hpp"

#include <cstring>

#include <json.hpp>

#include "clic/common/errors.hpp"
#include "clic/common/io.hpp"
#include "clic/model/preprocess.hpp"

namespace clic::model {

namespace {

constexpr char kMagic[8] = {'C', 'L', 'I', 'C', 'C', 'K', 'P', '1'};

nlohmann::json config_to_json(const ModelConfig& cfg) {
    return nlohmann::json{{"mode", mode_name(cfg.mode)},
                          {"input_leads", cfg.input_leads},
                          {"n_stages", cfg.n_stages},
                          {"text_dim", cfg.text_dim},
                          {"attr_dim", cfg.attr_dim},
                          {"head_dims", cfg.head_dims},
                          {"seed", cfg.seed}};
}

ModelConfig config_from_json(const nlohmann::json& j) {
    ModelConfig cfg;
    cfg.mode = mode_from_name(j.at("mode").get<std::string>());
    cfg.input_leads = j.at("input_leads").get<int>();
    cfg.n_stages = j.at("n_stages").get<int>();
    cfg.text_dim = j.at("text_dim").get<int>();
    cfg.attr_dim = j.at("attr_dim").get<int>();
    const auto dims = j.at("head_dims").get<std::vector<int>>();
    if (dims.size() != 3) throw CheckpointError("bad head_dims in checkpoint");
    cfg.head_dims = {dims[0], dims[1], dims[2]};
    cfg.seed = j.at("seed").get<std::uint64_t>();
    return cfg;
}

}  // namespace

void save_checkpoint(ClicNet& net, const AttrSchema& schema,
                     const std::filesystem::path& path) {
    nlohmann::json header;
    header["version"] = 1;
    header["model_config"] = config_to_json(net.config());
    header["attr_schema"] = nlohmann::json{{"device_vocab", schema.device_vocab},
                                           {"rhythm_vocab", schema.rhythm_vocab},
                                           {"form_vocab", schema.form_vocab}};
    header["preprocessing"] = nlohmann::json{{"standardize", "per_record_per_lead_zscore"},
                                             {"variance_floor", kVarianceFloor}};

    auto tensors = net.all_tensors();
    std::uint64_t offset = 0;
    nlohmann::json dir = nlohmann::json::array();
    for (const auto& t : tensors) {
        dir.push_back(nlohmann::json{{"name", t.name},
                                     {"shape", t.shape},
                                     {"offset", offset},
                                     {"count", t.value->size()},
                                     {"trainable", t.trainable}});
        offset += t.value->size();
    }
    header["tensors"] = dir;
    const std::string header_str = header.dump();

    std::vector<std::uint8_t> out;
    out.insert(out.end(), kMagic, kMagic + 8);
    const std::uint32_t hlen = static_cast<std::uint32_t>(header_str.size());
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>((hlen >> (8 * i)) & 0xff));
    out.insert(out.end(), header_str.begin(), header_str.end());
    for (const auto& t : tensors) {
        const auto* raw = reinterpret_cast<const std::uint8_t*>(t.value->data());
        out.insert(out.end(), raw, raw + t.value->size() * sizeof(double));
    }
    write_binary_file(path, out);
}

LoadedCheckpoint load_checkpoint(const std::filesystem::path& path,
                                 const std::optional<ModelConfig>& expected) {
    const auto bytes = read_binary_file(path);
    if (bytes.size() < 12 || std::memcmp(bytes.data(), kMagic, 8) != 0) {
        throw CheckpointError("not a checkpoint file: " + path.string());
    }
    std::uint32_t hlen = 0;
    for (int i = 0; i < 4; ++i) hlen |= static_cast<std::uint32_t>(bytes[8 + i]) << (8 * i);
    if (bytes.size() < 12 + hlen) throw CheckpointError("truncated checkpoint header");

    nlohmann::json header;
    try {
        header = nlohmann::json::parse(bytes.begin() + 12, bytes.begin() + 12 + hlen);
    } catch (const nlohmann::json::exception& e) {
        throw CheckpointError(std::string("bad checkpoint header: ") + e.what());
    }

    const ModelConfig cfg = config_from_json(header.at("model_config"));
    if (expected.has_value() && !(cfg == *expected)) {
        throw CheckpointError("checkpoint config does not match the expected configuration");
    }

    AttrSchema schema;
    const auto& js = header.at("attr_schema");
    schema.device_vocab = js.at("device_vocab").get<std::vector<std::string>>();
    schema.rhythm_vocab = js.at("rhythm_vocab").get<std::vector<std::string>>();
    schema.form_vocab = js.at("form_vocab").get<std::vector<std::string>>();

    LoadedCheckpoint out{ClicNet(cfg), std::move(schema)};
    auto tensors = out.net.all_tensors();

    const std::uint8_t* blob = bytes.data() + 12 + hlen;
    const std::size_t blob_doubles = (bytes.size() - 12 - hlen) / sizeof(double);
    std::size_t matched = 0;
    for (const auto& entry : header.at("tensors")) {
        const std::string name = entry.at("name").get<std::string>();
        const std::uint64_t offset = entry.at("offset").get<std::uint64_t>();
        const std::uint64_t count = entry.at("count").get<std::uint64_t>();
        if (offset + count > blob_doubles) throw CheckpointError("truncated checkpoint payload");
        bool found = false;
        for (auto& t : tensors) {
            if (t.name != name) continue;
            if (t.value->size() != count) {
                throw CheckpointError("tensor '" + name + "' count mismatch");
            }
            std::memcpy(t.value->data(), blob + offset * sizeof(double), count * sizeof(double));
            found = true;
            ++matched;
            break;
        }
        if (!found) throw CheckpointError("tensor '" + name + "' not present in this architecture");
    }
    if (matched != tensors.size()) {
        throw CheckpointError("checkpoint is missing tensors for this architecture");
    }
    return out;
}

}  // namespace clic::model
