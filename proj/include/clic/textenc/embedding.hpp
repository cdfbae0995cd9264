#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

namespace clic::textenc {

inline constexpr int kTextDim = 768;

enum class EmbProvenance { EcgEncoder, TextProvider, Fused };

struct Embedding {
    std::vector<double> values;
    EmbProvenance provenance = EmbProvenance::TextProvider;

    int dim() const { return static_cast<int>(values.size()); }
};

// Frozen embedding table keyed by record id. Vectors are stored as float32,
// matching the on-disk format exactly, so write/load round trips are bitwise.
class EmbeddingStore {
public:
    EmbeddingStore() = default;
    EmbeddingStore(int dim, std::string provider_tag)
        : dim_(dim), provider_tag_(std::move(provider_tag)) {}

    int dim() const { return dim_; }
    const std::string& provider_tag() const { return provider_tag_; }
    void set_provider_tag(std::string tag) { provider_tag_ = std::move(tag); }
    std::size_t size() const { return ids_.size(); }
    const std::vector<std::string>& ids() const { return ids_; }

    void put(const std::string& id, const Embedding& emb);
    void put_raw(const std::string& id, std::vector<float> values);
    const std::vector<float>* find(const std::string& id) const;

    // FNV over ids and vector bytes; used for frozen-provider checks.
    std::uint64_t checksum() const;

    bool operator==(const EmbeddingStore& other) const;

private:
    int dim_ = 0;
    std::string provider_tag_;
    std::vector<std::string> ids_;
    std::unordered_map<std::string, std::size_t> index_;
    std::vector<std::vector<float>> vectors_;
};

}  // namespace clic::textenc
