#include "clic/textenc/embedding.hpp"

#include <cmath>

#include "clic/common/errors.hpp"
#include "clic/common/hash.hpp"

namespace clic::textenc {

void EmbeddingStore::put(const std::string& id, const Embedding& emb) {
    if (dim_ == 0) dim_ = emb.dim();
    if (emb.dim() != dim_) {
        throw DimensionMismatch("store dim " + std::to_string(dim_) + ", embedding dim " +
                                std::to_string(emb.dim()));
    }
    std::vector<float> narrow(emb.values.begin(), emb.values.end());
    put_raw(id, std::move(narrow));
}

void EmbeddingStore::put_raw(const std::string& id, std::vector<float> values) {
    if (dim_ == 0) dim_ = static_cast<int>(values.size());
    if (static_cast<int>(values.size()) != dim_) {
        throw DimensionMismatch("store dim " + std::to_string(dim_) + ", vector dim " +
                                std::to_string(values.size()));
    }
    for (float v : values) {
        if (!std::isfinite(v)) throw InvalidInput("non-finite embedding value for " + id);
    }
    auto it = index_.find(id);
    if (it != index_.end()) {
        vectors_[it->second] = std::move(values);
        return;
    }
    index_.emplace(id, ids_.size());
    ids_.push_back(id);
    vectors_.push_back(std::move(values));
}

const std::vector<float>* EmbeddingStore::find(const std::string& id) const {
    auto it = index_.find(id);
    if (it == index_.end()) return nullptr;
    return &vectors_[it->second];
}

std::uint64_t EmbeddingStore::checksum() const {
    std::uint64_t h = kFnvOffsetBasis;
    const std::uint32_t d = static_cast<std::uint32_t>(dim_);
    h = fnv1a64_bytes(&d, sizeof(d), h);
    for (std::size_t i = 0; i < ids_.size(); ++i) {
        h = fnv1a64(ids_[i], h);
        h = fnv1a64_bytes(vectors_[i].data(), vectors_[i].size() * sizeof(float), h);
    }
    return h;
}

bool EmbeddingStore::operator==(const EmbeddingStore& other) const {
    return dim_ == other.dim_ && ids_ == other.ids_ && vectors_ == other.vectors_;
}

}  // namespace clic::textenc
