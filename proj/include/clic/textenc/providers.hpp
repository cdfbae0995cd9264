#pragma once

#include <memory>
#include <string>

#include "clic/textenc/embedding.hpp"

namespace clic::textenc {

// Text-to-vector encoder. Implementations must be deterministic for a fixed
// provider instance and never receive gradient updates.
class TextEmbedder {
public:
    virtual ~TextEmbedder() = default;

    virtual int dim() const = 0;
    virtual std::string provider_tag() const = 0;
    virtual std::uint64_t state_checksum() const = 0;

    // Contract wrapper: rejects empty input, enforces the declared 768-wide
    // output and finiteness.
    Embedding embed_text(const std::string& text) const;

protected:
    virtual Embedding embed_impl(const std::string& text) const = 0;
};

// Deterministic feature-hashing stand-in for the frozen text encoder:
// lower-cased whitespace tokens, each hashed (FNV-1a 64 then SplitMix64) to 8
// signed indices in [0, dim); the accumulated vector is L2-normalized. An
// all-zero accumulation falls back to the unit basis vector e0.
class HashEmbedder : public TextEmbedder {
public:
    explicit HashEmbedder(int dim = kTextDim) : dim_(dim) {}

    int dim() const override { return dim_; }
    std::string provider_tag() const override;
    std::uint64_t state_checksum() const override;

protected:
    Embedding embed_impl(const std::string& text) const override;

private:
    int dim_;
};

// POST {base_url}/v1/embeddings with {model, input:[text]}; reads
// data[0].embedding.
class HttpEmbedder : public TextEmbedder {
public:
    HttpEmbedder(std::string base_url, std::string model, int dim = kTextDim,
                 double timeout_s = 60.0);

    int dim() const override { return dim_; }
    std::string provider_tag() const override;
    std::uint64_t state_checksum() const override;

protected:
    Embedding embed_impl(const std::string& text) const override;

private:
    std::string base_url_;
    std::string model_;
    int dim_;
    double timeout_s_;
};

// Record-level source used by the training pipeline: either a live text
// encoder or a precomputed store.
class RecordEmbeddingProvider {
public:
    virtual ~RecordEmbeddingProvider() = default;
    virtual int dim() const = 0;
    virtual std::string provider_tag() const = 0;
    virtual std::uint64_t state_checksum() const = 0;
    virtual Embedding get(const std::string& id, const std::string& text) const = 0;
};

class TextBackedProvider : public RecordEmbeddingProvider {
public:
    explicit TextBackedProvider(std::shared_ptr<const TextEmbedder> embedder)
        : embedder_(std::move(embedder)) {}

    int dim() const override { return embedder_->dim(); }
    std::string provider_tag() const override { return embedder_->provider_tag(); }
    std::uint64_t state_checksum() const override { return embedder_->state_checksum(); }
    Embedding get(const std::string&, const std::string& text) const override {
        return embedder_->embed_text(text);
    }

private:
    std::shared_ptr<const TextEmbedder> embedder_;
};

class StoreBackedProvider : public RecordEmbeddingProvider {
public:
    explicit StoreBackedProvider(EmbeddingStore store) : store_(std::move(store)) {}

    int dim() const override { return store_.dim(); }
    std::string provider_tag() const override { return store_.provider_tag(); }
    std::uint64_t state_checksum() const override { return store_.checksum(); }
    Embedding get(const std::string& id, const std::string&) const override;

    const EmbeddingStore& store() const { return store_; }

private:
    EmbeddingStore store_;
};

}  // namespace clic::textenc
