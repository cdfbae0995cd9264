#include "clic/textenc/providers.hpp"

#include <cctype>
#include <cmath>

#include <httplib.h>
#include <json.hpp>

#include "clic/common/errors.hpp"
#include "clic/common/hash.hpp"

namespace clic::textenc {

Embedding TextEmbedder::embed_text(const std::string& text) const {
    if (text.empty()) throw InvalidInput("cannot embed empty text");
    if (dim() != kTextDim) {
        throw DimensionMismatch("provider declares dim " + std::to_string(dim()) +
                                ", pipeline requires " + std::to_string(kTextDim));
    }
    Embedding emb = embed_impl(text);
    if (emb.dim() != dim()) {
        throw DimensionMismatch("provider returned dim " + std::to_string(emb.dim()) +
                                ", declared " + std::to_string(dim()));
    }
    for (double v : emb.values) {
        if (!std::isfinite(v)) throw InvalidInput("provider returned non-finite value");
    }
    emb.provenance = EmbProvenance::TextProvider;
    return emb;
}

std::string HashEmbedder::provider_tag() const {
    return "hash-fnv1a64-splitmix64/d" + std::to_string(dim_) + "/k8";
}

std::uint64_t HashEmbedder::state_checksum() const {
    std::uint64_t h = fnv1a64(provider_tag());
    h = fnv1a64_bytes(&kFnvPrime, sizeof(kFnvPrime), h);
    return h;
}

Embedding HashEmbedder::embed_impl(const std::string& text) const {
    Embedding emb;
    emb.values.assign(dim_, 0.0);

    std::string token;
    auto flush = [&] {
        if (token.empty()) return;
        std::uint64_t state = fnv1a64(token);
        for (int j = 0; j < 8; ++j) {
            const std::uint64_t z = splitmix64_next(state);
            const std::size_t idx = static_cast<std::size_t>(z % static_cast<std::uint64_t>(dim_));
            emb.values[idx] += (z >> 63) ? -1.0 : 1.0;
        }
        token.clear();
    };
    for (char c : text) {
        if (std::isspace(static_cast<unsigned char>(c))) flush();
        else token += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
    flush();

    double ss = 0;
    for (double v : emb.values) ss += v * v;
    if (ss == 0.0) {
        emb.values[0] = 1.0;
        return emb;
    }
    const double norm = std::sqrt(ss);
    for (double& v : emb.values) v /= norm;
    return emb;
}

HttpEmbedder::HttpEmbedder(std::string base_url, std::string model, int dim, double timeout_s)
    : base_url_(std::move(base_url)), model_(std::move(model)), dim_(dim), timeout_s_(timeout_s) {}

std::string HttpEmbedder::provider_tag() const {
    // pooling is the service's affair; mean pooling is the canonical request
    return "http/" + model_ + "/mean-pool/d" + std::to_string(dim_);
}

std::uint64_t HttpEmbedder::state_checksum() const { return fnv1a64(provider_tag()); }

Embedding HttpEmbedder::embed_impl(const std::string& text) const {
    httplib::Client client(base_url_);
    client.set_connection_timeout(std::chrono::duration<double>(timeout_s_));
    client.set_read_timeout(std::chrono::duration<double>(timeout_s_));

    nlohmann::json body;
    body["model"] = model_;
    body["input"] = nlohmann::json::array({text});

    auto res = client.Post("/v1/embeddings", body.dump(), "application/json");
    if (!res) {
        throw ProviderUnavailable("embedding service unreachable: " +
                                  httplib::to_string(res.error()));
    }
    if (res->status < 200 || res->status >= 300) {
        throw ProviderUnavailable("embedding service returned status " +
                                  std::to_string(res->status));
    }
    nlohmann::json reply;
    try {
        reply = nlohmann::json::parse(res->body);
    } catch (const nlohmann::json::exception& e) {
        throw ProviderUnavailable(std::string("unparseable embedding body: ") + e.what());
    }
    if (!reply.contains("data") || reply["data"].empty() ||
        !reply["data"][0].contains("embedding")) {
        throw ProviderUnavailable("embedding response missing data[0].embedding");
    }
    Embedding emb;
    emb.values = reply["data"][0]["embedding"].get<std::vector<double>>();
    return emb;
}

Embedding StoreBackedProvider::get(const std::string& id, const std::string&) const {
    const std::vector<float>* v = store_.find(id);
    if (v == nullptr) {
        throw ProviderUnavailable("no precomputed embedding for record '" + id + "'");
    }
    Embedding emb;
    emb.values.assign(v->begin(), v->end());
    emb.provenance = EmbProvenance::TextProvider;
    return emb;
}

}  // namespace clic::textenc
