#pragma once

#include <chrono>
#include <filesystem>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <string>

#include "clic/textgen/context_text.hpp"

namespace clic::textgen {

struct LlmEndpointConfig {
    std::string base_url;   // e.g. http://localhost:8080
    std::string model;
    double temperature = 0.0;
    double timeout_s = 60.0;
    int max_attempts = 5;
    double backoff_base_s = 1.0;
    double backoff_factor = 2.0;
    double rate_limit_per_s = 0.0;  // 0 = unlimited; shared across threads
    std::string api_key;    // falls back to CLIC_LLM_API_KEY
};

// Cache key: hash of prompt + model + temperature.
std::string prompt_cache_key(const PromptMessages& prompt, const std::string& model,
                             double temperature);

// Append-only newline-delimited store of generated reports, keyed by prompt
// hash. Safe for concurrent readers; writes are serialized.
class ReportCache {
public:
    explicit ReportCache(std::filesystem::path path);

    std::optional<ContextText> find(const std::string& prompt_hash) const;
    void append(const ContextText& text);
    std::size_t size() const;

    // All cached texts in insertion order (for the embedding stage).
    std::vector<ContextText> all() const;

private:
    std::filesystem::path path_;
    std::map<std::string, ContextText> by_hash_;
    std::vector<std::string> order_;
    mutable std::mutex mu_;
};

// Safe for concurrent generate() calls; the per-endpoint rate limit is
// enforced across threads.
class LlmClient {
public:
    using Sleeper = std::function<void(double seconds)>;

    explicit LlmClient(LlmEndpointConfig cfg, Sleeper sleeper = {});

    // Cache hit returns without network traffic; otherwise POSTs
    // {base_url}/v1/chat/completions and caches the first choice's content,
    // stripped to a single paragraph. 429/5xx responses are retried with
    // exponential backoff (base 1 s, factor 2, max 5 attempts).
    ContextText generate(const std::string& record_id, const PromptMessages& prompt,
                         ReportCache* cache);

private:
    void rate_limit_wait();

    LlmEndpointConfig cfg_;
    Sleeper sleeper_;
    std::mutex rate_mu_;
    std::chrono::steady_clock::time_point next_slot_{};
};

std::string strip_to_paragraph(const std::string& text);

}  // namespace clic::textgen
