#include "clic/textgen/llm.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "clic/common/errors.hpp"
#include "clic/common/hash.hpp"
#include "clic/common/io.hpp"

namespace clic::textgen {

std::string prompt_cache_key(const PromptMessages& prompt, const std::string& model,
                             double temperature) {
    std::uint64_t h = kFnvOffsetBasis;
    h = fnv1a64(model, h);
    h = fnv1a64("\x1f", h);
    h = fnv1a64(format_fixed(temperature, 6), h);
    h = fnv1a64("\x1f", h);
    h = fnv1a64(prompt.system, h);
    h = fnv1a64("\x1f", h);
    h = fnv1a64(prompt.user, h);
    return to_hex(h);
}

ReportCache::ReportCache(std::filesystem::path path) : path_(std::move(path)) {
    if (!std::filesystem::exists(path_)) return;
    std::istringstream in(read_file(path_));
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto j = nlohmann::json::parse(line);
        ContextText t;
        t.id = j.at("id").get<std::string>();
        t.text = j.at("text").get<std::string>();
        t.provenance = TextProvenance::Llm;
        GeneratorParams p;
        p.model = j.at("model").get<std::string>();
        p.temperature = j.value("temperature", 0.0);
        p.prompt_hash = j.at("prompt_hash").get<std::string>();
        t.params = p;
        if (by_hash_.emplace(p.prompt_hash, t).second) order_.push_back(p.prompt_hash);
    }
}

std::optional<ContextText> ReportCache::find(const std::string& prompt_hash) const {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = by_hash_.find(prompt_hash);
    if (it == by_hash_.end()) return std::nullopt;
    return it->second;
}

void ReportCache::append(const ContextText& text) {
    if (!text.params.has_value()) throw InvalidInput("cache entries need generator params");
    std::lock_guard<std::mutex> lock(mu_);
    if (by_hash_.emplace(text.params->prompt_hash, text).second) {
        order_.push_back(text.params->prompt_hash);
    }
    nlohmann::json j;
    j["id"] = text.id;
    j["prompt_hash"] = text.params->prompt_hash;
    j["model"] = text.params->model;
    j["temperature"] = text.params->temperature;
    j["text"] = text.text;
    if (path_.has_parent_path()) std::filesystem::create_directories(path_.parent_path());
    std::ofstream out(path_, std::ios::app | std::ios::binary);
    if (!out) throw IoError("cannot append to " + path_.string());
    out << j.dump() << '\n';
}

std::size_t ReportCache::size() const {
    std::lock_guard<std::mutex> lock(mu_);
    return by_hash_.size();
}

std::vector<ContextText> ReportCache::all() const {
    std::lock_guard<std::mutex> lock(mu_);
    std::vector<ContextText> out;
    out.reserve(order_.size());
    for (const auto& h : order_) out.push_back(by_hash_.at(h));
    return out;
}

std::string strip_to_paragraph(const std::string& text) {
    std::string s = text;
    // trim
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r\n");
    s = s.substr(begin, end - begin + 1);
    // first paragraph only
    const auto para = s.find("\n\n");
    if (para != std::string::npos) s = s.substr(0, para);
    for (auto& c : s) {
        if (c == '\n' || c == '\r' || c == '\t') c = ' ';
    }
    return s;
}

LlmClient::LlmClient(LlmEndpointConfig cfg, Sleeper sleeper)
    : cfg_(std::move(cfg)), sleeper_(std::move(sleeper)) {
    if (cfg_.api_key.empty()) {
        if (const char* env = std::getenv("CLIC_LLM_API_KEY")) cfg_.api_key = env;
    }
    if (!sleeper_) {
        sleeper_ = [](double seconds) {
            std::this_thread::sleep_for(std::chrono::duration<double>(seconds));
        };
    }
}

void LlmClient::rate_limit_wait() {
    if (cfg_.rate_limit_per_s <= 0) return;
    const auto interval = std::chrono::duration_cast<std::chrono::steady_clock::duration>(
        std::chrono::duration<double>(1.0 / cfg_.rate_limit_per_s));
    double wait_s = 0;
    {
        std::lock_guard<std::mutex> lock(rate_mu_);
        const auto now = std::chrono::steady_clock::now();
        if (next_slot_ < now) next_slot_ = now;
        wait_s = std::chrono::duration<double>(next_slot_ - now).count();
        next_slot_ += interval;
    }
    if (wait_s > 0) sleeper_(wait_s);
}

ContextText LlmClient::generate(const std::string& record_id, const PromptMessages& prompt,
                                ReportCache* cache) {
    const std::string key = prompt_cache_key(prompt, cfg_.model, cfg_.temperature);
    if (cache != nullptr) {
        if (auto hit = cache->find(key); hit.has_value()) return *hit;
    }
    rate_limit_wait();

    nlohmann::json body;
    body["model"] = cfg_.model;
    body["temperature"] = cfg_.temperature;
    body["messages"] = nlohmann::json::array({
        nlohmann::json{{"role", "system"}, {"content", prompt.system}},
        nlohmann::json{{"role", "user"}, {"content", prompt.user}},
    });
    const std::string payload = body.dump();

    httplib::Client client(cfg_.base_url);
    client.set_connection_timeout(std::chrono::duration<double>(cfg_.timeout_s));
    client.set_read_timeout(std::chrono::duration<double>(cfg_.timeout_s));
    httplib::Headers headers;
    if (!cfg_.api_key.empty()) headers.emplace("Authorization", "Bearer " + cfg_.api_key);

    int last_status = 0;
    for (int attempt = 1; attempt <= cfg_.max_attempts; ++attempt) {
        auto res = client.Post("/v1/chat/completions", headers, payload, "application/json");
        if (!res) {
            if (res.error() == httplib::Error::ConnectionTimeout ||
                res.error() == httplib::Error::Read) {
                throw TimeoutError("chat completion timed out against " + cfg_.base_url);
            }
            throw HttpError("chat completion transport failure: " +
                            httplib::to_string(res.error()));
        }
        last_status = res->status;
        if (res->status == 429 || res->status >= 500) {
            if (attempt < cfg_.max_attempts) {
                sleeper_(cfg_.backoff_base_s * std::pow(cfg_.backoff_factor, attempt - 1));
                continue;
            }
            break;
        }
        if (res->status < 200 || res->status >= 300) {
            throw HttpError("chat completion returned status " + std::to_string(res->status));
        }

        nlohmann::json reply;
        try {
            reply = nlohmann::json::parse(res->body);
        } catch (const nlohmann::json::exception& e) {
            throw HttpError(std::string("unparseable completion body: ") + e.what());
        }
        if (!reply.contains("choices") || reply["choices"].empty() ||
            !reply["choices"][0].contains("message")) {
            throw EmptyCompletion("completion has no choices");
        }
        const std::string content =
            strip_to_paragraph(reply["choices"][0]["message"].value("content", ""));
        if (content.empty()) throw EmptyCompletion("completion content empty");

        ContextText out;
        out.id = record_id;
        out.text = content;
        out.provenance = TextProvenance::Llm;
        out.params = GeneratorParams{cfg_.model, cfg_.temperature, key};
        if (cache != nullptr) cache->append(out);
        return out;
    }
    throw HttpError("chat completion failed after " + std::to_string(cfg_.max_attempts) +
                    " attempts, last status " + std::to_string(last_status));
}

}  // namespace clic::textgen
