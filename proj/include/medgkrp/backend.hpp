#pragma once

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

namespace medgkrp {

struct SamplingParams {
    double temperature = 0.05;
    double top_p = 1.0;
    int max_retries = 3; // a query runs at most max_retries + 1 attempts
};

struct ChatRequest {
    std::string system; // empty = no system message
    std::string user;
    SamplingParams params;
    int attempt = 0;
};

class ChatBackend {
public:
    virtual ~ChatBackend() = default;
    virtual std::string model_id() const = 0;
    // Single-turn exchange. Throws TransportError on unrecoverable failure.
    virtual std::string complete(const ChatRequest& request) = 0;
};

// Canned responses for tests and offline fixture runs. A rule matches when
// its `contains` string occurs in the user prompt; the first matching rule
// wins and its reply list is indexed by attempt (clamped to the last entry),
// so retry behavior is scriptable. Deterministic by construction.
class ScriptedBackend final : public ChatBackend {
public:
    explicit ScriptedBackend(std::string model_id = "scripted");
    ScriptedBackend(ScriptedBackend&& other) noexcept
        : model_id_(std::move(other.model_id_)),
          rules_(std::move(other.rules_)),
          default_reply_(std::move(other.default_reply_)),
          has_default_(other.has_default_), calls_(other.calls_.load()) {}

    void add_rule(std::string contains, std::vector<std::string> replies);
    void set_default_reply(std::string reply);

    // Script file: {"model": ..., "default": ...,
    //               "rules": [{"contains": ..., "replies": [...]}]}
    static ScriptedBackend from_script_file(const std::filesystem::path& path);

    std::string model_id() const override { return model_id_; }
    std::string complete(const ChatRequest& request) override;

    std::int64_t call_count() const { return calls_.load(); }

private:
    struct Rule {
        std::string contains;
        std::vector<std::string> replies;
    };
    std::string model_id_;
    std::vector<Rule> rules_;
    std::string default_reply_;
    bool has_default_ = false;
    std::atomic<std::int64_t> calls_{0};
};

// OpenAI-style chat-completions endpoint over HTTPS. The credential is read
// from an environment variable at construction; a missing credential is a
// ConfigError before any network traffic. Transport failures are retried
// with bounded exponential backoff.
struct HttpBackendConfig {
    std::string model;
    std::string base_url = "https://api.openai.com";
    std::string path = "/v1/chat/completions";
    std::string api_key_env = "MEDGKRP_API_KEY";
    int transport_retries = 3;
    int timeout_seconds = 120;
};

class HttpChatBackend final : public ChatBackend {
public:
    explicit HttpChatBackend(HttpBackendConfig config);

    std::string model_id() const override { return config_.model; }
    std::string complete(const ChatRequest& request) override;

private:
    HttpBackendConfig config_;
    std::string api_key_;
};

} // namespace medgkrp
