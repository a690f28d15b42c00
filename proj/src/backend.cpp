#include "medgkrp/backend.hpp"

#include "medgkrp/errors.hpp"

#include <nlohmann/json.hpp>

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <thread>

namespace medgkrp {

ScriptedBackend::ScriptedBackend(std::string model_id)
    : model_id_(std::move(model_id)) {}

void ScriptedBackend::add_rule(std::string contains,
                               std::vector<std::string> replies) {
    rules_.push_back({std::move(contains), std::move(replies)});
}

void ScriptedBackend::set_default_reply(std::string reply) {
    default_reply_ = std::move(reply);
    has_default_ = true;
}

ScriptedBackend
ScriptedBackend::from_script_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open script file: " + path.string());
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("malformed script file " + path.string() + ": " +
                          e.what());
    }
    ScriptedBackend backend(doc.value("model", "scripted"));
    if (doc.contains("default"))
        backend.set_default_reply(doc["default"].get<std::string>());
    for (const auto& rule : doc.value("rules", nlohmann::json::array())) {
        backend.add_rule(rule.at("contains").get<std::string>(),
                         rule.at("replies").get<std::vector<std::string>>());
    }
    return backend;
}

std::string ScriptedBackend::complete(const ChatRequest& request) {
    calls_.fetch_add(1);
    for (const auto& rule : rules_) {
        if (request.user.find(rule.contains) != std::string::npos) {
            std::size_t idx = std::min<std::size_t>(
                static_cast<std::size_t>(request.attempt),
                rule.replies.size() - 1);
            return rule.replies[idx];
        }
    }
    if (has_default_) return default_reply_;
    throw TransportError("scripted backend has no rule for prompt: " +
                         request.user.substr(0, 120));
}

HttpChatBackend::HttpChatBackend(HttpBackendConfig config)
    : config_(std::move(config)) {
    const char* key = std::getenv(config_.api_key_env.c_str());
    if (!key || !*key)
        throw ConfigError("API credential environment variable not set: " +
                          config_.api_key_env);
    api_key_ = key;
}

std::string HttpChatBackend::complete(const ChatRequest& request) {
    nlohmann::json body;
    body["model"] = config_.model;
    auto messages = nlohmann::json::array();
    if (!request.system.empty())
        messages.push_back({{"role", "system"}, {"content", request.system}});
    messages.push_back({{"role", "user"}, {"content", request.user}});
    body["messages"] = messages;
    body["temperature"] = request.params.temperature;
    body["top_p"] = request.params.top_p;

    std::string payload = body.dump();
    std::string last_error;
    for (int attempt = 0; attempt <= config_.transport_retries; ++attempt) {
        if (attempt > 0) {
            std::this_thread::sleep_for(
                std::chrono::milliseconds(500 << (attempt - 1)));
        }
        httplib::Client client(config_.base_url);
        client.set_connection_timeout(config_.timeout_seconds);
        client.set_read_timeout(config_.timeout_seconds);
        client.set_bearer_token_auth(api_key_);
        auto res = client.Post(config_.path, payload, "application/json");
        if (!res) {
            last_error = "transport error: " + httplib::to_string(res.error());
            continue;
        }
        if (res->status == 429 || res->status >= 500) {
            last_error = "HTTP " + std::to_string(res->status);
            continue;
        }
        if (res->status != 200)
            throw TransportError("chat endpoint returned HTTP " +
                                 std::to_string(res->status) + ": " +
                                 res->body);
        try {
            auto doc = nlohmann::json::parse(res->body);
            return doc.at("choices").at(0).at("message").at("content")
                .get<std::string>();
        } catch (const nlohmann::json::exception& e) {
            throw TransportError(std::string("unexpected response shape: ") +
                                 e.what());
        }
    }
    throw TransportError("chat request failed after retries: " + last_error);
}

} // namespace medgkrp
