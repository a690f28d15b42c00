#pragma once

#include "medgkrp/backend.hpp"
#include "medgkrp/cache.hpp"
#include "medgkrp/digest.hpp"
#include "medgkrp/errors.hpp"

#include <functional>
#include <sstream>
#include <string>

namespace medgkrp {

// Issues single-turn chat queries through a backend, consulting the response
// cache first. Cache keys cover model id, template name, rendered prompts,
// sampling params and the attempt index, so a retry is never served the
// response that just failed to parse.
class LlmGateway {
public:
    LlmGateway(ChatBackend& backend, ResponseCache* cache = nullptr)
        : backend_(backend), cache_(cache) {}

    ChatBackend& backend() { return backend_; }

    std::string ask(const std::string& template_name, const std::string& system,
                    const std::string& user, const SamplingParams& params,
                    int attempt = 0) {
        std::string digest;
        if (cache_) {
            digest = cache_key(template_name, system, user, params, attempt);
            if (auto hit = cache_->get(digest)) return *hit;
        }
        ChatRequest req{system, user, params, attempt};
        std::string response = backend_.complete(req);
        if (cache_) cache_->put(digest, response);
        return response;
    }

    // Re-prompts until the parser accepts, up to max_retries + 1 attempts.
    // The last MalformedResponse propagates when the budget is spent.
    template <typename T>
    T ask_validated(const std::string& template_name, const std::string& system,
                    const std::string& user, const SamplingParams& params,
                    const std::function<T(const std::string&)>& parse) {
        for (int attempt = 0;; ++attempt) {
            std::string raw = ask(template_name, system, user, params, attempt);
            try {
                return parse(raw);
            } catch (const MalformedResponse&) {
                if (attempt >= params.max_retries) throw;
            }
        }
    }

    std::string cache_key(const std::string& template_name,
                          const std::string& system, const std::string& user,
                          const SamplingParams& params, int attempt) const {
        std::ostringstream key;
        key << backend_.model_id() << '\x1f' << template_name << '\x1f'
            << system << '\x1f' << user << '\x1f' << params.temperature
            << '\x1f' << params.top_p << '\x1f' << attempt;
        return sha256_hex(key.str());
    }

private:
    ChatBackend& backend_;
    ResponseCache* cache_;
};

} // namespace medgkrp
