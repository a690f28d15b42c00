#pragma once

#include <filesystem>
#include <mutex>
#include <optional>
#include <string>

namespace medgkrp {

// Append-only store of raw LLM responses, one file per key digest. Makes
// runs resumable (a rerun replays completed queries from disk) and scripted
// runs reproducible. Safe for concurrent use.
class ResponseCache {
public:
    explicit ResponseCache(std::filesystem::path dir);

    std::optional<std::string> get(const std::string& key_digest) const;
    void put(const std::string& key_digest, const std::string& response);

    const std::filesystem::path& dir() const { return dir_; }

private:
    std::filesystem::path dir_;
    mutable std::mutex mutex_;
};

} // namespace medgkrp
