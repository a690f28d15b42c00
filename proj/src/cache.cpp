#include "medgkrp/cache.hpp"

#include "medgkrp/errors.hpp"

#include <fstream>
#include <sstream>

namespace medgkrp {

ResponseCache::ResponseCache(std::filesystem::path dir) : dir_(std::move(dir)) {
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    if (ec)
        throw ConfigError("cannot create cache directory " + dir_.string() +
                          ": " + ec.message());
}

std::optional<std::string>
ResponseCache::get(const std::string& key_digest) const {
    std::lock_guard lock(mutex_);
    std::ifstream in(dir_ / (key_digest + ".txt"), std::ios::binary);
    if (!in) return std::nullopt;
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void ResponseCache::put(const std::string& key_digest,
                        const std::string& response) {
    std::lock_guard lock(mutex_);
    auto path = dir_ / (key_digest + ".txt");
    if (std::filesystem::exists(path)) return; // append-only within a run
    auto tmp = dir_ / (key_digest + ".tmp");
    {
        std::ofstream out(tmp, std::ios::binary);
        out << response;
    }
    std::filesystem::rename(tmp, path);
}

} // namespace medgkrp
