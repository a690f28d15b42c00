#include "medgkrp/embedding.hpp"

#include "medgkrp/errors.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <numeric>

namespace medgkrp {

namespace {

std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

void normalize(std::vector<float>& v) {
    double norm = std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(),
                                               0.0));
    if (norm == 0.0) {
        v[0] = 1.0f; // degenerate input, pick a fixed unit vector
        return;
    }
    for (auto& x : v) x = static_cast<float>(x / norm);
}

} // namespace

EmbedFn hash_embedder(int dim) {
    return [dim](const std::string& text) {
        std::string lowered;
        lowered.reserve(text.size() + 2);
        lowered.push_back('^');
        for (char c : text)
            lowered.push_back(
                static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
        lowered.push_back('$');

        std::vector<float> v(dim, 0.0f);
        for (std::size_t i = 0; i + 3 <= lowered.size(); ++i) {
            std::uint64_t h = fnv1a(std::string_view(lowered).substr(i, 3));
            v[h % dim] += 1.0f;
        }
        normalize(v);
        return v;
    };
}

EmbeddingIndex::EmbeddingIndex(EmbedFn embed, int dim)
    : embed_(std::move(embed)), dim_(dim) {
    if (dim_ < 1) throw ConfigError("embedding dimension must be positive");
}

void EmbeddingIndex::add(const std::string& name) {
    auto v = embed_(name);
    if (static_cast<int>(v.size()) != dim_)
        throw ConfigError("embedding provider returned wrong dimension for: " +
                          name);
    normalize(v);
    names_.push_back(name);
    vectors_.push_back(std::move(v));
}

void EmbeddingIndex::add_all(const std::vector<std::string>& names) {
    for (const auto& n : names) add(n);
}

std::vector<std::string> EmbeddingIndex::nearest(const std::string& query,
                                                 int k) const {
    auto q = embed_(query);
    normalize(q);
    std::vector<std::pair<float, const std::string*>> scored;
    scored.reserve(names_.size());
    for (std::size_t i = 0; i < names_.size(); ++i) {
        float sim = static_cast<float>(std::inner_product(
            q.begin(), q.end(), vectors_[i].begin(), 0.0));
        scored.emplace_back(sim, &names_[i]);
    }
    std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return *a.second < *b.second; // tie: lexicographic
    });
    std::vector<std::string> out;
    for (int i = 0; i < k && i < static_cast<int>(scored.size()); ++i)
        out.push_back(*scored[i].second);
    return out;
}

float EmbeddingIndex::cosine(const std::string& a, const std::string& b) const {
    auto va = embed_(a);
    auto vb = embed_(b);
    normalize(va);
    normalize(vb);
    return static_cast<float>(
        std::inner_product(va.begin(), va.end(), vb.begin(), 0.0));
}

} // namespace medgkrp
