#pragma once

#include <functional>
#include <string>
#include <vector>

namespace medgkrp {

// Pluggable text-embedding provider returning a fixed-dimension vector.
using EmbedFn = std::function<std::vector<float>(const std::string&)>;

// Deterministic character-trigram hash embedding. No network, no model
// weights; it gives exact-string self-similarity 1 and reasonable lexical
// neighborhoods, which is all the offline tests need.
EmbedFn hash_embedder(int dim = 64);

// Exact cosine nearest-neighbor index over unit-normalized vectors, one per
// reference concept. Ties broken lexicographically for determinism.
class EmbeddingIndex {
public:
    EmbeddingIndex(EmbedFn embed, int dim);

    void add(const std::string& name);
    void add_all(const std::vector<std::string>& names);
    std::size_t size() const { return names_.size(); }

    // Top-k concept names by cosine similarity to the query text.
    std::vector<std::string> nearest(const std::string& query, int k) const;

    float cosine(const std::string& a, const std::string& b) const;

private:
    EmbedFn embed_;
    int dim_;
    std::vector<std::string> names_;
    std::vector<std::vector<float>> vectors_; // unit-normalized
};

} // namespace medgkrp
