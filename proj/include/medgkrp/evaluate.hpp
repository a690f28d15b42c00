#pragma once

#include "medgkrp/concept_graph.hpp"
#include "medgkrp/embedding.hpp"
#include "medgkrp/gateway.hpp"
#include "medgkrp/ground_truth.hpp"
#include "medgkrp/prompt.hpp"

#include <filesystem>
#include <map>
#include <string>

namespace medgkrp {

struct EvalParams {
    int path_node_threshold = 7; // max nodes on a hit path (5 intermediaries)
    int neighbor_count = 5;      // k-NN candidates per generated node
    SamplingParams sampling;
};

// Generated node name -> reference concept name, or "none".
struct NodeMapping {
    static constexpr const char* kNone = "none";

    std::map<std::string, std::string> entries;

    bool is_mapped(const std::string& node) const;
    // Throws ConfigError when the node is absent from the table.
    const std::string& target(const std::string& node) const;

    nlohmann::json to_json() const;
    static NodeMapping from_json(const nlohmann::json& doc);
    void save(const std::filesystem::path& path) const;
    static NodeMapping load(const std::filesystem::path& path);
};

// Embedding k-NN retrieval plus LLM adjudication for every generated node,
// in lexicographic node order. Unadjudicable nodes (malformed answers after
// retries) map to "none".
NodeMapping map_nodes(const EmbeddingIndex& index, LlmGateway& gateway,
                      const PromptLibrary& prompts, const ConceptGraph& graph,
                      const EvalParams& params);

enum class EdgeOutcome { hit, miss_no_path, miss_unmapped_endpoint };

std::string to_string(EdgeOutcome o);

struct EvalReport {
    std::int64_t n_hit = 0;
    std::int64_t mappable_edges = 0;  // |E_gb|
    std::int64_t generated_edges = 0; // |E_g|
    std::int64_t relevant_edges = 0;  // |E_rel|
    double precision = 0.0;
    double recall = 0.0;
    // Canonical (src, dst) order.
    std::vector<std::pair<CausalEdge, EdgeOutcome>> ledger;

    nlohmann::json to_json() const;
    std::string table() const; // human-readable summary + per-edge ledger
};

// Path-bounded precision/recall of a generated graph against the reference.
// A generated edge whose endpoints both map is a hit when the mapped
// concepts are joined by a path of at most `path_node_threshold` nodes in
// the undirected retained adjacency; edges with an unmapped endpoint are
// misses. E_rel are retained reference pairs touching the mapped image of
// the generated node set.
EvalReport evaluate(const ConceptGraph& generated,
                    const GroundTruthGraph& truth, const NodeMapping& mapping,
                    const EvalParams& params);

} // namespace medgkrp
