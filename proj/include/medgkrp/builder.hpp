#pragma once

#include "medgkrp/concept_graph.hpp"
#include "medgkrp/gateway.hpp"
#include "medgkrp/prompt.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace medgkrp {

struct GenerationParams {
    int n_max = 3;     // concepts accepted per expansion answer
    int depth_max = 2; // nodes at depth < depth_max are expanded
    SamplingParams sampling;
};

enum class ExpandDirection { caused_by, causing };

struct ExpansionFrontierItem {
    std::string node;
    int depth = 0;
    ExpandDirection direction = ExpandDirection::caused_by;
};

struct RefinementStats {
    std::int64_t queries_issued = 0;
    std::int64_t edges_added = 0;
    std::int64_t malformed_as_no = 0;
};

// Runs node exploration and pairwise edge refinement against an LLM backend.
// Deterministic given a deterministic backend: the frontier is FIFO with
// children in parse order (caused_by before causing), refinement pairs go in
// lexicographic order, and concurrent query results are always applied in
// that canonical order.
class GraphBuilder {
public:
    GraphBuilder(LlmGateway& gateway, const PromptLibrary& prompts,
                 GenerationParams params, int concurrency = 1,
                 bool query_existing_edges = false);

    // Both directions from `concept`, applied to `graph`. Returns names of
    // newly created nodes. `edge_list` is the edge-list text injected into
    // the prompt (the caller fixes it per frontier level so runs are
    // reproducible across concurrency settings).
    std::vector<std::string> expand_out(ConceptGraph& graph,
                                        const std::string& concept_name,
                                        const std::string& edge_list);
    std::vector<std::string> expand_in(ConceptGraph& graph,
                                       const std::string& concept_name,
                                       const std::string& edge_list);

    // Convenience overloads using the graph's current edge list.
    std::vector<std::string> expand_out(ConceptGraph& graph,
                                        const std::string& concept_name);
    std::vector<std::string> expand_in(ConceptGraph& graph,
                                       const std::string& concept_name);

    // Level-synchronous exploration seeded at the root. Nodes are enqueued
    // once, at first sight, in both directions.
    ConceptGraph explore(const std::string& root);

    // Queries every ordered node pair without an existing edge (all pairs
    // with query_existing_edges). Affirmative verdicts add refinement edges;
    // malformed answers after retries count as "no".
    RefinementStats refine_edges(ConceptGraph& graph);

private:
    std::vector<std::string> expand(ConceptGraph& graph,
                                    const std::string& concept_name,
                                    ExpandDirection direction,
                                    const std::string& edge_list);
    std::string query_expansion(const std::string& concept_name,
                                ExpandDirection direction,
                                const std::string& edge_list,
                                std::vector<std::string>& out);

    LlmGateway& gateway_;
    const PromptLibrary& prompts_;
    GenerationParams params_;
    int concurrency_;
    bool query_existing_edges_;
};

} // namespace medgkrp
