#pragma once

#include <nlohmann/json.hpp>

#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace medgkrp {

enum class EdgeProvenance { expansion, refinement };

std::string to_string(EdgeProvenance p);
EdgeProvenance provenance_from_string(std::string_view s);

struct CausalEdge {
    std::string src;
    std::string dst;
    EdgeProvenance provenance = EdgeProvenance::expansion;

    bool operator==(const CausalEdge& o) const {
        return src == o.src && dst == o.dst;
    }
};

struct GraphMetadata {
    std::string model;
    int n_max = 3;
    int depth_max = 2;
    double temperature = 0.05;
    double top_p = 1.0;
    std::string created_at; // empty for deterministic runs
};

// Directed graph of concept nodes and causal edges grown from a single root.
// Node identity is case-insensitive after whitespace normalization; the
// first-seen surface form is the one stored. No self-loops, no duplicate
// edges; a->b together with b->a is legal (mutual causality).
class ConceptGraph {
public:
    explicit ConceptGraph(std::string_view root_name, GraphMetadata meta = {});

    // Trim and collapse internal whitespace runs, preserving case.
    static std::string normalize_surface(std::string_view name);
    // Lower-cased normalized form used for identity.
    static std::string canonical_key(std::string_view name);

    // Inserts the node unless a case-insensitive equivalent exists.
    // Returns the stored surface form. Throws GraphError for names that are
    // empty after trimming or contain bracket characters.
    std::string add_node(std::string_view name);

    // Inserts (src, dst) if absent and src != dst; returns whether the edge
    // set changed. Self-loops are dropped (a warning is recorded, not thrown):
    // one bad LLM answer must not abort a run. Throws GraphError when an
    // endpoint is unknown.
    bool add_edge(std::string_view src, std::string_view dst,
                  EdgeProvenance provenance);

    bool has_node(std::string_view name) const;
    bool has_edge(std::string_view src, std::string_view dst) const;
    // Stored surface form for a name, if present under canonicalization.
    std::optional<std::string> resolve(std::string_view name) const;

    const std::string& root() const { return root_; }
    // Insertion order.
    const std::vector<std::string>& nodes() const { return node_order_; }
    const std::vector<CausalEdge>& edges() const { return edges_; }
    std::size_t node_count() const { return node_order_.size(); }
    std::size_t edge_count() const { return edges_.size(); }

    GraphMetadata& metadata() { return meta_; }
    const GraphMetadata& metadata() const { return meta_; }

    // Edge list in the exact textual form injected into expansion prompts:
    // ['a causes b', 'b causes c', ...] in insertion order; "[]" when empty.
    std::string format_edge_list() const;

    // Canonical JSON: node and edge arrays sorted lexicographically so equal
    // graphs serialize byte-identically.
    nlohmann::json to_json() const;
    std::string serialize() const;
    // Strict load: unknown top-level fields, duplicate nodes/edges, dangling
    // endpoints, self-loops and a root missing from the node set are errors.
    static ConceptGraph from_json(const nlohmann::json& doc);
    static ConceptGraph deserialize(const std::string& text);

    // Messages about silently dropped input (self-loop answers etc).
    const std::vector<std::string>& warnings() const { return warnings_; }

    // Equality over root, node set and edge set (insertion order ignored).
    bool operator==(const ConceptGraph& other) const;

private:
    std::string root_;
    GraphMetadata meta_;
    std::vector<std::string> node_order_;
    std::unordered_map<std::string, std::string> canon_to_name_;
    std::vector<CausalEdge> edges_;
    std::unordered_set<std::string> edge_keys_; // "src\x1fdst"
    std::vector<std::string> warnings_;
};

} // namespace medgkrp
