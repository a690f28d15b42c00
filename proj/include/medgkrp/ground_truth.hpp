#pragma once

#include <filesystem>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace medgkrp {

struct LabeledEdge {
    std::string src; // concept names, resolved from ids on load
    std::string dst;
    std::string relation;
};

// Reference knowledge graph loaded from two delimited files: concepts
// (id, preferred name) and edges (src id, dst id, relation label). Edges
// labeled "is a"/"reverse is a" are kept in the record but excluded from the
// adjacency; retained edges are traversable in both directions.
class GroundTruthGraph {
public:
    static GroundTruthGraph load(const std::filesystem::path& concept_file,
                                 const std::filesystem::path& edge_file);

    // Programmatic construction for tests/fixtures.
    void add_concept(const std::string& name);
    void add_edge(const std::string& src, const std::string& dst,
                  const std::string& relation);

    bool has_concept(const std::string& name) const {
        return concepts_.count(name) != 0;
    }
    const std::vector<std::string>& concept_names() const { return order_; }
    const std::vector<LabeledEdge>& edges() const { return edges_; }

    // Retained (non-hierarchy) neighbors, both directions.
    const std::vector<std::string>& neighbors(const std::string& name) const;

    // Distinct undirected retained pairs, as {min, max} name pairs.
    const std::vector<std::pair<std::string, std::string>>&
    retained_pairs() const {
        return retained_pairs_;
    }

    // True when a path of at most `max_nodes` nodes joins the two concepts
    // in the undirected retained adjacency (bounded breadth-first search).
    bool path_within(const std::string& from, const std::string& to,
                     int max_nodes) const;

    static bool is_hierarchy_relation(const std::string& relation);

private:
    std::unordered_set<std::string> concepts_;
    std::vector<std::string> order_;
    std::vector<LabeledEdge> edges_;
    std::unordered_map<std::string, std::vector<std::string>> adjacency_;
    std::vector<std::pair<std::string, std::string>> retained_pairs_;
    std::unordered_set<std::string> retained_pair_keys_;
};

} // namespace medgkrp
