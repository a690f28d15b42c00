#include "medgkrp/ground_truth.hpp"

#include "medgkrp/errors.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <sstream>

namespace medgkrp {

namespace {

// Splits a TSV/CSV line. Tab wins when present so concept names may contain
// commas in TSV inputs.
std::vector<std::string> split_fields(const std::string& line) {
    char delim = line.find('\t') != std::string::npos ? '\t' : ',';
    std::vector<std::string> fields;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, delim)) fields.push_back(field);
    return fields;
}

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

} // namespace

bool GroundTruthGraph::is_hierarchy_relation(const std::string& relation) {
    return relation == "is a" || relation == "reverse is a";
}

void GroundTruthGraph::add_concept(const std::string& name) {
    if (!concepts_.insert(name).second)
        throw LoadError("duplicate concept name: " + name);
    order_.push_back(name);
}

void GroundTruthGraph::add_edge(const std::string& src, const std::string& dst,
                                const std::string& relation) {
    if (!has_concept(src) || !has_concept(dst))
        throw LoadError("edge references unknown concept: " + src + " -> " +
                        dst);
    edges_.push_back({src, dst, relation});
    if (is_hierarchy_relation(relation)) return;
    adjacency_[src].push_back(dst);
    adjacency_[dst].push_back(src);
    auto pair = std::minmax(src, dst);
    std::string key = pair.first + '\x1f' + pair.second;
    if (retained_pair_keys_.insert(key).second)
        retained_pairs_.emplace_back(pair.first, pair.second);
}

GroundTruthGraph GroundTruthGraph::load(
    const std::filesystem::path& concept_file,
    const std::filesystem::path& edge_file) {
    GroundTruthGraph g;

    std::ifstream concepts(concept_file);
    if (!concepts)
        throw LoadError("cannot open concept file: " + concept_file.string());
    std::unordered_map<std::string, std::string> id_to_name;
    std::string line;
    while (std::getline(concepts, line)) {
        if (trim(line).empty()) continue;
        auto fields = split_fields(line);
        if (fields.size() < 2)
            throw LoadError("concept line needs (id, name): " + line);
        std::string id = trim(fields[0]);
        std::string name = trim(fields[1]);
        if (!id_to_name.emplace(id, name).second)
            throw LoadError("duplicate concept id: " + id);
        g.add_concept(name);
    }

    std::ifstream edges(edge_file);
    if (!edges)
        throw LoadError("cannot open edge file: " + edge_file.string());
    while (std::getline(edges, line)) {
        if (trim(line).empty()) continue;
        auto fields = split_fields(line);
        if (fields.size() < 3)
            throw LoadError("edge line needs (src, dst, relation): " + line);
        auto src = id_to_name.find(trim(fields[0]));
        auto dst = id_to_name.find(trim(fields[1]));
        if (src == id_to_name.end() || dst == id_to_name.end())
            throw LoadError("edge references unknown concept id: " + line);
        g.add_edge(src->second, dst->second, trim(fields[2]));
    }
    return g;
}

const std::vector<std::string>&
GroundTruthGraph::neighbors(const std::string& name) const {
    static const std::vector<std::string> empty;
    auto it = adjacency_.find(name);
    return it == adjacency_.end() ? empty : it->second;
}

bool GroundTruthGraph::path_within(const std::string& from,
                                   const std::string& to,
                                   int max_nodes) const {
    if (max_nodes < 1) return false;
    if (!has_concept(from) || !has_concept(to)) return false;
    if (from == to) return true; // single-node path
    // BFS with hop bound: a path of k nodes has k-1 hops.
    int max_hops = max_nodes - 1;
    std::unordered_set<std::string> visited{from};
    std::deque<std::pair<const std::string*, int>> queue{{&from, 0}};
    while (!queue.empty()) {
        auto [node, hops] = queue.front();
        queue.pop_front();
        if (hops == max_hops) continue;
        for (const auto& next : neighbors(*node)) {
            if (next == to) return true;
            if (visited.insert(next).second)
                queue.emplace_back(&next, hops + 1);
        }
    }
    return false;
}

} // namespace medgkrp
