#include "medgkrp/metrics.hpp"

#include "medgkrp/errors.hpp"

#include <algorithm>
#include <cmath>
#include <list>
#include <unordered_map>
#include <unordered_set>

namespace medgkrp {

double density(const ConceptGraph& graph) {
    auto n = static_cast<double>(graph.node_count());
    if (n < 2) return 0.0;
    return static_cast<double>(graph.edge_count()) / (n * (n - 1.0));
}

double reciprocity(const ConceptGraph& graph) {
    if (graph.edge_count() == 0) return 0.0;
    std::int64_t mutual = 0;
    for (const auto& e : graph.edges())
        if (graph.has_edge(e.dst, e.src)) ++mutual;
    return static_cast<double>(mutual) /
           static_cast<double>(graph.edge_count());
}

namespace {

// Johnson's circuit enumeration (1975) restricted to counting. Circuits are
// rooted at their least vertex, so each rotation class is counted exactly
// once. Stops as soon as the cap is reached.
class JohnsonCounter {
public:
    JohnsonCounter(const std::vector<std::vector<int>>& adjacency,
                   std::int64_t cap)
        : adj_(adjacency), n_(static_cast<int>(adjacency.size())), cap_(cap),
          blocked_(n_, false), block_map_(n_) {}

    CycleCount run() {
        for (start_ = 0; start_ < n_ && count_ < cap_; ++start_) {
            std::fill(blocked_.begin(), blocked_.end(), false);
            for (auto& s : block_map_) s.clear();
            stack_.clear();
            circuit(start_);
        }
        return {count_, count_ >= cap_};
    }

private:
    bool circuit(int v) {
        bool found = false;
        stack_.push_back(v);
        blocked_[v] = true;
        for (int w : adj_[v]) {
            if (w < start_) continue; // only circuits rooted at start_
            if (count_ >= cap_) break;
            if (w == start_) {
                ++count_;
                found = true;
            } else if (!blocked_[w]) {
                if (circuit(w)) found = true;
            }
        }
        if (found) {
            unblock(v);
        } else {
            for (int w : adj_[v]) {
                if (w < start_) continue;
                block_map_[w].insert(v);
            }
        }
        stack_.pop_back();
        return found;
    }

    void unblock(int v) {
        blocked_[v] = false;
        auto pending = std::move(block_map_[v]);
        block_map_[v].clear();
        for (int w : pending)
            if (blocked_[w]) unblock(w);
    }

    const std::vector<std::vector<int>>& adj_;
    int n_;
    std::int64_t cap_;
    std::int64_t count_ = 0;
    int start_ = 0;
    std::vector<bool> blocked_;
    std::vector<std::unordered_set<int>> block_map_;
    std::vector<int> stack_;
};

} // namespace

CycleCount count_simple_cycles(const std::vector<std::vector<int>>& adjacency,
                               std::int64_t cap) {
    if (cap < 1) throw ConfigError("cycle cap must be positive");
    return JohnsonCounter(adjacency, cap).run();
}

CycleCount count_simple_cycles(const ConceptGraph& graph, std::int64_t cap) {
    std::unordered_map<std::string, int> index;
    for (const auto& name : graph.nodes())
        index.emplace(name, static_cast<int>(index.size()));
    std::vector<std::vector<int>> adj(index.size());
    for (const auto& e : graph.edges())
        adj[index.at(e.src)].push_back(index.at(e.dst));
    return count_simple_cycles(adj, cap);
}

GraphAttributes compute_attributes(const ConceptGraph& graph,
                                   std::int64_t cycle_cap) {
    GraphAttributes a;
    a.nodes = static_cast<std::int64_t>(graph.node_count());
    a.edges = static_cast<std::int64_t>(graph.edge_count());
    a.density = density(graph);
    a.reciprocity = reciprocity(graph);
    a.cycles = count_simple_cycles(graph, cycle_cap);
    return a;
}

SummaryStats summarize(const std::vector<double>& values, bool population_sd) {
    if (values.empty())
        throw ConfigError("summarize requires a non-empty value list");
    SummaryStats s;
    s.min = *std::min_element(values.begin(), values.end());
    s.max = *std::max_element(values.begin(), values.end());
    double sum = 0.0;
    for (double v : values) sum += v;
    s.mean = sum / static_cast<double>(values.size());
    if (values.size() > 1) {
        double ss = 0.0;
        for (double v : values) ss += (v - s.mean) * (v - s.mean);
        double denom = population_sd ? static_cast<double>(values.size())
                                     : static_cast<double>(values.size() - 1);
        s.sd = std::sqrt(ss / denom);
    }
    return s;
}

} // namespace medgkrp
