#pragma once

#include "medgkrp/concept_graph.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace medgkrp {

// Directed edge density |E| / (|V|(|V|-1)); 0 below two nodes.
double density(const ConceptGraph& graph);

// Fraction of edges whose reverse edge also exists; 0 for an empty edge set.
double reciprocity(const ConceptGraph& graph);

struct CycleCount {
    std::int64_t count = 0;
    bool capped = false; // enumeration stopped at the cap
};

// Number of distinct simple directed cycles (no repeated vertices; rotations
// identified), via Johnson's circuit enumeration with an early stop. Some
// generated graphs have cycle counts past a million, hence the cap.
CycleCount count_simple_cycles(const ConceptGraph& graph,
                               std::int64_t cap = 2'000'000);

// Adjacency-list variant used directly by tests and oracles.
CycleCount count_simple_cycles(const std::vector<std::vector<int>>& adjacency,
                               std::int64_t cap = 2'000'000);

struct GraphAttributes {
    std::int64_t nodes = 0;
    std::int64_t edges = 0;
    double density = 0.0;
    double reciprocity = 0.0;
    CycleCount cycles;
};

GraphAttributes compute_attributes(const ConceptGraph& graph,
                                   std::int64_t cycle_cap = 2'000'000);

struct SummaryStats {
    double mean = 0.0;
    double min = 0.0;
    double max = 0.0;
    double sd = 0.0; // sample (n-1) by default
};

// Mean/min/max/SD over a non-empty value list. Sample SD matches the printed
// per-model summary tables; population SD is available by flag.
SummaryStats summarize(const std::vector<double>& values,
                       bool population_sd = false);

} // namespace medgkrp
