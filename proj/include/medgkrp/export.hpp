#pragma once

#include "medgkrp/concept_graph.hpp"

#include <string>

namespace medgkrp {

// Directed Graphviz document; the root node is drawn doubly circled.
std::string to_dot(const ConceptGraph& graph);

// GraphML with a node label key and a root marker attribute.
std::string to_graphml(const ConceptGraph& graph);

// src,dst,provenance rows with a header, edges in insertion order.
std::string to_edge_csv(const ConceptGraph& graph);

} // namespace medgkrp
