#include "medgkrp/export.hpp"

#include <sstream>
#include <unordered_map>

namespace medgkrp {

namespace {

std::string dot_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\') out.push_back('\\');
        out.push_back(c);
    }
    return out;
}

std::string xml_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            case '\'': out += "&apos;"; break;
            default: out.push_back(c);
        }
    }
    return out;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        else out.push_back(c);
    }
    out += "\"";
    return out;
}

} // namespace

std::string to_dot(const ConceptGraph& graph) {
    std::ostringstream out;
    out << "digraph concept_graph {\n";
    for (const auto& node : graph.nodes()) {
        out << "  \"" << dot_escape(node) << "\"";
        if (node == graph.root()) out << " [shape=doublecircle, root=true]";
        out << ";\n";
    }
    for (const auto& e : graph.edges())
        out << "  \"" << dot_escape(e.src) << "\" -> \"" << dot_escape(e.dst)
            << "\";\n";
    out << "}\n";
    return out.str();
}

std::string to_graphml(const ConceptGraph& graph) {
    std::unordered_map<std::string, int> ids;
    for (const auto& node : graph.nodes())
        ids.emplace(node, static_cast<int>(ids.size()));

    std::ostringstream out;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n"
        << "  <key id=\"label\" for=\"node\" attr.name=\"label\" "
           "attr.type=\"string\"/>\n"
        << "  <key id=\"root\" for=\"node\" attr.name=\"root\" "
           "attr.type=\"boolean\"/>\n"
        << "  <key id=\"provenance\" for=\"edge\" attr.name=\"provenance\" "
           "attr.type=\"string\"/>\n"
        << "  <graph id=\"G\" edgedefault=\"directed\">\n";
    for (const auto& node : graph.nodes()) {
        out << "    <node id=\"n" << ids.at(node) << "\">\n"
            << "      <data key=\"label\">" << xml_escape(node) << "</data>\n";
        if (node == graph.root())
            out << "      <data key=\"root\">true</data>\n";
        out << "    </node>\n";
    }
    for (const auto& e : graph.edges())
        out << "    <edge source=\"n" << ids.at(e.src) << "\" target=\"n"
            << ids.at(e.dst) << "\">"
            << "<data key=\"provenance\">" << to_string(e.provenance)
            << "</data></edge>\n";
    out << "  </graph>\n</graphml>\n";
    return out.str();
}

std::string to_edge_csv(const ConceptGraph& graph) {
    std::ostringstream out;
    out << "src,dst,provenance\n";
    for (const auto& e : graph.edges())
        out << csv_field(e.src) << ',' << csv_field(e.dst) << ','
            << to_string(e.provenance) << '\n';
    return out.str();
}

} // namespace medgkrp
