#include "medgkrp/concept_graph.hpp"

#include "medgkrp/errors.hpp"

#include <algorithm>
#include <cctype>

namespace medgkrp {

std::string to_string(EdgeProvenance p) {
    return p == EdgeProvenance::expansion ? "expansion" : "refinement";
}

EdgeProvenance provenance_from_string(std::string_view s) {
    if (s == "expansion") return EdgeProvenance::expansion;
    if (s == "refinement") return EdgeProvenance::refinement;
    throw LoadError("unknown edge provenance: " + std::string(s));
}

namespace {

std::string edge_key(std::string_view src, std::string_view dst) {
    std::string k(src);
    k.push_back('\x1f');
    k.append(dst);
    return k;
}

} // namespace

ConceptGraph::ConceptGraph(std::string_view root_name, GraphMetadata meta)
    : meta_(std::move(meta)) {
    root_ = add_node(root_name);
}

std::string ConceptGraph::normalize_surface(std::string_view name) {
    std::string out;
    out.reserve(name.size());
    bool in_space = true; // leading spaces dropped
    for (char c : name) {
        if (std::isspace(static_cast<unsigned char>(c))) {
            in_space = true;
        } else {
            if (in_space && !out.empty()) out.push_back(' ');
            in_space = false;
            out.push_back(c);
        }
    }
    return out;
}

std::string ConceptGraph::canonical_key(std::string_view name) {
    std::string out = normalize_surface(name);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) {
        return static_cast<char>(std::tolower(c));
    });
    return out;
}

std::string ConceptGraph::add_node(std::string_view name) {
    std::string surface = normalize_surface(name);
    if (surface.empty())
        throw GraphError("node name empty after trimming");
    if (surface.find('[') != std::string::npos ||
        surface.find(']') != std::string::npos)
        throw GraphError("node name contains bracket characters: " + surface);

    std::string key = canonical_key(surface);
    auto it = canon_to_name_.find(key);
    if (it != canon_to_name_.end()) return it->second;

    canon_to_name_.emplace(std::move(key), surface);
    node_order_.push_back(surface);
    return surface;
}

bool ConceptGraph::add_edge(std::string_view src, std::string_view dst,
                            EdgeProvenance provenance) {
    auto s = resolve(src);
    auto d = resolve(dst);
    if (!s || !d)
        throw GraphError("edge endpoint not in graph: " +
                         std::string(!s ? src : dst));
    if (*s == *d) {
        warnings_.push_back("self-loop rejected: " + *s);
        return false;
    }
    std::string key = edge_key(*s, *d);
    if (edge_keys_.count(key)) return false;
    edge_keys_.insert(std::move(key));
    edges_.push_back({*s, *d, provenance});
    return true;
}

bool ConceptGraph::has_node(std::string_view name) const {
    return canon_to_name_.count(canonical_key(name)) != 0;
}

bool ConceptGraph::has_edge(std::string_view src, std::string_view dst) const {
    auto s = resolve(src);
    auto d = resolve(dst);
    if (!s || !d) return false;
    return edge_keys_.count(edge_key(*s, *d)) != 0;
}

std::optional<std::string> ConceptGraph::resolve(std::string_view name) const {
    auto it = canon_to_name_.find(canonical_key(name));
    if (it == canon_to_name_.end()) return std::nullopt;
    return it->second;
}

std::string ConceptGraph::format_edge_list() const {
    if (edges_.empty()) return "[]";
    std::string out = "[";
    for (std::size_t i = 0; i < edges_.size(); ++i) {
        if (i) out += ", ";
        out += "'" + edges_[i].src + " causes " + edges_[i].dst + "'";
    }
    out += "]";
    return out;
}

nlohmann::json ConceptGraph::to_json() const {
    nlohmann::json doc;
    doc["root"] = root_;
    doc["model"] = meta_.model;
    nlohmann::json params;
    params["n_max"] = meta_.n_max;
    params["depth_max"] = meta_.depth_max;
    params["temperature"] = meta_.temperature;
    params["top_p"] = meta_.top_p;
    if (!meta_.created_at.empty()) params["created_at"] = meta_.created_at;
    doc["params"] = params;

    std::vector<std::string> nodes = node_order_;
    std::sort(nodes.begin(), nodes.end());
    doc["nodes"] = nodes;

    std::vector<CausalEdge> edges = edges_;
    std::sort(edges.begin(), edges.end(),
              [](const CausalEdge& a, const CausalEdge& b) {
                  return std::tie(a.src, a.dst) < std::tie(b.src, b.dst);
              });
    nlohmann::json earr = nlohmann::json::array();
    for (const auto& e : edges)
        earr.push_back({e.src, e.dst, to_string(e.provenance)});
    doc["edges"] = earr;
    return doc;
}

std::string ConceptGraph::serialize() const { return to_json().dump(2) + "\n"; }

ConceptGraph ConceptGraph::from_json(const nlohmann::json& doc) {
    static const char* known[] = {"root", "model", "params", "nodes", "edges"};
    if (!doc.is_object()) throw LoadError("graph document is not an object");
    for (auto it = doc.begin(); it != doc.end(); ++it) {
        if (std::find(std::begin(known), std::end(known), it.key()) ==
            std::end(known))
            throw LoadError("unknown field in graph document: " + it.key());
    }
    for (const char* field : {"root", "nodes", "edges"})
        if (!doc.contains(field))
            throw LoadError(std::string("graph document missing field: ") +
                            field);

    GraphMetadata meta;
    meta.model = doc.value("model", "");
    if (doc.contains("params")) {
        const auto& p = doc["params"];
        meta.n_max = p.value("n_max", 3);
        meta.depth_max = p.value("depth_max", 2);
        meta.temperature = p.value("temperature", 0.05);
        meta.top_p = p.value("top_p", 1.0);
        meta.created_at = p.value("created_at", "");
    }

    std::string root = doc["root"].get<std::string>();
    std::unordered_set<std::string> seen;
    bool root_listed = false;
    ConceptGraph g(root, meta);
    for (const auto& n : doc["nodes"]) {
        std::string name = n.get<std::string>();
        std::string key = canonical_key(name);
        if (!seen.insert(key).second)
            throw LoadError("duplicate node entry: " + name);
        if (key == canonical_key(root)) {
            root_listed = true;
            continue; // root already present with its document casing
        }
        g.add_node(name);
    }
    if (!root_listed)
        throw LoadError("root not present in node list: " + root);
    for (const auto& e : doc["edges"]) {
        if (!e.is_array() || e.size() != 3)
            throw LoadError("edge entry must be [src, dst, provenance]");
        std::string src = e[0].get<std::string>();
        std::string dst = e[1].get<std::string>();
        EdgeProvenance prov = provenance_from_string(e[2].get<std::string>());
        if (!g.has_node(src) || !g.has_node(dst))
            throw LoadError("edge references absent node: " + src + " -> " +
                            dst);
        if (g.canonical_key(src) == g.canonical_key(dst))
            throw LoadError("self-loop edge in document: " + src);
        if (!g.add_edge(src, dst, prov))
            throw LoadError("duplicate edge entry: " + src + " -> " + dst);
    }
    return g;
}

ConceptGraph ConceptGraph::deserialize(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw LoadError(std::string("malformed graph JSON: ") + e.what());
    }
    return from_json(doc);
}

bool ConceptGraph::operator==(const ConceptGraph& other) const {
    if (root_ != other.root_) return false;
    auto sorted_nodes = [](const ConceptGraph& g) {
        std::vector<std::string> v = g.node_order_;
        std::sort(v.begin(), v.end());
        return v;
    };
    if (sorted_nodes(*this) != sorted_nodes(other)) return false;
    return edge_keys_ == other.edge_keys_;
}

} // namespace medgkrp
