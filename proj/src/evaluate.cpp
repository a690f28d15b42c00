#include "medgkrp/evaluate.hpp"

#include "medgkrp/answer_parse.hpp"
#include "medgkrp/errors.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <unordered_set>

namespace medgkrp {

bool NodeMapping::is_mapped(const std::string& node) const {
    auto it = entries.find(node);
    return it != entries.end() && it->second != kNone;
}

const std::string& NodeMapping::target(const std::string& node) const {
    auto it = entries.find(node);
    if (it == entries.end())
        throw ConfigError("node missing from mapping: " + node);
    return it->second;
}

nlohmann::json NodeMapping::to_json() const {
    nlohmann::json doc = nlohmann::json::object();
    for (const auto& [node, target] : entries) doc[node] = target;
    return doc;
}

NodeMapping NodeMapping::from_json(const nlohmann::json& doc) {
    if (!doc.is_object()) throw LoadError("mapping document is not an object");
    NodeMapping m;
    for (auto it = doc.begin(); it != doc.end(); ++it)
        m.entries[it.key()] = it.value().get<std::string>();
    return m;
}

void NodeMapping::save(const std::filesystem::path& path) const {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write mapping file: " + path.string());
    out << to_json().dump(2) << "\n";
}

NodeMapping NodeMapping::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw LoadError("cannot open mapping file: " + path.string());
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::parse_error& e) {
        throw LoadError(std::string("malformed mapping JSON: ") + e.what());
    }
    return from_json(doc);
}

namespace {

// ['a', 'b', 'c'] with the candidates' stored casing.
std::string format_candidate_list(const std::vector<std::string>& names) {
    std::string out = "[";
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (i) out += ", ";
        out += "'" + names[i] + "'";
    }
    out += "]";
    return out;
}

} // namespace

NodeMapping map_nodes(const EmbeddingIndex& index, LlmGateway& gateway,
                      const PromptLibrary& prompts, const ConceptGraph& graph,
                      const EvalParams& params) {
    std::vector<std::string> nodes = graph.nodes();
    std::sort(nodes.begin(), nodes.end());

    NodeMapping mapping;
    for (const auto& node : nodes) {
        auto candidates = index.nearest(node, params.neighbor_count);
        if (candidates.empty()) {
            mapping.entries[node] = NodeMapping::kNone;
            continue;
        }
        Bindings bindings{{"original", node},
                          {"retrieved", format_candidate_list(candidates)}};
        std::string user = prompts.render(TemplateName::nn_match, bindings);
        try {
            // The match prompt goes out bare: no system prompt is attached.
            auto match = gateway.ask_validated<std::optional<std::string>>(
                to_string(TemplateName::nn_match), "", user, params.sampling,
                [&candidates](const std::string& raw) {
                    return parse_match(raw, candidates);
                });
            mapping.entries[node] = match ? *match : NodeMapping::kNone;
        } catch (const MalformedResponse&) {
            mapping.entries[node] = NodeMapping::kNone;
        }
    }
    return mapping;
}

std::string to_string(EdgeOutcome o) {
    switch (o) {
        case EdgeOutcome::hit: return "hit";
        case EdgeOutcome::miss_no_path: return "miss:no-path";
        case EdgeOutcome::miss_unmapped_endpoint:
            return "miss:unmapped-endpoint";
    }
    return "unknown";
}

nlohmann::json EvalReport::to_json() const {
    nlohmann::json doc;
    doc["n_hit"] = n_hit;
    doc["mappable_edges"] = mappable_edges;
    doc["generated_edges"] = generated_edges;
    doc["relevant_edges"] = relevant_edges;
    doc["precision"] = precision;
    doc["recall"] = recall;
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& [edge, outcome] : ledger)
        rows.push_back({edge.src, edge.dst, to_string(outcome)});
    doc["ledger"] = rows;
    return doc;
}

std::string EvalReport::table() const {
    std::ostringstream out;
    out << "precision " << precision << "  recall " << recall << "  (n_hit "
        << n_hit << ", |E_gb| " << mappable_edges << ", |E_g| "
        << generated_edges << ", |E_rel| " << relevant_edges << ")\n";
    for (const auto& [edge, outcome] : ledger)
        out << "  " << edge.src << " -> " << edge.dst << "  "
            << to_string(outcome) << "\n";
    return out.str();
}

EvalReport evaluate(const ConceptGraph& generated,
                    const GroundTruthGraph& truth, const NodeMapping& mapping,
                    const EvalParams& params) {
    for (const auto& node : generated.nodes())
        mapping.target(node); // precondition: mapping covers every node

    std::vector<CausalEdge> edges = generated.edges();
    std::sort(edges.begin(), edges.end(),
              [](const CausalEdge& a, const CausalEdge& b) {
                  return std::tie(a.src, a.dst) < std::tie(b.src, b.dst);
              });

    EvalReport report;
    report.generated_edges = static_cast<std::int64_t>(edges.size());
    for (const auto& edge : edges) {
        EdgeOutcome outcome;
        if (!mapping.is_mapped(edge.src) || !mapping.is_mapped(edge.dst)) {
            outcome = EdgeOutcome::miss_unmapped_endpoint;
        } else {
            ++report.mappable_edges;
            bool hit = truth.path_within(mapping.target(edge.src),
                                         mapping.target(edge.dst),
                                         params.path_node_threshold);
            outcome = hit ? EdgeOutcome::hit : EdgeOutcome::miss_no_path;
            if (hit) ++report.n_hit;
        }
        report.ledger.emplace_back(edge, outcome);
    }

    // E_rel: retained reference pairs with an endpoint in the mapped image
    // of the generated node set (duplicate mappings collapse).
    std::unordered_set<std::string> image;
    for (const auto& node : generated.nodes())
        if (mapping.is_mapped(node)) image.insert(mapping.target(node));
    for (const auto& [a, b] : truth.retained_pairs())
        if (image.count(a) || image.count(b)) ++report.relevant_edges;

    report.precision = report.generated_edges
                           ? static_cast<double>(report.n_hit) /
                                 static_cast<double>(report.generated_edges)
                           : 0.0;
    report.recall = report.relevant_edges
                        ? static_cast<double>(report.n_hit) /
                              static_cast<double>(report.relevant_edges)
                        : 0.0;
    return report;
}

} // namespace medgkrp
