// medgkrp command-line front end: grows causal concept graphs through an LLM
// backend, maps them onto a reference knowledge graph, and reports
// precision/recall, structural metrics and reviewer aggregates.

#include <CLI11.hpp>

#include "medgkrp/builder.hpp"
#include "medgkrp/evaluate.hpp"
#include "medgkrp/export.hpp"
#include "medgkrp/metrics.hpp"
#include "medgkrp/reviews.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <thread>

namespace fs = std::filesystem;
using namespace medgkrp;

namespace {

struct RunConfig {
    std::vector<std::string> concepts;

    std::string backend_type = "http"; // "http" or "scripted"
    std::string script_file;           // scripted backend replies
    HttpBackendConfig http;

    GenerationParams generation;
    EvalParams evaluation;

    fs::path truth_concepts;
    fs::path truth_edges;
    fs::path output_dir = "out";
    fs::path cache_dir = "cache";
    fs::path prompts_dir; // empty: built-in templates
};

RunConfig load_config(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path.string());
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(std::string("malformed config JSON: ") + e.what());
    }

    RunConfig cfg;
    try {
        if (doc.contains("concepts"))
            cfg.concepts = doc["concepts"].get<std::vector<std::string>>();
        if (doc.contains("backend")) {
            const auto& b = doc["backend"];
            cfg.backend_type = b.value("type", cfg.backend_type);
            cfg.script_file = b.value("script", std::string());
            cfg.http.model = b.value("model", cfg.http.model);
            cfg.http.base_url = b.value("base_url", cfg.http.base_url);
            cfg.http.path = b.value("path", cfg.http.path);
            cfg.http.api_key_env = b.value("api_key_env", cfg.http.api_key_env);
        }
        if (doc.contains("generation")) {
            const auto& g = doc["generation"];
            cfg.generation.n_max = g.value("n_max", cfg.generation.n_max);
            cfg.generation.depth_max =
                g.value("depth_max", cfg.generation.depth_max);
            cfg.generation.sampling.temperature =
                g.value("temperature", cfg.generation.sampling.temperature);
            cfg.generation.sampling.top_p =
                g.value("top_p", cfg.generation.sampling.top_p);
            cfg.generation.sampling.max_retries =
                g.value("max_retries", cfg.generation.sampling.max_retries);
            cfg.evaluation.sampling = cfg.generation.sampling;
        }
        if (doc.contains("evaluation")) {
            const auto& e = doc["evaluation"];
            cfg.evaluation.path_node_threshold = e.value(
                "path_node_threshold", cfg.evaluation.path_node_threshold);
            cfg.evaluation.neighbor_count =
                e.value("neighbor_count", cfg.evaluation.neighbor_count);
        }
        if (doc.contains("truth")) {
            cfg.truth_concepts = doc["truth"].value("concepts", std::string());
            cfg.truth_edges = doc["truth"].value("edges", std::string());
        }
        cfg.output_dir = doc.value("output_dir", cfg.output_dir.string());
        cfg.cache_dir = doc.value("cache_dir", cfg.cache_dir.string());
        cfg.prompts_dir = doc.value("prompts_dir", std::string());
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("bad config field: ") + e.what());
    }
    if (cfg.generation.n_max < 1 || cfg.generation.depth_max < 0)
        throw ConfigError("generation params out of range");
    return cfg;
}

std::unique_ptr<ChatBackend> make_backend(const RunConfig& cfg) {
    if (cfg.backend_type == "scripted") {
        if (cfg.script_file.empty())
            throw ConfigError(
                "scripted backend requires backend.script in the config");
        return std::make_unique<ScriptedBackend>(
            ScriptedBackend::from_script_file(cfg.script_file));
    }
    if (cfg.backend_type == "http")
        return std::make_unique<HttpChatBackend>(cfg.http);
    throw ConfigError("unknown backend type: " + cfg.backend_type);
}

PromptLibrary make_prompts(const RunConfig& cfg) {
    if (cfg.prompts_dir.empty()) return PromptLibrary();
    return PromptLibrary(cfg.prompts_dir);
}

std::string slug(const std::string& concept_name) {
    std::string out;
    for (char c : concept_name) {
        if (std::isalnum(static_cast<unsigned char>(c)))
            out.push_back(
                static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
        else if (!out.empty() && out.back() != '-')
            out.push_back('-');
    }
    while (!out.empty() && out.back() == '-') out.pop_back();
    return out.empty() ? "concept" : out;
}

void write_file(const fs::path& path, const std::string& content) {
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw ConfigError("cannot write: " + path.string());
        out << content;
    }
    fs::rename(tmp, path);
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw LoadError("cannot open: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

GroundTruthGraph load_truth(const RunConfig& cfg) {
    if (cfg.truth_concepts.empty() || cfg.truth_edges.empty())
        throw ConfigError("config is missing truth.concepts / truth.edges");
    return GroundTruthGraph::load(cfg.truth_concepts, cfg.truth_edges);
}

nlohmann::json manifest_for(const RunConfig& cfg, const std::string& model,
                            const PromptLibrary& prompts) {
    nlohmann::json m;
    m["model"] = model;
    m["generation"] = {{"n_max", cfg.generation.n_max},
                       {"depth_max", cfg.generation.depth_max},
                       {"temperature", cfg.generation.sampling.temperature},
                       {"top_p", cfg.generation.sampling.top_p},
                       {"max_retries", cfg.generation.sampling.max_retries}};
    nlohmann::json digests;
    for (TemplateName name :
         {TemplateName::system, TemplateName::expand_causes,
          TemplateName::expand_effects, TemplateName::edge_check,
          TemplateName::nn_match})
        digests[to_string(name)] = prompts.digest(name);
    m["prompts"] = digests;
    m["concepts"] = cfg.concepts;
    return m;
}

std::vector<fs::path> resolve_graph_files(const std::vector<std::string>& args,
                                          const fs::path& output_dir) {
    std::vector<fs::path> files;
    if (!args.empty()) {
        for (const auto& a : args) files.emplace_back(a);
    } else if (fs::is_directory(output_dir)) {
        for (const auto& entry : fs::directory_iterator(output_dir)) {
            const auto name = entry.path().filename().string();
            if (name.size() > 11 &&
                name.substr(name.size() - 11) == ".graph.json")
                files.push_back(entry.path());
        }
        std::sort(files.begin(), files.end());
    }
    if (files.empty())
        throw ConfigError("no graph files given and none found in " +
                          output_dir.string());
    return files;
}

fs::path sibling(const fs::path& graph_file, const std::string& suffix) {
    std::string name = graph_file.filename().string();
    auto pos = name.rfind(".graph.json");
    if (pos != std::string::npos) name = name.substr(0, pos);
    return graph_file.parent_path() / (name + suffix);
}

int cmd_generate(const RunConfig& cfg, ChatBackend& backend,
                 const PromptLibrary& prompts, int parallel_concepts,
                 int concurrency, bool query_existing_edges) {
    if (cfg.concepts.empty())
        throw ConfigError("generate needs a non-empty concept list");
    fs::create_directories(cfg.output_dir);
    fs::create_directories(cfg.cache_dir);
    ResponseCache cache(cfg.cache_dir);
    LlmGateway gateway(backend, &cache);

    write_file(cfg.output_dir / "manifest.json",
               manifest_for(cfg, backend.model_id(), prompts).dump(2) + "\n");

    std::atomic<std::size_t> next{0};
    std::atomic<int> completed{0};
    std::atomic<int> skipped{0};
    std::mutex io_mutex;
    std::exception_ptr failure;

    auto worker = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= cfg.concepts.size() || failure) return;
            const std::string& concept_name = cfg.concepts[i];
            fs::path out = cfg.output_dir / (slug(concept_name) + ".graph.json");
            if (fs::exists(out)) { // resume: finished concepts stay put
                ++skipped;
                continue;
            }
            try {
                GraphBuilder builder(gateway, prompts, cfg.generation,
                                     concurrency, query_existing_edges);
                ConceptGraph graph = builder.explore(concept_name);
                RefinementStats stats = builder.refine_edges(graph);
                graph.metadata().model = backend.model_id();
                graph.metadata().n_max = cfg.generation.n_max;
                graph.metadata().depth_max = cfg.generation.depth_max;
                graph.metadata().temperature =
                    cfg.generation.sampling.temperature;
                graph.metadata().top_p = cfg.generation.sampling.top_p;
                write_file(out, graph.serialize() + "\n");
                ++completed;
                std::lock_guard<std::mutex> lock(io_mutex);
                std::cout << concept_name << ": " << graph.node_count()
                          << " nodes, " << graph.edge_count() << " edges ("
                          << stats.edges_added << " from refinement)\n";
            } catch (...) {
                std::lock_guard<std::mutex> lock(io_mutex);
                if (!failure) failure = std::current_exception();
                return;
            }
        }
    };

    int threads = std::max(1, parallel_concepts);
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    if (failure) {
        try {
            std::rethrow_exception(failure);
        } catch (const TransportError& e) {
            std::cerr << "backend failure: " << e.what() << "\n"
                      << completed.load() + skipped.load() << "/"
                      << cfg.concepts.size()
                      << " graphs persisted; rerun to resume\n";
            return completed > 0 || skipped > 0 ? 3 : 2;
        }
    }
    std::cout << "generated " << completed << " graph(s), " << skipped
              << " already present\n";
    return 0;
}

int cmd_map_nodes(const RunConfig& cfg, ChatBackend& backend,
                  const PromptLibrary& prompts,
                  const std::vector<std::string>& graph_args) {
    GroundTruthGraph truth = load_truth(cfg);
    EmbeddingIndex index(hash_embedder(), 64);
    index.add_all(truth.concept_names());

    fs::create_directories(cfg.cache_dir);
    ResponseCache cache(cfg.cache_dir);
    LlmGateway gateway(backend, &cache);

    for (const auto& file : resolve_graph_files(graph_args, cfg.output_dir)) {
        ConceptGraph graph = ConceptGraph::deserialize(read_file(file));
        NodeMapping mapping =
            map_nodes(index, gateway, prompts, graph, cfg.evaluation);
        fs::path out = sibling(file, ".mapping.json");
        mapping.save(out);
        int mapped = 0;
        for (const auto& [node, target] : mapping.entries)
            if (target != NodeMapping::kNone) ++mapped;
        std::cout << file.filename().string() << ": " << mapped << "/"
                  << mapping.entries.size() << " nodes mapped -> "
                  << out.filename().string() << "\n";
    }
    return 0;
}

int cmd_evaluate(const RunConfig& cfg, const PromptLibrary& prompts,
                 const std::vector<std::string>& graph_args, bool map_first,
                 const std::function<std::unique_ptr<ChatBackend>()>&
                     backend_factory) {
    GroundTruthGraph truth = load_truth(cfg);

    std::vector<double> precisions, recalls;
    for (const auto& file : resolve_graph_files(graph_args, cfg.output_dir)) {
        ConceptGraph graph = ConceptGraph::deserialize(read_file(file));
        fs::path mapping_file = sibling(file, ".mapping.json");

        NodeMapping mapping;
        bool have_mapping = fs::exists(mapping_file);
        if (have_mapping) mapping = NodeMapping::load(mapping_file);

        std::vector<std::string> missing;
        for (const auto& node : graph.nodes())
            if (!mapping.entries.count(node)) missing.push_back(node);

        if (!missing.empty()) {
            if (!map_first) {
                std::cerr << file.filename().string()
                          << ": no mapping entry for " << missing.size()
                          << " node(s):\n";
                for (const auto& n : missing) std::cerr << "  " << n << "\n";
                std::cerr << "run map-nodes first or pass --map-first\n";
                throw ConfigError("unmapped nodes in " +
                                  file.filename().string());
            }
            EmbeddingIndex index(hash_embedder(), 64);
            index.add_all(truth.concept_names());
            fs::create_directories(cfg.cache_dir);
            ResponseCache cache(cfg.cache_dir);
            auto backend = backend_factory();
            LlmGateway gateway(*backend, &cache);
            mapping =
                map_nodes(index, gateway, prompts, graph, cfg.evaluation);
            mapping.save(mapping_file);
        }

        EvalReport report = evaluate(graph, truth, mapping, cfg.evaluation);
        write_file(sibling(file, ".eval.json"), report.to_json().dump(2) + "\n");
        std::cout << file.filename().string() << ": " << report.table();
        precisions.push_back(report.precision);
        recalls.push_back(report.recall);
    }

    if (precisions.size() > 1) {
        auto p = summarize(precisions);
        auto r = summarize(recalls);
        std::cout << "summary over " << precisions.size() << " graphs\n"
                  << "  precision mean " << p.mean << " min " << p.min
                  << " max " << p.max << " sd " << p.sd << "\n"
                  << "  recall    mean " << r.mean << " min " << r.min
                  << " max " << r.max << " sd " << r.sd << "\n";
    }
    return 0;
}

int cmd_metrics(const RunConfig& cfg, const std::vector<std::string>& graph_args,
                const std::string& sort_by, std::int64_t cycle_cap,
                const std::string& out_file) {
    struct Row {
        std::string name;
        GraphAttributes attrs;
    };
    std::vector<Row> rows;
    for (const auto& file : resolve_graph_files(graph_args, cfg.output_dir)) {
        ConceptGraph graph = ConceptGraph::deserialize(read_file(file));
        rows.push_back({graph.root(), compute_attributes(graph, cycle_cap)});
    }

    if (sort_by != "none") {
        auto key = [&sort_by](const Row& r) -> double {
            if (sort_by == "nodes") return static_cast<double>(r.attrs.nodes);
            if (sort_by == "edges") return static_cast<double>(r.attrs.edges);
            if (sort_by == "density") return r.attrs.density;
            if (sort_by == "reciprocity") return r.attrs.reciprocity;
            if (sort_by == "cycles")
                return static_cast<double>(r.attrs.cycles.count);
            throw ConfigError("unknown sort column: " + sort_by);
        };
        std::stable_sort(rows.begin(), rows.end(),
                         [&key](const Row& a, const Row& b) {
                             return key(a) > key(b); // descending
                         });
    }

    std::ostringstream table;
    table << "graph,nodes,edges,density,reciprocity,cycles\n";
    for (const auto& row : rows) {
        table << row.name << ',' << row.attrs.nodes << ',' << row.attrs.edges
              << ',' << row.attrs.density << ',' << row.attrs.reciprocity
              << ',' << row.attrs.cycles.count
              << (row.attrs.cycles.capped ? "+" : "") << '\n';
    }
    if (out_file.empty())
        std::cout << table.str();
    else
        write_file(out_file, table.str());
    return 0;
}

int cmd_review(const std::string& scores_file, const std::string& out_file) {
    ReviewLoadResult loaded = load_reviews(scores_file);
    for (const auto& w : loaded.warnings) std::cerr << "warning: " << w << "\n";
    ReviewAggregate agg = aggregate(loaded.records);

    std::ostringstream table;
    table << "condition,model,acc_mean,acc_variance,comp_mean,comp_variance\n";
    table.setf(std::ios::fixed);
    table.precision(2);
    for (const auto& [key, cell] : agg.cells)
        table << key.first << ',' << key.second << ',' << cell.acc_mean << ','
              << cell.acc_variance << ',' << cell.comp_mean << ','
              << cell.comp_variance << '\n';

    table << "\nmodel,avg_acc,avg_acc_variance,avg_comp,avg_comp_variance\n";
    for (const auto& [model, s] : agg.models)
        table << model << ',' << s.avg_acc_score << ',' << s.avg_acc_variance
              << ',' << s.avg_comp_score << ',' << s.avg_comp_variance << '\n';

    // Condition view sorted by cross-model accuracy, best first.
    std::vector<std::pair<std::string, std::pair<double, double>>> by_acc(
        agg.condition_averages.begin(), agg.condition_averages.end());
    std::stable_sort(by_acc.begin(), by_acc.end(),
                     [](const auto& a, const auto& b) {
                         return a.second.first > b.second.first;
                     });
    table << "\ncondition,avg_acc,avg_comp\n";
    for (const auto& [condition, scores] : by_acc)
        table << condition << ',' << scores.first << ',' << scores.second
              << '\n';

    if (out_file.empty())
        std::cout << table.str();
    else
        write_file(out_file, table.str());
    return 0;
}

int cmd_export(const std::string& graph_file, const std::string& format,
               const std::string& out_file) {
    ConceptGraph graph = ConceptGraph::deserialize(read_file(graph_file));
    std::string rendered;
    if (format == "dot")
        rendered = to_dot(graph);
    else if (format == "graphml")
        rendered = to_graphml(graph);
    else if (format == "csv")
        rendered = to_edge_csv(graph);
    else
        throw ConfigError("unknown export format: " + format);
    if (out_file.empty())
        std::cout << rendered;
    else
        write_file(out_file, rendered);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"medgkrp: LLM-grown causal concept graphs, evaluated against "
                 "a reference knowledge graph"};
    app.require_subcommand(1);

    std::string config_file;
    std::string backend_override;
    std::string cache_dir_override;
    bool seed_fixtures = false;
    app.add_option("--config", config_file, "run configuration (JSON)");
    app.add_option("--backend", backend_override,
                   "backend override: http or scripted");
    app.add_option("--cache-dir", cache_dir_override,
                   "response cache directory override");
    app.add_flag("--seed-fixtures", seed_fixtures,
                 "use the scripted fixture backend from the config");

    auto* generate = app.add_subcommand("generate", "grow one graph per root "
                                                    "concept");
    int parallel_concepts = 1;
    int concurrency = 1;
    bool query_existing_edges = false;
    generate->add_option("--parallel-concepts", parallel_concepts,
                         "independent concepts explored in parallel");
    generate->add_option("--concurrency", concurrency,
                         "in-flight queries within one concept");
    generate->add_flag("--query-existing-edges", query_existing_edges,
                       "re-ask pairs that already have an edge");

    std::vector<std::string> graph_args;
    auto* map_nodes_cmd =
        app.add_subcommand("map-nodes", "map generated nodes onto reference "
                                        "concepts");
    map_nodes_cmd->add_option("graphs", graph_args, "graph JSON files");

    auto* evaluate_cmd = app.add_subcommand(
        "evaluate", "precision/recall against the reference graph");
    bool map_first = false;
    evaluate_cmd->add_option("graphs", graph_args, "graph JSON files");
    evaluate_cmd->add_flag("--map-first", map_first,
                           "map any unmapped nodes before evaluating");

    auto* metrics_cmd =
        app.add_subcommand("metrics", "structural attribute table");
    std::string sort_by = "none";
    std::int64_t cycle_cap = 2'000'000;
    std::string out_file;
    metrics_cmd->add_option("graphs", graph_args, "graph JSON files");
    metrics_cmd->add_option("--sort-by", sort_by,
                            "none|nodes|edges|density|reciprocity|cycles");
    metrics_cmd->add_option("--cycle-cap", cycle_cap,
                            "stop counting cycles at this many");
    metrics_cmd->add_option("-o,--output", out_file, "write table here");

    auto* review_cmd =
        app.add_subcommand("review", "aggregate human review scores");
    std::string scores_file;
    review_cmd->add_option("scores", scores_file, "review scores CSV")
        ->required();
    review_cmd->add_option("-o,--output", out_file, "write tables here");

    auto* export_cmd = app.add_subcommand("export", "convert a graph file");
    std::string export_graph;
    std::string format = "dot";
    export_cmd->add_option("graph", export_graph, "graph JSON file")
        ->required();
    export_cmd->add_option("--format", format, "dot|graphml|csv");
    export_cmd->add_option("-o,--output", out_file, "write here");

    CLI11_PARSE(app, argc, argv);

    try {
        RunConfig cfg;
        if (!config_file.empty()) cfg = load_config(config_file);
        if (seed_fixtures) cfg.backend_type = "scripted";
        if (!backend_override.empty()) cfg.backend_type = backend_override;
        if (!cache_dir_override.empty()) cfg.cache_dir = cache_dir_override;

        PromptLibrary prompts = make_prompts(cfg);

        if (generate->parsed()) {
            auto backend = make_backend(cfg);
            return cmd_generate(cfg, *backend, prompts, parallel_concepts,
                                concurrency, query_existing_edges);
        }
        if (map_nodes_cmd->parsed()) {
            auto backend = make_backend(cfg);
            return cmd_map_nodes(cfg, *backend, prompts, graph_args);
        }
        if (evaluate_cmd->parsed())
            return cmd_evaluate(cfg, prompts, graph_args, map_first,
                                [&cfg] { return make_backend(cfg); });
        if (metrics_cmd->parsed())
            return cmd_metrics(cfg, graph_args, sort_by, cycle_cap, out_file);
        if (review_cmd->parsed()) return cmd_review(scores_file, out_file);
        if (export_cmd->parsed())
            return cmd_export(export_graph, format, out_file);
    } catch (const TransportError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
