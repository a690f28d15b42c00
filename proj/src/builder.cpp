#include "medgkrp/builder.hpp"

#include "medgkrp/answer_parse.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>

namespace medgkrp {

namespace {

// Runs tasks with at most `concurrency` worker threads; results land in a
// pre-sized vector so apply order stays canonical regardless of scheduling.
template <typename Task>
void run_parallel(std::vector<Task>& tasks, int concurrency) {
    if (tasks.empty()) return;
    int workers = std::clamp<int>(concurrency, 1,
                                  static_cast<int>(tasks.size()));
    if (workers == 1) {
        for (auto& t : tasks) t();
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= tasks.size()) return;
            try {
                tasks[i]();
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

} // namespace

GraphBuilder::GraphBuilder(LlmGateway& gateway, const PromptLibrary& prompts,
                           GenerationParams params, int concurrency,
                           bool query_existing_edges)
    : gateway_(gateway), prompts_(prompts), params_(params),
      concurrency_(std::max(1, concurrency)),
      query_existing_edges_(query_existing_edges) {}

std::string GraphBuilder::query_expansion(const std::string& concept_name,
                                          ExpandDirection direction,
                                          const std::string& edge_list,
                                          std::vector<std::string>& out) {
    TemplateName tmpl = direction == ExpandDirection::caused_by
                            ? TemplateName::expand_effects
                            : TemplateName::expand_causes;
    Bindings bindings{{"edges", edge_list},
                      {"concept", concept_name},
                      {"n_max", std::to_string(params_.n_max)}};
    std::string user = prompts_.render(tmpl, bindings);
    std::string system = prompts_.body(TemplateName::system);
    try {
        out = gateway_.ask_validated<std::vector<std::string>>(
            to_string(tmpl), system, user, params_.sampling,
            [this](const std::string& raw) {
                return parse_concepts(raw, params_.n_max);
            });
    } catch (const MalformedResponse&) {
        out.clear(); // no parsable answer after retries: treat as empty
    }
    return user;
}

std::vector<std::string> GraphBuilder::expand(ConceptGraph& graph,
                                              const std::string& concept_name,
                                              ExpandDirection direction,
                                              const std::string& edge_list) {
    std::vector<std::string> answers;
    query_expansion(concept_name, direction, edge_list, answers);

    std::vector<std::string> created;
    for (const auto& answer : answers) {
        bool fresh = !graph.has_node(answer);
        std::string stored = graph.add_node(answer);
        if (direction == ExpandDirection::caused_by)
            graph.add_edge(concept_name, stored, EdgeProvenance::expansion);
        else
            graph.add_edge(stored, concept_name, EdgeProvenance::expansion);
        if (fresh) created.push_back(stored);
    }
    return created;
}

std::vector<std::string> GraphBuilder::expand_out(ConceptGraph& graph,
                                                  const std::string& concept_name,
                                                  const std::string& edge_list) {
    return expand(graph, concept_name, ExpandDirection::caused_by, edge_list);
}

std::vector<std::string> GraphBuilder::expand_in(ConceptGraph& graph,
                                                 const std::string& concept_name,
                                                 const std::string& edge_list) {
    return expand(graph, concept_name, ExpandDirection::causing, edge_list);
}

std::vector<std::string> GraphBuilder::expand_out(ConceptGraph& graph,
                                                  const std::string& concept_name) {
    return expand_out(graph, concept_name, graph.format_edge_list());
}

std::vector<std::string> GraphBuilder::expand_in(ConceptGraph& graph,
                                                 const std::string& concept_name) {
    return expand_in(graph, concept_name, graph.format_edge_list());
}

ConceptGraph GraphBuilder::explore(const std::string& root) {
    GraphMetadata meta;
    meta.model = gateway_.backend().model_id();
    meta.n_max = params_.n_max;
    meta.depth_max = params_.depth_max;
    meta.temperature = params_.sampling.temperature;
    meta.top_p = params_.sampling.top_p;
    ConceptGraph graph(root, meta);

    std::vector<ExpansionFrontierItem> level{
        {graph.root(), 0, ExpandDirection::caused_by},
        {graph.root(), 0, ExpandDirection::causing}};

    while (!level.empty()) {
        // Prompts for a whole level are rendered against the edge list as of
        // the level start; responses are applied in frontier order. Output is
        // therefore identical at any concurrency setting.
        std::string edge_list = graph.format_edge_list();
        std::vector<std::vector<std::string>> answers(level.size());
        std::vector<std::function<void()>> tasks;
        tasks.reserve(level.size());
        for (std::size_t i = 0; i < level.size(); ++i) {
            tasks.push_back([this, &level, &answers, &edge_list, i] {
                if (level[i].depth < params_.depth_max)
                    query_expansion(level[i].node, level[i].direction,
                                    edge_list, answers[i]);
            });
        }
        run_parallel(tasks, concurrency_);

        std::vector<ExpansionFrontierItem> next;
        for (std::size_t i = 0; i < level.size(); ++i) {
            const auto& item = level[i];
            if (item.depth >= params_.depth_max) continue;
            for (const auto& answer : answers[i]) {
                bool fresh = !graph.has_node(answer);
                std::string stored = graph.add_node(answer);
                if (item.direction == ExpandDirection::caused_by)
                    graph.add_edge(item.node, stored,
                                   EdgeProvenance::expansion);
                else
                    graph.add_edge(stored, item.node,
                                   EdgeProvenance::expansion);
                if (fresh) {
                    next.push_back(
                        {stored, item.depth + 1, ExpandDirection::caused_by});
                    next.push_back(
                        {stored, item.depth + 1, ExpandDirection::causing});
                }
            }
        }
        level = std::move(next);
    }
    return graph;
}

RefinementStats GraphBuilder::refine_edges(ConceptGraph& graph) {
    std::vector<std::string> nodes = graph.nodes();
    std::sort(nodes.begin(), nodes.end());

    std::vector<std::pair<std::string, std::string>> pairs;
    for (const auto& v : nodes)
        for (const auto& u : nodes) {
            if (v == u) continue;
            if (!query_existing_edges_ && graph.has_edge(v, u)) continue;
            pairs.emplace_back(v, u);
        }

    RefinementStats stats;
    std::vector<int> verdicts(pairs.size(), 0); // 1 yes, 0 no
    std::atomic<std::int64_t> malformed{0};
    std::string system = prompts_.body(TemplateName::system);

    std::vector<std::function<void()>> tasks;
    tasks.reserve(pairs.size());
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        tasks.push_back([this, &pairs, &verdicts, &malformed, &system, i] {
            Bindings bindings{{"node0", pairs[i].first},
                              {"node1", pairs[i].second}};
            std::string user =
                prompts_.render(TemplateName::edge_check, bindings);
            try {
                Verdict v = gateway_.ask_validated<Verdict>(
                    to_string(TemplateName::edge_check), system, user,
                    params_.sampling,
                    [](const std::string& raw) { return parse_verdict(raw); });
                verdicts[i] = v == Verdict::yes ? 1 : 0;
            } catch (const MalformedResponse&) {
                malformed.fetch_add(1); // unparsable after retries counts "no"
            }
        });
    }
    run_parallel(tasks, concurrency_);

    for (std::size_t i = 0; i < pairs.size(); ++i) {
        if (verdicts[i] &&
            graph.add_edge(pairs[i].first, pairs[i].second,
                           EdgeProvenance::refinement))
            ++stats.edges_added;
    }
    stats.queries_issued = static_cast<std::int64_t>(pairs.size());
    stats.malformed_as_no = malformed.load();
    return stats;
}

} // namespace medgkrp
