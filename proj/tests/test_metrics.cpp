#include "medgkrp/metrics.hpp"

#include <doctest.h>

#include <random>
#include <set>
#include <vector>

using namespace medgkrp;

namespace {

ConceptGraph make_graph(int n, const std::vector<std::pair<int, int>>& edges) {
    ConceptGraph g("n0");
    for (int i = 1; i < n; ++i) g.add_node("n" + std::to_string(i));
    for (auto [a, b] : edges)
        g.add_edge("n" + std::to_string(a), "n" + std::to_string(b),
                   EdgeProvenance::expansion);
    return g;
}

// Naive simple-cycle counter: cycles are rooted at their minimal vertex and
// extended through strictly larger vertices, so each cycle is found once.
std::int64_t brute_cycles(const std::vector<std::vector<int>>& adj) {
    int n = static_cast<int>(adj.size());
    std::int64_t total = 0;
    std::vector<bool> on_path(n, false);
    auto dfs = [&](auto&& self, int root, int v) -> void {
        on_path[v] = true;
        for (int w : adj[v]) {
            if (w == root)
                ++total;
            else if (w > root && !on_path[w])
                self(self, root, w);
        }
        on_path[v] = false;
    };
    for (int root = 0; root < n; ++root) dfs(dfs, root, root);
    return total;
}

} // namespace

TEST_CASE("density") {
    CHECK(density(make_graph(1, {})) == 0.0);
    CHECK(density(make_graph(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}})) ==
          doctest::Approx(4.0 / 20.0));
    // Complete digraph on 3 nodes.
    CHECK(density(make_graph(
              3, {{0, 1}, {1, 0}, {0, 2}, {2, 0}, {1, 2}, {2, 1}})) ==
          doctest::Approx(1.0));
    // 40 nodes, 117 edges is a typical generated-graph shape.
    ConceptGraph g("n0");
    for (int i = 1; i < 40; ++i) g.add_node("n" + std::to_string(i));
    int added = 0;
    for (int a = 0; a < 40 && added < 117; ++a)
        for (int b = 0; b < 40 && added < 117; ++b)
            if (a != b && g.add_edge("n" + std::to_string(a),
                                     "n" + std::to_string(b),
                                     EdgeProvenance::expansion))
                ++added;
    CHECK(density(g) == doctest::Approx(117.0 / (40.0 * 39.0)));
}

TEST_CASE("reciprocity") {
    CHECK(reciprocity(make_graph(2, {})) == 0.0);
    CHECK(reciprocity(make_graph(2, {{0, 1}, {1, 0}})) == doctest::Approx(1.0));
    CHECK(reciprocity(make_graph(3, {{0, 1}, {1, 2}})) == doctest::Approx(0.0));
    CHECK(reciprocity(make_graph(3, {{0, 1}, {1, 0}, {1, 2}, {0, 2}})) ==
          doctest::Approx(0.5));
}

TEST_CASE("simple cycle counts on known graphs") {
    CHECK(count_simple_cycles(make_graph(3, {{0, 1}, {1, 2}})).count == 0);
    CHECK(count_simple_cycles(make_graph(2, {{0, 1}, {1, 0}})).count == 1);
    CHECK(count_simple_cycles(make_graph(3, {{0, 1}, {1, 2}, {2, 0}})).count ==
          1);
    // Triangle in both orientations: the two 3-cycles plus three 2-cycles.
    CHECK(count_simple_cycles(
              make_graph(3, {{0, 1}, {1, 0}, {1, 2}, {2, 1}, {2, 0}, {0, 2}}))
              .count == 5);
    // Two vertex-disjoint 2-cycles don't combine.
    CHECK(count_simple_cycles(make_graph(4, {{0, 1}, {1, 0}, {2, 3}, {3, 2}}))
              .count == 2);
}

TEST_CASE("cycle cap reports truncation") {
    // Complete digraph on 7 nodes has 2365 simple cycles.
    std::vector<std::pair<int, int>> edges;
    for (int a = 0; a < 7; ++a)
        for (int b = 0; b < 7; ++b)
            if (a != b) edges.emplace_back(a, b);
    auto full = count_simple_cycles(make_graph(7, edges));
    CHECK_FALSE(full.capped);
    auto capped = count_simple_cycles(make_graph(7, edges), 100);
    CHECK(capped.capped);
    CHECK(capped.count == 100);
}

TEST_CASE("cycle counter agrees with the brute-force oracle") {
    std::mt19937 rng(911);
    for (int trial = 0; trial < 150; ++trial) {
        int n = 2 + static_cast<int>(rng() % 7); // up to 8 vertices
        std::vector<std::vector<int>> adj(n);
        std::set<std::pair<int, int>> used;
        int edges = static_cast<int>(rng() % (n * 2));
        for (int e = 0; e < edges; ++e) {
            int a = static_cast<int>(rng() % n);
            int b = static_cast<int>(rng() % n);
            if (a != b && used.emplace(a, b).second) adj[a].push_back(b);
        }
        auto got = count_simple_cycles(adj);
        CAPTURE(trial);
        CHECK_FALSE(got.capped);
        CHECK(got.count == brute_cycles(adj));
    }
}

TEST_CASE("cycle count is invariant under node relabeling") {
    std::vector<std::pair<int, int>> edges{{0, 1}, {1, 2}, {2, 0}, {2, 3},
                                           {3, 0}, {1, 3}, {3, 1}};
    auto base = count_simple_cycles(make_graph(4, edges)).count;
    std::mt19937 rng(3);
    std::vector<int> perm{0, 1, 2, 3};
    for (int round = 0; round < 10; ++round) {
        std::shuffle(perm.begin(), perm.end(), rng);
        std::vector<std::pair<int, int>> relabeled;
        for (auto [a, b] : edges) relabeled.emplace_back(perm[a], perm[b]);
        CHECK(count_simple_cycles(make_graph(4, relabeled)).count == base);
    }
}

TEST_CASE("compute_attributes bundles the metrics") {
    auto g = make_graph(3, {{0, 1}, {1, 0}, {1, 2}});
    auto attrs = compute_attributes(g);
    CHECK(attrs.nodes == 3);
    CHECK(attrs.edges == 3);
    CHECK(attrs.density == doctest::Approx(0.5));
    CHECK(attrs.reciprocity == doctest::Approx(2.0 / 3.0));
    CHECK(attrs.cycles.count == 1);
}

TEST_CASE("summarize") {
    auto s = summarize({34, 27, 40});
    CHECK(s.mean == doctest::Approx(101.0 / 3.0));
    CHECK(s.min == 27.0);
    CHECK(s.max == 40.0);
    CHECK(s.sd == doctest::Approx(6.506407)); // sample, n-1
    auto pop = summarize({34, 27, 40}, true);
    CHECK(pop.sd == doctest::Approx(5.312459));
    auto single = summarize({4.5});
    CHECK(single.mean == 4.5);
    CHECK(single.sd == 0.0);
    CHECK_THROWS(summarize({}));
}
