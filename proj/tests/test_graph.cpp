#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <set>
#include <string>
#include <vector>

#include "miner/graph.hpp"
#include "miner/util.hpp"
#include "support/helpers.hpp"

using namespace miner;
using testing_support::cooccurrence_oracle;
using testing_support::OracleEdge;
using testing_support::random_entity_sets;
using testing_support::random_graph;
using testing_support::table_one_graph;

namespace {

StoryEntitySets sets_from(
    std::initializer_list<std::pair<const char*, std::set<std::string>>>
        spec) {
  StoryEntitySets sets;
  for (const auto& [story, names] : spec) {
    std::set<Entity> entities;
    for (const auto& n : names)
      entities.insert({n, EntityKind::location});
    sets[story] = std::move(entities);
  }
  return sets;
}

CoGraph complete_graph(std::size_t n) {
  CoGraph g;
  for (std::size_t i = 0; i < n; ++i)
    g.nodes.push_back({"k" + std::to_string(i), EntityKind::location});
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) g.edges.push_back({i, j, 1});
  return g;
}

}  // namespace

TEST_CASE("co-occurrence graph from three small stories") {
  auto g = build_cooccurrence_graph(
      sets_from({{"S1", {"A", "B"}}, {"S2", {"B", "C"}}, {"S3", {"B"}}}));
  REQUIRE(g.node_count() == 3);
  REQUIRE(g.edge_count() == 2);
  CHECK(g.nodes[0].canonical == "A");
  CHECK(g.nodes[1].canonical == "B");
  CHECK(g.nodes[2].canonical == "C");
  CHECK(g.edges[0] == CoEdge{0, 1, 1});
  CHECK(g.edges[1] == CoEdge{1, 2, 1});
}

TEST_CASE("single-entity story produces a node but no edges") {
  auto g = build_cooccurrence_graph(sets_from({{"S1", {"A"}}}));
  CHECK(g.node_count() == 1);
  CHECK(g.edge_count() == 0);
}

TEST_CASE("empty input produces an empty graph") {
  auto g = build_cooccurrence_graph({});
  CHECK(g.node_count() == 0);
  CHECK(g.edge_count() == 0);
}

TEST_CASE("repeated co-occurrence accumulates weight on one edge") {
  auto g = build_cooccurrence_graph(
      sets_from({{"S1", {"A", "B"}}, {"S2", {"A", "B"}}}));
  REQUIRE(g.edge_count() == 1);
  CHECK(g.edges[0].weight == 2);
}

TEST_CASE("one entity under two kinds is rejected") {
  StoryEntitySets sets;
  sets["s1"] = {{"Mirpur", EntityKind::location}};
  sets["s2"] = {{"Mirpur", EntityKind::organization}};
  CHECK_THROWS_AS(build_cooccurrence_graph(sets), ValidationError);
}

TEST_CASE("graph construction matches the all-pairs oracle") {
  std::mt19937 rng(1313);
  for (int round = 0; round < 100; ++round) {
    auto sets = random_entity_sets(rng, 10, 6);
    auto g = build_cooccurrence_graph(sets);
    auto expected = cooccurrence_oracle(sets);

    std::vector<OracleEdge> got;
    for (const auto& e : g.edges)
      got.push_back({g.nodes[e.u].canonical, g.nodes[e.v].canonical,
                     e.weight});
    std::sort(got.begin(), got.end());
    REQUIRE(got == expected);

    // handshake identity on the simple graph
    std::size_t degree_sum = 0;
    for (auto d : g.degrees()) degree_sum += d;
    REQUIRE(degree_sum == 2 * g.edge_count());
    std::size_t n = g.node_count();
    REQUIRE(g.edge_count() <= n * (n - 1) / 2);
  }
}

TEST_CASE("graph does not depend on which story carried which pair") {
  auto a = build_cooccurrence_graph(
      sets_from({{"S1", {"A", "B"}}, {"S2", {"B", "C"}}}));
  auto b = build_cooccurrence_graph(
      sets_from({{"S1", {"B", "C"}}, {"S2", {"A", "B"}}}));
  CHECK(a == b);
}

TEST_CASE("degree centrality is k over n minus 1") {
  auto k4 = complete_graph(4);
  for (std::size_t v = 0; v < 4; ++v)
    CHECK(degree_centrality(k4, v) == 1.0);

  CoGraph g;
  g.nodes = {{"A", EntityKind::location},
             {"B", EntityKind::location},
             {"C", EntityKind::location}};
  g.edges = {{0, 1, 1}};
  CHECK(degree_centrality(g, 2) == 0.0);
  CHECK(degree_centrality(g, 0) == 0.5);

  CoGraph single;
  single.nodes = {{"A", EntityKind::location}};
  CHECK_THROWS_AS(degree_centrality(single, 0), AnalysisError);
}

TEST_CASE("average degree is twice the edge count over n") {
  CHECK(average_degree(complete_graph(4)) == 3.0);

  CoGraph isolated;
  isolated.nodes = {{"A", EntityKind::location},
                    {"B", EntityKind::location}};
  CHECK(average_degree(isolated) == 0.0);

  CoGraph empty;
  CHECK_THROWS_AS(average_degree(empty), AnalysisError);
}

TEST_CASE("the 19-node fixture reproduces the published metrics") {
  auto g = table_one_graph();
  REQUIRE(g.node_count() == 19);
  REQUIRE(g.edge_count() == 21);
  CHECK(format_fixed(average_degree(g), 2) == "2.21");

  auto top = centrality_ranking(g, 5);
  REQUIRE(top.size() == 5);
  CHECK(top[0].canonical == "D");
  CHECK(format_fixed(top[0].centrality, 4) == "0.4444");
  CHECK(top[1].canonical == "A");
  CHECK(format_fixed(top[1].centrality, 4) == "0.2778");
  // B and E tie at 4/18; canonical order breaks the tie
  CHECK(top[2].canonical == "B");
  CHECK(format_fixed(top[2].centrality, 4) == "0.2222");
  CHECK(top[3].canonical == "E");
  CHECK(format_fixed(top[3].centrality, 4) == "0.2222");
  CHECK(top[4].canonical == "N");
  CHECK(format_fixed(top[4].centrality, 4) == "0.1667");
}

TEST_CASE("centrality values stay within the unit interval") {
  std::mt19937 rng(88);
  for (int round = 0; round < 50; ++round) {
    auto g = random_graph(rng, 12, 0.3);
    auto ranking = centrality_ranking(g, g.node_count());
    for (const auto& entry : ranking) {
      CHECK(entry.centrality >= 0.0);
      CHECK(entry.centrality <= 1.0);
    }
  }
}

TEST_CASE("centrality ranking handles edge parameters") {
  auto g = table_one_graph();
  CHECK(centrality_ranking(g, 0).empty());
  CHECK(centrality_ranking(g, 100).size() == 19);

  CoGraph isolated;
  isolated.nodes = {{"c", EntityKind::location},
                    {"a", EntityKind::location},
                    {"b", EntityKind::location}};
  std::sort(isolated.nodes.begin(), isolated.nodes.end(),
            [](const CoNode& x, const CoNode& y) {
              return x.canonical < y.canonical;
            });
  auto ranking = centrality_ranking(isolated, 3);
  REQUIRE(ranking.size() == 3);
  CHECK(ranking[0].canonical == "a");
  CHECK(ranking[1].canonical == "b");
  CHECK(ranking[2].canonical == "c");
  for (const auto& r : ranking) CHECK(r.centrality == 0.0);
}

TEST_CASE("fixed-point formatting rounds half up") {
  CHECK(format_fixed(5.0 / 18.0, 4) == "0.2778");
  CHECK(format_fixed(0.12344, 4) == "0.1234");
  CHECK(format_fixed(2.2105263, 2) == "2.21");
  CHECK(format_fixed(0.0, 4) == "0.0000");
  CHECK(format_fixed(1.0, 0) == "1");
  // 0.125 is exactly representable, so these probe the tie rule itself
  CHECK(format_fixed(0.125, 2) == "0.13");
  CHECK(format_fixed(-0.125, 2) == "-0.12");
}

TEST_CASE("DOT export writes one edge statement per edge") {
  CoGraph g;
  g.nodes = {{"Apollo Hospital", EntityKind::organization},
             {"Dhanmondi", EntityKind::location}};
  g.edges = {{0, 1, 2}};
  auto dot = export_graph(g, GraphFormat::dot);
  CHECK(dot ==
        "graph {\n"
        "  \"Apollo Hospital\" [kind=organization];\n"
        "  \"Dhanmondi\" [kind=location];\n"
        "  \"Apollo Hospital\" -- \"Dhanmondi\" [weight=2];\n"
        "}\n");
}

TEST_CASE("DOT export carries community ids when given") {
  CoGraph g;
  g.nodes = {{"A", EntityKind::location}, {"B", EntityKind::location}};
  g.edges = {{0, 1, 1}};
  std::vector<int> communities = {0, 1};
  auto dot = export_graph(g, GraphFormat::dot, &communities);
  CHECK(dot.find("community=0") != std::string::npos);
  CHECK(dot.find("community=1") != std::string::npos);
}

TEST_CASE("GEXF export is undirected with typed attributes") {
  CoGraph g;
  g.nodes = {{"A & B Lane", EntityKind::location},
             {"B", EntityKind::location}};
  g.edges = {{0, 1, 3}};
  std::vector<int> communities = {0, 1};
  auto gexf = export_graph(g, GraphFormat::gexf, &communities);
  CHECK(gexf.find("defaultedgetype=\"undirected\"") != std::string::npos);
  CHECK(gexf.find("A &amp; B Lane") != std::string::npos);
  CHECK(gexf.find("weight=\"3\"") != std::string::npos);
  CHECK(gexf.find("<attvalue for=\"1\" value=\"0\"/>") != std::string::npos);
  CHECK(gexf.find("<attvalue for=\"1\" value=\"1\"/>") != std::string::npos);
}

TEST_CASE("JSON export round-trips through import") {
  std::mt19937 rng(5150);
  for (int round = 0; round < 25; ++round) {
    auto g = random_graph(rng, 10, 0.4);
    auto back = import_graph_json(export_graph(g, GraphFormat::json));
    REQUIRE(back == g);
  }
}

TEST_CASE("exports are byte-deterministic") {
  auto g = table_one_graph();
  for (auto format :
       {GraphFormat::dot, GraphFormat::gexf, GraphFormat::json})
    CHECK(export_graph(g, format) == export_graph(g, format));
}

TEST_CASE("export rejects a partition of the wrong size") {
  auto g = table_one_graph();
  std::vector<int> communities = {0, 1};
  CHECK_THROWS_AS(export_graph(g, GraphFormat::dot, &communities),
                  AnalysisError);
}

TEST_CASE("graph import rejects malformed documents") {
  CHECK_THROWS_AS(import_graph_json("not json at all"), ParseError);
  CHECK_THROWS_AS(import_graph_json("[]"), ParseError);
  CHECK_THROWS_AS(import_graph_json("{\"nodes\": []}"), ParseError);
  CHECK_THROWS_AS(
      import_graph_json(
          R"({"nodes": [{"id": "A", "kind": "river"}], "edges": []})"),
      ParseError);
  CHECK_THROWS_AS(
      import_graph_json(
          R"({"nodes": [{"id": "A", "kind": "location"},
                        {"id": "A", "kind": "location"}], "edges": []})"),
      ParseError);
  CHECK_THROWS_AS(
      import_graph_json(
          R"({"nodes": [{"id": "A", "kind": "location"}],
              "edges": [{"source": "A", "target": "A"}]})"),
      ParseError);
  CHECK_THROWS_AS(
      import_graph_json(
          R"({"nodes": [{"id": "A", "kind": "location"}],
              "edges": [{"source": "A", "target": "B"}]})"),
      ParseError);
  CHECK_THROWS_AS(
      import_graph_json(
          R"({"nodes": [{"id": "A", "kind": "location"},
                        {"id": "B", "kind": "location"}],
              "edges": [{"source": "A", "target": "B", "weight": 0}]})"),
      ParseError);
  CHECK_THROWS_AS(
      import_graph_json(
          R"({"nodes": [{"id": "A", "kind": "location"},
                        {"id": "B", "kind": "location"}],
              "edges": [{"source": "A", "target": "B"},
                        {"source": "B", "target": "A"}]})"),
      ParseError);
}

TEST_CASE("parse_graph_format accepts exactly the three names") {
  CHECK(parse_graph_format("dot") == GraphFormat::dot);
  CHECK(parse_graph_format("gexf") == GraphFormat::gexf);
  CHECK(parse_graph_format("json") == GraphFormat::json);
  CHECK_FALSE(parse_graph_format("graphml").has_value());
  CHECK_FALSE(parse_graph_format("").has_value());
}
