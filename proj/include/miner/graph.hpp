#ifndef MINER_GRAPH_HPP
#define MINER_GRAPH_HPP

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "miner/errors.hpp"
#include "miner/gazetteer.hpp"
#include "miner/util.hpp"

namespace miner {

struct CoNode {
  std::string canonical;
  EntityKind kind = EntityKind::location;

  bool operator==(const CoNode&) const = default;
};

/// One edge per unordered pair, u < v; weight counts the stories in which
/// both endpoints occur.
struct CoEdge {
  std::size_t u = 0;
  std::size_t v = 0;
  std::size_t weight = 1;

  bool operator==(const CoEdge&) const = default;
};

/// Entity co-occurrence network. Nodes are sorted by canonical name and
/// edges by index pair, so structurally equal graphs compare equal and
/// exports are byte-stable. Simple-graph metrics (degree, centrality) ignore
/// the weights.
struct CoGraph {
  std::vector<CoNode> nodes;
  std::vector<CoEdge> edges;

  bool operator==(const CoGraph&) const = default;

  std::size_t node_count() const { return nodes.size(); }
  std::size_t edge_count() const { return edges.size(); }

  std::optional<std::size_t> node_index(std::string_view canonical) const {
    auto it = std::lower_bound(nodes.begin(), nodes.end(), canonical,
                               [](const CoNode& n, std::string_view c) {
                                 return n.canonical < c;
                               });
    if (it == nodes.end() || it->canonical != canonical) return std::nullopt;
    return static_cast<std::size_t>(it - nodes.begin());
  }

  std::vector<std::size_t> degrees() const {
    std::vector<std::size_t> deg(nodes.size(), 0);
    for (const auto& e : edges) {
      ++deg[e.u];
      ++deg[e.v];
    }
    return deg;
  }

  /// adjacency lists as (neighbor, weight), sorted by neighbor index
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> adjacency()
      const {
    std::vector<std::vector<std::pair<std::size_t, std::size_t>>> adj(
        nodes.size());
    for (const auto& e : edges) {
      adj[e.u].emplace_back(e.v, e.weight);
      adj[e.v].emplace_back(e.u, e.weight);
    }
    for (auto& row : adj) std::sort(row.begin(), row.end());
    return adj;
  }
};

/// Every unordered pair of entities sharing a story contributes 1 to that
/// pair's edge weight; a simple edge exists iff the weight is >= 1.
inline CoGraph build_cooccurrence_graph(const StoryEntitySets& entity_sets) {
  std::set<Entity> universe;
  for (const auto& [story_id, set] : entity_sets)
    universe.insert(set.begin(), set.end());

  CoGraph g;
  g.nodes.reserve(universe.size());
  for (const auto& e : universe) {
    if (!g.nodes.empty() && g.nodes.back().canonical == e.canonical)
      throw ValidationError("entity \"" + e.canonical +
                            "\" appears with two different kinds");
    g.nodes.push_back({e.canonical, e.kind});
  }

  std::map<std::pair<std::size_t, std::size_t>, std::size_t> weights;
  for (const auto& [story_id, set] : entity_sets) {
    std::vector<std::size_t> idx;
    idx.reserve(set.size());
    for (const auto& e : set) idx.push_back(*g.node_index(e.canonical));
    std::sort(idx.begin(), idx.end());
    for (std::size_t a = 0; a < idx.size(); ++a)
      for (std::size_t b = a + 1; b < idx.size(); ++b)
        ++weights[{idx[a], idx[b]}];
  }
  g.edges.reserve(weights.size());
  for (const auto& [pair, w] : weights)
    g.edges.push_back({pair.first, pair.second, w});
  return g;
}

/// k(v) / (n-1): the fraction of other nodes v touches.
inline double degree_centrality(const CoGraph& g, std::size_t v) {
  if (g.node_count() < 2)
    throw AnalysisError("degree centrality needs at least 2 nodes");
  return static_cast<double>(g.degrees()[v]) /
         static_cast<double>(g.node_count() - 1);
}

/// 2|E| / n over the simple graph.
inline double average_degree(const CoGraph& g) {
  if (g.node_count() == 0)
    throw AnalysisError("average degree of an empty graph is undefined");
  return 2.0 * static_cast<double>(g.edge_count()) /
         static_cast<double>(g.node_count());
}

struct CentralityEntry {
  std::string canonical;
  double centrality = 0.0;

  bool operator==(const CentralityEntry&) const = default;
};

/// Descending by centrality, canonical ascending on ties. Display callers
/// format values to 4 decimal places (round-half-up) via format_fixed.
inline std::vector<CentralityEntry> centrality_ranking(const CoGraph& g,
                                                       std::size_t top) {
  std::vector<CentralityEntry> out;
  if (g.node_count() < 2 || top == 0) return out;
  auto deg = g.degrees();
  out.reserve(g.node_count());
  for (std::size_t i = 0; i < g.node_count(); ++i)
    out.push_back({g.nodes[i].canonical,
                   static_cast<double>(deg[i]) /
                       static_cast<double>(g.node_count() - 1)});
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.centrality != b.centrality) return a.centrality > b.centrality;
    return a.canonical < b.canonical;
  });
  if (out.size() > top) out.resize(top);
  return out;
}

// ---------------------------------------------------------------------------
// export / import

enum class GraphFormat { dot, gexf, json };

inline std::optional<GraphFormat> parse_graph_format(std::string_view s) {
  if (s == "dot") return GraphFormat::dot;
  if (s == "gexf") return GraphFormat::gexf;
  if (s == "json") return GraphFormat::json;
  return std::nullopt;
}

namespace detail {

inline std::string dot_quote(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

inline std::string export_dot(const CoGraph& g,
                              const std::vector<int>* communities) {
  std::ostringstream out;
  out << "graph {\n";
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    out << "  " << dot_quote(g.nodes[i].canonical) << " [kind="
        << entity_kind_name(g.nodes[i].kind);
    if (communities) out << ", community=" << (*communities)[i];
    out << "];\n";
  }
  for (const auto& e : g.edges)
    out << "  " << dot_quote(g.nodes[e.u].canonical) << " -- "
        << dot_quote(g.nodes[e.v].canonical) << " [weight=" << e.weight
        << "];\n";
  out << "}\n";
  return out.str();
}

inline std::string export_gexf(const CoGraph& g,
                               const std::vector<int>* communities) {
  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<gexf xmlns=\"http://www.gexf.net/1.2draft\" version=\"1.2\">\n"
      << "  <graph defaultedgetype=\"undirected\">\n"
      << "    <attributes class=\"node\">\n"
      << "      <attribute id=\"0\" title=\"kind\" type=\"string\"/>\n";
  if (communities)
    out << "      <attribute id=\"1\" title=\"community\" "
           "type=\"integer\"/>\n";
  out << "    </attributes>\n    <nodes>\n";
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    out << "      <node id=\"" << i << "\" label=\""
        << xml_escape(g.nodes[i].canonical) << "\">\n"
        << "        <attvalues>\n"
        << "          <attvalue for=\"0\" value=\""
        << entity_kind_name(g.nodes[i].kind) << "\"/>\n";
    if (communities)
      out << "          <attvalue for=\"1\" value=\"" << (*communities)[i]
          << "\"/>\n";
    out << "        </attvalues>\n      </node>\n";
  }
  out << "    </nodes>\n    <edges>\n";
  for (std::size_t i = 0; i < g.edges.size(); ++i)
    out << "      <edge id=\"" << i << "\" source=\"" << g.edges[i].u
        << "\" target=\"" << g.edges[i].v << "\" weight=\""
        << g.edges[i].weight << "\"/>\n";
  out << "    </edges>\n  </graph>\n</gexf>\n";
  return out.str();
}

inline std::string export_json(const CoGraph& g,
                               const std::vector<int>* communities) {
  nlohmann::ordered_json doc;
  doc["nodes"] = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    nlohmann::ordered_json n;
    n["id"] = g.nodes[i].canonical;
    n["kind"] = entity_kind_name(g.nodes[i].kind);
    if (communities) n["community"] = (*communities)[i];
    doc["nodes"].push_back(std::move(n));
  }
  doc["edges"] = nlohmann::ordered_json::array();
  for (const auto& e : g.edges) {
    nlohmann::ordered_json j;
    j["source"] = g.nodes[e.u].canonical;
    j["target"] = g.nodes[e.v].canonical;
    j["weight"] = e.weight;
    doc["edges"].push_back(std::move(j));
  }
  return doc.dump(2) + "\n";
}

}  // namespace detail

/// Deterministic byte output for a given graph; `communities`, when given,
/// must assign an id to every node.
inline std::string export_graph(const CoGraph& g, GraphFormat format,
                                const std::vector<int>* communities = nullptr) {
  if (communities && communities->size() != g.node_count())
    throw AnalysisError("partition does not cover all nodes");
  switch (format) {
    case GraphFormat::dot: return detail::export_dot(g, communities);
    case GraphFormat::gexf: return detail::export_gexf(g, communities);
    case GraphFormat::json: return detail::export_json(g, communities);
  }
  throw AnalysisError("unknown graph format");
}

/// Reads the canonical JSON graph format back into a CoGraph.
inline CoGraph import_graph_json(std::string_view content) {
  nlohmann::json doc = nlohmann::json::parse(content, nullptr, false);
  if (doc.is_discarded() || !doc.is_object() || !doc.contains("nodes") ||
      !doc.contains("edges"))
    throw ParseError("not a graph document");

  CoGraph g;
  for (const auto& n : doc["nodes"]) {
    if (!n.is_object() || !n.contains("id") || !n["id"].is_string())
      throw ParseError("graph node without string id");
    auto kind = n.contains("kind") && n["kind"].is_string()
                    ? parse_entity_kind(n["kind"].get<std::string>())
                    : std::nullopt;
    if (!kind) throw ParseError("graph node with invalid kind");
    g.nodes.push_back({n["id"].get<std::string>(), *kind});
  }
  std::sort(g.nodes.begin(), g.nodes.end(),
            [](const CoNode& a, const CoNode& b) {
              return a.canonical < b.canonical;
            });
  for (std::size_t i = 1; i < g.nodes.size(); ++i)
    if (g.nodes[i].canonical == g.nodes[i - 1].canonical)
      throw ParseError("duplicate graph node id \"" + g.nodes[i].canonical +
                       "\"");

  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (const auto& e : doc["edges"]) {
    if (!e.is_object() || !e.contains("source") || !e.contains("target") ||
        !e["source"].is_string() || !e["target"].is_string())
      throw ParseError("graph edge without source/target");
    auto u = g.node_index(e["source"].get<std::string>());
    auto v = g.node_index(e["target"].get<std::string>());
    if (!u || !v) throw ParseError("graph edge references unknown node");
    if (*u == *v) throw ParseError("self-loops are not allowed");
    std::size_t w = 1;
    if (e.contains("weight")) {
      if (!e["weight"].is_number_unsigned() || e["weight"].get<std::size_t>() == 0)
        throw ParseError("edge weight must be a positive integer");
      w = e["weight"].get<std::size_t>();
    }
    auto [a, b] = std::minmax(*u, *v);
    if (!seen.insert({a, b}).second)
      throw ParseError("duplicate edge between \"" +
                       g.nodes[a].canonical + "\" and \"" +
                       g.nodes[b].canonical + "\"");
    g.edges.push_back({a, b, w});
  }
  std::sort(g.edges.begin(), g.edges.end(),
            [](const CoEdge& a, const CoEdge& b) {
              return std::tie(a.u, a.v) < std::tie(b.u, b.v);
            });
  return g;
}

}  // namespace miner

#endif  // MINER_GRAPH_HPP
