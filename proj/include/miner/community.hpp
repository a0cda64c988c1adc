#ifndef MINER_COMMUNITY_HPP
#define MINER_COMMUNITY_HPP

#include <algorithm>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "miner/errors.hpp"
#include "miner/graph.hpp"

namespace miner {

/// Assignment of every node to exactly one community; ids are 0-based and
/// dense. q is the modularity of the assignment.
struct Partition {
  std::vector<int> assignment;  // node index -> community id
  int community_count = 0;
  double q = 0.0;

  bool operator==(const Partition&) const = default;
};

/// Renumbers community ids densely by first appearance in node order.
inline void normalize_partition(Partition& p) {
  std::map<int, int> remap;
  for (auto& c : p.assignment) {
    auto [it, inserted] = remap.emplace(c, static_cast<int>(remap.size()));
    c = it->second;
  }
  p.community_count = static_cast<int>(remap.size());
}

/// Q = (1/2m) * sum_ij [A_ij - k_i k_j / (2m)] delta(c_i, c_j), evaluated
/// per community as in2/(2m) - (tot/(2m))^2. Unweighted by default (the
/// simple graph); `weighted` switches to co-occurrence weights.
inline double modularity(const CoGraph& g, const Partition& p,
                         bool weighted = false) {
  if (g.edge_count() == 0)
    throw AnalysisError("modularity is undefined on an edgeless graph");
  if (p.assignment.size() != g.node_count())
    throw ValidationError("partition does not cover all nodes");

  int cmax = 0;
  for (int c : p.assignment) {
    if (c < 0) throw ValidationError("negative community id");
    cmax = std::max(cmax, c);
  }

  std::vector<double> deg(g.node_count(), 0.0);
  double m = 0.0;
  for (const auto& e : g.edges) {
    double w = weighted ? static_cast<double>(e.weight) : 1.0;
    deg[e.u] += w;
    deg[e.v] += w;
    m += w;
  }

  std::vector<double> tot(cmax + 1, 0.0), in2(cmax + 1, 0.0);
  for (std::size_t i = 0; i < g.node_count(); ++i)
    tot[p.assignment[i]] += deg[i];
  for (const auto& e : g.edges)
    if (p.assignment[e.u] == p.assignment[e.v])
      in2[p.assignment[e.u]] += 2.0 * (weighted ? e.weight : 1.0);

  double q = 0.0;
  for (int c = 0; c <= cmax; ++c) {
    double frac = tot[c] / (2.0 * m);
    q += in2[c] / (2.0 * m) - frac * frac;
  }
  return q;
}

inline Partition singleton_partition(const CoGraph& g, bool weighted = false) {
  Partition p;
  p.assignment.resize(g.node_count());
  std::iota(p.assignment.begin(), p.assignment.end(), 0);
  p.community_count = static_cast<int>(g.node_count());
  p.q = modularity(g, p, weighted);
  return p;
}

struct LouvainOptions {
  int max_passes = 10;
  bool weighted = false;
  /// When set, receives the exact modularity gain of every accepted phase-1
  /// move (all strictly positive; their sum bridges singleton Q to final Q).
  std::vector<double>* move_gains = nullptr;
};

namespace detail {

// Aggregated working graph for Louvain levels. Self-loops appear once in m
// and twice in the degree, keeping the modularity identities intact.
struct LevelGraph {
  std::size_t n = 0;
  double m = 0.0;
  std::vector<std::vector<std::pair<std::size_t, double>>> adj;  // no self
  std::vector<double> self_loop;
  std::vector<double> degree;
};

inline LevelGraph level_from_cograph(const CoGraph& g, bool weighted) {
  LevelGraph lv;
  lv.n = g.node_count();
  lv.adj.resize(lv.n);
  lv.self_loop.assign(lv.n, 0.0);
  lv.degree.assign(lv.n, 0.0);
  for (const auto& e : g.edges) {
    double w = weighted ? static_cast<double>(e.weight) : 1.0;
    lv.adj[e.u].emplace_back(e.v, w);
    lv.adj[e.v].emplace_back(e.u, w);
    lv.degree[e.u] += w;
    lv.degree[e.v] += w;
    lv.m += w;
  }
  return lv;
}

/// Phase 1: repeated sweeps in ascending node order, each node moving to the
/// neighboring community with the largest strictly positive gain. Gains are
/// the standard telescoped form k_i,in - tot_C * k_i / (2m); ties keep the
/// lowest community id, and a move must beat staying put by 1e-12 so every
/// accepted move strictly increases Q and the sweep loop terminates.
inline bool one_level(const LevelGraph& lv, std::vector<int>& comm,
                      std::vector<double>* move_gains) {
  constexpr double kEps = 1e-12;
  comm.resize(lv.n);
  std::iota(comm.begin(), comm.end(), 0);
  std::vector<double> sigma_tot(lv.degree);

  bool any_move = false;
  std::size_t moves = 1;
  while (moves > 0) {
    moves = 0;
    for (std::size_t i = 0; i < lv.n; ++i) {
      int c_old = comm[i];
      std::map<int, double> w_to;
      for (const auto& [j, w] : lv.adj[i]) w_to[comm[j]] += w;

      sigma_tot[c_old] -= lv.degree[i];
      double link_old = 0.0;
      if (auto it = w_to.find(c_old); it != w_to.end()) link_old = it->second;
      double stay_gain =
          link_old - sigma_tot[c_old] * lv.degree[i] / (2.0 * lv.m);

      int best = c_old;
      double best_gain = stay_gain;
      for (const auto& [c, w] : w_to) {
        if (c == c_old) continue;
        double gain = w - sigma_tot[c] * lv.degree[i] / (2.0 * lv.m);
        if (gain > best_gain + kEps) {
          best = c;
          best_gain = gain;
        }
      }
      sigma_tot[best] += lv.degree[i];
      comm[i] = best;
      if (best != c_old) {
        ++moves;
        any_move = true;
        if (move_gains)
          move_gains->push_back((best_gain - stay_gain) / lv.m);
      }
    }
  }
  return any_move;
}

/// Phase 2: collapse communities into super-nodes; intra-community weight
/// becomes self-loop weight. `comm` must hold dense 0-based ids.
inline LevelGraph aggregate(const LevelGraph& lv, const std::vector<int>& comm,
                            int count) {
  LevelGraph agg;
  agg.n = static_cast<std::size_t>(count);
  agg.m = lv.m;
  agg.self_loop.assign(agg.n, 0.0);
  agg.degree.assign(agg.n, 0.0);
  std::map<std::pair<int, int>, double> between;
  for (std::size_t i = 0; i < lv.n; ++i) {
    agg.self_loop[comm[i]] += lv.self_loop[i];
    for (const auto& [j, w] : lv.adj[i]) {
      if (j < i) continue;  // each undirected pair once
      int a = comm[i], b = comm[j];
      if (a == b)
        agg.self_loop[a] += w;
      else
        between[std::minmax(a, b)] += w;
    }
  }
  agg.adj.resize(agg.n);
  for (const auto& [pair, w] : between) {
    agg.adj[pair.first].emplace_back(pair.second, w);
    agg.adj[pair.second].emplace_back(pair.first, w);
    agg.degree[pair.first] += w;
    agg.degree[pair.second] += w;
  }
  for (std::size_t c = 0; c < agg.n; ++c)
    agg.degree[c] += 2.0 * agg.self_loop[c];
  return agg;
}

inline int renumber_dense(std::vector<int>& comm) {
  std::map<int, int> remap;
  for (auto& c : comm) {
    auto [it, inserted] = remap.emplace(c, static_cast<int>(remap.size()));
    c = it->second;
  }
  return static_cast<int>(remap.size());
}

}  // namespace detail

/// Louvain community detection: local moves (ascending node order, hence
/// ascending canonical order on the input graph) followed by community
/// aggregation, repeated until a full pass yields no gain or max_passes is
/// reached. Fully deterministic.
inline Partition louvain(const CoGraph& g, const LouvainOptions& opts = {}) {
  if (g.edge_count() == 0)
    throw AnalysisError("louvain requires a graph with at least one edge");

  auto level = detail::level_from_cograph(g, opts.weighted);
  std::vector<int> global(g.node_count());
  std::iota(global.begin(), global.end(), 0);

  for (int pass = 0; pass < opts.max_passes; ++pass) {
    std::vector<int> comm;
    bool improved = detail::one_level(level, comm, opts.move_gains);
    if (!improved) break;
    int count = detail::renumber_dense(comm);
    for (auto& c : global) c = comm[c];
    if (static_cast<std::size_t>(count) == level.n) break;
    level = detail::aggregate(level, comm, count);
  }

  Partition p;
  p.assignment = std::move(global);
  normalize_partition(p);
  p.q = modularity(g, p, opts.weighted);
  return p;
}

inline Partition louvain(const CoGraph& g, int max_passes) {
  LouvainOptions opts;
  opts.max_passes = max_passes;
  return louvain(g, opts);
}

/// Exhaustive search over all set partitions (restricted growth strings, so
/// each partition is visited once, in lexicographic order). Ties keep the
/// lexicographically smallest assignment. Test oracle; refuses n > 10.
inline Partition brute_force_best_partition(const CoGraph& g,
                                            bool weighted = false) {
  if (g.node_count() > 10)
    throw AnalysisError("brute_force_best_partition is limited to 10 nodes");
  if (g.edge_count() == 0)
    throw AnalysisError("modularity is undefined on an edgeless graph");

  std::size_t n = g.node_count();
  Partition best;
  bool have_best = false;

  Partition candidate;
  candidate.assignment.assign(n, 0);

  auto evaluate = [&] {
    candidate.community_count =
        1 + *std::max_element(candidate.assignment.begin(),
                              candidate.assignment.end());
    double q = modularity(g, candidate, weighted);
    if (!have_best || q > best.q) {
      best = candidate;
      best.q = q;
      have_best = true;
    }
  };

  // iterative restricted-growth-string enumeration
  std::vector<int> max_prefix(n, 0);
  std::size_t i = 0;
  while (true) {
    if (i == n) {
      evaluate();
      // backtrack to the rightmost position that can still grow
      while (i > 0) {
        --i;
        int limit = i == 0 ? 0 : max_prefix[i - 1] + 1;
        if (candidate.assignment[i] < limit) break;
      }
      if (i == 0) break;  // assignment[0] is fixed at 0
      ++candidate.assignment[i];
      max_prefix[i] = std::max(i == 0 ? 0 : max_prefix[i - 1],
                               candidate.assignment[i]);
      ++i;
      continue;
    }
    candidate.assignment[i] = 0;
    max_prefix[i] = i == 0 ? 0 : max_prefix[i - 1];
    ++i;
  }
  return best;
}

inline std::string partition_csv(const CoGraph& g, const Partition& p) {
  std::string out = "canonical,community\n";
  for (std::size_t i = 0; i < g.node_count(); ++i)
    out += csv_row({g.nodes[i].canonical, std::to_string(p.assignment[i])});
  return out;
}

/// Graph export with community ids attached as node attributes.
inline std::string export_graph(const CoGraph& g, const Partition& p,
                                GraphFormat format) {
  return export_graph(g, format, &p.assignment);
}

}  // namespace miner

#endif  // MINER_COMMUNITY_HPP
