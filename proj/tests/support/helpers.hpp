#ifndef MINER_TEST_HELPERS_HPP
#define MINER_TEST_HELPERS_HPP

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "miner/corpus.hpp"
#include "miner/gazetteer.hpp"
#include "miner/graph.hpp"
#include "miner/textproc.hpp"

namespace testing_support {

/// Self-cleaning scratch directory under the system temp dir.
class TempDir {
 public:
  TempDir() {
    static std::mt19937_64 rng{std::random_device{}()};
    auto base = std::filesystem::temp_directory_path();
    for (int attempt = 0; attempt < 64; ++attempt) {
      auto candidate = base / ("miner-test-" + std::to_string(rng()));
      std::error_code ec;
      if (std::filesystem::create_directory(candidate, ec)) {
        path_ = candidate;
        return;
      }
    }
    throw std::runtime_error("cannot create scratch directory");
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path file(const std::string& name) const {
    return path_ / name;
  }

 private:
  std::filesystem::path path_;
};

inline std::filesystem::path write_file(const std::filesystem::path& path,
                                        const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
  return path;
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::string out((std::istreambuf_iterator<char>(in)),
                  std::istreambuf_iterator<char>());
  return out;
}

inline std::filesystem::path data_file(const std::string& name) {
  return std::filesystem::path(MINER_SOURCE_DIR) / "data" / name;
}

// ---------------------------------------------------------------------------
// random fixtures

inline const std::vector<std::string>& vocabulary() {
  static const std::vector<std::string> words = {
      "march",  "street", "crowd",  "police", "night",  "students",
      "smoke",  "water",  "home",   "school", "friend", "mother",
      "city",   "flag",   "song",   "stone",  "gate",   "morning",
      "bridge", "river",  "market", "phone",  "news",   "door"};
  return words;
}

inline miner::Corpus random_corpus(std::mt19937& rng, std::size_t max_stories,
                                   std::size_t max_words_per_story) {
  std::uniform_int_distribution<std::size_t> story_count(1, max_stories);
  std::uniform_int_distribution<std::size_t> word_count(1,
                                                        max_words_per_story);
  std::uniform_int_distribution<std::size_t> word(0, vocabulary().size() - 1);
  std::uniform_real_distribution<double> duration(0.5, 6.0);

  miner::Corpus corpus;
  miner::Participant p;
  p.participant_id = "p1";
  p.role = miner::Role::other;
  p.city = "Dhaka";
  corpus.participants.push_back(p);

  std::size_t n = story_count(rng);
  for (std::size_t i = 0; i < n; ++i) {
    miner::Story s;
    s.story_id = "s" + std::to_string(i + 1);
    s.participant_id = "p1";
    s.city = "Dhaka";
    s.duration_minutes = duration(rng);
    std::size_t w = word_count(rng);
    for (std::size_t j = 0; j < w; ++j) {
      if (j) s.text += ' ';
      s.text += vocabulary()[word(rng)];
    }
    s.text += '.';
    corpus.stories.push_back(std::move(s));
  }
  return corpus;
}

/// Independent frequency oracle: its own token walk (whitespace/period split
/// over the lowercase-ASCII fixture text), its own map, its own sort.
inline std::vector<std::pair<std::string, std::size_t>> frequency_oracle(
    const miner::Corpus& corpus, const miner::Stoplist& stoplist) {
  std::map<std::string, std::size_t> counts;
  for (const auto& story : corpus.stories) {
    std::string word;
    auto flush = [&] {
      if (!word.empty() && !stoplist.count(word)) ++counts[word];
      word.clear();
    };
    for (char c : story.text) {
      if (c == ' ' || c == '.' || c == '\n')
        flush();
      else
        word.push_back(static_cast<char>(std::tolower(
            static_cast<unsigned char>(c))));
    }
    flush();
  }
  std::vector<std::pair<std::string, std::size_t>> rows(counts.begin(),
                                                        counts.end());
  std::stable_sort(rows.begin(), rows.end(),
                   [](const auto& a, const auto& b) {
                     if (a.second != b.second) return a.second > b.second;
                     return a.first < b.first;
                   });
  return rows;
}

/// Random per-story entity sets over entities e1..e<max_entities>.
inline miner::StoryEntitySets random_entity_sets(std::mt19937& rng,
                                                 std::size_t max_stories,
                                                 std::size_t max_entities) {
  std::uniform_int_distribution<std::size_t> story_count(1, max_stories);
  std::uniform_int_distribution<int> coin(0, 2);
  miner::StoryEntitySets sets;
  std::size_t n = story_count(rng);
  for (std::size_t i = 0; i < n; ++i) {
    std::set<miner::Entity> entities;
    for (std::size_t e = 0; e < max_entities; ++e)
      if (coin(rng) == 0)
        entities.insert({"e" + std::to_string(e + 1),
                         miner::EntityKind::location});
    sets["s" + std::to_string(i + 1)] = std::move(entities);
  }
  return sets;
}

/// All-pairs co-occurrence oracle keyed by canonical names.
struct OracleEdge {
  std::string u, v;
  std::size_t weight;
  bool operator==(const OracleEdge&) const = default;
  auto operator<=>(const OracleEdge&) const = default;
};

inline std::vector<OracleEdge> cooccurrence_oracle(
    const miner::StoryEntitySets& sets) {
  std::map<std::pair<std::string, std::string>, std::size_t> weights;
  for (const auto& [story_id, entities] : sets) {
    std::vector<std::string> names;
    for (const auto& e : entities) names.push_back(e.canonical);
    for (std::size_t a = 0; a < names.size(); ++a)
      for (std::size_t b = 0; b < names.size(); ++b)
        if (names[a] < names[b]) ++weights[{names[a], names[b]}];
  }
  std::vector<OracleEdge> edges;
  for (const auto& [pair, w] : weights)
    edges.push_back({pair.first, pair.second, w});
  std::sort(edges.begin(), edges.end());
  return edges;
}

/// Seeded G(n, p)-style graph with weights in 1..3.
inline miner::CoGraph random_graph(std::mt19937& rng, std::size_t max_nodes,
                                   double edge_prob) {
  std::uniform_int_distribution<std::size_t> node_count(2, max_nodes);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  std::uniform_int_distribution<std::size_t> weight(1, 3);

  miner::CoGraph g;
  std::size_t n = node_count(rng);
  for (std::size_t i = 0; i < n; ++i) {
    char name[24];
    std::snprintf(name, sizeof name, "n%02zu", i);
    g.nodes.push_back({name, miner::EntityKind::location});
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (uniform(rng) < edge_prob) g.edges.push_back({i, j, weight(rng)});
  return g;
}

/// Ensures at least one edge so modularity is defined.
inline miner::CoGraph random_connected_ish_graph(std::mt19937& rng,
                                                 std::size_t max_nodes,
                                                 double edge_prob) {
  for (;;) {
    auto g = random_graph(rng, max_nodes, edge_prob);
    if (!g.edges.empty()) return g;
  }
}

/// Textbook double-loop modularity: dense adjacency matrix, all ordered
/// pairs. Deliberately ignorant of the library's per-community shortcut.
inline double modularity_oracle(const miner::CoGraph& g,
                                const std::vector<int>& assignment,
                                bool weighted) {
  std::size_t n = g.node_count();
  std::vector<std::vector<double>> a(n, std::vector<double>(n, 0.0));
  for (const auto& e : g.edges) {
    double w = weighted ? static_cast<double>(e.weight) : 1.0;
    a[e.u][e.v] += w;
    a[e.v][e.u] += w;
  }
  double two_m = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) two_m += a[i][j];
  std::vector<double> k(n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) k[i] += a[i][j];
  double q = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (assignment[i] != assignment[j]) continue;
      q += a[i][j] - k[i] * k[j] / two_m;
    }
  return q / two_m;
}

inline std::vector<int> random_assignment(std::mt19937& rng, std::size_t n) {
  std::uniform_int_distribution<int> comm(0, static_cast<int>(n) - 1);
  std::vector<int> assignment(n);
  for (auto& c : assignment) c = comm(rng);
  // densify so Partition's invariants hold
  std::map<int, int> remap;
  for (auto& c : assignment) {
    auto it = remap.find(c);
    if (it == remap.end())
      it = remap.emplace(c, static_cast<int>(remap.size())).first;
    c = it->second;
  }
  return assignment;
}

/// Bridge of triangles: two K3s joined by one edge, the standard louvain
/// smoke fixture.
inline miner::CoGraph bridge_of_triangles() {
  miner::CoGraph g;
  for (int i = 0; i < 6; ++i)
    g.nodes.push_back({"v" + std::to_string(i), miner::EntityKind::location});
  g.edges = {{0, 1, 1}, {0, 2, 1}, {1, 2, 1}, {2, 3, 1},
             {3, 4, 1}, {3, 5, 1}, {4, 5, 1}};
  return g;
}

inline miner::CoGraph two_triangles() {
  miner::CoGraph g;
  for (int i = 0; i < 6; ++i)
    g.nodes.push_back({"v" + std::to_string(i), miner::EntityKind::location});
  g.edges = {{0, 1, 1}, {0, 2, 1}, {1, 2, 1},
             {3, 4, 1}, {3, 5, 1}, {4, 5, 1}};
  return g;
}

/// 19 nodes, 21 edges, degree sequence topped by 8/5/4/4/3; matches the
/// shape the centrality tables expect.
inline miner::CoGraph table_one_graph() {
  miner::CoGraph g;
  const char* names[] = {"A", "B", "D", "E", "N",
                         "f01", "f02", "f03", "f04", "f05", "f06", "f07",
                         "f08", "f09", "f10", "f11", "f12", "f13", "f14"};
  for (const char* n : names)
    g.nodes.push_back({n, miner::EntityKind::location});
  auto idx = [&](const char* n) { return *g.node_index(n); };
  auto add = [&](const char* u, const char* v) {
    auto a = idx(u), b = idx(v);
    g.edges.push_back({std::min(a, b), std::max(a, b), 1});
  };
  // D: 8, A: 5, E: 4, B: 4, N: 3
  add("D", "A");
  add("D", "B");
  add("D", "E");
  add("D", "N");
  add("D", "f01");
  add("D", "f02");
  add("D", "f03");
  add("D", "f04");
  add("A", "E");
  add("A", "f05");
  add("A", "f06");
  add("A", "f07");
  add("E", "B");
  add("E", "f08");
  add("B", "N");
  add("B", "f09");
  add("N", "f10");
  add("f01", "f02");
  add("f03", "f04");
  add("f11", "f12");
  add("f13", "f14");
  std::sort(g.edges.begin(), g.edges.end(),
            [](const miner::CoEdge& x, const miner::CoEdge& y) {
              return std::pair(x.u, x.v) < std::pair(y.u, y.v);
            });
  return g;
}

}  // namespace testing_support

#endif  // MINER_TEST_HELPERS_HPP
