#ifndef MINER_REPORT_HPP
#define MINER_REPORT_HPP

#include <ctime>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "miner/community.hpp"
#include "miner/corpus.hpp"
#include "miner/errors.hpp"
#include "miner/gazetteer.hpp"
#include "miner/graph.hpp"
#include "miner/schema.hpp"
#include "miner/svg.hpp"
#include "miner/textproc.hpp"
#include "miner/tones.hpp"
#include "miner/util.hpp"
#include "miner/version.hpp"

namespace miner {

/// Shipped at schema/report.schema.json; a test keeps the two in sync.
inline constexpr const char* kReportSchemaJson = R"SCHEMA({
  "$schema": "http://json-schema.org/draft-07/schema#",
  "title": "narrative-miner corpus report",
  "type": "object",
  "required": ["tool", "generated_at", "config", "sections"],
  "additionalProperties": false,
  "properties": {
    "tool": {
      "type": "object",
      "required": ["name", "version"],
      "additionalProperties": false,
      "properties": {
        "name": {"const": "narrative-miner"},
        "version": {"type": "string"}
      }
    },
    "generated_at": {"type": "string"},
    "config": {
      "type": "object",
      "required": ["corpus", "gazetteer", "lexicon", "stopwords", "freq_top",
                   "cloud_top", "tone_threshold", "seed", "weighted"],
      "additionalProperties": false,
      "properties": {
        "corpus": {"type": "string"},
        "gazetteer": {"type": ["string", "null"]},
        "lexicon": {"type": ["string", "null"]},
        "stopwords": {"type": ["string", "null"]},
        "freq_top": {"type": "integer", "minimum": 1},
        "cloud_top": {"type": "integer", "minimum": 1},
        "tone_threshold": {"type": "number"},
        "seed": {"type": "integer", "minimum": 0},
        "weighted": {"type": "boolean"}
      }
    },
    "sections": {
      "type": "object",
      "required": ["stats", "frequencies", "network", "communities", "tones"],
      "additionalProperties": false,
      "properties": {
        "stats": {
          "oneOf": [
            {"$comment": "skipped", "type": "object",
             "required": ["status", "reason"], "additionalProperties": false,
             "properties": {"status": {"const": "skipped"},
                            "reason": {"type": "string"}}},
            {"type": "object",
             "required": ["status", "story_count", "participant_count",
                          "age_min", "age_max", "duration_min",
                          "duration_median", "duration_max", "roles",
                          "cities"],
             "additionalProperties": false,
             "properties": {
               "status": {"const": "ok"},
               "story_count": {"type": "integer", "minimum": 1},
               "participant_count": {"type": "integer", "minimum": 1},
               "age_min": {"type": ["integer", "null"]},
               "age_max": {"type": ["integer", "null"]},
               "duration_min": {"type": "number", "minimum": 0},
               "duration_median": {"type": "number", "minimum": 0},
               "duration_max": {"type": "number", "minimum": 0},
               "roles": {"type": "object"},
               "cities": {"type": "object"}
             }}
          ]
        },
        "frequencies": {
          "oneOf": [
            {"type": "object",
             "required": ["status", "reason"], "additionalProperties": false,
             "properties": {"status": {"const": "skipped"},
                            "reason": {"type": "string"}}},
            {"type": "object",
             "required": ["status", "distinct_terms", "top_terms",
                          "cloud_terms"],
             "additionalProperties": false,
             "properties": {
               "status": {"const": "ok"},
               "distinct_terms": {"type": "integer", "minimum": 0},
               "top_terms": {
                 "type": "array",
                 "items": {"type": "object",
                           "required": ["term", "count"],
                           "additionalProperties": false,
                           "properties": {"term": {"type": "string"},
                                          "count": {"type": "integer",
                                                    "minimum": 1}}}},
               "cloud_terms": {
                 "type": "array",
                 "items": {"type": "object",
                           "required": ["term", "count"],
                           "additionalProperties": false,
                           "properties": {"term": {"type": "string"},
                                          "count": {"type": "integer",
                                                    "minimum": 1}}}}
             }}
          ]
        },
        "network": {
          "oneOf": [
            {"type": "object",
             "required": ["status", "reason"], "additionalProperties": false,
             "properties": {"status": {"const": "skipped"},
                            "reason": {"type": "string"}}},
            {"type": "object",
             "required": ["status", "nodes", "edges", "average_degree",
                          "ranking"],
             "additionalProperties": false,
             "properties": {
               "status": {"const": "ok"},
               "nodes": {"type": "integer", "minimum": 1},
               "edges": {"type": "integer", "minimum": 0},
               "average_degree": {"type": "string"},
               "ranking": {
                 "type": "array",
                 "items": {"type": "object",
                           "required": ["entity", "centrality"],
                           "additionalProperties": false,
                           "properties": {"entity": {"type": "string"},
                                          "centrality": {"type": "string"}}}}
             }}
          ]
        },
        "communities": {
          "oneOf": [
            {"type": "object",
             "required": ["status", "reason"], "additionalProperties": false,
             "properties": {"status": {"const": "skipped"},
                            "reason": {"type": "string"}}},
            {"type": "object",
             "required": ["status", "count", "modularity", "communities"],
             "additionalProperties": false,
             "properties": {
               "status": {"const": "ok"},
               "count": {"type": "integer", "minimum": 1},
               "modularity": {"type": "string"},
               "communities": {
                 "type": "array",
                 "minItems": 1,
                 "items": {"type": "object",
                           "required": ["id", "members"],
                           "additionalProperties": false,
                           "properties": {
                             "id": {"type": "integer", "minimum": 0},
                             "members": {"type": "array", "minItems": 1,
                                         "items": {"type": "string"}}}}}
             }}
          ]
        },
        "tones": {
          "oneOf": [
            {"type": "object",
             "required": ["status", "reason"], "additionalProperties": false,
             "properties": {"status": {"const": "skipped"},
                            "reason": {"type": "string"}}},
            {"type": "object",
             "required": ["status", "stories", "total", "counts",
                          "sentence_total", "sentence_counts", "dominant"],
             "additionalProperties": false,
             "properties": {
               "status": {"const": "ok"},
               "stories": {"type": "integer", "minimum": 0},
               "total": {"type": "integer", "minimum": 0},
               "counts": {"type": "object"},
               "sentence_total": {"type": "integer", "minimum": 0},
               "sentence_counts": {"type": "object"},
               "dominant": {"type": "object"}
             }}
          ]
        }
      }
    }
  }
})SCHEMA";

inline const nlohmann::json& report_schema() {
  static const nlohmann::json schema = nlohmann::json::parse(kReportSchemaJson);
  return schema;
}

struct ReportConfigEcho {
  std::string corpus;
  std::optional<std::string> gazetteer;
  std::optional<std::string> lexicon;
  std::optional<std::string> stopwords;
  std::size_t freq_top = 20;
  std::size_t cloud_top = 200;
  double tone_threshold = 0.05;
  std::uint32_t seed = 42;
  bool weighted = false;
};

/// A section is either a value or a skip reason; build_report_json refuses
/// to run when every section is skipped.
struct ReportInputs {
  ReportConfigEcho config;
  std::string generated_at;  // empty means "now" (UTC, second resolution)

  std::optional<CorpusStats> stats;
  std::string stats_skip = "not requested";
  std::optional<FrequencyTable> frequencies;
  std::string frequencies_skip = "not requested";
  std::optional<CoGraph> graph;
  std::string graph_skip = "not requested";
  std::optional<Partition> communities;
  std::string communities_skip = "not requested";
  std::optional<std::vector<ToneProfile>> tones;
  std::string tones_skip = "not requested";
};

namespace detail {

inline std::string utc_now_iso8601() {
  std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

inline nlohmann::ordered_json skipped_section(const std::string& reason) {
  nlohmann::ordered_json j;
  j["status"] = "skipped";
  j["reason"] = reason.empty() ? "not requested" : reason;
  return j;
}

inline nlohmann::ordered_json term_array(
    const std::vector<std::pair<std::string, std::size_t>>& entries) {
  auto arr = nlohmann::ordered_json::array();
  for (const auto& [term, count] : entries)
    arr.push_back({{"term", term}, {"count", count}});
  return arr;
}

}  // namespace detail

inline nlohmann::ordered_json build_report_json(const ReportInputs& in) {
  if (!in.stats && !in.frequencies && !in.graph && !in.communities &&
      !in.tones)
    throw AnalysisError("report needs at least one analysis section");
  if (in.communities && !in.graph)
    throw AnalysisError("community section requires the graph section");

  nlohmann::ordered_json j;
  j["tool"] = {{"name", kToolName}, {"version", kToolVersion}};
  j["generated_at"] = in.generated_at.empty() ? detail::utc_now_iso8601()
                                              : in.generated_at;

  nlohmann::ordered_json cfg;
  cfg["corpus"] = in.config.corpus;
  cfg["gazetteer"] = in.config.gazetteer
                         ? nlohmann::ordered_json(*in.config.gazetteer)
                         : nlohmann::ordered_json(nullptr);
  cfg["lexicon"] = in.config.lexicon
                       ? nlohmann::ordered_json(*in.config.lexicon)
                       : nlohmann::ordered_json(nullptr);
  cfg["stopwords"] = in.config.stopwords
                         ? nlohmann::ordered_json(*in.config.stopwords)
                         : nlohmann::ordered_json(nullptr);
  cfg["freq_top"] = in.config.freq_top;
  cfg["cloud_top"] = in.config.cloud_top;
  cfg["tone_threshold"] = in.config.tone_threshold;
  cfg["seed"] = in.config.seed;
  cfg["weighted"] = in.config.weighted;
  j["config"] = std::move(cfg);

  nlohmann::ordered_json sections;

  if (in.stats) {
    nlohmann::ordered_json s;
    s["status"] = "ok";
    auto stats_json = stats_to_json(*in.stats);
    for (auto& [key, value] : stats_json.items()) s[key] = value;
    sections["stats"] = std::move(s);
  } else {
    sections["stats"] = detail::skipped_section(in.stats_skip);
  }

  if (in.frequencies) {
    nlohmann::ordered_json s;
    s["status"] = "ok";
    s["distinct_terms"] = in.frequencies->entries.size();
    s["top_terms"] =
        detail::term_array(top_n(*in.frequencies, in.config.freq_top).entries);
    s["cloud_terms"] =
        detail::term_array(top_n(*in.frequencies, in.config.cloud_top).entries);
    sections["frequencies"] = std::move(s);
  } else {
    sections["frequencies"] = detail::skipped_section(in.frequencies_skip);
  }

  if (in.graph) {
    const auto& g = *in.graph;
    nlohmann::ordered_json s;
    s["status"] = "ok";
    s["nodes"] = g.node_count();
    s["edges"] = g.edge_count();
    s["average_degree"] = format_fixed(average_degree(g), 2);
    auto ranking = nlohmann::ordered_json::array();
    if (g.node_count() >= 2)
      for (const auto& entry : centrality_ranking(g, g.node_count()))
        ranking.push_back({{"entity", entry.canonical},
                           {"centrality", format_fixed(entry.centrality, 4)}});
    s["ranking"] = std::move(ranking);
    sections["network"] = std::move(s);
  } else {
    sections["network"] = detail::skipped_section(in.graph_skip);
  }

  if (in.communities) {
    const auto& p = *in.communities;
    if (p.assignment.size() != in.graph->nodes.size())
      throw AnalysisError("community assignment does not match the graph");
    nlohmann::ordered_json s;
    s["status"] = "ok";
    s["count"] = p.community_count;
    s["modularity"] = format_fixed(p.q, 4);
    std::vector<std::vector<std::string>> members(p.community_count);
    for (std::size_t i = 0; i < p.assignment.size(); ++i)
      members[static_cast<std::size_t>(p.assignment[i])].push_back(
          in.graph->nodes[i].canonical);
    auto arr = nlohmann::ordered_json::array();
    for (std::size_t c = 0; c < members.size(); ++c)
      arr.push_back({{"id", c}, {"members", members[c]}});
    s["communities"] = std::move(arr);
    sections["communities"] = std::move(s);
  } else {
    sections["communities"] = detail::skipped_section(in.communities_skip);
  }

  if (in.tones) {
    const auto& profiles = *in.tones;
    auto agg = aggregate_tones(profiles);
    auto sent = aggregate_sentence_tones(profiles);
    nlohmann::ordered_json s;
    s["status"] = "ok";
    s["stories"] = profiles.size();
    s["total"] = agg.total;
    nlohmann::ordered_json counts, sentence_counts, dominant;
    std::array<std::size_t, kToneCount> dom{};
    for (const auto& p : profiles)
      if (auto d = p.dominant()) ++dom[static_cast<std::size_t>(*d)];
    for (Tone t : all_tones()) {
      counts[tone_name(t)] = agg.count_of(t);
      sentence_counts[tone_name(t)] = sent.count_of(t);
      dominant[tone_name(t)] = dom[static_cast<std::size_t>(t)];
    }
    s["counts"] = std::move(counts);
    s["sentence_total"] = sent.total;
    s["sentence_counts"] = std::move(sentence_counts);
    s["dominant"] = std::move(dominant);
    sections["tones"] = std::move(s);
  } else {
    sections["tones"] = detail::skipped_section(in.tones_skip);
  }

  j["sections"] = std::move(sections);

  auto errors = schema_validate(report_schema(), j);
  if (!errors.empty()) {
    std::string msg = "generated report does not match its schema:";
    for (const auto& e : errors) msg += "\n  " + e;
    throw AnalysisError(msg);
  }
  return j;
}

inline std::string render_report_text(const nlohmann::ordered_json& report) {
  std::string out;
  out += report["tool"]["name"].get<std::string>() + " " +
         report["tool"]["version"].get<std::string>() + " report\n";
  out += "generated: " + report["generated_at"].get<std::string>() + "\n";

  const auto& sections = report["sections"];
  auto status_of = [&](const char* name) {
    return sections[name]["status"].get<std::string>();
  };

  if (status_of("stats") == "ok") {
    const auto& s = sections["stats"];
    out += "corpus: " + std::to_string(s["story_count"].get<std::size_t>()) +
           " stories from " +
           std::to_string(s["participant_count"].get<std::size_t>()) +
           " participants";
    if (!s["age_min"].is_null())
      out += ", ages " + std::to_string(s["age_min"].get<int>()) + "-" +
             std::to_string(s["age_max"].get<int>());
    out += ", durations " + format_fixed(s["duration_min"].get<double>(), 1) +
           "-" + format_fixed(s["duration_max"].get<double>(), 1) +
           " min (median " +
           format_fixed(s["duration_median"].get<double>(), 1) + ")\n";
  } else {
    out += "corpus: skipped (" + sections["stats"]["reason"].get<std::string>() +
           ")\n";
  }

  if (status_of("frequencies") == "ok") {
    const auto& s = sections["frequencies"];
    out += "terms: " + std::to_string(s["distinct_terms"].get<std::size_t>()) +
           " distinct";
    std::size_t shown = 0;
    for (const auto& e : s["top_terms"]) {
      out += shown == 0 ? "; top: " : ", ";
      out += e["term"].get<std::string>() + " (" +
             std::to_string(e["count"].get<std::size_t>()) + ")";
      if (++shown == 5) break;
    }
    out += "\n";
  } else {
    out += "terms: skipped (" +
           sections["frequencies"]["reason"].get<std::string>() + ")\n";
  }

  if (status_of("network") == "ok") {
    const auto& s = sections["network"];
    out += "network: " + std::to_string(s["nodes"].get<std::size_t>()) +
           " entities, " + std::to_string(s["edges"].get<std::size_t>()) +
           " edges, average degree " +
           s["average_degree"].get<std::string>() + "\n";
    std::size_t shown = 0;
    for (const auto& e : s["ranking"]) {
      out += shown == 0 ? "central: " : ", ";
      out += e["entity"].get<std::string>() + " " +
             e["centrality"].get<std::string>();
      if (++shown == 5) break;
    }
    if (shown) out += "\n";
  } else {
    out += "network: skipped (" +
           sections["network"]["reason"].get<std::string>() + ")\n";
  }

  if (status_of("communities") == "ok") {
    const auto& s = sections["communities"];
    out += "communities: " + std::to_string(s["count"].get<std::size_t>()) +
           " (modularity " + s["modularity"].get<std::string>() + ")\n";
  } else {
    out += "communities: skipped (" +
           sections["communities"]["reason"].get<std::string>() + ")\n";
  }

  if (status_of("tones") == "ok") {
    const auto& s = sections["tones"];
    out += "tones: " + std::to_string(s["total"].get<std::size_t>()) +
           " present across " +
           std::to_string(s["stories"].get<std::size_t>()) + " stories";
    std::size_t shown = 0;
    for (const auto& [name, count] : s["dominant"].items()) {
      if (count.get<std::size_t>() == 0) continue;
      out += shown == 0 ? "; dominant: " : ", ";
      out += name + " " + std::to_string(count.get<std::size_t>());
      ++shown;
    }
    out += "\n";
  } else {
    out += "tones: skipped (" +
           sections["tones"]["reason"].get<std::string>() + ")\n";
  }
  return out;
}

// ---------------------------------------------------------------------------
// full pipeline, shared by the report subcommand and the end-to-end tests

struct ReportPipelineOptions {
  std::filesystem::path corpus_path;
  std::optional<std::filesystem::path> gazetteer_path;
  std::optional<std::filesystem::path> lexicon_path;
  std::optional<std::filesystem::path> stopwords_path;
  std::filesystem::path out_dir;
  std::size_t freq_top = 20;
  std::size_t cloud_top = 200;
  double tone_threshold = 0.05;
  std::uint32_t seed = 42;
  bool weighted = false;
  std::string generated_at;  // override for determinism tests
};

struct ReportPipelineResult {
  nlohmann::ordered_json report;
  std::filesystem::path report_path;
  std::vector<std::filesystem::path> figures;
};

inline ReportPipelineResult run_report_pipeline(
    const ReportPipelineOptions& opt) {
  Corpus corpus = load_corpus_any(opt.corpus_path);

  ReportInputs in;
  in.generated_at = opt.generated_at;
  in.config.corpus = opt.corpus_path.string();
  in.config.freq_top = opt.freq_top;
  in.config.cloud_top = opt.cloud_top;
  in.config.tone_threshold = opt.tone_threshold;
  in.config.seed = opt.seed;
  in.config.weighted = opt.weighted;
  if (opt.gazetteer_path) in.config.gazetteer = opt.gazetteer_path->string();
  if (opt.lexicon_path) in.config.lexicon = opt.lexicon_path->string();
  in.config.stopwords =
      opt.stopwords_path ? opt.stopwords_path->string() : "builtin:english";

  in.stats = corpus_stats(corpus);

  Stoplist stoplist = opt.stopwords_path ? load_stopwords(*opt.stopwords_path)
                                         : builtin_english_stopwords();
  in.frequencies = term_frequencies(corpus, stoplist);

  if (opt.gazetteer_path) {
    auto gazetteer = load_gazetteer(*opt.gazetteer_path);
    auto sets = story_entity_sets(corpus, gazetteer);
    auto g = build_cooccurrence_graph(sets);
    if (g.nodes.empty()) {
      in.graph_skip = "no gazetteer entities appear in the corpus";
      in.communities_skip = in.graph_skip;
    } else {
      if (g.edges.empty()) {
        in.communities_skip = "graph has no edges";
      } else {
        LouvainOptions lopt;
        lopt.weighted = opt.weighted;
        in.communities = louvain(g, lopt);
      }
      in.graph = std::move(g);
    }
  } else {
    in.graph_skip = "no gazetteer provided";
    in.communities_skip = "no gazetteer provided";
  }

  if (opt.lexicon_path) {
    auto lexicon = load_lexicon(*opt.lexicon_path);
    std::vector<ToneProfile> profiles;
    profiles.reserve(corpus.stories.size());
    for (const auto& story : corpus.stories)
      profiles.push_back(score_story(tokenize_story(story.story_id, story.text),
                                     lexicon, opt.tone_threshold, stoplist));
    in.tones = std::move(profiles);
  } else {
    in.tones_skip = "no lexicon provided";
  }

  auto report = build_report_json(in);

  std::filesystem::create_directories(opt.out_dir);
  ReportPipelineResult result;
  result.report = report;

  auto write_file = [](const std::filesystem::path& path,
                       const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out << content;
  };

  if (!in.frequencies->entries.empty()) {
    auto p = opt.out_dir / "frequencies.svg";
    write_file(p, render_frequency_svg(*in.frequencies, opt.freq_top));
    result.figures.push_back(p);
    p = opt.out_dir / "wordcloud.svg";
    write_file(p, render_wordcloud_svg(*in.frequencies, opt.cloud_top,
                                       opt.seed));
    result.figures.push_back(p);
  }
  if (in.graph) {
    auto p = opt.out_dir / "network.svg";
    write_file(p, render_network_svg(*in.graph,
                                     in.communities ? &*in.communities
                                                    : nullptr,
                                     opt.seed));
    result.figures.push_back(p);
  }

  result.report_path = opt.out_dir / "report.json";
  write_file(result.report_path, report.dump(2) + "\n");
  return result;
}

}  // namespace miner

#endif  // MINER_REPORT_HPP
