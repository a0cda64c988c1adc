// narrative-miner: batch text mining and graph analytics for short
// narrative corpora. See README.md for the workflow.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "miner/report.hpp"
#include "miner/tones_remote.hpp"

namespace {

using namespace miner;

void write_text_file(const std::filesystem::path& path,
                     const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << content;
  if (!out) throw IoError("short write to " + path.string());
}

std::optional<std::filesystem::path> opt_path(const std::string& s) {
  if (s.empty()) return std::nullopt;
  return std::filesystem::path(s);
}

Stoplist stoplist_for(const std::string& stopwords) {
  return stopwords.empty() ? builtin_english_stopwords()
                           : load_stopwords(stopwords);
}

void cmd_ingest(const std::string& input, const std::string& participants,
                const std::string& format, const std::string& out) {
  auto fmt = parse_corpus_format(format);
  if (!fmt) throw InputError("unknown format: " + format);
  auto result = ingest_corpus(input, opt_path(participants), *fmt);
  for (const auto& r : result.rejected)
    std::cerr << "rejected " << r.file << ":" << r.line << ": " << r.reason
              << "\n";
  write_corpus_json(result.corpus, out);
  std::cout << "accepted " << result.accepted << " stories ("
            << result.corpus.participants.size() << " participants), rejected "
            << result.rejected.size() << "\n";
  std::cout << "wrote " << out << "\n";
}

void cmd_stats(const std::string& corpus_path, bool as_json) {
  auto corpus = load_corpus_any(corpus_path);
  auto st = corpus_stats(corpus);
  if (as_json) {
    std::cout << stats_to_json(st).dump(2) << "\n";
    return;
  }
  std::cout << "stories: " << st.story_count << "\n";
  std::cout << "participants: " << st.participant_count << "\n";
  if (st.age_min)
    std::cout << "ages: " << *st.age_min << "-" << *st.age_max << "\n";
  else
    std::cout << "ages: unknown\n";
  std::cout << "duration minutes: min " << format_fixed(st.duration_min, 1)
            << ", median " << format_fixed(st.duration_median, 1) << ", max "
            << format_fixed(st.duration_max, 1) << "\n";
  std::cout << "roles:";
  for (const auto& [role, n] : st.role_histogram)
    std::cout << " " << role << "=" << n;
  std::cout << "\ncities:";
  for (const auto& [city, n] : st.city_histogram)
    std::cout << " " << city << "=" << n;
  std::cout << "\n";
}

void cmd_freq(const std::string& corpus_path, const std::string& stopwords,
              std::size_t top, const std::string& csv_out,
              const std::string& svg_out) {
  auto corpus = load_corpus_any(corpus_path);
  auto table = term_frequencies(corpus, stoplist_for(stopwords));
  auto head = top_n(table, top);
  if (!csv_out.empty()) write_text_file(csv_out, frequency_csv(head));
  if (!svg_out.empty()) write_text_file(svg_out, render_frequency_svg(table, top));
  for (const auto& [term, count] : head.entries)
    std::cout << term << " " << count << "\n";
}

void cmd_cloud(const std::string& corpus_path, std::size_t top,
               std::uint32_t seed, const std::string& svg_out) {
  auto corpus = load_corpus_any(corpus_path);
  auto table = term_frequencies(corpus, builtin_english_stopwords());
  write_text_file(svg_out, render_wordcloud_svg(table, top, seed));
  auto placed = layout_wordcloud(table, top, 900.0, 600.0, seed).size();
  std::cout << "placed " << placed << " of "
            << std::min(top, table.entries.size()) << " words into " << svg_out
            << "\n";
}

std::string mentions_csv(const Corpus& corpus, const Gazetteer& gazetteer) {
  std::string out = "story_id,canonical,kind,matched_alias,token_offset\n";
  for (const auto& story : corpus.stories) {
    auto ts = tokenize_story(story.story_id, story.text);
    for (const auto& m : extract_entities(ts, gazetteer))
      out += csv_row({m.story_id, m.canonical, entity_kind_name(m.kind),
                      m.matched_alias, std::to_string(m.token_offset)});
  }
  return out;
}

void cmd_entities(const std::string& corpus_path, const std::string& gaz_path,
                  const std::string& csv_out) {
  auto corpus = load_corpus_any(corpus_path);
  auto gazetteer = load_gazetteer(gaz_path);
  auto csv = mentions_csv(corpus, gazetteer);
  if (csv_out.empty())
    std::cout << csv;
  else {
    write_text_file(csv_out, csv);
    std::cout << "wrote " << csv_out << "\n";
  }
}

CoGraph graph_for(const std::string& corpus_path, const std::string& gaz_path) {
  auto corpus = load_corpus_any(corpus_path);
  auto gazetteer = load_gazetteer(gaz_path);
  return build_cooccurrence_graph(story_entity_sets(corpus, gazetteer));
}

void cmd_graph(const std::string& corpus_path, const std::string& gaz_path,
               const std::string& format, const std::string& out) {
  auto fmt = parse_graph_format(format);
  if (!fmt) throw InputError("unknown graph format: " + format);
  auto g = graph_for(corpus_path, gaz_path);
  write_text_file(out, export_graph(g, *fmt));
  std::cout << "wrote " << out << " (" << g.node_count() << " nodes, "
            << g.edge_count() << " edges)\n";
}

void cmd_communities(const std::string& corpus_path,
                     const std::string& gaz_path, bool weighted,
                     const std::string& csv_out) {
  auto g = graph_for(corpus_path, gaz_path);
  LouvainOptions opt;
  opt.weighted = weighted;
  auto partition = louvain(g, opt);
  auto csv = partition_csv(g, partition);
  if (csv_out.empty())
    std::cout << csv;
  else {
    write_text_file(csv_out, csv);
    std::cout << "wrote " << csv_out << "\n";
  }
  std::cerr << "communities: " << partition.community_count << ", modularity "
            << format_fixed(partition.q, 4) << "\n";
}

void cmd_tones(const std::string& corpus_path, const std::string& lexicon_path,
               double threshold, const std::string& stopwords,
               const std::string& remote, const std::string& csv_out) {
  auto corpus = load_corpus_any(corpus_path);

  std::vector<ToneProfile> profiles;
  std::string remote_endpoint = remote;
  std::string remote_token;
  if (remote_endpoint.empty()) {
    if (auto cfg = remote_config_from_env()) {
      remote_endpoint = cfg->endpoint;
      remote_token = cfg->token;
    }
  } else if (const char* tok = std::getenv("TONE_TOKEN")) {
    remote_token = tok;
  }

  if (!remote_endpoint.empty()) {
    RemoteConfig cfg;
    cfg.endpoint = remote_endpoint;
    cfg.token = remote_token;
    cfg.threshold = threshold;
    profiles = fetch_remote_tones_batch(corpus.stories, cfg);
  } else {
    if (lexicon_path.empty())
      throw InputError("tones needs --lexicon, or --remote/TONE_ENDPOINT");
    auto lexicon = load_lexicon(lexicon_path);
    auto stoplist = stoplist_for(stopwords);
    profiles.reserve(corpus.stories.size());
    for (const auto& story : corpus.stories)
      profiles.push_back(score_story(tokenize_story(story.story_id, story.text),
                                     lexicon, threshold, stoplist));
  }

  for (const auto& p : profiles)
    for (const auto& w : p.warnings)
      std::cerr << "warning: story " << p.story_id << ": " << w << "\n";

  auto csv = tones_csv(profiles);
  if (csv_out.empty())
    std::cout << csv;
  else {
    write_text_file(csv_out, csv);
    std::cout << "wrote " << csv_out << "\n";
  }
  auto agg = aggregate_tones(profiles);
  std::cerr << "present tones: " << agg.total << " across " << profiles.size()
            << " stories\n";
}

void cmd_report(const ReportPipelineOptions& opt) {
  auto result = run_report_pipeline(opt);
  std::cout << render_report_text(result.report);
  std::cout << "wrote " << result.report_path.string();
  for (const auto& f : result.figures) std::cout << ", " << f.string();
  std::cout << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"batch text mining and graph analytics for short narrative "
               "corpora"};
  app.set_version_flag("--version", std::string(miner::kToolName) + " " +
                                        miner::kToolVersion);
  app.require_subcommand(1);

  // ingest
  std::string in_input, in_participants, in_format = "jsonl", in_out;
  auto* ingest = app.add_subcommand(
      "ingest", "validate raw records and write a corpus document");
  ingest->add_option("--input", in_input, "stories file")->required();
  ingest->add_option("--participants", in_participants, "participants file");
  ingest->add_option("--format", in_format, "jsonl or csv")
      ->check(CLI::IsMember({"jsonl", "csv"}));
  ingest->add_option("--out", in_out, "output corpus document")->required();
  ingest->callback(
      [&] { cmd_ingest(in_input, in_participants, in_format, in_out); });

  // stats
  std::string st_corpus;
  bool st_json = false, st_text = false;
  auto* stats = app.add_subcommand("stats", "corpus summary statistics");
  stats->add_option("--corpus", st_corpus, "corpus document")->required();
  auto* st_json_flag = stats->add_flag("--json", st_json, "JSON output");
  stats->add_flag("--text", st_text, "text output (default)")
      ->excludes(st_json_flag);
  stats->callback([&] { cmd_stats(st_corpus, st_json); });

  // freq
  std::string fq_corpus, fq_stopwords, fq_csv, fq_svg;
  std::size_t fq_top = 20;
  auto* freq = app.add_subcommand("freq", "term frequency table");
  freq->add_option("--corpus", fq_corpus, "corpus document")->required();
  freq->add_option("--stopwords", fq_stopwords,
                   "stopword file (default: builtin English list)");
  freq->add_option("--top", fq_top, "rows to emit")
      ->check(CLI::Range(std::size_t{1}, std::size_t{1000000}));
  freq->add_option("--csv", fq_csv, "write rows as CSV");
  freq->add_option("--svg", fq_svg, "write a bar chart");
  freq->callback(
      [&] { cmd_freq(fq_corpus, fq_stopwords, fq_top, fq_csv, fq_svg); });

  // cloud
  std::string cl_corpus, cl_svg;
  std::size_t cl_top = 200;
  std::uint32_t cl_seed = 42;
  auto* cloud = app.add_subcommand("cloud", "word cloud figure");
  cloud->add_option("--corpus", cl_corpus, "corpus document")->required();
  cloud->add_option("--top", cl_top, "words to place")
      ->check(CLI::Range(std::size_t{1}, std::size_t{100000}));
  cloud->add_option("--seed", cl_seed, "layout seed");
  cloud->add_option("--svg", cl_svg, "output file")->required();
  cloud->callback([&] { cmd_cloud(cl_corpus, cl_top, cl_seed, cl_svg); });

  // entities
  std::string en_corpus, en_gaz, en_csv;
  auto* entities =
      app.add_subcommand("entities", "gazetteer mentions per story");
  entities->add_option("--corpus", en_corpus, "corpus document")->required();
  entities->add_option("--gazetteer", en_gaz, "gazetteer CSV")->required();
  entities->add_option("--csv", en_csv, "write mentions as CSV");
  entities->callback([&] { cmd_entities(en_corpus, en_gaz, en_csv); });

  // graph
  std::string gr_corpus, gr_gaz, gr_format, gr_out;
  auto* graph = app.add_subcommand("graph", "entity co-occurrence network");
  graph->add_option("--corpus", gr_corpus, "corpus document")->required();
  graph->add_option("--gazetteer", gr_gaz, "gazetteer CSV")->required();
  graph->add_option("--format", gr_format, "dot, gexf or json")
      ->required()
      ->check(CLI::IsMember({"dot", "gexf", "json"}));
  graph->add_option("--out", gr_out, "output file")->required();
  graph->callback([&] { cmd_graph(gr_corpus, gr_gaz, gr_format, gr_out); });

  // communities
  std::string co_corpus, co_gaz, co_csv;
  bool co_weighted = false;
  auto* communities =
      app.add_subcommand("communities", "louvain community detection");
  communities->add_option("--corpus", co_corpus, "corpus document")
      ->required();
  communities->add_option("--gazetteer", co_gaz, "gazetteer CSV")->required();
  communities->add_flag("--weighted", co_weighted,
                        "use co-occurrence weights in modularity");
  communities->add_option("--csv", co_csv, "write the partition as CSV");
  communities->callback(
      [&] { cmd_communities(co_corpus, co_gaz, co_weighted, co_csv); });

  // tones
  std::string to_corpus, to_lexicon, to_stopwords, to_remote, to_csv;
  double to_threshold = 0.05;
  auto* tones = app.add_subcommand("tones", "tone scoring per story");
  tones->add_option("--corpus", to_corpus, "corpus document")->required();
  tones->add_option("--lexicon", to_lexicon, "tone lexicon TSV");
  tones->add_option("--threshold", to_threshold,
                    "density (local) or score (remote) cutoff");
  tones->add_option("--stopwords", to_stopwords,
                    "stopword file (default: builtin English list)");
  tones->add_option("--remote", to_remote,
                    "score via a remote service instead of the lexicon");
  tones->add_option("--csv", to_csv, "write scores as CSV");
  tones->callback([&] {
    cmd_tones(to_corpus, to_lexicon, to_threshold, to_stopwords, to_remote,
              to_csv);
  });

  // report
  std::string rp_corpus, rp_gaz, rp_lexicon, rp_stopwords, rp_out_dir;
  std::size_t rp_top = 20, rp_cloud_top = 200;
  double rp_threshold = 0.05;
  std::uint32_t rp_seed = 42;
  bool rp_weighted = false;
  auto* report = app.add_subcommand("report", "full pipeline: stats, "
                                    "frequencies, network, communities, "
                                    "tones, figures");
  report->add_option("--corpus", rp_corpus, "corpus document")->required();
  report->add_option("--gazetteer", rp_gaz, "gazetteer CSV")->required();
  report->add_option("--lexicon", rp_lexicon, "tone lexicon TSV")->required();
  report->add_option("--out-dir", rp_out_dir, "output directory")->required();
  report->add_option("--stopwords", rp_stopwords,
                     "stopword file (default: builtin English list)");
  report->add_option("--top", rp_top, "frequency rows");
  report->add_option("--cloud-top", rp_cloud_top, "cloud words");
  report->add_option("--threshold", rp_threshold, "tone density cutoff");
  report->add_option("--seed", rp_seed, "layout seed");
  report->add_flag("--weighted", rp_weighted,
                   "use co-occurrence weights in modularity");
  report->callback([&] {
    ReportPipelineOptions opt;
    opt.corpus_path = rp_corpus;
    opt.gazetteer_path = opt_path(rp_gaz);
    opt.lexicon_path = opt_path(rp_lexicon);
    opt.stopwords_path = opt_path(rp_stopwords);
    opt.out_dir = rp_out_dir;
    opt.freq_top = rp_top;
    opt.cloud_top = rp_cloud_top;
    opt.tone_threshold = rp_threshold;
    opt.seed = rp_seed;
    opt.weighted = rp_weighted;
    cmd_report(opt);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const miner::InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const miner::AnalysisError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
