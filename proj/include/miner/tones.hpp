#ifndef MINER_TONES_HPP
#define MINER_TONES_HPP

#include <array>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "miner/csv.hpp"
#include "miner/errors.hpp"
#include "miner/textproc.hpp"
#include "miner/util.hpp"

namespace miner {

/// The fixed tone set. Enum order is also the dominance tie-break order.
enum class Tone {
  anger,
  disgust,
  fear,
  joy,
  sadness,
  analytical,
  confident,
  tentative,
};

inline constexpr std::size_t kToneCount = 8;

enum class ToneCategory { emotional, conversational };

inline ToneCategory tone_category(Tone t) {
  return static_cast<std::size_t>(t) < 5 ? ToneCategory::emotional
                                         : ToneCategory::conversational;
}

inline const char* tone_name(Tone t) {
  static constexpr const char* names[kToneCount] = {
      "anger",      "disgust",   "fear",      "joy",
      "sadness",    "analytical", "confident", "tentative"};
  return names[static_cast<std::size_t>(t)];
}

inline std::optional<Tone> parse_tone(std::string_view s) {
  for (std::size_t i = 0; i < kToneCount; ++i)
    if (s == tone_name(static_cast<Tone>(i))) return static_cast<Tone>(i);
  return std::nullopt;
}

inline const std::array<Tone, kToneCount>& all_tones() {
  static constexpr std::array<Tone, kToneCount> tones = {
      Tone::anger,      Tone::disgust,   Tone::fear,      Tone::joy,
      Tone::sadness,    Tone::analytical, Tone::confident, Tone::tentative};
  return tones;
}

/// term -> [(tone, weight)] with positive weights; terms pre-case-folded
/// through the tokenizer.
class ToneLexicon {
 public:
  void add(const std::string& term, Tone tone, double weight) {
    if (weight <= 0)
      throw ValidationError("lexicon weight for \"" + term +
                            "\" must be positive");
    auto& row = entries_[term];
    for (const auto& [t, w] : row)
      if (t == tone)
        throw ValidationError("duplicate lexicon row for term \"" + term +
                              "\" and tone " + tone_name(tone));
    row.emplace_back(tone, weight);
  }

  const std::vector<std::pair<Tone, double>>* find(
      const std::string& term) const {
    auto it = entries_.find(term);
    return it == entries_.end() ? nullptr : &it->second;
  }

  std::size_t term_count() const { return entries_.size(); }

 private:
  std::unordered_map<std::string, std::vector<std::pair<Tone, double>>>
      entries_;
};

/// Lexicon TSV: term<TAB>tone<TAB>weight, '#' comments and blank lines
/// ignored.
inline ToneLexicon load_lexicon(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open lexicon: " + path.string());
  ToneLexicon lex;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    auto cols = split(t, '\t');
    if (cols.size() != 3)
      throw ParseError(path.string() + ":" + std::to_string(line_no) +
                       ": expected term<TAB>tone<TAB>weight");
    std::string term(trim(cols[0]));
    auto tone = parse_tone(trim(cols[1]));
    if (!tone)
      throw ParseError(path.string() + ":" + std::to_string(line_no) +
                       ": unknown tone \"" + std::string(trim(cols[1])) +
                       "\"");
    double weight = 0;
    try {
      std::size_t used = 0;
      std::string w(trim(cols[2]));
      weight = std::stod(w, &used);
      if (used != w.size()) throw std::invalid_argument(w);
    } catch (const std::exception&) {
      throw ParseError(path.string() + ":" + std::to_string(line_no) +
                       ": weight is not a number");
    }
    if (weight <= 0)
      throw ParseError(path.string() + ":" + std::to_string(line_no) +
                       ": weight must be positive");
    // fold the term the same way story tokens are folded
    auto toks = tokenize(term);
    std::string folded = toks.size() == 1 ? toks[0] : term;
    try {
      lex.add(folded, *tone, weight);
    } catch (const ValidationError& e) {
      throw ParseError(path.string() + ":" + std::to_string(line_no) + ": " +
                       e.what());
    }
  }
  return lex;
}

struct ToneScores {
  std::array<double, kToneCount> raw{};
  std::array<double, kToneCount> density{};
  std::set<Tone> present;

  double raw_of(Tone t) const { return raw[static_cast<std::size_t>(t)]; }
  double density_of(Tone t) const {
    return density[static_cast<std::size_t>(t)];
  }
};

struct ToneProfile {
  std::string story_id;
  ToneScores document;
  std::vector<ToneScores> sentences;
  std::vector<std::string> warnings;  // remote adapter: skipped tone ids

  /// argmax of raw score, ties broken by the fixed tone order; empty when
  /// every raw score is zero.
  std::optional<Tone> dominant() const {
    std::optional<Tone> best;
    double best_raw = 0.0;
    for (Tone t : all_tones()) {
      double r = document.raw_of(t);
      if (r > best_raw) {
        best_raw = r;
        best = t;
      }
    }
    return best;
  }
};

namespace detail {

inline void finalize_scores(ToneScores& s, std::size_t scored_tokens,
                            double threshold) {
  double denom = static_cast<double>(std::max<std::size_t>(1, scored_tokens));
  for (std::size_t i = 0; i < kToneCount; ++i) {
    s.density[i] = s.raw[i] / denom;
    if (s.density[i] >= threshold && s.raw[i] >= 1.0)
      s.present.insert(static_cast<Tone>(i));
  }
}

}  // namespace detail

/// Lexicon scoring. raw_t sums the weights of non-stopword tokens; density
/// divides by the non-stopword token count (of the document or of the
/// sentence); a tone is present when density >= threshold and raw >= 1.
inline ToneProfile score_story(const TokenizedStory& story,
                               const ToneLexicon& lexicon, double threshold,
                               const Stoplist& stoplist) {
  if (!(threshold > 0.0 && threshold <= 1.0))
    throw AnalysisError("tone threshold must be in (0, 1]");

  ToneProfile profile;
  profile.story_id = story.story_id;
  profile.sentences.resize(story.sentences.size());

  std::size_t doc_tokens = 0;
  for (std::size_t si = 0; si < story.sentences.size(); ++si) {
    const auto& sent = story.sentences[si];
    auto& scores = profile.sentences[si];
    std::size_t sent_tokens = 0;
    for (std::size_t t = sent.token_begin; t < sent.token_end; ++t) {
      const auto& tok = story.tokens[t];
      if (stoplist.count(tok)) continue;
      ++sent_tokens;
      ++doc_tokens;
      if (const auto* hits = lexicon.find(tok))
        for (const auto& [tone, w] : *hits) {
          scores.raw[static_cast<std::size_t>(tone)] += w;
          profile.document.raw[static_cast<std::size_t>(tone)] += w;
        }
    }
    detail::finalize_scores(scores, sent_tokens, threshold);
  }
  detail::finalize_scores(profile.document, doc_tokens, threshold);
  return profile;
}

struct ToneAggregate {
  std::array<std::size_t, kToneCount> story_counts{};
  std::size_t total = 0;

  std::size_t count_of(Tone t) const {
    return story_counts[static_cast<std::size_t>(t)];
  }
};

/// Counts each (story, present tone) pair once; total is the sum.
inline ToneAggregate aggregate_tones(const std::vector<ToneProfile>& profiles) {
  ToneAggregate agg;
  for (const auto& p : profiles)
    for (Tone t : p.document.present) {
      ++agg.story_counts[static_cast<std::size_t>(t)];
      ++agg.total;
    }
  return agg;
}

/// Sentence-level tally, reported separately from the document counts.
inline ToneAggregate aggregate_sentence_tones(
    const std::vector<ToneProfile>& profiles) {
  ToneAggregate agg;
  for (const auto& p : profiles)
    for (const auto& s : p.sentences)
      for (Tone t : s.present) {
        ++agg.story_counts[static_cast<std::size_t>(t)];
        ++agg.total;
      }
  return agg;
}

inline std::string tones_csv(const std::vector<ToneProfile>& profiles) {
  std::string out = "story_id,tone,raw,density,present\n";
  for (const auto& p : profiles)
    for (Tone t : all_tones()) {
      if (p.document.raw_of(t) == 0.0 && !p.document.present.count(t))
        continue;
      out += csv_row({p.story_id, tone_name(t),
                      format_fixed(p.document.raw_of(t), 4),
                      format_fixed(p.document.density_of(t), 4),
                      p.document.present.count(t) ? "true" : "false"});
    }
  return out;
}

}  // namespace miner

#endif  // MINER_TONES_HPP
