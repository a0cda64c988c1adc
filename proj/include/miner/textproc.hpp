#ifndef MINER_TEXTPROC_HPP
#define MINER_TEXTPROC_HPP

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "miner/corpus.hpp"
#include "miner/errors.hpp"
#include "miner/unicode.hpp"
#include "miner/util.hpp"

namespace miner {

using Stoplist = std::unordered_set<std::string>;

struct TokenSpan {
  std::string token;       // case-folded surface form
  std::size_t byte_begin;  // offsets into the original text
  std::size_t byte_end;
};

struct SentenceSpan {
  std::string text;  // verbatim slice, terminator included
  std::size_t byte_begin = 0;
  std::size_t byte_end = 0;
  std::size_t token_begin = 0;  // [token_begin, token_end) into tokens
  std::size_t token_end = 0;
};

struct TokenizedStory {
  std::string story_id;
  std::vector<std::string> tokens;
  std::vector<SentenceSpan> sentences;
};

/// Word segmentation over UTF-8 text. A token is a maximal run of word
/// codepoints (ASCII alphanumerics plus non-punctuation codepoints of other
/// scripts); an apostrophe between letters stays inside its token. ASCII and
/// Latin-1 uppercase fold to lowercase, all other scripts pass through
/// unchanged. Tokens consisting solely of digits are dropped.
inline std::vector<TokenSpan> tokenize_spans(std::string_view text) {
  std::vector<TokenSpan> out;
  Utf8Decoder dec(text);

  std::string current;
  std::size_t tok_begin = 0;
  bool has_non_digit = false;

  auto flush = [&](std::size_t end_pos) {
    if (!current.empty() && has_non_digit)
      out.push_back({std::move(current), tok_begin, end_pos});
    current.clear();
    has_non_digit = false;
  };

  bool prev_was_word = false;
  while (!dec.done()) {
    std::size_t cp_begin = dec.pos;
    char32_t cp = dec.next();
    if (is_word_cp(cp)) {
      if (current.empty()) tok_begin = cp_begin;
      utf8_append(current, fold_case(cp));
      if (!is_digit_cp(cp)) has_non_digit = true;
      prev_was_word = true;
      continue;
    }
    if ((cp == '\'' || cp == 0x2019) && prev_was_word && !dec.done()) {
      // look ahead without consuming
      Utf8Decoder peek(text);
      peek.pos = dec.pos;
      if (is_word_cp(peek.next())) {
        utf8_append(current, '\'');
        has_non_digit = true;
        prev_was_word = false;
        continue;
      }
    }
    flush(cp_begin);
    prev_was_word = false;
  }
  flush(text.size());
  return out;
}

inline std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> out;
  for (auto& span : tokenize_spans(text)) out.push_back(std::move(span.token));
  return out;
}

/// Splits on '.', '!', '?' and the Bangla danda, attaching a run of
/// terminators to the preceding sentence. Spans carry byte offsets; the text
/// between consecutive spans is always whitespace, so the spans plus the
/// separators reconstruct the input.
inline std::vector<SentenceSpan> split_sentences(std::string_view text) {
  std::vector<SentenceSpan> out;
  Utf8Decoder dec(text);

  std::size_t span_begin = std::string_view::npos;
  std::size_t last_non_space_end = 0;
  bool in_terminator_run = false;

  auto emit = [&](std::size_t end) {
    if (span_begin == std::string_view::npos || end <= span_begin) return;
    SentenceSpan s;
    s.byte_begin = span_begin;
    s.byte_end = end;
    s.text = std::string(text.substr(span_begin, end - span_begin));
    out.push_back(std::move(s));
    span_begin = std::string_view::npos;
    in_terminator_run = false;
  };

  while (!dec.done()) {
    std::size_t cp_begin = dec.pos;
    char32_t cp = dec.next();
    bool space = is_space_cp(cp);
    bool term = is_sentence_terminator(cp);

    if (in_terminator_run && !term) emit(last_non_space_end);
    if (!space) {
      if (span_begin == std::string_view::npos) span_begin = cp_begin;
      last_non_space_end = dec.pos;
      if (term) in_terminator_run = true;
    }
  }
  emit(last_non_space_end);
  return out;
}

/// tokenize + split_sentences with sentence token sub-ranges attached. The
/// ranges partition the token list in order.
inline TokenizedStory tokenize_story(std::string story_id,
                                     std::string_view text) {
  TokenizedStory ts;
  ts.story_id = std::move(story_id);
  auto spans = tokenize_spans(text);
  ts.sentences = split_sentences(text);

  std::size_t t = 0;
  for (auto& sent : ts.sentences) {
    while (t < spans.size() && spans[t].byte_begin < sent.byte_begin) ++t;
    sent.token_begin = t;
    while (t < spans.size() && spans[t].byte_begin < sent.byte_end) ++t;
    sent.token_end = t;
  }
  ts.tokens.reserve(spans.size());
  for (auto& span : spans) ts.tokens.push_back(std::move(span.token));
  return ts;
}

/// Order-preserving stopword filter; stoplist terms must be pre-case-folded.
inline std::vector<std::string> remove_stopwords(
    const std::vector<std::string>& tokens, const Stoplist& stoplist) {
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (const auto& t : tokens)
    if (!stoplist.count(t)) out.push_back(t);
  return out;
}

/// Stopword file: UTF-8, one term per line, '#' comments ignored. Terms are
/// case-folded through the tokenizer so they match its output.
inline Stoplist load_stopwords(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open stopword file: " + path.string());
  Stoplist out;
  std::string line;
  while (std::getline(in, line)) {
    auto t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    for (auto& tok : tokenize(t)) out.insert(std::move(tok));
  }
  return out;
}

/// Small built-in English default used by the CLI when no stopword file is
/// given. Bangla has no built-in list.
inline const Stoplist& builtin_english_stopwords() {
  static const Stoplist list = {
      "a",      "about",  "after",  "again",  "against", "all",   "an",
      "and",    "any",    "are",    "as",     "at",      "be",    "because",
      "been",   "before", "both",   "but",    "by",      "can",   "did",
      "do",     "does",   "down",   "during", "each",    "few",   "for",
      "from",   "further", "had",   "has",    "have",    "he",    "her",
      "here",   "him",    "his",    "how",    "i",       "if",    "in",
      "into",   "is",     "it",     "its",    "just",    "me",    "more",
      "most",   "my",     "no",     "not",    "of",      "off",   "on",
      "once",   "only",   "or",     "other",  "our",     "out",   "over",
      "own",    "same",   "she",    "so",     "some",    "such",  "than",
      "that",   "the",    "their",  "them",   "then",    "there", "these",
      "they",   "this",   "those",  "to",     "too",     "under", "until",
      "up",     "us",     "very",   "was",    "we",      "were",  "what",
      "when",   "which",  "while",  "who",    "whom",    "why",   "will",
      "with",   "you",    "your"};
  return list;
}

// ---------------------------------------------------------------------------
// term frequencies

/// Entries sorted by count descending, term ascending as tie-break. The
/// ordering is total, so identical corpora always produce identical tables.
struct FrequencyTable {
  std::vector<std::pair<std::string, std::size_t>> entries;

  bool operator==(const FrequencyTable&) const = default;
};

inline FrequencyTable term_frequencies(const Corpus& corpus,
                                       const Stoplist& stoplist) {
  std::unordered_map<std::string, std::size_t> counts;
  for (const auto& story : corpus.stories)
    for (auto& tok : remove_stopwords(tokenize(story.text), stoplist))
      ++counts[tok];

  FrequencyTable table;
  table.entries.assign(counts.begin(), counts.end());
  std::sort(table.entries.begin(), table.entries.end(),
            [](const auto& a, const auto& b) {
              if (a.second != b.second) return a.second > b.second;
              return a.first < b.first;
            });
  return table;
}

inline FrequencyTable top_n(const FrequencyTable& table, std::size_t n) {
  FrequencyTable out;
  std::size_t take = std::min(n, table.entries.size());
  out.entries.assign(table.entries.begin(), table.entries.begin() + take);
  return out;
}

inline std::string frequency_csv(const FrequencyTable& table) {
  std::string out = "term,count\n";
  for (const auto& [term, count] : table.entries)
    out += csv_row({term, std::to_string(count)});
  return out;
}

}  // namespace miner

#endif  // MINER_TEXTPROC_HPP
