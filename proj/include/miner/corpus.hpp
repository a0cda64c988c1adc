#ifndef MINER_CORPUS_HPP
#define MINER_CORPUS_HPP

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "miner/csv.hpp"
#include "miner/errors.hpp"
#include "miner/util.hpp"

namespace miner {

enum class Role { student, passerby, teacher, family_member, other };

inline const char* role_name(Role r) {
  switch (r) {
    case Role::student: return "student";
    case Role::passerby: return "passerby";
    case Role::teacher: return "teacher";
    case Role::family_member: return "family_member";
    case Role::other: return "other";
  }
  return "other";
}

inline std::optional<Role> parse_role(std::string_view s) {
  if (s == "student") return Role::student;
  if (s == "passerby") return Role::passerby;
  if (s == "teacher") return Role::teacher;
  if (s == "family_member") return Role::family_member;
  if (s == "other") return Role::other;
  return std::nullopt;
}

struct Participant {
  std::string participant_id;
  std::optional<int> age;
  std::optional<std::string> gender;
  std::optional<std::string> profession;
  Role role = Role::other;
  std::string city;

  bool operator==(const Participant&) const = default;
};

struct Story {
  std::string story_id;
  std::string participant_id;
  std::string text;
  double duration_minutes = 0.0;
  std::optional<std::string> recorded_date;  // ISO-8601 calendar date
  std::string city;

  bool operator==(const Story&) const = default;
};

/// Immutable once built; stories keep ingest order, one participant may own
/// several stories.
struct Corpus {
  std::vector<Story> stories;
  std::vector<Participant> participants;

  bool operator==(const Corpus&) const = default;

  const Participant* find_participant(std::string_view id) const {
    for (const auto& p : participants)
      if (p.participant_id == id) return &p;
    return nullptr;
  }
};

struct RejectedRecord {
  std::string file;
  std::size_t line = 0;
  std::string reason;
};

struct IngestResult {
  Corpus corpus;
  std::size_t accepted = 0;
  std::vector<RejectedRecord> rejected;
};

enum class CorpusFormat { jsonl, csv };

inline std::optional<CorpusFormat> parse_corpus_format(std::string_view s) {
  if (s == "jsonl") return CorpusFormat::jsonl;
  if (s == "csv") return CorpusFormat::csv;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// record validation

namespace detail {

inline bool valid_iso_date(std::string_view s) {
  if (s.size() != 10 || s[4] != '-' || s[7] != '-') return false;
  for (std::size_t i : {0u, 1u, 2u, 3u, 5u, 6u, 8u, 9u})
    if (s[i] < '0' || s[i] > '9') return false;
  int month = (s[5] - '0') * 10 + (s[6] - '0');
  int day = (s[8] - '0') * 10 + (s[9] - '0');
  return month >= 1 && month <= 12 && day >= 1 && day <= 31;
}

/// Field accessor used by both the JSONL and the CSV path. CSV rows are
/// pre-mapped to name->value with empty cells removed, so "absent" means the
/// same thing in both formats.
using FieldMap = std::map<std::string, nlohmann::json>;

inline bool parse_story_fields(const FieldMap& f, Story& out, std::string& err) {
  auto get = [&](const char* k) -> const nlohmann::json* {
    auto it = f.find(k);
    return it == f.end() ? nullptr : &it->second;
  };
  const auto* id = get("story_id");
  if (!id || !id->is_string() || id->get<std::string>().empty())
    return err = "missing or empty story_id", false;
  out.story_id = id->get<std::string>();
  const auto* pid = get("participant_id");
  if (!pid || !pid->is_string() || pid->get<std::string>().empty())
    return err = "missing or empty participant_id", false;
  out.participant_id = pid->get<std::string>();
  const auto* text = get("text");
  if (!text || !text->is_string())
    return err = "missing text", false;
  out.text = text->get<std::string>();
  if (trim(out.text).empty())
    return err = "text empty after trimming whitespace", false;
  const auto* dur = get("duration_minutes");
  if (!dur || !dur->is_number())
    return err = "missing or non-numeric duration_minutes", false;
  out.duration_minutes = dur->get<double>();
  if (out.duration_minutes < 0)
    return err = "negative duration_minutes", false;
  if (const auto* date = get("recorded_date")) {
    if (!date->is_string() || !valid_iso_date(date->get<std::string>()))
      return err = "recorded_date is not an ISO-8601 calendar date", false;
    out.recorded_date = date->get<std::string>();
  }
  const auto* city = get("city");
  if (!city || !city->is_string())
    return err = "missing city", false;
  out.city = city->get<std::string>();
  return true;
}

inline bool parse_participant_fields(const FieldMap& f, Participant& out,
                                     std::string& err) {
  auto get = [&](const char* k) -> const nlohmann::json* {
    auto it = f.find(k);
    return it == f.end() ? nullptr : &it->second;
  };
  const auto* id = get("participant_id");
  if (!id || !id->is_string() || id->get<std::string>().empty())
    return err = "missing or empty participant_id", false;
  out.participant_id = id->get<std::string>();
  if (const auto* age = get("age")) {
    if (!age->is_number_integer() || age->get<int>() <= 0)
      return err = "age must be a positive integer", false;
    out.age = age->get<int>();
  }
  if (const auto* g = get("gender")) {
    if (!g->is_string()) return err = "gender must be a string", false;
    out.gender = g->get<std::string>();
  }
  if (const auto* p = get("profession")) {
    if (!p->is_string()) return err = "profession must be a string", false;
    out.profession = p->get<std::string>();
  }
  const auto* role = get("role");
  if (!role || !role->is_string())
    return err = "missing role", false;
  auto r = parse_role(role->get<std::string>());
  if (!r)
    return err = "unknown role \"" + role->get<std::string>() + "\"", false;
  out.role = *r;
  const auto* city = get("city");
  if (!city || !city->is_string())
    return err = "missing city", false;
  out.city = city->get<std::string>();
  return true;
}

inline FieldMap fieldmap_from_json(const nlohmann::json& j) {
  FieldMap f;
  for (auto it = j.begin(); it != j.end(); ++it) f[it.key()] = it.value();
  return f;
}

/// CSV cells are untyped text; coerce the numeric columns so the shared
/// validators see the same shapes as JSONL. Empty cells mean "absent".
inline bool fieldmap_from_csv(const std::vector<std::string>& header,
                              const CsvRecord& rec, FieldMap& out,
                              std::string& err) {
  out.clear();
  for (std::size_t i = 0; i < header.size() && i < rec.fields.size(); ++i) {
    const std::string& key = header[i];
    const std::string& cell = rec.fields[i];
    if (cell.empty()) continue;
    if (key == "duration_minutes") {
      try {
        std::size_t used = 0;
        double v = std::stod(cell, &used);
        if (used != cell.size()) throw std::invalid_argument(cell);
        out[key] = v;
      } catch (const std::exception&) {
        err = "duration_minutes is not a number";
        return false;
      }
    } else if (key == "age") {
      try {
        std::size_t used = 0;
        int v = std::stoi(cell, &used);
        if (used != cell.size()) throw std::invalid_argument(cell);
        out[key] = v;
      } catch (const std::exception&) {
        err = "age is not an integer";
        return false;
      }
    } else {
      out[key] = cell;
    }
  }
  return true;
}

struct RawRecords {
  std::vector<std::pair<std::size_t, FieldMap>> parsed;  // (line, fields)
  std::vector<RejectedRecord> rejected;
};

inline RawRecords read_records(const std::filesystem::path& path,
                               CorpusFormat format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open file: " + path.string());
  RawRecords out;
  if (format == CorpusFormat::jsonl) {
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (trim(line).empty()) continue;
      nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
      if (j.is_discarded() || !j.is_object()) {
        out.rejected.push_back({path.string(), line_no, "invalid JSON object"});
        continue;
      }
      out.parsed.emplace_back(line_no, fieldmap_from_json(j));
    }
  } else {
    auto records = parse_csv(in);
    if (records.empty()) throw ParseError("empty CSV file: " + path.string());
    std::vector<std::string> header;
    for (const auto& cell : records[0].fields)
      header.emplace_back(trim(cell));
    for (std::size_t r = 1; r < records.size(); ++r) {
      FieldMap f;
      std::string err;
      if (!fieldmap_from_csv(header, records[r], f, err)) {
        out.rejected.push_back({path.string(), records[r].line, err});
        continue;
      }
      out.parsed.emplace_back(records[r].line, f);
    }
  }
  return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// ingest

/// Reads and validates a story file plus an optional participants file.
/// Structurally bad records are rejected (with file + line); duplicate ids
/// and dangling participant references are hard errors.
///
/// When no participants file is supplied, a minimal participant (role
/// "other", city taken from that participant's first story) is synthesized
/// for every referenced id so the Corpus invariants hold.
inline IngestResult ingest_corpus(
    const std::filesystem::path& stories_path,
    const std::optional<std::filesystem::path>& participants_path,
    CorpusFormat format) {
  IngestResult result;

  auto raw_stories = detail::read_records(stories_path, format);
  result.rejected = std::move(raw_stories.rejected);

  std::unordered_map<std::string, std::size_t> story_lines;
  for (auto& [line, fields] : raw_stories.parsed) {
    Story s;
    std::string err;
    if (!detail::parse_story_fields(fields, s, err)) {
      result.rejected.push_back({stories_path.string(), line, err});
      continue;
    }
    auto [it, inserted] = story_lines.emplace(s.story_id, line);
    if (!inserted) {
      std::ostringstream msg;
      msg << "duplicate story_id \"" << s.story_id << "\" at lines "
          << it->second << " and " << line << " of " << stories_path.string();
      throw ValidationError(msg.str());
    }
    result.corpus.stories.push_back(std::move(s));
  }

  if (participants_path) {
    auto raw = detail::read_records(*participants_path, format);
    for (auto& rej : raw.rejected) result.rejected.push_back(rej);
    std::unordered_map<std::string, std::size_t> participant_lines;
    for (auto& [line, fields] : raw.parsed) {
      Participant p;
      std::string err;
      if (!detail::parse_participant_fields(fields, p, err)) {
        result.rejected.push_back({participants_path->string(), line, err});
        continue;
      }
      auto [it, inserted] = participant_lines.emplace(p.participant_id, line);
      if (!inserted) {
        std::ostringstream msg;
        msg << "duplicate participant_id \"" << p.participant_id
            << "\" at lines " << it->second << " and " << line << " of "
            << participants_path->string();
        throw ValidationError(msg.str());
      }
      result.corpus.participants.push_back(std::move(p));
    }
    std::vector<std::string> dangling;
    for (const auto& s : result.corpus.stories) {
      if (!result.corpus.find_participant(s.participant_id) &&
          std::find(dangling.begin(), dangling.end(), s.participant_id) ==
              dangling.end())
        dangling.push_back(s.participant_id);
    }
    if (!dangling.empty()) {
      std::ostringstream msg;
      msg << "dangling participant_id";
      for (const auto& id : dangling) msg << " \"" << id << "\"";
      msg << ": referenced by stories but absent from "
          << participants_path->string();
      throw ValidationError(msg.str());
    }
  } else {
    for (const auto& s : result.corpus.stories) {
      if (!result.corpus.find_participant(s.participant_id)) {
        Participant p;
        p.participant_id = s.participant_id;
        p.role = Role::other;
        p.city = s.city;
        result.corpus.participants.push_back(std::move(p));
      }
    }
  }

  result.accepted = result.corpus.stories.size();
  return result;
}

// ---------------------------------------------------------------------------
// persistence

inline nlohmann::ordered_json story_to_json(const Story& s) {
  nlohmann::ordered_json j;
  j["story_id"] = s.story_id;
  j["participant_id"] = s.participant_id;
  j["text"] = s.text;
  j["duration_minutes"] = s.duration_minutes;
  if (s.recorded_date) j["recorded_date"] = *s.recorded_date;
  j["city"] = s.city;
  return j;
}

inline nlohmann::ordered_json participant_to_json(const Participant& p) {
  nlohmann::ordered_json j;
  j["participant_id"] = p.participant_id;
  if (p.age) j["age"] = *p.age;
  if (p.gender) j["gender"] = *p.gender;
  if (p.profession) j["profession"] = *p.profession;
  j["role"] = role_name(p.role);
  j["city"] = p.city;
  return j;
}

/// Canonical JSONL persistence: stories and participants as two files, one
/// record per line. Re-ingesting yields an equal Corpus.
inline void write_corpus_jsonl(const Corpus& corpus,
                               const std::filesystem::path& stories_path,
                               const std::filesystem::path& participants_path) {
  std::ofstream st(stories_path, std::ios::binary);
  if (!st) throw IoError("cannot write " + stories_path.string());
  for (const auto& s : corpus.stories) st << story_to_json(s).dump() << "\n";
  std::ofstream pa(participants_path, std::ios::binary);
  if (!pa) throw IoError("cannot write " + participants_path.string());
  for (const auto& p : corpus.participants)
    pa << participant_to_json(p).dump() << "\n";
}

/// Single-file corpus document used by the CLI between `ingest` and the
/// analysis subcommands.
inline void write_corpus_json(const Corpus& corpus,
                              const std::filesystem::path& path) {
  nlohmann::ordered_json doc;
  doc["participants"] = nlohmann::ordered_json::array();
  for (const auto& p : corpus.participants)
    doc["participants"].push_back(participant_to_json(p));
  doc["stories"] = nlohmann::ordered_json::array();
  for (const auto& s : corpus.stories)
    doc["stories"].push_back(story_to_json(s));
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << doc.dump(2) << "\n";
}

inline Corpus load_corpus_json(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open file: " + path.string());
  nlohmann::json doc = nlohmann::json::parse(in, nullptr, false);
  if (doc.is_discarded() || !doc.is_object() || !doc.contains("stories") ||
      !doc.contains("participants"))
    throw ParseError("not a corpus document: " + path.string());

  Corpus corpus;
  std::size_t idx = 0;
  for (const auto& j : doc["participants"]) {
    Participant p;
    std::string err;
    if (!j.is_object() ||
        !detail::parse_participant_fields(detail::fieldmap_from_json(j), p, err))
      throw ParseError("participants[" + std::to_string(idx) + "]: " +
                       (err.empty() ? "not an object" : err));
    corpus.participants.push_back(std::move(p));
    ++idx;
  }
  idx = 0;
  for (const auto& j : doc["stories"]) {
    Story s;
    std::string err;
    if (!j.is_object() ||
        !detail::parse_story_fields(detail::fieldmap_from_json(j), s, err))
      throw ParseError("stories[" + std::to_string(idx) + "]: " +
                       (err.empty() ? "not an object" : err));
    corpus.stories.push_back(std::move(s));
    ++idx;
  }
  for (const auto& s : corpus.stories)
    if (!corpus.find_participant(s.participant_id))
      throw ValidationError("dangling participant_id \"" + s.participant_id +
                            "\" in " + path.string());
  std::set<std::string> seen;
  for (const auto& s : corpus.stories)
    if (!seen.insert(s.story_id).second)
      throw ValidationError("duplicate story_id \"" + s.story_id + "\" in " +
                            path.string());
  seen.clear();
  for (const auto& p : corpus.participants)
    if (!seen.insert(p.participant_id).second)
      throw ValidationError("duplicate participant_id \"" + p.participant_id +
                            "\" in " + path.string());
  return corpus;
}

/// Accepts either a combined corpus document or a raw stories JSONL file
/// (participants synthesized, any rejected line is fatal here).
inline Corpus load_corpus_any(const std::filesystem::path& path) {
  {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open file: " + path.string());
    nlohmann::json doc = nlohmann::json::parse(in, nullptr, false);
    if (!doc.is_discarded() && doc.is_object() && doc.contains("stories") &&
        doc.contains("participants"))
      return load_corpus_json(path);
  }
  auto result = ingest_corpus(path, std::nullopt, CorpusFormat::jsonl);
  if (!result.rejected.empty()) {
    const auto& r = result.rejected.front();
    throw ValidationError(path.string() + ":" + std::to_string(r.line) + ": " +
                          r.reason + (result.rejected.size() > 1
                                          ? " (and " +
                                                std::to_string(
                                                    result.rejected.size() - 1) +
                                                " more rejected records)"
                                          : ""));
  }
  return result.corpus;
}

// ---------------------------------------------------------------------------
// stats

struct CorpusStats {
  std::size_t story_count = 0;
  std::size_t participant_count = 0;
  std::optional<int> age_min;
  std::optional<int> age_max;
  double duration_min = 0;
  double duration_median = 0;
  double duration_max = 0;
  std::map<std::string, std::size_t> role_histogram;  // stories by speaker role
  std::map<std::string, std::size_t> city_histogram;  // stories by city
};

inline CorpusStats corpus_stats(const Corpus& corpus) {
  if (corpus.stories.empty())
    throw AnalysisError("corpus_stats requires a non-empty corpus");

  CorpusStats st;
  st.story_count = corpus.stories.size();
  st.participant_count = corpus.participants.size();

  for (const auto& p : corpus.participants) {
    if (!p.age) continue;
    if (!st.age_min || *p.age < *st.age_min) st.age_min = *p.age;
    if (!st.age_max || *p.age > *st.age_max) st.age_max = *p.age;
  }

  std::vector<double> durations;
  durations.reserve(corpus.stories.size());
  std::unordered_map<std::string, Role> roles;
  for (const auto& p : corpus.participants)
    roles.emplace(p.participant_id, p.role);
  for (const auto& s : corpus.stories) {
    durations.push_back(s.duration_minutes);
    auto it = roles.find(s.participant_id);
    Role r = it == roles.end() ? Role::other : it->second;
    ++st.role_histogram[role_name(r)];
    ++st.city_histogram[s.city];
  }
  std::sort(durations.begin(), durations.end());
  st.duration_min = durations.front();
  st.duration_max = durations.back();
  std::size_t n = durations.size();
  st.duration_median = (n % 2 == 1)
                           ? durations[n / 2]
                           : (durations[n / 2 - 1] + durations[n / 2]) / 2.0;
  return st;
}

inline nlohmann::ordered_json stats_to_json(const CorpusStats& st) {
  nlohmann::ordered_json j;
  j["story_count"] = st.story_count;
  j["participant_count"] = st.participant_count;
  j["age_min"] = st.age_min ? nlohmann::ordered_json(*st.age_min)
                            : nlohmann::ordered_json(nullptr);
  j["age_max"] = st.age_max ? nlohmann::ordered_json(*st.age_max)
                            : nlohmann::ordered_json(nullptr);
  j["duration_min"] = st.duration_min;
  j["duration_median"] = st.duration_median;
  j["duration_max"] = st.duration_max;
  j["roles"] = st.role_histogram;
  j["cities"] = st.city_histogram;
  return j;
}

}  // namespace miner

#endif  // MINER_CORPUS_HPP
