#ifndef MINER_GAZETTEER_HPP
#define MINER_GAZETTEER_HPP

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "miner/csv.hpp"
#include "miner/errors.hpp"
#include "miner/textproc.hpp"
#include "miner/util.hpp"

namespace miner {

enum class EntityKind { location, organization };

inline const char* entity_kind_name(EntityKind k) {
  return k == EntityKind::location ? "location" : "organization";
}

inline std::optional<EntityKind> parse_entity_kind(std::string_view s) {
  if (s == "location") return EntityKind::location;
  if (s == "organization") return EntityKind::organization;
  return std::nullopt;
}

struct GazetteerEntry {
  std::string canonical;
  EntityKind kind = EntityKind::location;
  std::vector<std::string> aliases;  // includes the canonical itself
};

struct Entity {
  std::string canonical;
  EntityKind kind = EntityKind::location;

  auto operator<=>(const Entity&) const = default;
};

struct EntityMention {
  std::string story_id;
  std::string canonical;
  EntityKind kind = EntityKind::location;
  std::string matched_alias;  // as listed in the gazetteer
  std::size_t token_offset = 0;

  bool operator==(const EntityMention&) const = default;
};

/// Dictionary for exact-match extraction. Aliases are indexed as case-folded
/// token sequences produced by the same tokenizer applied to story text, so
/// matching is insensitive to case and punctuation.
class Gazetteer {
 public:
  struct IndexedAlias {
    std::vector<std::string> tokens;
    std::string canonical;
    EntityKind kind = EntityKind::location;
    std::string alias;  // original spelling
  };

  void add_entry(GazetteerEntry entry) {
    for (const auto& e : entries_)
      if (e.canonical == entry.canonical)
        throw ValidationError("duplicate gazetteer canonical \"" +
                              entry.canonical + "\"");
    for (const auto& alias : entry.aliases) {
      auto tokens = tokenize(alias);
      if (tokens.empty())
        throw ValidationError("gazetteer alias \"" + alias +
                              "\" has no tokens");
      auto key = join_key(tokens);
      auto it = index_.find(key);
      if (it != index_.end()) {
        if (it->second.canonical != entry.canonical)
          throw ValidationError("gazetteer alias \"" + alias +
                                "\" maps to both \"" + it->second.canonical +
                                "\" and \"" + entry.canonical + "\"");
        continue;  // same canonical listed the alias twice
      }
      max_alias_tokens_ = std::max(max_alias_tokens_, tokens.size());
      index_.emplace(std::move(key),
                     IndexedAlias{std::move(tokens), entry.canonical,
                                  entry.kind, alias});
    }
    entries_.push_back(std::move(entry));
    std::sort(entries_.begin(), entries_.end(),
              [](const auto& a, const auto& b) {
                return a.canonical < b.canonical;
              });
  }

  const std::vector<GazetteerEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  std::size_t max_alias_tokens() const { return max_alias_tokens_; }

  const IndexedAlias* lookup(const std::vector<std::string>& tokens,
                             std::size_t begin, std::size_t len) const {
    std::string key;
    for (std::size_t i = 0; i < len; ++i) {
      if (i) key.push_back(' ');
      key += tokens[begin + i];
    }
    auto it = index_.find(key);
    return it == index_.end() ? nullptr : &it->second;
  }

 private:
  static std::string join_key(const std::vector<std::string>& tokens) {
    std::string key;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      if (i) key.push_back(' ');
      key += tokens[i];
    }
    return key;
  }

  std::vector<GazetteerEntry> entries_;           // sorted by canonical
  std::map<std::string, IndexedAlias> index_;     // token-sequence key
  std::size_t max_alias_tokens_ = 0;
};

/// CSV columns: canonical,kind,aliases; `aliases` is ';'-separated and may
/// be empty (the canonical always matches itself). Alias collisions across
/// canonicals are rejected.
inline Gazetteer load_gazetteer(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open gazetteer: " + path.string());
  auto records = parse_csv(in);
  if (records.empty())
    throw ParseError("empty gazetteer file: " + path.string());

  const auto& header = records[0].fields;
  auto col = [&](std::string_view name) -> std::size_t {
    for (std::size_t i = 0; i < header.size(); ++i)
      if (trim(header[i]) == name) return i;
    throw ParseError("gazetteer " + path.string() +
                     " is missing required column \"" + std::string(name) +
                     "\"");
  };
  std::size_t c_canonical = col("canonical");
  std::size_t c_kind = col("kind");
  std::size_t c_aliases = col("aliases");

  Gazetteer gaz;
  for (std::size_t r = 1; r < records.size(); ++r) {
    const auto& rec = records[r];
    auto cell = [&](std::size_t c) -> std::string {
      return c < rec.fields.size() ? std::string(trim(rec.fields[c])) : "";
    };
    GazetteerEntry entry;
    entry.canonical = cell(c_canonical);
    if (entry.canonical.empty())
      throw ParseError(path.string() + ":" + std::to_string(rec.line) +
                       ": empty canonical");
    auto kind = parse_entity_kind(cell(c_kind));
    if (!kind)
      throw ParseError(path.string() + ":" + std::to_string(rec.line) +
                       ": kind must be \"location\" or \"organization\"");
    entry.kind = *kind;
    entry.aliases.push_back(entry.canonical);
    for (const auto& alias : split(cell(c_aliases), ';')) {
      auto a = trim(alias);
      if (a.empty()) continue;
      if (std::find(entry.aliases.begin(), entry.aliases.end(), a) ==
          entry.aliases.end())
        entry.aliases.emplace_back(a);
    }
    gaz.add_entry(std::move(entry));
  }
  if (gaz.size() == 0)
    throw ParseError("gazetteer has no entries: " + path.string());
  return gaz;
}

/// Greedy longest-match-first scan over the token sequence. A match consumes
/// its tokens, so no reported mention is a strict sub-range of another.
inline std::vector<EntityMention> extract_entities(const TokenizedStory& story,
                                                   const Gazetteer& gazetteer) {
  std::vector<EntityMention> mentions;
  const auto& tokens = story.tokens;
  std::size_t i = 0;
  while (i < tokens.size()) {
    std::size_t max_len =
        std::min(gazetteer.max_alias_tokens(), tokens.size() - i);
    bool matched = false;
    for (std::size_t len = max_len; len >= 1; --len) {
      const auto* hit = gazetteer.lookup(tokens, i, len);
      if (!hit) continue;
      mentions.push_back(
          {story.story_id, hit->canonical, hit->kind, hit->alias, i});
      i += len;
      matched = true;
      break;
    }
    if (!matched) ++i;
  }
  return mentions;
}

using StoryEntitySets = std::map<std::string, std::set<Entity>>;

/// Per-story deduplicated entity sets: the unit of co-occurrence is the
/// story. Every story appears in the map, mention-free ones with an empty
/// set.
inline StoryEntitySets story_entity_sets(const Corpus& corpus,
                                         const Gazetteer& gazetteer) {
  StoryEntitySets sets;
  for (const auto& story : corpus.stories) {
    auto& set = sets[story.story_id];
    auto ts = tokenize_story(story.story_id, story.text);
    for (const auto& m : extract_entities(ts, gazetteer))
      set.insert({m.canonical, m.kind});
  }
  return sets;
}

}  // namespace miner

#endif  // MINER_GAZETTEER_HPP
