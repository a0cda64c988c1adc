#ifndef MINER_TONES_REMOTE_HPP
#define MINER_TONES_REMOTE_HPP

#include <atomic>
#include <cstdlib>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include <httplib.h>
#include <json.hpp>

#include "miner/corpus.hpp"
#include "miner/errors.hpp"
#include "miner/tones.hpp"

namespace miner {

struct RemoteConfig {
  std::string endpoint;  // http://host[:port][/path]
  std::string token;     // sent as a bearer token when non-empty
  double threshold = 0.05;
  int timeout_seconds = 30;
  std::size_t max_in_flight = 4;
};

/// Reads TONE_ENDPOINT and TONE_TOKEN; endpoint absent -> nullopt.
inline std::optional<RemoteConfig> remote_config_from_env() {
  const char* ep = std::getenv("TONE_ENDPOINT");
  if (!ep || !*ep) return std::nullopt;
  RemoteConfig cfg;
  cfg.endpoint = ep;
  if (const char* tok = std::getenv("TONE_TOKEN")) cfg.token = tok;
  return cfg;
}

namespace detail {

struct SplitUrl {
  std::string host_port;  // scheme://host:port, what httplib::Client wants
  std::string path;
};

inline SplitUrl split_endpoint(const std::string& endpoint) {
  std::string_view url = endpoint;
  if (url.substr(0, 8) == "https://")
    throw RemoteError("https endpoints are not supported, use http");
  if (url.substr(0, 7) != "http://")
    throw RemoteError("endpoint must start with http://");
  auto rest = url.substr(7);
  auto slash = rest.find('/');
  SplitUrl out;
  if (slash == std::string_view::npos) {
    out.host_port = std::string(url);
    out.path = "/";
  } else {
    out.host_port = std::string(url.substr(0, 7 + slash));
    out.path = std::string(rest.substr(slash));
  }
  if (out.host_port == "http://")
    throw RemoteError("endpoint has no host: " + endpoint);
  return out;
}

inline void apply_scores(ToneScores& scores, const nlohmann::json& tones,
                         double threshold, std::vector<std::string>* warnings) {
  if (!tones.is_array())
    throw RemoteParseError("\"tones\" is not an array");
  for (const auto& item : tones) {
    if (!item.is_object() || !item.contains("tone_id") ||
        !item.contains("score"))
      throw RemoteParseError("tone entry needs tone_id and score");
    if (!item["tone_id"].is_string() || !item["score"].is_number())
      throw RemoteParseError("tone entry has wrong field types");
    std::string id = item["tone_id"].get<std::string>();
    double score = item["score"].get<double>();
    if (score < 0.0 || score > 1.0)
      throw RemoteParseError("score " + format_fixed(score, 4) +
                             " for \"" + id + "\" is outside [0, 1]");
    auto tone = parse_tone(id);
    if (!tone) {
      if (warnings) warnings->push_back("unknown tone id \"" + id + "\"");
      continue;
    }
    auto idx = static_cast<std::size_t>(*tone);
    scores.raw[idx] = score;
    scores.density[idx] = score;
    if (score >= threshold) scores.present.insert(*tone);
  }
}

inline ToneProfile parse_remote_body(const std::string& body,
                                     const std::string& story_id,
                                     double threshold) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(body);
  } catch (const nlohmann::json::exception& e) {
    throw RemoteParseError(std::string("bad response body: ") + e.what());
  }
  if (!doc.is_object()) throw RemoteParseError("response is not an object");

  ToneProfile profile;
  profile.story_id = story_id;

  const nlohmann::json* doc_tones = nullptr;
  if (doc.contains("tones")) {
    doc_tones = &doc["tones"];
  } else if (doc.contains("document_tone") && doc["document_tone"].is_object() &&
             doc["document_tone"].contains("tones")) {
    doc_tones = &doc["document_tone"]["tones"];
  }
  if (!doc_tones)
    throw RemoteParseError(
        "response has neither \"tones\" nor \"document_tone.tones\"");
  apply_scores(profile.document, *doc_tones, threshold, &profile.warnings);

  if (doc.contains("sentences_tone")) {
    const auto& sent = doc["sentences_tone"];
    if (!sent.is_array())
      throw RemoteParseError("\"sentences_tone\" is not an array");
    for (const auto& entry : sent) {
      if (!entry.is_object() || !entry.contains("tones"))
        throw RemoteParseError("sentence entry needs a \"tones\" array");
      ToneScores scores;
      apply_scores(scores, entry["tones"], threshold, &profile.warnings);
      profile.sentences.push_back(std::move(scores));
    }
  }
  return profile;
}

}  // namespace detail

/// One POST per story: body {"text": ...}, JSON back. Scores land in both
/// raw and density; present means score >= threshold.
inline ToneProfile fetch_remote_tones(const std::string& story_id,
                                      const std::string& text,
                                      const RemoteConfig& config) {
  auto url = detail::split_endpoint(config.endpoint);
  httplib::Client client(url.host_port);
  client.set_connection_timeout(config.timeout_seconds, 0);
  client.set_read_timeout(config.timeout_seconds, 0);
  client.set_write_timeout(config.timeout_seconds, 0);
  httplib::Headers headers;
  if (!config.token.empty())
    headers.emplace("Authorization", "Bearer " + config.token);

  nlohmann::json body = {{"text", text}};
  auto res = client.Post(url.path, headers, body.dump(), "application/json");
  if (!res)
    throw RemoteNetworkError("story " + story_id + ": cannot reach " +
                             config.endpoint + ": " +
                             httplib::to_string(res.error()));
  if (res->status == 401 || res->status == 403)
    throw RemoteAuthError(res->status,
                          "story " + story_id +
                              ": endpoint rejected the token (HTTP " +
                              std::to_string(res->status) + ")");
  if (res->status < 200 || res->status >= 300)
    throw RemoteHttpError(res->status, "story " + story_id + ": endpoint "
                          "returned HTTP " + std::to_string(res->status));
  try {
    return detail::parse_remote_body(res->body, story_id, config.threshold);
  } catch (const RemoteParseError& e) {
    throw RemoteParseError("story " + story_id + ": " + e.what());
  }
}

/// Scores every story, preserving corpus order, with at most
/// config.max_in_flight requests running at once. The first failure wins
/// and aborts the rest.
inline std::vector<ToneProfile> fetch_remote_tones_batch(
    const std::vector<Story>& stories, const RemoteConfig& config) {
  std::vector<ToneProfile> out(stories.size());
  if (stories.empty()) return out;

  std::size_t workers =
      std::min<std::size_t>(std::max<std::size_t>(1, config.max_in_flight),
                            stories.size());
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::mutex error_mutex;
  std::exception_ptr first_error;
  std::size_t first_error_index = stories.size();

  auto run = [&]() {
    while (!failed.load()) {
      std::size_t i = next.fetch_add(1);
      if (i >= stories.size()) return;
      try {
        out[i] = fetch_remote_tones(stories[i].story_id, stories[i].text,
                                    config);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (i < first_error_index) {
          first_error_index = i;
          first_error = std::current_exception();
        }
        failed.store(true);
        return;
      }
    }
  };

  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(run);
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
  return out;
}

}  // namespace miner

#endif  // MINER_TONES_REMOTE_HPP
