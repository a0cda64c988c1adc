#include <catch2/catch_amalgamated.hpp>

#include <atomic>
#include <string>
#include <thread>
#include <vector>

#include <httplib.h>
#include <json.hpp>

#include "miner/tones_remote.hpp"

using namespace miner;

namespace {

/// In-process stub endpoint. Handlers swap per test; the server owns one
/// listener thread for the whole binary.
class StubServer {
 public:
  StubServer() {
    server_.Post(
        "/tone", [this](const httplib::Request& req, httplib::Response& res) {
          handler_(req, res);
        });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }

  ~StubServer() {
    server_.stop();
    thread_.join();
  }

  int port() const { return port_; }
  std::string endpoint() const {
    return "http://127.0.0.1:" + std::to_string(port_) + "/tone";
  }

  using Handler =
      std::function<void(const httplib::Request&, httplib::Response&)>;
  void respond_with(Handler h) { handler_ = std::move(h); }

  void respond_json(const std::string& body, int status = 200) {
    respond_with([body, status](const httplib::Request&,
                                httplib::Response& res) {
      res.status = status;
      res.set_content(body, "application/json");
    });
  }

 private:
  httplib::Server server_;
  std::thread thread_;
  int port_ = 0;
  Handler handler_ = [](const httplib::Request&, httplib::Response& res) {
    res.status = 500;
  };
};

StubServer& stub() {
  static StubServer server;
  return server;
}

RemoteConfig config_for(StubServer& server, double threshold = 0.5) {
  RemoteConfig cfg;
  cfg.endpoint = server.endpoint();
  cfg.token = "secret-token";
  cfg.threshold = threshold;
  cfg.timeout_seconds = 5;
  return cfg;
}

}  // namespace

TEST_CASE("remote scores map into the profile") {
  auto& server = stub();
  server.respond_json(
      R"({"tones": [{"tone_id": "anger", "score": 0.71},
                    {"tone_id": "joy", "score": 0.2}]})");
  auto profile = fetch_remote_tones("s1", "some text", config_for(server));
  CHECK(profile.story_id == "s1");
  CHECK(profile.document.raw_of(Tone::anger) == 0.71);
  CHECK(profile.document.density_of(Tone::anger) == 0.71);
  CHECK(profile.document.raw_of(Tone::joy) == 0.2);
  // 0.2 sits below the 0.5 threshold
  CHECK(profile.document.present == std::set<Tone>{Tone::anger});
  CHECK(profile.warnings.empty());
}

TEST_CASE("watson-shaped responses with sentence tones are accepted") {
  auto& server = stub();
  server.respond_json(
      R"({"document_tone": {"tones": [{"tone_id": "sadness", "score": 0.8}]},
          "sentences_tone": [
            {"sentence_id": 0, "tones": [{"tone_id": "sadness", "score": 0.9}]},
            {"sentence_id": 1, "tones": []}
          ]})");
  auto profile = fetch_remote_tones("s2", "two sentences", config_for(server));
  CHECK(profile.document.present == std::set<Tone>{Tone::sadness});
  REQUIRE(profile.sentences.size() == 2);
  CHECK(profile.sentences[0].raw_of(Tone::sadness) == 0.9);
  CHECK(profile.sentences[0].present == std::set<Tone>{Tone::sadness});
  CHECK(profile.sentences[1].present.empty());
}

TEST_CASE("an empty tones array means no present tones") {
  auto& server = stub();
  server.respond_json(R"({"tones": []})");
  auto profile = fetch_remote_tones("s3", "text", config_for(server));
  CHECK(profile.document.present.empty());
  for (Tone t : all_tones()) CHECK(profile.document.raw_of(t) == 0.0);
}

TEST_CASE("present uses score at least threshold") {
  auto& server = stub();
  server.respond_json(
      R"({"tones": [{"tone_id": "fear", "score": 0.5},
                    {"tone_id": "joy", "score": 0.4999}]})");
  auto profile = fetch_remote_tones("s4", "text", config_for(server, 0.5));
  CHECK(profile.document.present == std::set<Tone>{Tone::fear});
}

TEST_CASE("unknown tone ids are skipped with a warning") {
  auto& server = stub();
  server.respond_json(
      R"({"tones": [{"tone_id": "openness", "score": 0.9},
                    {"tone_id": "anger", "score": 0.7}]})");
  auto profile = fetch_remote_tones("s5", "text", config_for(server));
  CHECK(profile.document.present == std::set<Tone>{Tone::anger});
  REQUIRE(profile.warnings.size() == 1);
  CHECK(profile.warnings[0].find("openness") != std::string::npos);
}

TEST_CASE("the bearer token travels in the authorization header") {
  auto& server = stub();
  std::string seen_auth;
  std::string seen_body;
  server.respond_with([&](const httplib::Request& req,
                          httplib::Response& res) {
    seen_auth = req.get_header_value("Authorization");
    seen_body = req.body;
    res.set_content(R"({"tones": []})", "application/json");
  });
  fetch_remote_tones("s6", "protest text", config_for(server));
  CHECK(seen_auth == "Bearer secret-token");
  auto body = nlohmann::json::parse(seen_body);
  CHECK(body["text"] == "protest text");
}

TEST_CASE("HTTP 500 surfaces as an http error naming the story") {
  auto& server = stub();
  server.respond_json("oops", 500);
  try {
    fetch_remote_tones("s7", "text", config_for(server));
    FAIL("expected RemoteHttpError");
  } catch (const RemoteHttpError& e) {
    CHECK(e.status() == 500);
    CHECK(std::string(e.what()).find("s7") != std::string::npos);
  }
}

TEST_CASE("401 and 403 surface as auth errors") {
  auto& server = stub();
  for (int status : {401, 403}) {
    server.respond_json(R"({"error": "denied"})", status);
    try {
      fetch_remote_tones("s8", "text", config_for(server));
      FAIL("expected RemoteAuthError");
    } catch (const RemoteAuthError& e) {
      CHECK(e.status() == status);
      CHECK(std::string(e.what()).find("s8") != std::string::npos);
    }
  }
}

TEST_CASE("malformed bodies surface as parse errors naming the story") {
  auto& server = stub();
  auto expect_parse_error = [&](const std::string& body) {
    server.respond_json(body);
    try {
      fetch_remote_tones("s9", "text", config_for(server));
      FAIL("expected RemoteParseError for body: " << body);
    } catch (const RemoteParseError& e) {
      CHECK(std::string(e.what()).find("s9") != std::string::npos);
    }
  };
  expect_parse_error("this is not json");
  expect_parse_error("[1, 2, 3]");
  expect_parse_error(R"({"no_tones_here": true})");
  expect_parse_error(R"({"tones": "anger"})");
  expect_parse_error(R"({"tones": [{"tone_id": "anger"}]})");
  expect_parse_error(R"({"tones": [{"tone_id": "anger", "score": 1.5}]})");
  expect_parse_error(R"({"tones": [{"tone_id": "anger", "score": -0.1}]})");
  expect_parse_error(R"({"tones": [{"tone_id": 3, "score": 0.5}]})");
  expect_parse_error(
      R"({"tones": [], "sentences_tone": [{"sentence_id": 0}]})");
}

TEST_CASE("unreachable endpoints surface as network errors") {
  RemoteConfig cfg;
  // reserved discard port, nothing listens there
  cfg.endpoint = "http://127.0.0.1:9/tone";
  cfg.timeout_seconds = 2;
  try {
    fetch_remote_tones("s10", "text", cfg);
    FAIL("expected RemoteNetworkError");
  } catch (const RemoteNetworkError& e) {
    CHECK(std::string(e.what()).find("s10") != std::string::npos);
  }
}

TEST_CASE("non-http schemes are rejected up front") {
  RemoteConfig cfg;
  cfg.endpoint = "https://tone.example.com/v1";
  CHECK_THROWS_AS(fetch_remote_tones("s11", "text", cfg), RemoteError);
  cfg.endpoint = "ftp://tone.example.com";
  CHECK_THROWS_AS(fetch_remote_tones("s11", "text", cfg), RemoteError);
  cfg.endpoint = "http://";
  CHECK_THROWS_AS(fetch_remote_tones("s11", "text", cfg), RemoteError);
}

TEST_CASE("batch fetches preserve story order") {
  auto& server = stub();
  server.respond_with([](const httplib::Request& req,
                         httplib::Response& res) {
    auto body = nlohmann::json::parse(req.body);
    std::string text = body["text"].get<std::string>();
    // score encodes the story text so order mistakes are visible
    double score = text == "first" ? 0.9 : text == "second" ? 0.8 : 0.7;
    nlohmann::json out = {
        {"tones",
         {{{"tone_id", "anger"}, {"score", score}}}}};
    res.set_content(out.dump(), "application/json");
  });

  std::vector<Story> stories(3);
  stories[0].story_id = "a";
  stories[0].text = "first";
  stories[1].story_id = "b";
  stories[1].text = "second";
  stories[2].story_id = "c";
  stories[2].text = "third";

  auto profiles = fetch_remote_tones_batch(stories, config_for(stub()));
  REQUIRE(profiles.size() == 3);
  CHECK(profiles[0].story_id == "a");
  CHECK(profiles[0].document.raw_of(Tone::anger) == 0.9);
  CHECK(profiles[1].story_id == "b");
  CHECK(profiles[1].document.raw_of(Tone::anger) == 0.8);
  CHECK(profiles[2].story_id == "c");
  CHECK(profiles[2].document.raw_of(Tone::anger) == 0.7);
}

TEST_CASE("batch failure aborts and reports the failing story") {
  auto& server = stub();
  std::atomic<int> requests{0};
  server.respond_with([&](const httplib::Request& req,
                          httplib::Response& res) {
    ++requests;
    auto body = nlohmann::json::parse(req.body);
    if (body["text"] == "bad") {
      res.status = 500;
      return;
    }
    res.set_content(R"({"tones": []})", "application/json");
  });

  std::vector<Story> stories(6);
  for (std::size_t i = 0; i < stories.size(); ++i) {
    stories[i].story_id = "s" + std::to_string(i);
    stories[i].text = i == 2 ? "bad" : "fine";
  }
  auto cfg = config_for(server);
  cfg.max_in_flight = 2;
  try {
    fetch_remote_tones_batch(stories, cfg);
    FAIL("expected RemoteHttpError");
  } catch (const RemoteHttpError& e) {
    CHECK(std::string(e.what()).find("s2") != std::string::npos);
  }
  // the in-flight cap plus early abort keeps the tail requests unsent
  CHECK(requests.load() <= static_cast<int>(stories.size()));
}

TEST_CASE("batch of nothing returns nothing") {
  auto cfg = config_for(stub());
  CHECK(fetch_remote_tones_batch({}, cfg).empty());
}

TEST_CASE("remote config comes from the environment") {
  ::unsetenv("TONE_ENDPOINT");
  ::unsetenv("TONE_TOKEN");
  CHECK_FALSE(remote_config_from_env().has_value());

  ::setenv("TONE_ENDPOINT", "http://tone.local/v1", 1);
  ::setenv("TONE_TOKEN", "abc", 1);
  auto cfg = remote_config_from_env();
  REQUIRE(cfg.has_value());
  CHECK(cfg->endpoint == "http://tone.local/v1");
  CHECK(cfg->token == "abc");
  ::unsetenv("TONE_ENDPOINT");
  ::unsetenv("TONE_TOKEN");
}
