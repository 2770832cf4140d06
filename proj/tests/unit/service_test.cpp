#include <chrono>
#include <set>
#include <thread>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "zonerec/evaluation.hpp"
#include "zonerec/http_server.hpp"
#include "zonerec/service.hpp"

using namespace zonerec;
using nlohmann::json;

namespace {

// One trained service shared by the suite; training is the slow part.
const RecommendService& service() {
  static const RecommendService s = [] {
    auto c = fixture::small_corpus(8, 30, 5);
    ModelConfig cfg;
    cfg.trees = 30;
    auto bundle = train_bundle(c.profiles, c.zones.count(), cfg, {}, {},
                               {{"trained_at", "2026-01-01T00:00:00Z"}, {"corpus_hash", "abc"}});
    return RecommendService(std::move(bundle), std::move(c.zones));
  }();
  return s;
}

std::string body(const json& j) { return j.dump(); }

const char* kDescription =
    "Family run hawker stall serving fragrant chicken rice, braised duck and soups every day "
    "from early morning until late at night with friendly service.";

}  // namespace

TEST(Service, NotLoadedAnswers503) {
  const RecommendService none;
  EXPECT_EQ(none.handle_recommend(body({{"description", "x"}})).status, 503);
  EXPECT_EQ(none.handle_zones().status, 503);
  const auto h = none.handle_health();
  EXPECT_EQ(h.status, 503);
  EXPECT_EQ(h.body["status"], "not_loaded");
}

TEST(Service, Health) {
  const auto h = service().handle_health();
  EXPECT_EQ(h.status, 200);
  EXPECT_EQ(h.body["status"], "ok");
  EXPECT_EQ(h.body["model_kind"], "rf");
  EXPECT_EQ(h.body["zone_count"], 8);
  EXPECT_GT(h.body["vocabulary_size"].get<int>(), 0);
}

TEST(Service, ZonesDocument) {
  const auto z = service().handle_zones();
  EXPECT_EQ(z.status, 200);
  EXPECT_EQ(z.body["type"], "FeatureCollection");
  EXPECT_EQ(z.body["features"].size(), 8u);
}

TEST(Service, RecommendReturnsRankedZones) {
  const auto r = service().handle_recommend(
      body({{"name", "Ah Seng"}, {"description", kDescription}, {"categories", {"Hawker"}}, {"k", 3}}));
  ASSERT_EQ(r.status, 200) << r.body.dump();
  const auto& zones = r.body["zones"];
  ASSERT_EQ(zones.size(), 3u);
  EXPECT_EQ(r.body["k"], 3);
  std::set<int> ids;
  for (std::size_t i = 0; i < zones.size(); ++i) {
    EXPECT_EQ(zones[i]["rank"], i + 1);
    ids.insert(zones[i]["zone_id"].get<int>());
    EXPECT_EQ(zones[i]["zone_name"], "Zone " + std::to_string(zones[i]["zone_id"].get<int>()));
    const double n = zones[i]["normalized_score"];
    EXPECT_GE(n, 0.0);
    EXPECT_LE(n, 1.0);
    if (i > 0) {
      EXPECT_GE(zones[i - 1]["score"].get<double>(), zones[i]["score"].get<double>());
    }
  }
  EXPECT_EQ(ids.size(), 3u);
  EXPECT_EQ(r.body["model"]["trained_at"], "2026-01-01T00:00:00Z");
  EXPECT_EQ(r.body["model"]["corpus_hash"], "abc");
}

TEST(Service, DefaultKIsTen) {
  const auto r = service().handle_recommend(body({{"description", kDescription}}));
  ASSERT_EQ(r.status, 200);
  EXPECT_EQ(r.body["zones"].size(), 8u);  // only 8 zones
}

TEST(Service, IdenticalRequestsGiveIdenticalResponses) {
  const std::string b = body({{"name", "Cafe"}, {"description", kDescription}});
  EXPECT_EQ(service().handle_recommend(b).body.dump(), service().handle_recommend(b).body.dump());
}

TEST(Service, TrainingDescriptionRanksItsOwnZoneFirst) {
  zonerec::SyntheticConfig cfg;
  cfg.zone_count = 8;
  cfg.profiles_per_zone = 30;
  cfg.seed = 5;
  const auto syn = generate_synthetic(cfg);
  std::size_t top1 = 0;
  for (std::size_t zone = 0; zone < 8; ++zone) {
    const auto& p = syn.profiles[zone * 30];
    const auto r = service().handle_recommend(
        body({{"name", p.name}, {"description", p.description}, {"categories", p.categories}}));
    ASSERT_EQ(r.status, 200);
    top1 += r.body["zones"][0]["zone_id"] == zone;
  }
  EXPECT_GE(top1, 7u);
}

TEST(Service, NoSignalFlag) {
  const auto r = service().handle_recommend(body({{"description", "zzzqqq xxyyzz wwvvuu"}}));
  ASSERT_EQ(r.status, 200);
  EXPECT_TRUE(r.body["no_signal"]);
  EXPECT_EQ(r.body["flags"], json::array({"no_signal"}));
  EXPECT_EQ(r.body["zones"].size(), 8u);
  zonerec::SyntheticConfig cfg;
  cfg.zone_count = 8;
  cfg.profiles_per_zone = 30;
  cfg.seed = 5;
  const auto ok = service().handle_recommend(body({{"description", generate_synthetic(cfg).profiles[0].description}}));
  EXPECT_FALSE(ok.body["no_signal"]);
  EXPECT_TRUE(ok.body["flags"].empty());
}

TEST(Service, BadRequests) {
  const std::vector<std::string> bad = {
      "not json",
      body(json::array()),
      body({{"name", "x"}}),
      body({{"description", ""}}),
      body({{"description", "   "}}),
      body({{"description", 5}}),
      body({{"description", "ok"}, {"categories", "cafe"}}),
      body({{"description", "ok"}, {"categories", {1, 2}}}),
      body({{"description", "ok"}, {"k", 0}}),
      body({{"description", "ok"}, {"k", 9}}),
      body({{"description", "ok"}, {"k", 2.5}}),
  };
  for (const auto& b : bad) {
    const auto r = service().handle_recommend(b);
    EXPECT_EQ(r.status, 400) << b;
    EXPECT_EQ(r.body["error"], "bad_request") << b;
    EXPECT_TRUE(r.body["message"].is_string());
  }
}

TEST(Service, RejectsZoneCountMismatch) {
  auto c = fixture::small_corpus(4, 20);
  ModelConfig cfg;
  cfg.kind = ModelKind::kRandomBaseline;
  auto bundle = train_bundle(c.profiles, c.zones.count(), cfg, {});
  EXPECT_THROW(RecommendService(std::move(bundle), make_grid_zones(5)), ValidationError);
}

TEST(MinMax, Normalization) {
  const std::vector<double> s = {2.0, -1.0, 5.0};
  EXPECT_EQ(min_max_normalize(s), (std::vector<double>{0.5, 0.0, 1.0}));
  const std::vector<double> flat = {3.0, 3.0};
  EXPECT_EQ(min_max_normalize(flat), (std::vector<double>{0.5, 0.5}));
}

TEST(Http, RoundTripOverLoopback) {
  httplib::Server server;
  ServerOptions opts;
  opts.cors_origin = "http://localhost:5173";
  install_routes(server, service(), opts);
  const int port = server.bind_to_any_port("127.0.0.1");
  ASSERT_GT(port, 0);
  std::thread t([&] { server.listen_after_bind(); });
  server.wait_until_ready();

  httplib::Client client("127.0.0.1", port);
  auto health = client.Get("/api/health");
  ASSERT_TRUE(health);
  EXPECT_EQ(health->status, 200);
  EXPECT_EQ(json::parse(health->body)["status"], "ok");
  EXPECT_EQ(health->get_header_value("Access-Control-Allow-Origin"), "http://localhost:5173");

  auto zones = client.Get("/api/zones");
  ASSERT_TRUE(zones);
  EXPECT_EQ(json::parse(zones->body)["features"].size(), 8u);

  auto rec = client.Post("/api/recommend", body({{"description", kDescription}, {"k", 2}}), "application/json");
  ASSERT_TRUE(rec);
  EXPECT_EQ(rec->status, 200);
  EXPECT_EQ(json::parse(rec->body)["zones"].size(), 2u);
  EXPECT_EQ(rec->get_header_value("Content-Type"), "application/json");

  auto bad = client.Post("/api/recommend", "{", "application/json");
  ASSERT_TRUE(bad);
  EXPECT_EQ(bad->status, 400);

  auto preflight = client.Options("/api/recommend");
  ASSERT_TRUE(preflight);
  EXPECT_EQ(preflight->status, 204);
  EXPECT_EQ(preflight->get_header_value("Access-Control-Allow-Methods"), "GET, POST, OPTIONS");

  server.stop();
  t.join();
}
