#pragma once

// Request handlers for the recommendation API. They are transport-free:
// each takes a request body and returns (status, JSON), and http_server.hpp
// binds them to routes. All loaded state is immutable after construction.

#include <algorithm>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "zonerec/corpus.hpp"
#include "zonerec/features.hpp"
#include "zonerec/geo.hpp"
#include "zonerec/model.hpp"
#include "zonerec/ranking.hpp"
#include "zonerec/text.hpp"

namespace zonerec {

struct HandlerResult {
  int status = 200;
  nlohmann::json body;
};

struct RecommendRequest {
  std::string name;
  std::string description;
  std::vector<std::string> categories;
  std::optional<long long> k;
};

struct ServedZone {
  std::size_t rank = 0;
  ZoneId zone_id = 0;
  std::string zone_name;
  double score = 0.0;
  double normalized_score = 0.0;
};

struct RecommendResponse {
  std::vector<ServedZone> zones;
  bool no_signal = false;
  nlohmann::json model;

  nlohmann::json to_json() const {
    nlohmann::json zj = nlohmann::json::array();
    for (const auto& z : zones) {
      zj.push_back({{"rank", z.rank},
                    {"zone_id", z.zone_id},
                    {"zone_name", z.zone_name},
                    {"score", z.score},
                    {"normalized_score", z.normalized_score}});
    }
    nlohmann::json flags = nlohmann::json::array();
    if (no_signal) flags.push_back("no_signal");
    return {{"zones", zj}, {"k", zones.size()}, {"flags", flags}, {"no_signal", no_signal}, {"model", model}};
  }
};

// Min-max over the whole score vector; a constant vector maps to 0.5.
inline std::vector<double> min_max_normalize(std::span<const double> scores) {
  std::vector<double> out(scores.size(), 0.5);
  if (scores.empty()) return out;
  const auto [lo, hi] = std::minmax_element(scores.begin(), scores.end());
  const double range = *hi - *lo;
  if (!(range > 0.0)) return out;
  for (std::size_t i = 0; i < scores.size(); ++i) out[i] = (scores[i] - *lo) / range;
  return out;
}

class RecommendService {
 public:
  // Not-loaded service: every data route answers 503.
  RecommendService() = default;

  RecommendService(ModelBundle bundle, ZoneSet zones) {
    if (bundle.zone_count != zones.count()) {
      throw ValidationError("model was trained for " + std::to_string(bundle.zone_count) +
                            " zones but the zone file has " + std::to_string(zones.count()));
    }
    auto s = std::make_shared<State>();
    s->zones_document = zones.to_geojson();
    s->bundle = std::move(bundle);
    s->zones = std::move(zones);
    s->model_info = {{"kind", to_string(s->bundle.config.kind)},
                     {"trained_at", s->bundle.metadata.value("trained_at", "unknown")},
                     {"corpus_hash", s->bundle.metadata.value("corpus_hash", "unknown")},
                     {"vocabulary_size", s->bundle.vocabulary.size()}};
    state_ = std::move(s);
  }

  bool loaded() const { return state_ != nullptr; }

  static RecommendRequest parse_request(const nlohmann::json& j) {
    if (!j.is_object()) throw ValidationError("request body must be a JSON object");
    RecommendRequest r;
    if (j.contains("name") && !j["name"].is_null()) {
      if (!j["name"].is_string()) throw ValidationError("'name' must be a string");
      r.name = j["name"].get<std::string>();
    }
    if (!j.contains("description") || !j["description"].is_string()) {
      throw ValidationError("'description' is required");
    }
    r.description = j["description"].get<std::string>();
    if (count_words(r.description) == 0) throw ValidationError("'description' must not be empty");
    if (j.contains("categories") && !j["categories"].is_null()) {
      if (!j["categories"].is_array()) throw ValidationError("'categories' must be an array of strings");
      for (const auto& c : j["categories"]) {
        if (!c.is_string()) throw ValidationError("'categories' must be an array of strings");
        r.categories.push_back(c.get<std::string>());
      }
    }
    if (j.contains("k") && !j["k"].is_null()) {
      if (!j["k"].is_number_integer()) throw ValidationError("'k' must be an integer");
      r.k = j["k"].get<long long>();
    }
    return r;
  }

  // Throws ValidationError for bad input; requires loaded().
  RecommendResponse recommend(const RecommendRequest& req) const {
    const State& s = *state_;
    const long long k = req.k.value_or(static_cast<long long>(std::min(kDefaultTopK, s.zones.count())));
    if (k < 1 || static_cast<std::size_t>(k) > s.zones.count()) {
      throw ValidationError("'k' must be between 1 and " + std::to_string(s.zones.count()));
    }
    CleanProfile query{"query", clean_text(req.name), clean_text(req.description),
                       clean_categories(req.categories), 0};
    const SparseVector x = vectorize(query, s.bundle.vocabulary);
    const std::vector<double> scores = score(s.bundle.model, x);
    const std::vector<double> normalized = min_max_normalize(scores);
    const Recommendation rec = zonerec::recommend(scores, static_cast<std::size_t>(k));

    RecommendResponse resp;
    resp.no_signal = x.empty();
    resp.model = s.model_info;
    for (std::size_t i = 0; i < rec.size(); ++i) {
      const auto& e = rec.entries[i];
      resp.zones.push_back({i + 1, e.zone_id, s.zones.name(e.zone_id), e.score, normalized[e.zone_id]});
    }
    return resp;
  }

  HandlerResult handle_recommend(const std::string& body) const {
    if (!loaded()) return unavailable();
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(body);
    } catch (const nlohmann::json::parse_error&) {
      return bad_request("request body is not valid JSON");
    }
    try {
      return {200, recommend(parse_request(j)).to_json()};
    } catch (const ValidationError& e) {
      return bad_request(e.what());
    } catch (const ConfigError& e) {
      return bad_request(e.what());
    }
  }

  HandlerResult handle_zones() const {
    if (!loaded()) return unavailable();
    return {200, state_->zones_document};
  }

  HandlerResult handle_health() const {
    if (!loaded()) return {503, {{"status", "not_loaded"}}};
    return {200,
            {{"status", "ok"},
             {"model_kind", to_string(state_->bundle.config.kind)},
             {"vocabulary_size", state_->bundle.vocabulary.size()},
             {"zone_count", state_->zones.count()}}};
  }

 private:
  struct State {
    ModelBundle bundle;
    ZoneSet zones;
    nlohmann::json zones_document;
    nlohmann::json model_info;
  };

  static HandlerResult bad_request(const std::string& message) {
    return {400, {{"error", "bad_request"}, {"message", message}}};
  }
  static HandlerResult unavailable() {
    return {503, {{"error", "unavailable"}, {"message", "model not loaded"}}};
  }

  std::shared_ptr<const State> state_;
};

}  // namespace zonerec
