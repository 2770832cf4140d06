#pragma once

// Business profiles: raw ingestion, cleaning, quality filtering and zone
// labelling, plus the JSON-lines formats for raw and cleaned corpora.

#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "zonerec/error.hpp"
#include "zonerec/geo.hpp"
#include "zonerec/text.hpp"

namespace zonerec {

inline constexpr std::size_t kMinDescriptionWords = 20;

struct BusinessProfile {
  std::string id;
  std::string name;
  std::string description;
  std::vector<std::string> categories;
  std::optional<GeoPoint> location;
  std::int64_t checkins = 0;

  friend bool operator==(const BusinessProfile& a, const BusinessProfile& b) {
    auto loc_eq = [](const std::optional<GeoPoint>& x, const std::optional<GeoPoint>& y) {
      if (x.has_value() != y.has_value()) return false;
      return !x || (x->latitude == y->latitude && x->longitude == y->longitude);
    };
    return a.id == b.id && a.name == b.name && a.description == b.description &&
           a.categories == b.categories && loc_eq(a.location, b.location) &&
           a.checkins == b.checkins;
  }
};

struct CleanProfile {
  std::string id;
  std::vector<std::string> name_tokens;
  std::vector<std::string> description_tokens;
  std::vector<std::string> category_tokens;
  ZoneId zone_id = 0;

  friend bool operator==(const CleanProfile&, const CleanProfile&) = default;
};

namespace drop_reason {
inline constexpr const char* kNoLocation = "no_location";
inline constexpr const char* kShortDescription = "short_description";
inline constexpr const char* kOutsideZones = "outside_zones";
}  // namespace drop_reason

struct DropReport {
  std::map<std::string, std::size_t> counts{{drop_reason::kNoLocation, 0},
                                            {drop_reason::kShortDescription, 0},
                                            {drop_reason::kOutsideZones, 0}};

  std::size_t total() const {
    std::size_t n = 0;
    for (const auto& [_, c] : counts) n += c;
    return n;
  }

  nlohmann::json to_json() const {
    nlohmann::json j = nlohmann::json::object();
    for (const auto& [reason, c] : counts) j[reason] = c;
    return j;
  }
};

struct FilterResult {
  std::vector<CleanProfile> profiles;
  DropReport drops;
};

inline CleanProfile clean_profile(const BusinessProfile& p, ZoneId zone) {
  return CleanProfile{p.id, clean_text(p.name), clean_text(p.description),
                      clean_categories(p.categories), zone};
}

// Drops profiles without usable coordinates, with fewer than 20 raw
// description words, or located outside every zone. Input order is kept.
inline FilterResult filter_and_label(const std::vector<BusinessProfile>& profiles,
                                     const ZoneSet& zones) {
  std::set<std::string> ids;
  for (const auto& p : profiles) {
    if (p.id.empty()) throw ValidationError("profile with empty id");
    if (!ids.insert(p.id).second) throw ValidationError("duplicate profile id '" + p.id + "'");
  }
  FilterResult out;
  for (const auto& p : profiles) {
    if (!p.location || !p.location->valid()) {
      ++out.drops.counts[drop_reason::kNoLocation];
      continue;
    }
    if (count_words(p.description) < kMinDescriptionWords) {
      ++out.drops.counts[drop_reason::kShortDescription];
      continue;
    }
    const auto zone = zones.locate(*p.location);
    if (!zone) {
      ++out.drops.counts[drop_reason::kOutsideZones];
      continue;
    }
    out.profiles.push_back(clean_profile(p, *zone));
  }
  return out;
}

// --- raw corpus: one JSON object per line --------------------------------

inline nlohmann::json to_json(const BusinessProfile& p) {
  nlohmann::json j = {{"id", p.id},
                      {"name", p.name},
                      {"description", p.description},
                      {"categories", p.categories}};
  if (p.location) {
    j["lat"] = p.location->latitude;
    j["lon"] = p.location->longitude;
  } else {
    j["lat"] = nullptr;
    j["lon"] = nullptr;
  }
  j["checkins"] = p.checkins;
  return j;
}

inline BusinessProfile profile_from_json(const nlohmann::json& j) {
  BusinessProfile p;
  p.id = j.at("id").get<std::string>();
  p.name = j.value("name", "");
  p.description = j.value("description", "");
  if (j.contains("categories") && !j["categories"].is_null()) {
    p.categories = j["categories"].get<std::vector<std::string>>();
  }
  const bool has_lat = j.contains("lat") && j["lat"].is_number();
  const bool has_lon = j.contains("lon") && j["lon"].is_number();
  if (has_lat && has_lon) p.location = GeoPoint{j["lat"].get<double>(), j["lon"].get<double>()};
  p.checkins = j.contains("checkins") && !j["checkins"].is_null()
                   ? j["checkins"].get<std::int64_t>()
                   : 0;
  if (p.checkins < 0) throw ValidationError("profile '" + p.id + "' has negative checkins");
  return p;
}

inline std::vector<BusinessProfile> read_profiles(std::istream& in) {
  std::vector<BusinessProfile> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(profile_from_json(nlohmann::json::parse(line)));
    } catch (const nlohmann::json::exception& e) {
      throw ParseError("corpus line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

inline void write_profiles(std::ostream& out, const std::vector<BusinessProfile>& profiles) {
  for (const auto& p : profiles) out << to_json(p).dump() << '\n';
}

// --- clean corpus: header line, then one profile per line ----------------

inline constexpr const char* kCleanCorpusFormat = "zonerec-clean-corpus";
inline constexpr int kCleanCorpusVersion = 1;

struct CleanCorpus {
  std::size_t zone_count = 0;
  std::vector<CleanProfile> profiles;
  // Provenance carried through from ingest (config, seed, drop report).
  nlohmann::json meta = nlohmann::json::object();
};

inline nlohmann::json to_json(const CleanProfile& p) {
  return {{"id", p.id},
          {"zone_id", p.zone_id},
          {"name_tokens", p.name_tokens},
          {"description_tokens", p.description_tokens},
          {"category_tokens", p.category_tokens}};
}

inline void write_clean_corpus(std::ostream& out, const CleanCorpus& corpus) {
  nlohmann::json header = {{"format", kCleanCorpusFormat},
                           {"version", kCleanCorpusVersion},
                           {"zone_count", corpus.zone_count},
                           {"profile_count", corpus.profiles.size()},
                           {"meta", corpus.meta}};
  out << header.dump() << '\n';
  for (const auto& p : corpus.profiles) out << to_json(p).dump() << '\n';
}

inline CleanCorpus read_clean_corpus(std::istream& in) {
  CleanCorpus corpus;
  std::string line;
  if (!std::getline(in, line)) throw ParseError("clean corpus is empty");
  try {
    const auto header = nlohmann::json::parse(line);
    if (!header.is_object() || header.value("format", "") != kCleanCorpusFormat) {
      throw ParseError("not a clean corpus (run 'ingest' on raw profiles first)");
    }
    if (header.value("version", 0) != kCleanCorpusVersion) {
      throw ParseError("unsupported clean corpus version");
    }
    corpus.zone_count = header.at("zone_count").get<std::size_t>();
    corpus.meta = header.value("meta", nlohmann::json::object());
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("clean corpus header: ") + e.what());
  }
  std::size_t lineno = 1;
  std::set<std::string> ids;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      CleanProfile p{j.at("id").get<std::string>(),
                     j.at("name_tokens").get<std::vector<std::string>>(),
                     j.at("description_tokens").get<std::vector<std::string>>(),
                     j.at("category_tokens").get<std::vector<std::string>>(),
                     j.at("zone_id").get<ZoneId>()};
      if (p.zone_id >= corpus.zone_count) {
        throw ValidationError("clean corpus line " + std::to_string(lineno) +
                              ": zone_id out of range");
      }
      if (!ids.insert(p.id).second) {
        throw ValidationError("clean corpus line " + std::to_string(lineno) +
                              ": duplicate id '" + p.id + "'");
      }
      corpus.profiles.push_back(std::move(p));
    } catch (const nlohmann::json::exception& e) {
      throw ParseError("clean corpus line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return corpus;
}

}  // namespace zonerec
