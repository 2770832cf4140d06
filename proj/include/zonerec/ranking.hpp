#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>
#include <utility>
#include <vector>

#include "zonerec/error.hpp"
#include "zonerec/geo.hpp"

namespace zonerec {

inline constexpr std::size_t kDefaultTopK = 10;

struct RankedZone {
  ZoneId zone_id = 0;
  double score = 0.0;
  friend bool operator==(const RankedZone&, const RankedZone&) = default;
};

// Descending by score, ties by ascending zone_id.
struct Recommendation {
  std::vector<RankedZone> entries;

  std::size_t size() const { return entries.size(); }

  // 1-based position of `zone`, or 0 when it is not listed.
  std::size_t rank_of(ZoneId zone) const {
    for (std::size_t i = 0; i < entries.size(); ++i) {
      if (entries[i].zone_id == zone) return i + 1;
    }
    return 0;
  }
};

inline Recommendation recommend(std::span<const double> scores, std::size_t k = kDefaultTopK) {
  if (scores.empty()) throw ValidationError("cannot rank an empty score vector");
  if (k < 1) throw ConfigError("k must be >= 1");
  for (double s : scores) {
    if (!std::isfinite(s)) throw ValidationError("score vector contains a non-finite value");
  }
  std::vector<ZoneId> order(scores.size());
  std::iota(order.begin(), order.end(), ZoneId{0});
  const std::size_t keep = std::min(k, scores.size());
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(keep), order.end(),
                    [&](ZoneId a, ZoneId b) {
                      if (scores[a] != scores[b]) return scores[a] > scores[b];
                      return a < b;
                    });
  Recommendation r;
  r.entries.reserve(keep);
  for (std::size_t i = 0; i < keep; ++i) r.entries.push_back({order[i], scores[order[i]]});
  return r;
}

}  // namespace zonerec
