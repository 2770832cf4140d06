#pragma once

// Top-k ranking metrics. AP and DCG are computed in their general form over
// a set of relevant zones; with the single true zone used in evaluation they
// reduce to reciprocal rank and 1/log2(rank + 1).

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "zonerec/ranking.hpp"

namespace zonerec {

namespace detail {

inline bool contains(std::span<const ZoneId> set, ZoneId z) {
  return std::find(set.begin(), set.end(), z) != set.end();
}

}  // namespace detail

inline double hit_at_k(const Recommendation& rec, std::span<const ZoneId> relevant, std::size_t k) {
  const std::size_t depth = std::min(k, rec.size());
  for (std::size_t i = 0; i < depth; ++i) {
    if (detail::contains(relevant, rec.entries[i].zone_id)) return 1.0;
  }
  return 0.0;
}

// AP@k = (1 / min(|relevant|, k)) * sum over relevant positions i <= k of P@i.
inline double average_precision_at_k(const Recommendation& rec, std::span<const ZoneId> relevant,
                                     std::size_t k) {
  if (relevant.empty()) return 0.0;
  const std::size_t depth = std::min(k, rec.size());
  double hits = 0.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < depth; ++i) {
    if (detail::contains(relevant, rec.entries[i].zone_id)) {
      hits += 1.0;
      sum += hits / static_cast<double>(i + 1);
    }
  }
  return sum / static_cast<double>(std::min(relevant.size(), k));
}

// Binary gains; the ideal ordering puts every relevant zone first.
inline double ndcg_at_k(const Recommendation& rec, std::span<const ZoneId> relevant, std::size_t k) {
  if (relevant.empty()) return 0.0;
  const std::size_t depth = std::min(k, rec.size());
  double dcg = 0.0;
  for (std::size_t i = 0; i < depth; ++i) {
    if (detail::contains(relevant, rec.entries[i].zone_id)) dcg += 1.0 / std::log2(static_cast<double>(i + 2));
  }
  double idcg = 0.0;
  const std::size_t ideal = std::min(relevant.size(), k);
  for (std::size_t i = 0; i < ideal; ++i) idcg += 1.0 / std::log2(static_cast<double>(i + 2));
  return dcg / idcg;
}

inline double hit_at_k(const Recommendation& rec, ZoneId truth, std::size_t k) {
  return hit_at_k(rec, std::span<const ZoneId>(&truth, 1), k);
}
inline double map_at_k(const Recommendation& rec, ZoneId truth, std::size_t k) {
  return average_precision_at_k(rec, std::span<const ZoneId>(&truth, 1), k);
}
inline double ndcg_at_k(const Recommendation& rec, ZoneId truth, std::size_t k) {
  return ndcg_at_k(rec, std::span<const ZoneId>(&truth, 1), k);
}

struct RankMetrics {
  double hit = 0.0;
  double map = 0.0;
  double ndcg = 0.0;
};

inline RankMetrics rank_metrics(const Recommendation& rec, ZoneId truth, std::size_t k) {
  return {hit_at_k(rec, truth, k), map_at_k(rec, truth, k), ndcg_at_k(rec, truth, k)};
}

}  // namespace zonerec
