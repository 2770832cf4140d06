#pragma once

#include <vector>

#include "zonerec/corpus.hpp"
#include "zonerec/synthetic.hpp"

namespace fixture {

struct SmallCorpus {
  zonerec::ZoneSet zones;
  std::vector<zonerec::CleanProfile> profiles;
};

inline SmallCorpus small_corpus(std::size_t zones = 6, std::size_t per_zone = 30, std::uint64_t seed = 3) {
  zonerec::SyntheticConfig cfg;
  cfg.zone_count = zones;
  cfg.profiles_per_zone = per_zone;
  cfg.seed = seed;
  auto syn = zonerec::generate_synthetic(cfg);
  auto filtered = zonerec::filter_and_label(syn.profiles, syn.zones);
  return {std::move(syn.zones), std::move(filtered.profiles)};
}

}  // namespace fixture
