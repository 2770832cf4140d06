#pragma once

// Synthetic stand-in for a crawled business corpus: a grid of zones, each
// with its own signal vocabulary, and profiles whose descriptions mix that
// vocabulary with words shared by every zone. Names and categories are drawn
// from shared pools only, so the description is the one informative group.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "zonerec/corpus.hpp"
#include "zonerec/error.hpp"
#include "zonerec/geo.hpp"
#include "zonerec/random.hpp"
#include "zonerec/text.hpp"

namespace zonerec {

struct SyntheticConfig {
  std::size_t zone_count = 55;
  std::size_t profiles_per_zone = 200;
  std::size_t vocab_per_zone = 30;
  double noise_ratio = 0.3;
  std::uint64_t seed = 1;

  std::size_t noise_vocab = 5;
  std::size_t name_vocab = 12;
  // Word draws within each pool follow p(rank r) ~ r^-s; 0 gives uniform.
  // Flatter draws grow the number of df >= 3 terms well past the 5000-term
  // budget, and rarest-first retention then leaves most documents with
  // almost no features.
  double zipf_exponent = 2.5;
  std::size_t min_description_words = 20;
  std::size_t max_description_words = 40;

  void validate() const {
    if (zone_count < 2) throw ConfigError("zone_count must be >= 2");
    if (profiles_per_zone < 1) throw ConfigError("profiles_per_zone must be >= 1");
    if (vocab_per_zone < 1) throw ConfigError("vocab_per_zone must be >= 1");
    if (!(noise_ratio >= 0.0 && noise_ratio < 1.0)) {
      throw ConfigError("noise_ratio must be in [0, 1)");
    }
    if (min_description_words < kMinDescriptionWords ||
        max_description_words < min_description_words) {
      throw ConfigError("description length range must start at >= 20 words");
    }
    if (noise_vocab < 1 || name_vocab < 1) throw ConfigError("shared pools must be non-empty");
    if (!(zipf_exponent >= 0.0 && zipf_exponent <= 4.0)) throw ConfigError("zipf_exponent must be in [0, 4]");
  }

  nlohmann::json to_json() const {
    return {{"zone_count", zone_count},
            {"profiles_per_zone", profiles_per_zone},
            {"vocab_per_zone", vocab_per_zone},
            {"noise_ratio", noise_ratio},
            {"seed", seed},
            {"noise_vocab", noise_vocab},
            {"name_vocab", name_vocab},
            {"zipf_exponent", zipf_exponent},
            {"min_description_words", min_description_words},
            {"max_description_words", max_description_words}};
  }
};

struct SyntheticCorpus {
  ZoneSet zones;
  std::vector<BusinessProfile> profiles;
  std::vector<std::vector<std::string>> signal_vocab;  // per zone
  std::vector<std::string> noise_vocab;
  std::vector<std::string> name_vocab;
};

inline const std::vector<std::string>& synthetic_category_labels() {
  static const std::vector<std::string> labels = {
      "Restaurant",    "Cafe",        "Bakery",       "Coffee Shop", "Bar",
      "Food Court",    "Hawker Stall", "Dessert Shop", "Noodle House", "Bistro",
      "Juice Bar",     "Tea Room",    "Pizza Place",  "Sushi Bar",   "Seafood Restaurant",
      "Fast Food Restaurant",
  };
  return labels;
}

namespace detail {

// Pronounceable pseudo-words that survive cleaning unchanged: not stopwords,
// and fixed points of the stemmer, so generated and cleaned text agree.
class WordFactory {
 public:
  explicit WordFactory(Rng& rng) : rng_(rng) {}

  std::string next() {
    static constexpr std::string_view onsets = "bdfgkmnprtvz";
    static constexpr std::string_view vowels = "aeiou";
    static constexpr std::string_view codas = "bdgkmnpt";
    for (;;) {
      std::string w;
      const std::size_t syllables = 2 + rng_.uniform_index(2);
      for (std::size_t s = 0; s < syllables; ++s) {
        w += onsets[rng_.uniform_index(onsets.size())];
        w += vowels[rng_.uniform_index(vowels.size())];
      }
      w += codas[rng_.uniform_index(codas.size())];
      if (used_.count(w)) continue;
      const auto cleaned = clean_text(w);
      if (cleaned.size() != 1 || cleaned.front() != w) continue;
      used_.insert(w);
      return w;
    }
  }

  std::vector<std::string> batch(std::size_t n) {
    std::vector<std::string> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.push_back(next());
    return out;
  }

 private:
  Rng& rng_;
  std::set<std::string> used_;
};

class ZipfSampler {
 public:
  ZipfSampler(std::size_t n, double exponent) : cdf_(n) {
    double total = 0.0;
    for (std::size_t r = 0; r < n; ++r) cdf_[r] = total += std::pow(static_cast<double>(r + 1), -exponent);
    for (double& c : cdf_) c /= total;
  }

  std::size_t operator()(Rng& rng) const {
    const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), rng.uniform());
    return std::min<std::size_t>(static_cast<std::size_t>(it - cdf_.begin()), cdf_.size() - 1);
  }

 private:
  std::vector<double> cdf_;
};

inline std::string zero_pad(std::size_t v, std::size_t width) {
  std::string s = std::to_string(v);
  if (s.size() < width) s.insert(0, width - s.size(), '0');
  return s;
}

}  // namespace detail

inline SyntheticCorpus generate_synthetic(const SyntheticConfig& cfg) {
  cfg.validate();
  Rng rng(cfg.seed);
  detail::WordFactory words(rng);

  SyntheticCorpus out;
  out.zones = make_grid_zones(cfg.zone_count);
  out.noise_vocab = words.batch(cfg.noise_vocab);
  out.name_vocab = words.batch(cfg.name_vocab);
  out.signal_vocab.reserve(cfg.zone_count);
  for (std::size_t z = 0; z < cfg.zone_count; ++z) out.signal_vocab.push_back(words.batch(cfg.vocab_per_zone));

  const detail::ZipfSampler signal_draw(cfg.vocab_per_zone, cfg.zipf_exponent);
  const detail::ZipfSampler noise_draw(cfg.noise_vocab, cfg.zipf_exponent);
  const detail::ZipfSampler name_draw(cfg.name_vocab, cfg.zipf_exponent);

  const auto& labels = synthetic_category_labels();
  const std::size_t span = cfg.max_description_words - cfg.min_description_words + 1;
  out.profiles.reserve(cfg.zone_count * cfg.profiles_per_zone);
  for (std::size_t z = 0; z < cfg.zone_count; ++z) {
    const ZonePolygon& cell = out.zones.polygons()[z];
    const BoundingBox& box = cell.bbox;
    const double inset_lon = 0.05 * (box.max_lon - box.min_lon);
    const double inset_lat = 0.05 * (box.max_lat - box.min_lat);
    for (std::size_t i = 0; i < cfg.profiles_per_zone; ++i) {
      BusinessProfile p;
      p.id = "syn-" + detail::zero_pad(z, 3) + "-" + detail::zero_pad(i, 5);

      p.name = out.name_vocab[name_draw(rng)] + " " + out.name_vocab[name_draw(rng)];

      const std::size_t length = cfg.min_description_words + rng.uniform_index(span);
      for (std::size_t w = 0; w < length; ++w) {
        if (w) p.description += ' ';
        if (rng.bernoulli(cfg.noise_ratio)) {
          p.description += out.noise_vocab[noise_draw(rng)];
        } else {
          p.description += out.signal_vocab[z][signal_draw(rng)];
        }
      }

      const std::size_t n_labels = 1 + rng.uniform_index(2);
      for (std::size_t c = 0; c < n_labels; ++c) {
        p.categories.push_back(labels[rng.uniform_index(labels.size())]);
      }

      p.location = GeoPoint{rng.uniform(box.min_lat + inset_lat, box.max_lat - inset_lat),
                            rng.uniform(box.min_lon + inset_lon, box.max_lon - inset_lon)};
      p.checkins = static_cast<std::int64_t>(rng.uniform_index(5000));
      out.profiles.push_back(std::move(p));
    }
  }
  return out;
}

}  // namespace zonerec
