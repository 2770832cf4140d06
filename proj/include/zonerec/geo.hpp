#pragma once

// Planning-zone boundaries and lat/long -> zone assignment.
//
// Containment is planar: longitude/latitude are treated as Cartesian x/y.
// That is accurate enough for city-scale zones and is a known limitation for
// anything larger.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "zonerec/error.hpp"

namespace zonerec {

using ZoneId = std::size_t;

struct GeoPoint {
  double latitude = 0.0;
  double longitude = 0.0;

  bool valid() const {
    return std::isfinite(latitude) && std::isfinite(longitude) &&
           latitude >= -90.0 && latitude <= 90.0 && longitude >= -180.0 &&
           longitude <= 180.0;
  }
};

struct Vertex {
  double lon = 0.0;
  double lat = 0.0;
  friend bool operator==(const Vertex&, const Vertex&) = default;
};

// Explicitly closed: front() == back().
using Ring = std::vector<Vertex>;

struct BoundingBox {
  double min_lon = std::numeric_limits<double>::infinity();
  double min_lat = std::numeric_limits<double>::infinity();
  double max_lon = -std::numeric_limits<double>::infinity();
  double max_lat = -std::numeric_limits<double>::infinity();

  void extend(const Vertex& v) {
    min_lon = std::min(min_lon, v.lon);
    max_lon = std::max(max_lon, v.lon);
    min_lat = std::min(min_lat, v.lat);
    max_lat = std::max(max_lat, v.lat);
  }

  bool contains(double lon, double lat) const {
    return lon >= min_lon && lon <= max_lon && lat >= min_lat && lat <= max_lat;
  }
};

// One polygon: rings[0] is the outer boundary, the rest are holes. A zone
// stored as a multi-polygon contributes one ZonePolygon per part, all with
// the same zone_id.
struct ZonePolygon {
  ZoneId zone_id = 0;
  std::string name;
  std::vector<Ring> rings;
  BoundingBox bbox;
};

inline double ring_signed_area(const Ring& ring) {
  double twice = 0.0;
  for (std::size_t i = 0; i + 1 < ring.size(); ++i) {
    twice += ring[i].lon * ring[i + 1].lat - ring[i + 1].lon * ring[i].lat;
  }
  return 0.5 * twice;
}

// Even-odd crossing test with a ray cast towards +longitude. No epsilon:
// points exactly on an edge get whatever the crossing rule yields.
inline bool ring_crossings_odd(const Ring& ring, double lon, double lat) {
  bool inside = false;
  for (std::size_t i = 0, j = ring.size() - 1; i < ring.size(); j = i++) {
    const Vertex& a = ring[i];
    const Vertex& b = ring[j];
    if ((a.lat > lat) != (b.lat > lat)) {
      const double cross_lon = (b.lon - a.lon) * (lat - a.lat) / (b.lat - a.lat) + a.lon;
      if (lon < cross_lon) inside = !inside;
    }
  }
  return inside;
}

inline bool polygon_contains(const ZonePolygon& poly, double lon, double lat) {
  if (!poly.bbox.contains(lon, lat)) return false;
  bool inside = false;
  for (const Ring& ring : poly.rings) {
    if (ring_crossings_odd(ring, lon, lat)) inside = !inside;
  }
  return inside;
}

class ZoneSet {
 public:
  ZoneSet() = default;

  // `polygons` must already be grouped in ascending zone_id order; `names` is
  // indexed by zone_id.
  ZoneSet(std::vector<std::string> names, std::vector<ZonePolygon> polygons)
      : names_(std::move(names)), polygons_(std::move(polygons)) {
    validate();
  }

  std::size_t count() const { return names_.size(); }
  const std::string& name(ZoneId id) const { return names_.at(id); }
  const std::vector<std::string>& names() const { return names_; }
  const std::vector<ZonePolygon>& polygons() const { return polygons_; }

  // Zone containing the point, or nullopt. On shared boundaries the lowest
  // zone_id that claims the point wins, since polygons are scanned in id order.
  std::optional<ZoneId> locate(const GeoPoint& point) const {
    for (const ZonePolygon& poly : polygons_) {
      if (polygon_contains(poly, point.longitude, point.latitude)) return poly.zone_id;
    }
    return std::nullopt;
  }

  // Feature-collection document; Polygon for single-part zones and
  // MultiPolygon otherwise. Deterministic for a given ZoneSet.
  nlohmann::json to_geojson() const {
    std::vector<std::vector<const ZonePolygon*>> parts(count());
    for (const ZonePolygon& p : polygons_) parts[p.zone_id].push_back(&p);

    auto ring_json = [](const Ring& ring) {
      nlohmann::json r = nlohmann::json::array();
      for (const Vertex& v : ring) r.push_back({v.lon, v.lat});
      return r;
    };
    auto polygon_json = [&](const ZonePolygon& p) {
      nlohmann::json rings = nlohmann::json::array();
      for (const Ring& ring : p.rings) rings.push_back(ring_json(ring));
      return rings;
    };

    nlohmann::json features = nlohmann::json::array();
    for (ZoneId id = 0; id < count(); ++id) {
      nlohmann::json geometry;
      if (parts[id].size() == 1) {
        geometry = {{"type", "Polygon"}, {"coordinates", polygon_json(*parts[id][0])}};
      } else {
        nlohmann::json coords = nlohmann::json::array();
        for (const ZonePolygon* p : parts[id]) coords.push_back(polygon_json(*p));
        geometry = {{"type", "MultiPolygon"}, {"coordinates", coords}};
      }
      features.push_back({{"type", "Feature"},
                          {"properties", {{"zone_id", id}, {"name", names_[id]}}},
                          {"geometry", geometry}});
    }
    return {{"type", "FeatureCollection"}, {"features", features}};
  }

 private:
  void validate() const {
    // Single-zone sets are legal geometry; the >= 2 label requirement is
    // enforced by training and evaluation.
    if (names_.empty()) throw ValidationError("zone set is empty");
    std::set<std::string> seen;
    for (const std::string& n : names_) {
      if (!seen.insert(n).second) throw ValidationError("duplicate zone name '" + n + "'");
    }
    std::vector<bool> has_polygon(names_.size(), false);
    ZoneId previous = 0;
    for (const ZonePolygon& p : polygons_) {
      if (p.zone_id >= names_.size()) throw ValidationError("polygon zone_id out of range");
      if (p.zone_id < previous) throw ValidationError("polygons not ordered by zone_id");
      previous = p.zone_id;
      has_polygon[p.zone_id] = true;
    }
    for (ZoneId id = 0; id < names_.size(); ++id) {
      if (!has_polygon[id]) throw ValidationError("zone " + std::to_string(id) + " has no polygon");
    }
  }

  std::vector<std::string> names_;
  std::vector<ZonePolygon> polygons_;
};

namespace detail {

inline Ring parse_ring(const nlohmann::json& coords, const std::string& where) {
  if (!coords.is_array()) throw ParseError(where + ": ring is not an array");
  Ring ring;
  ring.reserve(coords.size());
  for (const auto& c : coords) {
    if (!c.is_array() || c.size() < 2 || !c[0].is_number() || !c[1].is_number()) {
      throw ParseError(where + ": vertex is not a [lon, lat] pair");
    }
    Vertex v{c[0].get<double>(), c[1].get<double>()};
    if (!std::isfinite(v.lon) || !std::isfinite(v.lat)) {
      throw ParseError(where + ": non-finite coordinate");
    }
    ring.push_back(v);
  }
  if (ring.size() < 4) {
    throw ValidationError(where + ": ring has " + std::to_string(ring.size()) +
                          " vertices, need at least 4");
  }
  if (!(ring.front() == ring.back())) throw ValidationError(where + ": ring is not closed");
  return ring;
}

inline ZonePolygon parse_polygon(const nlohmann::json& coords, ZoneId id,
                                 const std::string& name, const std::string& where) {
  if (!coords.is_array() || coords.empty()) throw ParseError(where + ": polygon has no rings");
  ZonePolygon poly{id, name, {}, {}};
  for (std::size_t r = 0; r < coords.size(); ++r) {
    poly.rings.push_back(parse_ring(coords[r], where + " ring " + std::to_string(r)));
  }
  if (ring_signed_area(poly.rings.front()) == 0.0) {
    throw ValidationError(where + ": outer ring has zero area");
  }
  for (const Vertex& v : poly.rings.front()) poly.bbox.extend(v);
  return poly;
}

}  // namespace detail

// Parses a feature collection. Feature i must carry properties.zone_id == i.
inline ZoneSet load_zones(std::string_view document) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(document);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("boundary document is not valid JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("features") || !doc["features"].is_array()) {
    throw ParseError("boundary document has no 'features' array");
  }
  std::vector<std::string> names;
  std::vector<ZonePolygon> polygons;
  const auto& features = doc["features"];
  for (std::size_t i = 0; i < features.size(); ++i) {
    const std::string where = "feature " + std::to_string(i);
    const auto& f = features[i];
    if (!f.is_object() || !f.contains("properties") || !f["properties"].is_object()) {
      throw ParseError(where + ": missing properties");
    }
    const auto& props = f["properties"];
    if (!props.contains("zone_id") || !props["zone_id"].is_number_integer()) {
      throw ParseError(where + ": missing integer zone_id");
    }
    if (!props.contains("name") || !props["name"].is_string()) {
      throw ParseError(where + ": missing string name");
    }
    const auto raw_id = props["zone_id"].get<long long>();
    if (raw_id != static_cast<long long>(i)) {
      throw ValidationError(where + ": zone_id " + std::to_string(raw_id) +
                            " does not match file position");
    }
    const std::string name = props["name"].get<std::string>();
    if (!f.contains("geometry") || !f["geometry"].is_object()) {
      throw ParseError(where + ": missing geometry");
    }
    const auto& geom = f["geometry"];
    const std::string type = geom.value("type", "");
    if (!geom.contains("coordinates")) throw ParseError(where + ": geometry has no coordinates");
    const auto& coords = geom["coordinates"];
    if (type == "Polygon") {
      polygons.push_back(detail::parse_polygon(coords, i, name, where));
    } else if (type == "MultiPolygon") {
      if (!coords.is_array() || coords.empty()) throw ParseError(where + ": empty multipolygon");
      for (std::size_t p = 0; p < coords.size(); ++p) {
        polygons.push_back(
            detail::parse_polygon(coords[p], i, name, where + " part " + std::to_string(p)));
      }
    } else {
      throw ParseError(where + ": unsupported geometry type '" + type + "'");
    }
    names.push_back(name);
  }
  return ZoneSet(std::move(names), std::move(polygons));
}

inline std::optional<ZoneId> locate(const GeoPoint& point, const ZoneSet& zones) {
  return zones.locate(point);
}

// Axis-aligned grid of `zone_count` cells over the given extent, filled
// row-major from the south-west corner. Used for synthetic runs.
inline ZoneSet make_grid_zones(std::size_t zone_count, double min_lon = 103.60,
                               double min_lat = 1.22, double max_lon = 104.05,
                               double max_lat = 1.47) {
  if (zone_count < 2) throw ConfigError("zone_count must be >= 2");
  const auto cols = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(zone_count))));
  const std::size_t rows = (zone_count + cols - 1) / cols;
  const double dlon = (max_lon - min_lon) / static_cast<double>(cols);
  const double dlat = (max_lat - min_lat) / static_cast<double>(rows);
  std::vector<std::string> names;
  std::vector<ZonePolygon> polygons;
  for (std::size_t id = 0; id < zone_count; ++id) {
    const double x0 = min_lon + dlon * static_cast<double>(id % cols);
    const double y0 = min_lat + dlat * static_cast<double>(id / cols);
    const double x1 = x0 + dlon;
    const double y1 = y0 + dlat;
    ZonePolygon p;
    p.zone_id = id;
    p.name = "Zone " + std::to_string(id);
    p.rings.push_back({{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}, {x0, y0}});
    for (const Vertex& v : p.rings.front()) p.bbox.extend(v);
    names.push_back(p.name);
    polygons.push_back(std::move(p));
  }
  return ZoneSet(std::move(names), std::move(polygons));
}

}  // namespace zonerec
