#include <random>
#include <string>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "zonerec/geo.hpp"

using namespace zonerec;

namespace {

ZonePolygon to_zone(const std::vector<oracle::Pt>& pts, ZoneId id) {
  ZonePolygon p;
  p.zone_id = id;
  p.name = "z" + std::to_string(id);
  Ring ring;
  for (const auto& v : pts) ring.push_back({v.x, v.y});
  ring.push_back(ring.front());
  for (const auto& v : ring) p.bbox.extend(v);
  p.rings.push_back(std::move(ring));
  return p;
}

const char* kTwoZones = R"({
  "type": "FeatureCollection",
  "features": [
    {"type": "Feature", "properties": {"zone_id": 0, "name": "West"},
     "geometry": {"type": "Polygon", "coordinates": [[[0,0],[1,0],[1,1],[0,1],[0,0]]]}},
    {"type": "Feature", "properties": {"zone_id": 1, "name": "East"},
     "geometry": {"type": "MultiPolygon", "coordinates": [
        [[[1,0],[2,0],[2,1],[1,1],[1,0]]],
        [[[5,5],[6,5],[6,6],[5,6],[5,5]], [[5.4,5.4],[5.6,5.4],[5.6,5.6],[5.4,5.6],[5.4,5.4]]]
     ]}}
  ]
})";

}  // namespace

TEST(Geo, AgreesWithWindingNumberOnRandomPolygons) {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> coord(0.0, 10.0);
  std::size_t checked = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const auto pts = oracle::random_simple_polygon(gen, 5.0, 5.0, 0.5, 4.5, 3 + trial);
    const ZonePolygon zone = to_zone(pts, 0);
    for (int i = 0; i < 500; ++i) {
      const oracle::Pt p{coord(gen), coord(gen)};
      if (oracle::boundary_distance(pts, p) < 1e-9) continue;
      EXPECT_EQ(polygon_contains(zone, p.x, p.y), oracle::winding_number(pts, p) != 0);
      ++checked;
    }
  }
  EXPECT_GT(checked, 9000u);
}

TEST(Geo, LoadsPolygonsMultiPolygonsAndHoles) {
  const ZoneSet zones = load_zones(kTwoZones);
  ASSERT_EQ(zones.count(), 2u);
  EXPECT_EQ(zones.name(1), "East");
  EXPECT_EQ(zones.polygons().size(), 3u);
  EXPECT_EQ(locate({0.5, 0.5}, zones), 0u);
  EXPECT_EQ(locate({0.5, 1.5}, zones), 1u);
  EXPECT_EQ(locate({5.2, 5.2}, zones), 1u);
  EXPECT_FALSE(locate({5.5, 5.5}, zones).has_value());  // inside the hole
  EXPECT_FALSE(locate({3.0, 3.0}, zones).has_value());
}

TEST(Geo, SharedEdgeClaimedOnce) {
  const ZoneSet zones = load_zones(kTwoZones);
  // x = 1 is shared. The +x ray counts a vertical edge only when it lies
  // strictly east of the point, so the east square owns it.
  EXPECT_EQ(locate({0.5, 1.0}, zones), 1u);
  int claims = 0;
  for (const auto& poly : zones.polygons()) claims += polygon_contains(poly, 1.0, 0.5);
  EXPECT_EQ(claims, 1);
}

TEST(Geo, OverlapGoesToLowestZone) {
  const ZoneSet zones = load_zones(R"({"type":"FeatureCollection","features":[
    {"type":"Feature","properties":{"zone_id":0,"name":"a"},
     "geometry":{"type":"Polygon","coordinates":[[[0,0],[2,0],[2,2],[0,2],[0,0]]]}},
    {"type":"Feature","properties":{"zone_id":1,"name":"b"},
     "geometry":{"type":"Polygon","coordinates":[[[1,1],[3,1],[3,3],[1,3],[1,1]]]}}]})");
  EXPECT_EQ(locate({1.5, 1.5}, zones), 0u);
  EXPECT_EQ(locate({2.5, 2.5}, zones), 1u);
}

TEST(Geo, GeoJsonRoundTrip) {
  const ZoneSet zones = load_zones(kTwoZones);
  const ZoneSet again = load_zones(zones.to_geojson().dump());
  EXPECT_EQ(again.to_geojson(), zones.to_geojson());
  EXPECT_EQ(zones.to_geojson()["features"][1]["geometry"]["type"], "MultiPolygon");
}

TEST(Geo, RejectsMalformedDocuments) {
  EXPECT_THROW(load_zones("{"), ParseError);
  EXPECT_THROW(load_zones(R"({"type":"FeatureCollection","features":[]})"), ValidationError);
  // open ring
  EXPECT_THROW(load_zones(R"({"type":"FeatureCollection","features":[
    {"type":"Feature","properties":{"zone_id":0,"name":"a"},
     "geometry":{"type":"Polygon","coordinates":[[[0,0],[1,0],[1,1],[0,1]]]}}]})"),
               Error);
  // zone ids must follow feature order
  EXPECT_THROW(load_zones(R"({"type":"FeatureCollection","features":[
    {"type":"Feature","properties":{"zone_id":3,"name":"a"},
     "geometry":{"type":"Polygon","coordinates":[[[0,0],[1,0],[1,1],[0,1],[0,0]]]}}]})"),
               Error);
  // degenerate outer ring
  EXPECT_THROW(load_zones(R"({"type":"FeatureCollection","features":[
    {"type":"Feature","properties":{"zone_id":0,"name":"a"},
     "geometry":{"type":"Polygon","coordinates":[[[0,0],[1,1],[2,2],[0,0]]]}}]})"),
               Error);
  EXPECT_THROW(load_zones(R"({"type":"FeatureCollection","features":[
    {"type":"Feature","properties":{"zone_id":0,"name":"a"},
     "geometry":{"type":"Point","coordinates":[0,0]}}]})"),
               Error);
}

TEST(Geo, GridCoversExtentWithoutOverlap) {
  const ZoneSet grid = make_grid_zones(55);
  EXPECT_EQ(grid.count(), 55u);
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> lon(103.60, 104.05), lat(1.22, 1.47);
  for (int i = 0; i < 2000; ++i) {
    const GeoPoint p{lat(gen), lon(gen)};
    const auto z = grid.locate(p);
    if (!z) continue;  // the last row is partially filled
    int claims = 0;
    for (const auto& poly : grid.polygons()) claims += polygon_contains(poly, p.longitude, p.latitude);
    EXPECT_GE(claims, 1);
  }
  EXPECT_THROW(make_grid_zones(1), ConfigError);
}

TEST(Geo, PointValidity) {
  EXPECT_TRUE((GeoPoint{1.3, 103.8}.valid()));
  EXPECT_FALSE((GeoPoint{91.0, 0.0}.valid()));
  EXPECT_FALSE((GeoPoint{0.0, std::nan("")}.valid()));
}
