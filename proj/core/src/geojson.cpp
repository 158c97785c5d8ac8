#include "poikit/geojson.hpp"

#include <fstream>

#include "json.hpp"
#include "poikit/csv.hpp"

namespace poikit::io {

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json feature_to_json(const PoiFeature& f) {
  ordered_json props;
  props["user_id"] = f.user_id;
  props["cluster_id"] = f.cluster_id;
  props["member_count"] = f.member_count;
  props["first_arrive"] = f.first_arrive;
  props["last_depart"] = f.last_depart;
  if (f.report) {
    props["io_label"] = std::string(to_string(f.report->io_label));
    props["pp_label"] = std::string(to_string(f.report->pp_label));
    if (f.report->p1) props["P1"] = *f.report->p1;
    if (f.report->p2) props["P2"] = *f.report->p2;
    if (f.report->p3) props["P3"] = *f.report->p3;
    if (f.report->p4) props["P4"] = *f.report->p4;
    props["P0"] = f.report->p0;
    props["n_slots"] = f.report->n_slots;
    props["low_confidence"] = f.report->low_confidence;
  }

  ordered_json feature;
  feature["type"] = "Feature";
  feature["geometry"] = {{"type", "Point"},
                         {"coordinates", {f.centroid_lon, f.centroid_lat}}};
  feature["properties"] = std::move(props);
  return feature;
}

}  // namespace

std::string to_geojson(const std::vector<PoiFeature>& features) {
  ordered_json root;
  root["type"] = "FeatureCollection";
  root["features"] = ordered_json::array();
  for (const auto& f : features) root["features"].push_back(feature_to_json(f));
  return root.dump(2) + "\n";
}

void write_geojson_file(const std::string& path,
                        const std::vector<PoiFeature>& features) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot create output file: " + path);
  out << to_geojson(features);
}

std::vector<PoiFeature> read_geojson_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open input file: " + path);

  nlohmann::json root;
  try {
    in >> root;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(path + ": invalid JSON: " + e.what());
  }

  std::vector<PoiFeature> features;
  try {
    for (const auto& jf : root.at("features")) {
      PoiFeature f;
      const auto& coords = jf.at("geometry").at("coordinates");
      f.centroid_lon = coords.at(0).get<double>();
      f.centroid_lat = coords.at(1).get<double>();
      const auto& props = jf.at("properties");
      f.user_id = props.at("user_id").get<std::string>();
      f.cluster_id = props.at("cluster_id").get<int>();
      f.member_count = props.at("member_count").get<std::size_t>();
      f.first_arrive = props.at("first_arrive").get<Timestamp>();
      f.last_depart = props.at("last_depart").get<Timestamp>();
      if (props.contains("io_label")) {
        EnvReport r;
        r.poi_cluster_id = f.cluster_id;
        auto io = io_label_from_string(props.at("io_label").get<std::string>());
        auto pp = pp_label_from_string(props.at("pp_label").get<std::string>());
        if (!io || !pp) throw InputError(path + ": bad label in properties");
        r.io_label = *io;
        r.pp_label = *pp;
        if (props.contains("P1")) r.p1 = props.at("P1").get<double>();
        if (props.contains("P2")) r.p2 = props.at("P2").get<double>();
        if (props.contains("P3")) r.p3 = props.at("P3").get<double>();
        if (props.contains("P4")) r.p4 = props.at("P4").get<double>();
        if (props.contains("P0")) r.p0 = props.at("P0").get<double>();
        if (props.contains("n_slots")) r.n_slots = props.at("n_slots").get<std::size_t>();
        if (props.contains("low_confidence"))
          r.low_confidence = props.at("low_confidence").get<bool>();
        f.report = r;
      }
      features.push_back(std::move(f));
    }
  } catch (const nlohmann::json::exception& e) {
    throw InputError(path + ": not a poikit FeatureCollection: " + e.what());
  }
  return features;
}

}  // namespace poikit::io
