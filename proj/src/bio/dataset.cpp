#include "hb/bio/dataset.hpp"

#include <json.hpp>

namespace hb::bio {

using nlohmann::json;

void save_manifest(const DatasetManifest& m) {
  json j;
  j["format"] = "hb-dataset";
  j["version"] = 1;
  json cfg;
  cfg["subjects"] = m.config.subjects;
  cfg["sessions"] = m.config.sessions;
  cfg["p_flip"] = m.config.p_flip;
  cfg["face_sigma"] = m.config.face_sigma;
  cfg["max_shift"] = m.config.max_shift;
  cfg["face_dim"] = m.config.face_dim;
  cfg["seed"] = m.config.seed;
  cfg["degrade_face_prob"] = m.config.degrade_face_prob;
  cfg["degrade_iris_prob"] = m.config.degrade_iris_prob;
  cfg["degrade_face_sigma"] = m.config.degrade_face_sigma;
  cfg["degrade_iris_flip"] = m.config.degrade_iris_flip;
  if (!m.config.forced_shifts.empty()) cfg["forced_shifts"] = m.config.forced_shifts;
  j["generator"] = cfg;
  json subs = json::array();
  for (const auto& s : m.subjects) {
    json js;
    js["id"] = s.id;
    json sessions = json::array();
    for (const auto& sess : s.sessions) {
      json je;
      je["id"] = sess.id;
      je["shift"] = sess.shift;
      je["quality"] = sess.quality;
      je["left_icod"] = sess.left_icod;
      je["right_icod"] = sess.right_icod;
      je["face_fvec"] = sess.face_fvec;
      sessions.push_back(je);
    }
    js["sessions"] = sessions;
    subs.push_back(js);
  }
  j["subjects"] = subs;
  atomic_write_file(m.root + "/manifest.json", j.dump(2));
}

DatasetManifest load_manifest(const std::string& dataset_dir) {
  json j = json::parse(read_text_file(dataset_dir + "/manifest.json"));
  if (j.value("format", "") != "hb-dataset") throw DecodeError("not a dataset manifest");
  DatasetManifest m;
  m.root = dataset_dir;
  const auto& cfg = j.at("generator");
  m.config.subjects = cfg.at("subjects");
  m.config.sessions = cfg.at("sessions");
  m.config.p_flip = cfg.at("p_flip");
  m.config.face_sigma = cfg.at("face_sigma");
  m.config.max_shift = cfg.at("max_shift");
  m.config.face_dim = cfg.at("face_dim");
  m.config.seed = cfg.at("seed");
  m.config.degrade_face_prob = cfg.value("degrade_face_prob", 0.0);
  m.config.degrade_iris_prob = cfg.value("degrade_iris_prob", 0.0);
  m.config.degrade_face_sigma = cfg.value("degrade_face_sigma", 2.0);
  m.config.degrade_iris_flip = cfg.value("degrade_iris_flip", 0.45);
  if (cfg.contains("forced_shifts"))
    m.config.forced_shifts = cfg.at("forced_shifts").get<std::vector<int>>();
  for (const auto& js : j.at("subjects")) {
    SubjectEntry s;
    s.id = js.at("id");
    for (const auto& je : js.at("sessions")) {
      SessionEntry e;
      e.id = je.at("id");
      e.shift = je.at("shift");
      e.quality = je.value("quality", "good");
      e.left_icod = je.at("left_icod");
      e.right_icod = je.at("right_icod");
      e.face_fvec = je.at("face_fvec");
      s.sessions.push_back(std::move(e));
    }
    m.subjects.push_back(std::move(s));
  }
  return m;
}

}  // namespace hb::bio
