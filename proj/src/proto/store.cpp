#include "hb/proto/store.hpp"

#include <json.hpp>

#include <cstdio>
#include <filesystem>

#include "hb/log.hpp"

namespace hb::proto {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void refuse_secret(const std::vector<std::uint8_t>& bytes, const char* what) {
  if (rlwe::container_magic(bytes) == rlwe::kMagicSecretKey)
    throw KeyMaterialError(std::string("refusing to accept a secret-key container as ") + what);
}

}  // namespace

GalleryStore::GalleryStore(std::string root, rlwe::ContextPtr ctx)
    : root_(std::move(root)), ctx_(std::move(ctx)) {
  fs::create_directories(root_);
  load_manifest();
}

void GalleryStore::load_manifest() {
  std::string path = root_ + "/manifest.json";
  if (!fs::exists(path)) return;
  json j = json::parse(read_text_file(path));
  enroll_counter_ = j.value("enroll_counter", 0ull);
  for (const auto& js : j.at("subjects")) {
    SubjectRecord rec;
    rec.subject_id = js.at("id");
    rec.pk_path = js.at("pk");
    rec.rlk_path = js.value("rlk", "");
    rec.gks_path = js.value("gks", "");
    for (const auto& jt : js.at("templates")) {
      StoredTemplate st;
      st.template_id = jt.at("id");
      st.rotation = jt.at("rotation");
      st.modality = jt.value("modality", "");
      st.ct_path = jt.at("path");
      rec.templates.push_back(std::move(st));
    }
    subjects_.push_back(std::move(rec));
  }
}

void GalleryStore::write_manifest_locked() {
  json j;
  j["format"] = "hb-gallery";
  j["version"] = 1;
  j["enroll_counter"] = enroll_counter_;
  json subs = json::array();
  for (const auto& rec : subjects_) {
    json js;
    js["id"] = rec.subject_id;
    js["pk"] = rec.pk_path;
    if (!rec.rlk_path.empty()) js["rlk"] = rec.rlk_path;
    if (!rec.gks_path.empty()) js["gks"] = rec.gks_path;
    json tpls = json::array();
    for (const auto& st : rec.templates) {
      json jt;
      jt["id"] = st.template_id;
      jt["rotation"] = st.rotation;
      jt["modality"] = st.modality;
      jt["path"] = st.ct_path;
      tpls.push_back(jt);
    }
    js["templates"] = tpls;
    subs.push_back(js);
  }
  j["subjects"] = subs;
  atomic_write_file(root_ + "/manifest.json", j.dump(2));
}

std::vector<std::string> GalleryStore::enroll_subject(
    const std::string& subject_id, const std::vector<std::uint8_t>& pk_bytes,
    const std::vector<std::uint8_t>* rlk_bytes, const std::vector<std::uint8_t>* gks_bytes,
    const std::vector<std::pair<int, std::vector<std::uint8_t>>>& rotation_and_ct,
    const std::string& modality) {
  if (subject_id.empty() || subject_id.find('/') != std::string::npos ||
      subject_id.find("..") != std::string::npos)
    throw UsageError("invalid subject id");
  if (rotation_and_ct.empty()) throw UsageError("no templates to enroll");

  refuse_secret(pk_bytes, "a public key");
  rlwe::parse_public_key(*ctx_, pk_bytes);  // validates magic, version, fingerprint
  if (rlk_bytes) {
    refuse_secret(*rlk_bytes, "a relin key");
    rlwe::parse_relin_key(*ctx_, *rlk_bytes);
  }
  if (gks_bytes) {
    refuse_secret(*gks_bytes, "Galois keys");
    rlwe::parse_galois_keys(*ctx_, *gks_bytes);
  }
  for (const auto& [rot, ct] : rotation_and_ct) {
    (void)rot;
    refuse_secret(ct, "a template");
    rlwe::parse_ciphertext(*ctx_, ct);
  }

  std::lock_guard<std::mutex> lock(mu_);
  std::uint64_t version = ++enroll_counter_;
  char buf[32];
  std::snprintf(buf, sizeof buf, "v%06llu", static_cast<unsigned long long>(version));
  std::string rel_dir = "subjects/" + subject_id + "/" + buf;
  fs::create_directories(root_ + "/" + rel_dir);

  SubjectRecord rec;
  rec.subject_id = subject_id;
  rec.pk_path = rel_dir + "/pk.hbpk";
  atomic_write_file(root_ + "/" + rec.pk_path, pk_bytes);
  if (rlk_bytes) {
    rec.rlk_path = rel_dir + "/relin.hbrk";
    atomic_write_file(root_ + "/" + rec.rlk_path, *rlk_bytes);
  }
  if (gks_bytes) {
    rec.gks_path = rel_dir + "/galois.hbgk";
    atomic_write_file(root_ + "/" + rec.gks_path, *gks_bytes);
  }
  std::vector<std::string> ids;
  for (std::size_t i = 0; i < rotation_and_ct.size(); ++i) {
    StoredTemplate st;
    std::snprintf(buf, sizeof buf, "tpl_%03zu", i);
    st.template_id = subject_id + "/" + buf;
    st.rotation = rotation_and_ct[i].first;
    st.modality = modality;
    st.ct_path = rel_dir + "/" + buf + ".hbct";
    atomic_write_file(root_ + "/" + st.ct_path, rotation_and_ct[i].second);
    ids.push_back(st.template_id);
    rec.templates.push_back(std::move(st));
  }

  // all files are on disk; now swap the manifest entry atomically
  std::string old_dir;
  for (auto& existing : subjects_) {
    if (existing.subject_id == subject_id) {
      old_dir = fs::path(existing.pk_path).parent_path().string();
      existing = rec;
      rec.subject_id.clear();
      break;
    }
  }
  if (!rec.subject_id.empty()) subjects_.push_back(std::move(rec));
  write_manifest_locked();

  // best-effort cleanup of the replaced version; manifest no longer points there
  if (!old_dir.empty() && old_dir != rel_dir) {
    std::error_code ec;
    fs::remove_all(root_ + "/" + old_dir, ec);
  }
  return ids;
}

std::optional<SubjectRecord> GalleryStore::lookup(const std::string& subject_id) const {
  std::lock_guard<std::mutex> lock(mu_);
  for (const auto& rec : subjects_)
    if (rec.subject_id == subject_id) return rec;
  return std::nullopt;
}

std::vector<std::string> GalleryStore::subject_ids() const {
  std::lock_guard<std::mutex> lock(mu_);
  std::vector<std::string> out;
  out.reserve(subjects_.size());
  for (const auto& rec : subjects_) out.push_back(rec.subject_id);
  return out;
}

std::vector<std::uint8_t> GalleryStore::read_blob(const std::string& rel_path) const {
  return read_file(root_ + "/" + rel_path);
}

void GalleryStore::validate() const {
  std::lock_guard<std::mutex> lock(mu_);
  for (const auto& rec : subjects_) {
    auto check = [&](const std::string& rel, const char* expect) {
      if (rel.empty()) return;
      auto bytes = read_file(root_ + "/" + rel);
      auto magic = rlwe::container_magic(bytes);
      if (magic == rlwe::kMagicSecretKey) throw KeyMaterialError("secret key found in store");
      if (magic != expect) throw CorruptionError("unexpected container magic in store: " + magic);
    };
    check(rec.pk_path, rlwe::kMagicPublicKey);
    check(rec.rlk_path, rlwe::kMagicRelinKey);
    check(rec.gks_path, rlwe::kMagicGaloisKeys);
    for (const auto& st : rec.templates) check(st.ct_path, rlwe::kMagicCiphertext);
  }
}

}  // namespace hb::proto
