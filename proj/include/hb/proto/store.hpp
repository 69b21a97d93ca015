#pragma once

#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "hb/rlwe/serial.hpp"

namespace hb::proto {

struct StoredTemplate {
  std::string template_id;
  int rotation = 0;
  std::string modality;
  std::string ct_path;  // relative to the store root
};

struct SubjectRecord {
  std::string subject_id;
  std::string pk_path;
  std::string rlk_path;  // empty when not uploaded
  std::string gks_path;  // empty when not uploaded
  std::vector<StoredTemplate> templates;
};

// On-disk encrypted gallery: one ciphertext file per template plus a single
// JSON manifest that is always replaced atomically (write temp, rename), so
// a crash mid-enrollment leaves either the old or the new subject entry.
// Secret-key containers are refused at every write. The store never holds
// anything decryptable without the client's key.
class GalleryStore {
 public:
  GalleryStore(std::string root, rlwe::ContextPtr ctx);

  // Replaces the subject's entry atomically. Blobs are verified containers
  // (magic + params fingerprint) before anything lands on disk. Returns the
  // assigned template ids.
  std::vector<std::string> enroll_subject(
      const std::string& subject_id, const std::vector<std::uint8_t>& pk_bytes,
      const std::vector<std::uint8_t>* rlk_bytes, const std::vector<std::uint8_t>* gks_bytes,
      const std::vector<std::pair<int, std::vector<std::uint8_t>>>& rotation_and_ct,
      const std::string& modality = "full-fusion");

  std::optional<SubjectRecord> lookup(const std::string& subject_id) const;
  std::vector<std::string> subject_ids() const;

  std::vector<std::uint8_t> read_blob(const std::string& rel_path) const;
  const std::string& root() const { return root_; }

  // True when every file under the store parses as a non-secret container
  // and every manifest path exists (test support and startup validation).
  void validate() const;

 private:
  void load_manifest();
  void write_manifest_locked();

  std::string root_;
  rlwe::ContextPtr ctx_;
  mutable std::mutex mu_;
  std::vector<SubjectRecord> subjects_;
  std::uint64_t enroll_counter_ = 0;
};

}  // namespace hb::proto
