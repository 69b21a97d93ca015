#pragma once

#include <optional>

#include "hb/bio/dataset.hpp"
#include "hb/bio/pca.hpp"
#include "hb/eval/roc.hpp"
#include "hb/match/matcher.hpp"

namespace hb::eval {

// Table-4 modality rows and their target feature lengths.
enum class Modality { kFaceOnly, kSingleIris, kDualIris, kFullFusion };

const char* modality_name(Modality m);
Modality modality_from_name(const std::string& name);
std::uint32_t modality_target_dim(Modality m);   // 512 / 250 / 500 / 1012
std::uint32_t modality_pca_target(Modality m);   // 0 / 250 / 500 / 500

struct PipelineConfig {
  Modality modality = Modality::kFullFusion;
  std::uint32_t scale = 128;
  std::uint32_t pca_k = 0;  // 0 = modality default
  double gallery_fraction = 0.7;
  double pca_train_fraction = 0.5;
  std::uint64_t split_seed = 1;
  std::uint64_t pca_seed = 2;
  std::uint64_t encrypt_seed = 3;
  unsigned threads = 0;
};

struct TemplateRecord {
  std::string subject_id;
  std::string session_id;
  int rotation = 0;
  codec::QuantizedTemplate qt;
};

// All quantized templates of one run: the modality pipeline applied to the
// dataset after the 70/30 per-subject split, gallery rotation expansion and
// (for iris modalities) snapshot-PCA reduction.
struct PipelineData {
  PipelineConfig config;
  std::uint32_t feature_dim = 0;     // achieved template length
  std::uint32_t pca_components = 0;  // achieved k (0 for face-only)
  codec::EncodingProfile profile;

  struct SubjectData {
    std::string subject_id;
    std::vector<TemplateRecord> gallery;  // enrollment order (session, then rotation)
    std::vector<TemplateRecord> probes;
  };
  std::vector<SubjectData> subjects;
  std::vector<std::string> warnings;
};

// Deterministic per-subject gallery/probe split of session indices.
void split_sessions(std::size_t session_count, double gallery_fraction, const Seed& seed,
                    std::vector<std::size_t>* gallery, std::vector<std::size_t>* probe);

// When pretrained is null, the PCA model is trained on the unrotated codes
// of a seeded 50% subject subset (gallery sessions only) and discarded after
// projection.
PipelineData build_pipeline(const bio::DatasetManifest& manifest, const rlwe::FheContext& ctx,
                            const PipelineConfig& config,
                            const bio::PcaModel* pretrained = nullptr);

// Assembles the PCA training matrix for this modality (also used by the
// pca-train CLI command). Returns sample ids alongside.
std::vector<std::vector<double>> pca_training_samples(const bio::DatasetManifest& manifest,
                                                      const PipelineConfig& config,
                                                      std::vector<std::string>* ids_out);

// Genuine/impostor score sets under the given mode. Encrypted modes encrypt
// every template (seeded) and run the one-to-one matcher per probe x claimed
// subject; the plain oracle path scores the same quantized templates, so the
// two agree exactly. seconds_out gets the encrypted-portion wall clock.
ScoreSet build_scores(const rlwe::FheContext& ctx, const rlwe::BatchEncoder& encoder,
                      const PipelineData& data, match::MatchMode mode,
                      const rlwe::SecretKey* sk, const rlwe::PublicKey* pk,
                      const rlwe::RelinKey* rk, const rlwe::GaloisKeySet* gks,
                      double* seconds_out = nullptr);

}  // namespace hb::eval
