#pragma once

#include "hb/eval/scores.hpp"
#include "hb/rlwe/keys.hpp"

namespace hb::eval {

struct RunConfig {
  std::vector<Modality> modalities;          // report rows
  std::vector<match::MatchMode> modes;       // report columns
  PipelineConfig pipeline;                   // seeds, scale, fractions
  std::uint64_t keygen_seed = 42;
  std::string out_path;                      // empty = don't write
};

struct ModeCell {
  RocReport roc;
  double eer_threshold = 0.0;
  double encrypted_seconds = 0.0;
};

struct ModalityRow {
  Modality modality = Modality::kFullFusion;
  std::uint32_t target_dim = 0;
  std::uint32_t feature_dim = 0;     // achieved
  std::uint32_t pca_components = 0;  // achieved
  std::vector<std::pair<match::MatchMode, ModeCell>> cells;
  std::vector<std::string> warnings;
  // kept so exactness across modes can be asserted downstream
  std::vector<std::pair<match::MatchMode, ScoreSet>> score_sets;
};

struct EvalRun {
  std::vector<ModalityRow> rows;
  std::string report_json;
};

// Full evaluation: per modality row, builds the pipeline once, scores every
// requested mode on the same quantized templates, computes the ROC numbers
// and emits the Table-4-shaped JSON report (plus paper reference metadata).
EvalRun run_eval(const bio::DatasetManifest& manifest, const rlwe::ContextPtr& ctx,
                 const RunConfig& config);

std::string render_report_json(const bio::DatasetManifest& manifest, const rlwe::FheContext& ctx,
                               const RunConfig& config, const std::vector<ModalityRow>& rows);

}  // namespace hb::eval
