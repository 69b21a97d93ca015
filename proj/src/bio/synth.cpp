#include "hb/bio/synth.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>

#include "hb/codec/fvec.hpp"
#include "hb/codec/template_codec.hpp"
#include "hb/log.hpp"

namespace hb::bio {

namespace fs = std::filesystem;

IrisCode synth_latent_iris(Prng& prng) {
  // Coarse grid with circular column wrap so rotations stay seamless.
  constexpr std::size_t kGridR = 32, kGridC = 128;
  std::array<double, kGridR * kGridC> grid{};
  for (auto& g : grid) g = prng.gaussian(1.0);

  IrisCode code;
  constexpr double row_step = static_cast<double>(kGridR) / IrisCode::kRows;
  constexpr double col_step = static_cast<double>(kGridC) / IrisCode::kCols;
  for (std::size_t r = 0; r < IrisCode::kRows; ++r) {
    double gr = r * row_step;
    auto r0 = static_cast<std::size_t>(gr);
    double fr = gr - static_cast<double>(r0);
    std::size_t r1 = std::min(r0 + 1, kGridR - 1);
    for (std::size_t c = 0; c < IrisCode::kCols; ++c) {
      double gc = c * col_step;
      auto c0 = static_cast<std::size_t>(gc);
      double fc = gc - static_cast<double>(c0);
      std::size_t c1 = (c0 + 1) % kGridC;
      double v = grid[r0 * kGridC + c0] * (1 - fr) * (1 - fc) +
                 grid[r0 * kGridC + c1] * (1 - fr) * fc +
                 grid[r1 * kGridC + c0] * fr * (1 - fc) + grid[r1 * kGridC + c1] * fr * fc;
      if (v > 0) code.set(r, c, true);
    }
  }
  return code;
}

namespace {

IrisCode noisy_sample(const IrisCode& latent, int shift, double p_flip, Prng& prng) {
  IrisCode out = rotate_iris(latent, shift);
  if (p_flip > 0) {
    for (std::size_t r = 0; r < IrisCode::kRows; ++r)
      for (std::size_t c = 0; c < IrisCode::kCols; ++c)
        if (prng.uniform_unit() < p_flip) out.set(r, c, !out.get(r, c));
  }
  return out;
}

std::vector<double> noisy_face(const std::vector<double>& latent, double sigma, Prng& prng) {
  std::vector<double> v = latent;
  if (sigma > 0)
    for (auto& x : v) x += prng.gaussian(sigma);
  return codec::unit_normalize(v);
}

}  // namespace

DatasetManifest synth_generate(const SynthConfig& config, const std::string& out_dir) {
  if (config.subjects < 2) throw UsageError("synthetic dataset needs >= 2 subjects");
  if (config.sessions < 1) throw UsageError("synthetic dataset needs >= 1 session");
  if (config.p_flip < 0 || config.p_flip >= 0.5) throw UsageError("p_flip must be in [0, 0.5)");
  if (config.degrade_face_prob < 0 || config.degrade_iris_prob < 0 ||
      config.degrade_face_prob + config.degrade_iris_prob > 1.0)
    throw UsageError("degrade probabilities must be non-negative and sum to <= 1");
  if (config.degrade_iris_flip < 0 || config.degrade_iris_flip > 0.5)
    throw UsageError("degrade_iris_flip must be in [0, 0.5]");
  if (config.face_sigma < 0) throw UsageError("face_sigma must be non-negative");
  if (config.max_shift < 0 || config.max_shift > 511) throw UsageError("max_shift out of range");
  if (!config.forced_shifts.empty() && config.forced_shifts.size() != config.sessions)
    throw UsageError("forced_shifts must match the session count");

  DatasetManifest manifest;
  manifest.root = out_dir;
  manifest.config = config;
  fs::create_directories(out_dir);

  Seed master = seed_from_u64(config.seed);
  for (std::uint32_t si = 0; si < config.subjects; ++si) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "s%04u", si);
    SubjectEntry subject;
    subject.id = buf;

    Seed subj_seed = derive_seed(master, "subject", si);
    Prng latent_rng(subj_seed);
    IrisCode latent_left = synth_latent_iris(latent_rng);
    IrisCode latent_right = synth_latent_iris(latent_rng);
    std::vector<double> latent_face(config.face_dim);
    for (auto& x : latent_face) x = latent_rng.gaussian(1.0);
    latent_face = codec::unit_normalize(latent_face);

    for (std::uint32_t se = 0; se < config.sessions; ++se) {
      std::snprintf(buf, sizeof buf, "sess%02u", se);
      SessionEntry session;
      session.id = buf;
      Prng sess_rng(derive_seed(subj_seed, "session", se));
      if (!config.forced_shifts.empty()) {
        session.shift = config.forced_shifts[se];
      } else if (config.max_shift > 0) {
        auto span = static_cast<std::uint64_t>(2 * config.max_shift + 1);
        session.shift = static_cast<int>(sess_rng.uniform_below(span)) - config.max_shift;
      }

      double quality_draw = sess_rng.uniform_unit();
      double face_sigma = config.face_sigma;
      double iris_flip = config.p_flip;
      if (quality_draw < config.degrade_face_prob) {
        session.quality = "face-degraded";
        face_sigma = config.degrade_face_sigma;
      } else if (quality_draw < config.degrade_face_prob + config.degrade_iris_prob) {
        session.quality = "iris-degraded";
        iris_flip = config.degrade_iris_flip;
      }

      IrisCode left = noisy_sample(latent_left, session.shift, iris_flip, sess_rng);
      IrisCode right = noisy_sample(latent_right, session.shift, iris_flip, sess_rng);
      left.subject_id = right.subject_id = subject.id;
      left.session_id = right.session_id = session.id;
      left.eye = 'L';
      right.eye = 'R';
      std::vector<double> face = noisy_face(latent_face, face_sigma, sess_rng);

      std::string rel = std::string("subjects/") + subject.id + "/" + session.id;
      fs::create_directories(out_dir + "/" + rel);
      session.left_icod = rel + "/left.icod";
      session.right_icod = rel + "/right.icod";
      session.face_fvec = rel + "/face.fvec";
      write_icod(manifest.path(session.left_icod), left);
      write_icod(manifest.path(session.right_icod), right);
      codec::write_fvec(manifest.path(session.face_fvec), face);
      subject.sessions.push_back(std::move(session));
    }
    manifest.subjects.push_back(std::move(subject));
  }
  save_manifest(manifest);
  log::info("generated dataset: " + std::to_string(config.subjects) + " subjects x " +
            std::to_string(config.sessions) + " sessions at " + out_dir);
  return manifest;
}

}  // namespace hb::bio
