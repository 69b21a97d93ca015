#include "hb/eval/scores.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "hb/bio/fusion.hpp"
#include "hb/bio/iris.hpp"
#include "hb/codec/fvec.hpp"
#include "hb/log.hpp"

namespace hb::eval {

const char* modality_name(Modality m) {
  switch (m) {
    case Modality::kFaceOnly:
      return "face-only";
    case Modality::kSingleIris:
      return "single-iris";
    case Modality::kDualIris:
      return "dual-iris-fusion";
    case Modality::kFullFusion:
      return "full-fusion";
  }
  return "?";
}

Modality modality_from_name(const std::string& name) {
  if (name == "face-only") return Modality::kFaceOnly;
  if (name == "single-iris") return Modality::kSingleIris;
  if (name == "dual-iris-fusion") return Modality::kDualIris;
  if (name == "full-fusion") return Modality::kFullFusion;
  throw UsageError("unknown modality: " + name);
}

std::uint32_t modality_target_dim(Modality m) {
  switch (m) {
    case Modality::kFaceOnly:
      return 512;
    case Modality::kSingleIris:
      return 250;
    case Modality::kDualIris:
      return 500;
    case Modality::kFullFusion:
      return 1012;
  }
  return 0;
}

std::uint32_t modality_pca_target(Modality m) {
  switch (m) {
    case Modality::kFaceOnly:
      return 0;
    case Modality::kSingleIris:
      return 250;
    case Modality::kDualIris:
    case Modality::kFullFusion:
      return 500;
  }
  return 0;
}

void split_sessions(std::size_t session_count, double gallery_fraction, const Seed& seed,
                    std::vector<std::size_t>* gallery, std::vector<std::size_t>* probe) {
  gallery->clear();
  probe->clear();
  if (session_count < 2) return;  // caller excludes the subject
  std::vector<std::size_t> order(session_count);
  for (std::size_t i = 0; i < session_count; ++i) order[i] = i;
  Prng prng(seed);
  for (std::size_t i = session_count - 1; i > 0; --i) {
    std::size_t j = prng.uniform_below(i + 1);
    std::swap(order[i], order[j]);
  }
  auto want = static_cast<std::size_t>(
      std::llround(gallery_fraction * static_cast<double>(session_count)));
  std::size_t g = std::clamp<std::size_t>(want, 1, session_count - 1);
  gallery->assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(g));
  probe->assign(order.begin() + static_cast<std::ptrdiff_t>(g), order.end());
  std::sort(gallery->begin(), gallery->end());
  std::sort(probe->begin(), probe->end());
}

namespace {

std::vector<double> bits_to_doubles(const std::vector<std::uint8_t>& bits) {
  std::vector<double> v(bits.size());
  for (std::size_t i = 0; i < bits.size(); ++i) v[i] = bits[i];
  return v;
}

std::vector<std::uint8_t> unrotated_code(const bio::DatasetManifest& manifest,
                                         const bio::SessionEntry& session, Modality modality) {
  bio::IrisCode left = bio::read_icod(manifest.path(session.left_icod));
  if (modality == Modality::kSingleIris) return bio::flatten(left);
  bio::IrisCode right = bio::read_icod(manifest.path(session.right_icod));
  return bio::concat_irises(bio::flatten(left), bio::flatten(right));
}

struct SplitPlan {
  std::vector<std::size_t> gallery;
  std::vector<std::size_t> probe;
};

std::vector<SplitPlan> plan_splits(const bio::DatasetManifest& manifest,
                                   const PipelineConfig& config,
                                   std::vector<std::string>* warnings) {
  std::vector<SplitPlan> plans(manifest.subjects.size());
  Seed split_master = seed_from_u64(config.split_seed);
  for (std::size_t i = 0; i < manifest.subjects.size(); ++i) {
    const auto& subj = manifest.subjects[i];
    split_sessions(subj.sessions.size(), config.gallery_fraction,
                   derive_seed(split_master, subj.id), &plans[i].gallery, &plans[i].probe);
    if (plans[i].gallery.empty() || plans[i].probe.empty()) {
      warnings->push_back("subject " + subj.id + " excluded: needs >= 2 sessions for a split");
      log::warn(warnings->back());
    }
  }
  return plans;
}

}  // namespace

std::vector<std::vector<double>> pca_training_samples(const bio::DatasetManifest& manifest,
                                                      const PipelineConfig& config,
                                                      std::vector<std::string>* ids_out) {
  if (modality_pca_target(config.modality) == 0)
    throw UsageError("face-only modality has no PCA stage");
  std::vector<std::string> warnings;
  auto plans = plan_splits(manifest, config, &warnings);

  // seeded 50% subject subset
  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < manifest.subjects.size(); ++i)
    if (!plans[i].gallery.empty()) order.push_back(i);
  Prng prng(seed_from_u64(config.pca_seed));
  for (std::size_t i = order.size(); i > 1; --i) {
    std::size_t j = prng.uniform_below(i);
    std::swap(order[i - 1], order[j]);
  }
  auto take = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::llround(config.pca_train_fraction *
                                               static_cast<double>(order.size()))));
  order.resize(std::min(order.size(), take));
  std::sort(order.begin(), order.end());

  std::vector<std::vector<double>> samples;
  for (std::size_t idx : order) {
    const auto& subj = manifest.subjects[idx];
    for (std::size_t s : plans[idx].gallery) {
      samples.push_back(bits_to_doubles(unrotated_code(manifest, subj.sessions[s], config.modality)));
      if (ids_out) ids_out->push_back(subj.id + "/" + subj.sessions[s].id);
    }
  }
  if (samples.size() < 2) throw InsufficientDataError("not enough PCA training samples");
  return samples;
}

PipelineData build_pipeline(const bio::DatasetManifest& manifest, const rlwe::FheContext& ctx,
                            const PipelineConfig& config, const bio::PcaModel* pretrained) {
  PipelineData data;
  data.config = config;
  auto plans = plan_splits(manifest, config, &data.warnings);

  std::optional<bio::PcaModel> trained;
  const bio::PcaModel* pca = pretrained;
  std::uint32_t pca_target = config.pca_k ? config.pca_k : modality_pca_target(config.modality);
  if (config.modality != Modality::kFaceOnly && !pca) {
    std::vector<std::string> ids;
    auto samples = pca_training_samples(manifest, config, &ids);
    trained = bio::pca_train(samples, pca_target, config.pca_seed, std::move(ids));
    pca = &*trained;
  }
  if (pca) {
    data.pca_components = pca->k;
    if (pca->k < pca_target) {
      data.warnings.push_back("PCA components capped at " + std::to_string(pca->k) +
                              " (target " + std::to_string(pca_target) + ")");
    }
  }

  // assemble subject template sets
  std::vector<std::size_t> active;
  for (std::size_t i = 0; i < manifest.subjects.size(); ++i)
    if (!plans[i].gallery.empty()) active.push_back(i);

  data.subjects.resize(active.size());
  std::uint32_t feature_dim = 0;

  // first pass on one sample to fix the dimension, then a parallel fill
  auto make_vec = [&](const bio::SessionEntry& session, int rotation) -> std::vector<double> {
    std::vector<double> face;
    if (config.modality == Modality::kFaceOnly || config.modality == Modality::kFullFusion)
      face = codec::read_fvec(manifest.path(session.face_fvec));
    if (config.modality == Modality::kFaceOnly) return codec::unit_normalize(face);

    bio::IrisCode left = bio::read_icod(manifest.path(session.left_icod));
    std::vector<std::uint8_t> code;
    if (config.modality == Modality::kSingleIris) {
      code = bio::flatten(bio::rotate_iris(left, rotation));
    } else {
      bio::IrisCode right = bio::read_icod(manifest.path(session.right_icod));
      code = bio::concat_irises(bio::flatten(bio::rotate_iris(left, rotation)),
                                bio::flatten(bio::rotate_iris(right, rotation)));
    }
    auto reduced = bio::pca_project(*pca, code.data(), code.size());
    if (config.modality == Modality::kFullFusion) return bio::fuse_face_iris(face, reduced);
    return codec::unit_normalize(reduced);
  };

  {
    const auto& subj = manifest.subjects[active[0]];
    feature_dim = static_cast<std::uint32_t>(
        make_vec(subj.sessions[plans[active[0]].gallery[0]], 0).size());
  }
  data.feature_dim = feature_dim;
  data.profile = codec::make_profile(ctx, feature_dim, config.scale);

  // Gallery rotations of one session are projected as a batch: one pass
  // over the PCA basis covers all 15 variants.
  auto gallery_templates = [&](const bio::SessionEntry& session) {
    std::vector<std::pair<int, codec::QuantizedTemplate>> out;
    if (config.modality == Modality::kFaceOnly) {
      out.emplace_back(0, codec::quantize(make_vec(session, 0), data.profile));
      return out;
    }
    std::vector<double> face;
    if (config.modality == Modality::kFullFusion)
      face = codec::read_fvec(manifest.path(session.face_fvec));
    bio::IrisCode left = bio::read_icod(manifest.path(session.left_icod));
    bio::IrisCode right;
    if (config.modality != Modality::kSingleIris)
      right = bio::read_icod(manifest.path(session.right_icod));

    std::vector<std::vector<double>> codes;
    codes.reserve(2 * bio::kRotationRange + 1);
    for (int r = -bio::kRotationRange; r <= bio::kRotationRange; ++r) {
      std::vector<std::uint8_t> code;
      if (config.modality == Modality::kSingleIris) {
        code = bio::flatten(bio::rotate_iris(left, r));
      } else {
        code = bio::concat_irises(bio::flatten(bio::rotate_iris(left, r)),
                                  bio::flatten(bio::rotate_iris(right, r)));
      }
      codes.emplace_back(code.begin(), code.end());
    }
    auto reduced = bio::pca_project_batch(*pca, codes);
    for (int r = -bio::kRotationRange; r <= bio::kRotationRange; ++r) {
      const auto& red = reduced[static_cast<std::size_t>(r + bio::kRotationRange)];
      std::vector<double> vec = config.modality == Modality::kFullFusion
                                    ? bio::fuse_face_iris(face, red)
                                    : codec::unit_normalize(red);
      out.emplace_back(r, codec::quantize(vec, data.profile));
    }
    return out;
  };

  parallel_for(
      active.size(),
      [&](std::size_t ai) {
        std::size_t idx = active[ai];
        const auto& subj = manifest.subjects[idx];
        auto& out = data.subjects[ai];
        out.subject_id = subj.id;
        for (std::size_t s : plans[idx].gallery) {
          const auto& session = subj.sessions[s];
          for (auto& [rotation, qt] : gallery_templates(session)) {
            TemplateRecord rec;
            rec.subject_id = subj.id;
            rec.session_id = session.id;
            rec.rotation = rotation;
            rec.qt = std::move(qt);
            out.gallery.push_back(std::move(rec));
          }
        }
        for (std::size_t s : plans[idx].probe) {
          const auto& session = subj.sessions[s];
          TemplateRecord rec;
          rec.subject_id = subj.id;
          rec.session_id = session.id;
          rec.rotation = 0;
          rec.qt = codec::quantize(make_vec(session, 0), data.profile);
          out.probes.push_back(std::move(rec));
        }
      },
      config.threads);

  return data;
}

ScoreSet build_scores(const rlwe::FheContext& ctx, const rlwe::BatchEncoder& encoder,
                      const PipelineData& data, match::MatchMode mode,
                      const rlwe::SecretKey* sk, const rlwe::PublicKey* pk,
                      const rlwe::RelinKey* rk, const rlwe::GaloisKeySet* gks,
                      double* seconds_out) {
  ScoreSet out;
  out.config_fingerprint = std::string(match::mode_name(mode)) + "|" +
                           modality_name(data.config.modality) + "|dim" +
                           std::to_string(data.feature_dim) + "|k" +
                           std::to_string(data.pca_components) + "|S" +
                           std::to_string(data.config.scale) + "|split" +
                           std::to_string(data.config.split_seed);

  struct Pair {
    std::size_t probe_subject, probe_index, gallery_subject;
  };
  std::vector<Pair> pairs;
  for (std::size_t ps = 0; ps < data.subjects.size(); ++ps)
    for (std::size_t pi = 0; pi < data.subjects[ps].probes.size(); ++pi)
      for (std::size_t gs = 0; gs < data.subjects.size(); ++gs)
        if (!data.subjects[gs].gallery.empty()) pairs.push_back({ps, pi, gs});

  std::vector<double> sims(pairs.size());
  double encrypted_seconds = 0.0;

  if (mode == match::MatchMode::kPlain) {
    parallel_for(
        pairs.size(),
        [&](std::size_t i) {
          const auto& p = pairs[i];
          std::vector<match::PlainGalleryEntry> gal;
          gal.reserve(data.subjects[p.gallery_subject].gallery.size());
          for (const auto& rec : data.subjects[p.gallery_subject].gallery)
            gal.push_back({rec.qt, rec.rotation});
          auto res = match::match_one_to_one_plain(
              data.subjects[p.probe_subject].probes[p.probe_index].qt, gal,
              match::MatchMode::kPlain);
          sims[i] = res.best.similarity;
        },
        data.config.threads);
  } else {
    if (!sk || !pk) throw UsageError("encrypted scoring needs key material");
    auto t0 = std::chrono::steady_clock::now();
    Seed enc_master = seed_from_u64(data.config.encrypt_seed);

    // encrypt galleries and probes once
    std::vector<std::vector<match::EncryptedGalleryEntry>> gallery_cts(data.subjects.size());
    std::vector<std::vector<rlwe::Ciphertext>> probe_cts(data.subjects.size());
    parallel_for(
        data.subjects.size(),
        [&](std::size_t s) {
          const auto& subj = data.subjects[s];
          gallery_cts[s].reserve(subj.gallery.size());
          for (std::size_t g = 0; g < subj.gallery.size(); ++g) {
            const auto& rec = subj.gallery[g];
            Seed seed = derive_seed(enc_master, "g/" + rec.subject_id + "/" + rec.session_id,
                                    static_cast<std::uint64_t>(g));
            gallery_cts[s].push_back(
                {rlwe::encrypt(ctx, *pk, codec::pack_template(rec.qt, encoder), seed),
                 rec.rotation});
          }
          probe_cts[s].reserve(subj.probes.size());
          for (std::size_t g = 0; g < subj.probes.size(); ++g) {
            const auto& rec = subj.probes[g];
            Seed seed = derive_seed(enc_master, "p/" + rec.subject_id + "/" + rec.session_id,
                                    static_cast<std::uint64_t>(g));
            probe_cts[s].push_back(
                rlwe::encrypt(ctx, *pk, codec::pack_template(rec.qt, encoder), seed));
          }
        },
        data.config.threads);

    parallel_for(
        pairs.size(),
        [&](std::size_t i) {
          const auto& p = pairs[i];
          auto res = match::match_one_to_one(ctx, encoder, probe_cts[p.probe_subject][p.probe_index],
                                             gallery_cts[p.gallery_subject], mode, *sk,
                                             data.profile, rk, gks, 1);
          sims[i] = res.best.similarity;
        },
        data.config.threads);
    encrypted_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }

  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto& p = pairs[i];
    const auto& probe = data.subjects[p.probe_subject].probes[p.probe_index];
    ScorePair sp;
    sp.probe_id = probe.subject_id + "/" + probe.session_id;
    sp.gallery_subject = data.subjects[p.gallery_subject].subject_id;
    sp.similarity = sims[i];
    if (p.probe_subject == p.gallery_subject) {
      out.genuine.push_back(std::move(sp));
    } else {
      out.impostor.push_back(std::move(sp));
    }
  }
  if (seconds_out) *seconds_out = encrypted_seconds;
  return out;
}

}  // namespace hb::eval
