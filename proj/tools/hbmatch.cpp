// hbmatch: command-line front end for the encrypted biometric matching
// toolkit. Subcommands: keygen, synth, pca-train, eval, bench, serve,
// enroll, verify. Set HB_LOG=debug|info|warn|error to control logging.

#include <CLI11.hpp>

#include <csignal>
#include <filesystem>
#include <iostream>

#include "hb/bio/fusion.hpp"
#include "hb/bio/iris.hpp"
#include "hb/bio/synth.hpp"
#include "hb/codec/fvec.hpp"
#include "hb/eval/bench.hpp"
#include "hb/eval/jsonout.hpp"
#include "hb/eval/runner.hpp"
#include "hb/log.hpp"
#include "hb/proto/client.hpp"
#include "hb/proto/server.hpp"

namespace fs = std::filesystem;
using namespace hb;

namespace {

rlwe::FheParams params_from_flags(const std::string& preset, const std::string& params_file) {
  if (!params_file.empty()) return rlwe::parse_params(read_file(params_file));
  if (preset == "prod") return rlwe::FheParams::production();
  if (preset == "toy") return rlwe::FheParams::toy();
  throw UsageError("unknown preset: " + preset);
}

Seed seed_from_flag(const std::string& hex, std::uint64_t fallback) {
  if (!hex.empty()) return seed_from_hex(hex);
  return seed_from_u64(fallback);
}

struct KeyDir {
  rlwe::ContextPtr ctx;
  std::optional<rlwe::SecretKey> sk;
  std::optional<rlwe::PublicKey> pk;
  std::optional<rlwe::RelinKey> rlk;
  std::optional<rlwe::GaloisKeySet> gks;
};

KeyDir load_key_dir(const std::string& dir, bool need_secret) {
  KeyDir kd;
  kd.ctx = rlwe::FheContext::create(rlwe::parse_params(read_file(dir + "/params.hbpr")));
  kd.pk = rlwe::parse_public_key(*kd.ctx, read_file(dir + "/public.hbpk"));
  if (need_secret || fs::exists(dir + "/secret.hbsk"))
    kd.sk = rlwe::parse_secret_key(*kd.ctx, read_file(dir + "/secret.hbsk"));
  if (fs::exists(dir + "/relin.hbrk"))
    kd.rlk = rlwe::parse_relin_key(*kd.ctx, read_file(dir + "/relin.hbrk"));
  if (fs::exists(dir + "/galois.hbgk"))
    kd.gks = rlwe::parse_galois_keys(*kd.ctx, read_file(dir + "/galois.hbgk"));
  return kd;
}

std::pair<std::string, std::uint16_t> split_hostport(const std::string& s) {
  auto pos = s.rfind(':');
  if (pos == std::string::npos) throw UsageError("expected HOST:PORT, got " + s);
  return {s.substr(0, pos), static_cast<std::uint16_t>(std::stoi(s.substr(pos + 1)))};
}

// Builds the match-ready feature vector for one session directory holding
// left.icod / right.icod / face.fvec, under the given modality.
std::vector<double> session_features(const std::string& dir, eval::Modality modality,
                                     const bio::PcaModel* pca, int rotation) {
  std::vector<double> face;
  if (modality == eval::Modality::kFaceOnly || modality == eval::Modality::kFullFusion)
    face = codec::read_fvec(dir + "/face.fvec");
  if (modality == eval::Modality::kFaceOnly) return codec::unit_normalize(face);

  bio::IrisCode left = bio::read_icod(dir + "/left.icod");
  std::vector<std::uint8_t> code;
  if (modality == eval::Modality::kSingleIris) {
    code = bio::flatten(bio::rotate_iris(left, rotation));
  } else {
    bio::IrisCode right = bio::read_icod(dir + "/right.icod");
    code = bio::concat_irises(bio::flatten(bio::rotate_iris(left, rotation)),
                              bio::flatten(bio::rotate_iris(right, rotation)));
  }
  if (!pca) throw UsageError("this modality needs --pca MODEL");
  auto reduced = bio::pca_project(*pca, code.data(), code.size());
  if (modality == eval::Modality::kFullFusion) return bio::fuse_face_iris(face, reduced);
  return codec::unit_normalize(reduced);
}

std::vector<std::string> session_dirs(const std::string& gallery_dir) {
  if (fs::exists(gallery_dir + "/left.icod")) return {gallery_dir};
  std::vector<std::string> dirs;
  for (const auto& entry : fs::directory_iterator(gallery_dir))
    if (entry.is_directory() && fs::exists(entry.path() / "left.icod"))
      dirs.push_back(entry.path().string());
  std::sort(dirs.begin(), dirs.end());
  if (dirs.empty()) throw UsageError("no session data under " + gallery_dir);
  return dirs;
}

volatile std::sig_atomic_t g_stop = 0;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"encrypted iris+face template matching toolkit"};
  app.require_subcommand(1);

  // ---- keygen ----
  auto* keygen_cmd = app.add_subcommand("keygen", "generate params and key material");
  std::string kg_preset = "prod", kg_params_file, kg_out = "keys", kg_seed_hex;
  bool kg_relin = false, kg_galois = false;
  std::vector<std::int64_t> kg_shifts;
  keygen_cmd->add_option("--preset", kg_preset, "prod | toy");
  keygen_cmd->add_option("--params", kg_params_file, "existing params container instead of a preset");
  keygen_cmd->add_option("--out-dir", kg_out, "output directory");
  keygen_cmd->add_option("--seed", kg_seed_hex, "hex seed (up to 64 chars)");
  keygen_cmd->add_flag("--relin", kg_relin, "also write a relinearization key");
  keygen_cmd->add_flag("--galois", kg_galois, "also write Galois keys for sum_slots");
  keygen_cmd->add_option("--shifts", kg_shifts, "extra slot shifts to cover with Galois keys");

  // ---- synth ----
  auto* synth_cmd = app.add_subcommand("synth", "generate a synthetic identity dataset");
  bio::SynthConfig sc;
  std::string synth_out = "dataset";
  synth_cmd->add_option("--subjects", sc.subjects)->required();
  synth_cmd->add_option("--sessions", sc.sessions);
  synth_cmd->add_option("--p-flip", sc.p_flip, "iris bit-flip rate");
  synth_cmd->add_option("--face-noise", sc.face_sigma, "face Gaussian noise width");
  synth_cmd->add_option("--max-shift", sc.max_shift, "session column-shift range");
  synth_cmd->add_option("--face-dim", sc.face_dim);
  synth_cmd->add_option("--seed", sc.seed);
  synth_cmd->add_option("--out", synth_out, "output directory");

  // ---- pca-train ----
  auto* pca_cmd = app.add_subcommand("pca-train", "train the snapshot-PCA reduction");
  std::string pca_dataset, pca_modality = "dual-iris-fusion", pca_out = "model.pcam";
  std::uint32_t pca_dim = 0;
  double pca_fraction = 0.5;
  std::uint64_t pca_seed = 2, pca_split_seed = 1;
  pca_cmd->add_option("--dataset", pca_dataset)->required();
  pca_cmd->add_option("--modality", pca_modality, "single-iris | dual-iris-fusion | full-fusion");
  pca_cmd->add_option("--dim", pca_dim, "components (0 = modality default)");
  pca_cmd->add_option("--fraction", pca_fraction, "fraction of subjects used for training");
  pca_cmd->add_option("--seed", pca_seed);
  pca_cmd->add_option("--split-seed", pca_split_seed);
  pca_cmd->add_option("--out", pca_out);

  // ---- eval ----
  auto* eval_cmd = app.add_subcommand("eval", "dataset-level accuracy evaluation");
  std::string ev_dataset, ev_modality = "all", ev_mode = "all", ev_out = "report.json";
  std::string ev_preset = "prod", ev_params_file;
  eval::RunConfig rc;
  eval_cmd->add_option("--dataset", ev_dataset)->required();
  eval_cmd->add_option("--modality", ev_modality,
                       "face-only | single-iris | dual-iris-fusion | full-fusion | all");
  eval_cmd->add_option("--mode", ev_mode, "euclid | innerprod | plain | all");
  eval_cmd->add_option("--out", ev_out);
  eval_cmd->add_option("--preset", ev_preset);
  eval_cmd->add_option("--params", ev_params_file);
  eval_cmd->add_option("--scale", rc.pipeline.scale);
  eval_cmd->add_option("--pca-dim", rc.pipeline.pca_k, "PCA components (0 = modality default)");
  eval_cmd->add_option("--split-seed", rc.pipeline.split_seed);
  eval_cmd->add_option("--pca-seed", rc.pipeline.pca_seed);
  eval_cmd->add_option("--encrypt-seed", rc.pipeline.encrypt_seed);
  eval_cmd->add_option("--keygen-seed", rc.keygen_seed);
  eval_cmd->add_option("--threads", rc.pipeline.threads);
  eval_cmd->add_option("--gallery-fraction", rc.pipeline.gallery_fraction);

  // ---- bench ----
  auto* bench_cmd = app.add_subcommand("bench", "one-to-one match latency and sizes");
  eval::BenchConfig bc;
  std::string bench_preset = "prod", bench_params_file;
  bc.out_path = "bench.json";
  bench_cmd->add_option("--dim", bc.dim);
  bench_cmd->add_option("--scale", bc.scale);
  bench_cmd->add_option("--reps", bc.repetitions);
  bench_cmd->add_option("--seed", bc.seed);
  bench_cmd->add_option("--out", bc.out_path);
  bench_cmd->add_option("--preset", bench_preset);
  bench_cmd->add_option("--params", bench_params_file);

  // ---- serve ----
  auto* serve_cmd = app.add_subcommand("serve", "run the enrollment/verification server");
  std::string sv_listen = "127.0.0.1:7707", sv_store = "store", sv_params_file;
  unsigned sv_threads = 0;
  serve_cmd->add_option("--listen", sv_listen, "HOST:PORT");
  serve_cmd->add_option("--store", sv_store, "gallery store directory");
  serve_cmd->add_option("--params", sv_params_file, "params container")->required();
  serve_cmd->add_option("--threads", sv_threads, "per-verify compute threads");

  // ---- enroll ----
  auto* enroll_cmd = app.add_subcommand("enroll", "enroll a subject's encrypted templates");
  std::string en_server = "127.0.0.1:7707", en_subject, en_gallery, en_keys = "keys";
  std::string en_modality = "full-fusion", en_pca;
  std::uint32_t en_scale = 128;
  std::uint64_t en_seed = 99;
  bool en_upload_eval_keys = false;
  enroll_cmd->add_option("--server", en_server, "HOST:PORT");
  enroll_cmd->add_option("--subject", en_subject)->required();
  enroll_cmd->add_option("--gallery", en_gallery, "session dir or dir of session dirs")->required();
  enroll_cmd->add_option("--keys", en_keys, "directory with params/public/secret containers");
  enroll_cmd->add_option("--modality", en_modality);
  enroll_cmd->add_option("--pca", en_pca, "PCAM model (iris modalities)");
  enroll_cmd->add_option("--scale", en_scale);
  enroll_cmd->add_option("--encrypt-seed", en_seed);
  enroll_cmd->add_flag("--upload-eval-keys", en_upload_eval_keys,
                       "also upload relin+Galois keys so the server can run inner-product mode");

  // ---- verify ----
  auto* verify_cmd = app.add_subcommand("verify", "verify a probe against a claimed subject");
  std::string vf_server = "127.0.0.1:7707", vf_subject, vf_probe, vf_keys = "keys";
  std::string vf_modality = "full-fusion", vf_pca, vf_mode = "euclid";
  double vf_threshold = 0.5;
  std::uint32_t vf_scale = 128;
  std::uint64_t vf_seed = 100;
  verify_cmd->add_option("--server", vf_server, "HOST:PORT");
  verify_cmd->add_option("--subject", vf_subject)->required();
  verify_cmd->add_option("--probe", vf_probe, "session dir with left/right icod + face.fvec")
      ->required();
  verify_cmd->add_option("--keys", vf_keys);
  verify_cmd->add_option("--modality", vf_modality);
  verify_cmd->add_option("--pca", vf_pca);
  verify_cmd->add_option("--mode", vf_mode, "euclid | innerprod");
  verify_cmd->add_option("--threshold", vf_threshold);
  verify_cmd->add_option("--scale", vf_scale);
  verify_cmd->add_option("--encrypt-seed", vf_seed);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*keygen_cmd) {
      auto params = params_from_flags(kg_preset, kg_params_file);
      auto ctx = rlwe::FheContext::create(params);
      fs::create_directories(kg_out);
      Seed master = seed_from_flag(kg_seed_hex, 1);
      auto [sk, pk] = rlwe::keygen(*ctx, derive_seed(master, "keys"));
      atomic_write_file(kg_out + "/params.hbpr", rlwe::serialize_params(params));
      atomic_write_file(kg_out + "/secret.hbsk", rlwe::serialize_secret_key(*ctx, sk));
      atomic_write_file(kg_out + "/public.hbpk", rlwe::serialize_public_key(*ctx, pk));
      if (kg_relin || kg_galois) {
        auto rk = rlwe::relin_keygen(*ctx, sk, derive_seed(master, "relin"));
        atomic_write_file(kg_out + "/relin.hbrk", rlwe::serialize_relin_key(*ctx, rk));
      }
      if (kg_galois) {
        auto exps = rlwe::sum_slots_exponents(ctx->n());
        for (auto k : kg_shifts)
          for (auto e : rlwe::shift_exponents(ctx->n(), k)) exps.push_back(e);
        auto gks = rlwe::galois_keygen(*ctx, sk, exps, derive_seed(master, "galois"));
        atomic_write_file(kg_out + "/galois.hbgk", rlwe::serialize_galois_keys(*ctx, gks));
      }
      std::cout << "keys written to " << kg_out << "\n";
      return 0;
    }

    if (*synth_cmd) {
      bio::synth_generate(sc, synth_out);
      std::cout << "dataset written to " << synth_out << "\n";
      return 0;
    }

    if (*pca_cmd) {
      auto manifest = bio::load_manifest(pca_dataset);
      eval::PipelineConfig pc;
      pc.modality = eval::modality_from_name(pca_modality);
      pc.pca_train_fraction = pca_fraction;
      pc.pca_seed = pca_seed;
      pc.split_seed = pca_split_seed;
      std::vector<std::string> ids;
      auto samples = eval::pca_training_samples(manifest, pc, &ids);
      std::uint32_t k = pca_dim ? pca_dim : eval::modality_pca_target(pc.modality);
      auto model = bio::pca_train(samples, k, pca_seed, std::move(ids));
      bio::write_pcam(pca_out, model);
      std::cout << "trained " << model.k << " components on " << samples.size()
                << " samples; model written to " << pca_out << "\n";
      return 0;
    }

    if (*eval_cmd) {
      auto manifest = bio::load_manifest(ev_dataset);
      auto ctx = rlwe::FheContext::create(params_from_flags(ev_preset, ev_params_file));
      if (ev_modality == "all") {
        rc.modalities = {eval::Modality::kFaceOnly, eval::Modality::kSingleIris,
                         eval::Modality::kDualIris, eval::Modality::kFullFusion};
      } else {
        rc.modalities = {eval::modality_from_name(ev_modality)};
      }
      if (ev_mode == "all") {
        rc.modes = {match::MatchMode::kEuclid, match::MatchMode::kInnerProd,
                    match::MatchMode::kPlain};
      } else {
        rc.modes = {match::mode_from_name(ev_mode)};
      }
      rc.out_path = ev_out;
      auto run = eval::run_eval(manifest, ctx, rc);
      std::cout << run.report_json << "\n";
      return 0;
    }

    if (*bench_cmd) {
      auto ctx = rlwe::FheContext::create(params_from_flags(bench_preset, bench_params_file));
      auto res = eval::run_bench(ctx, bc);
      std::cout << res.report_json << "\n";
      return 0;
    }

    if (*serve_cmd) {
      auto [host, port] = split_hostport(sv_listen);
      proto::ServerConfig cfg;
      cfg.listen_host = host;
      cfg.port = port;
      cfg.store_root = sv_store;
      cfg.ctx = rlwe::FheContext::create(rlwe::parse_params(read_file(sv_params_file)));
      cfg.compute_threads = sv_threads;
      proto::Server server(cfg);
      server.start();
      std::cout << "serving on " << host << ":" << server.port() << " (store: " << sv_store
                << ")\n";
      std::signal(SIGINT, [](int) { g_stop = 1; });
      std::signal(SIGTERM, [](int) { g_stop = 1; });
      while (!g_stop) ::usleep(100000);
      server.stop();
      return 0;
    }

    if (*enroll_cmd) {
      auto [host, port] = split_hostport(en_server);
      auto kd = load_key_dir(en_keys, false);
      auto modality = eval::modality_from_name(en_modality);
      std::optional<bio::PcaModel> pca;
      if (!en_pca.empty()) pca = bio::read_pcam(en_pca);
      rlwe::BatchEncoder encoder(kd.ctx);
      Seed master = seed_from_u64(en_seed);

      std::vector<match::EncryptedGalleryEntry> entries;
      std::uint64_t counter = 0;
      for (const auto& dir : session_dirs(en_gallery)) {
        if (modality == eval::Modality::kFaceOnly) {
          auto v = session_features(dir, modality, pca ? &*pca : nullptr, 0);
          auto profile = codec::make_profile(*kd.ctx, static_cast<std::uint32_t>(v.size()), en_scale);
          auto qt = codec::quantize(v, profile);
          entries.push_back({rlwe::encrypt(*kd.ctx, *kd.pk, codec::pack_template(qt, encoder),
                                           derive_seed(master, "t", counter++)),
                             0});
        } else {
          for (int r = -bio::kRotationRange; r <= bio::kRotationRange; ++r) {
            auto v = session_features(dir, modality, pca ? &*pca : nullptr, r);
            auto profile =
                codec::make_profile(*kd.ctx, static_cast<std::uint32_t>(v.size()), en_scale);
            auto qt = codec::quantize(v, profile);
            entries.push_back({rlwe::encrypt(*kd.ctx, *kd.pk, codec::pack_template(qt, encoder),
                                             derive_seed(master, "t", counter++)),
                               r});
          }
        }
      }
      auto receipt = proto::enroll_client(
          host, port, *kd.ctx, en_subject, en_modality, *kd.pk, entries,
          en_upload_eval_keys && kd.rlk ? &*kd.rlk : nullptr,
          en_upload_eval_keys && kd.gks ? &*kd.gks : nullptr);
      std::cout << "enrolled " << en_subject << ": " << receipt.template_ids.size()
                << " templates\n";
      return 0;
    }

    if (*verify_cmd) {
      auto [host, port] = split_hostport(vf_server);
      auto kd = load_key_dir(vf_keys, true);
      auto modality = eval::modality_from_name(vf_modality);
      std::optional<bio::PcaModel> pca;
      if (!vf_pca.empty()) pca = bio::read_pcam(vf_pca);
      rlwe::BatchEncoder encoder(kd.ctx);
      auto features = session_features(vf_probe, modality, pca ? &*pca : nullptr, 0);
      auto profile =
          codec::make_profile(*kd.ctx, static_cast<std::uint32_t>(features.size()), vf_scale);
      auto outcome = proto::verify_client(host, port, *kd.ctx, encoder, vf_subject, features,
                                          profile, *kd.pk, *kd.sk, match::mode_from_name(vf_mode),
                                          vf_threshold, seed_from_u64(vf_seed));
      eval::JsonWriter w;
      w.begin_object();
      w.kv("subject", vf_subject);
      w.kv("mode", vf_mode);
      w.kv("threshold", vf_threshold);
      w.kv("similarity", outcome.result.best.similarity);
      w.kv("distance_sq", outcome.result.best.distance_sq);
      w.kv("rotation", outcome.result.best.rotation);
      w.kv("templates_compared", outcome.result.entries.size());
      w.kv("encrypted_seconds", outcome.result.seconds);
      w.kv("accepted", outcome.accepted);
      w.end_object();
      std::cout << w.take() << "\n";
      return outcome.accepted ? 0 : 2;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
