#include "hb/eval/bench.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>

#include "hb/codec/template_codec.hpp"
#include "hb/eval/jsonout.hpp"
#include "hb/match/matcher.hpp"
#include "hb/rlwe/serial.hpp"

namespace hb::eval {

namespace {

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::string cpu_model() {
  std::ifstream f("/proc/cpuinfo");
  std::string line;
  while (std::getline(f, line)) {
    if (line.rfind("model name", 0) == 0) {
      auto pos = line.find(": ");
      if (pos != std::string::npos) return line.substr(pos + 2);
    }
  }
  return "unknown";
}

template <typename F>
double timed(F&& fn) {
  auto t0 = std::chrono::steady_clock::now();
  fn();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

BenchResult run_bench(const rlwe::ContextPtr& ctx, const BenchConfig& config) {
  if (config.repetitions < 1) throw UsageError("bench needs at least one repetition");
  rlwe::BatchEncoder encoder(ctx);
  Seed master = seed_from_u64(config.seed);
  auto [sk, pk] = rlwe::keygen(*ctx, derive_seed(master, "keys"));
  auto rk = rlwe::relin_keygen(*ctx, sk, derive_seed(master, "relin"));
  auto gks = rlwe::galois_keygen(*ctx, sk, rlwe::sum_slots_exponents(ctx->n()),
                                 derive_seed(master, "galois"));
  auto profile = codec::make_profile(*ctx, config.dim, config.scale);

  // two random unit templates per repetition, derived from the seed
  Prng prng(derive_seed(master, "vectors"));
  auto random_template = [&] {
    std::vector<double> v(config.dim);
    for (auto& x : v) x = prng.gaussian(1.0);
    return codec::quantize(codec::unit_normalize(v), profile);
  };

  BenchResult out;
  std::vector<double> t_enc, t_comp, t_dec, t_total, t_ip, t_plain;
  for (int rep = 0; rep < config.repetitions; ++rep) {
    auto qx = random_template();
    auto qy = random_template();
    auto gallery_ct = rlwe::encrypt(*ctx, pk, codec::pack_template(qx, encoder),
                                    derive_seed(master, "gallery", static_cast<std::uint64_t>(rep)));

    rlwe::Ciphertext probe_ct, result_ct;
    double enc_s = timed([&] {
      probe_ct = rlwe::encrypt(*ctx, pk, codec::pack_template(qy, encoder),
                               derive_seed(master, "probe", static_cast<std::uint64_t>(rep)));
    });
    double comp_s = timed([&] { result_ct = match::euclid_encrypted(*ctx, gallery_ct, probe_ct); });
    match::PerTemplateResult scored;
    double dec_s = timed([&] {
      scored = match::client_score(*ctx, encoder, match::MatchMode::kEuclid, result_ct, sk, profile);
    });
    double ip_s = timed([&] {
      auto ip_ct = match::innerprod_encrypted(*ctx, gallery_ct, probe_ct, &rk, &gks);
      match::client_score(*ctx, encoder, match::MatchMode::kInnerProd, ip_ct, sk, profile);
    });
    match::PlainScore plain{};
    double plain_s = timed([&] { plain = match::plain_oracle(qx, qy, match::MatchMode::kEuclid); });
    if (plain.distance_sq != scored.distance_sq)
      throw CorruptionError("bench cross-check failed: encrypted and plain scores differ");

    t_enc.push_back(enc_s);
    t_comp.push_back(comp_s);
    t_dec.push_back(dec_s);
    t_total.push_back(enc_s + comp_s + dec_s);
    t_ip.push_back(ip_s);
    t_plain.push_back(plain_s);
  }

  out.encrypt_seconds = median(t_enc);
  out.euclid_compute_seconds = median(t_comp);
  out.decrypt_score_seconds = median(t_dec);
  out.total_encrypted_match_seconds = median(t_total);
  out.innerprod_compute_seconds = median(t_ip);
  out.plain_match_seconds = median(t_plain);

  {
    auto qt = random_template();
    auto ct = rlwe::encrypt(*ctx, pk, codec::pack_template(qt, encoder), derive_seed(master, "sz"));
    out.ciphertext_bytes = rlwe::serialize_ciphertext(*ctx, ct).size();
    out.ciphertext_payload_bytes = out.ciphertext_bytes - rlwe::kContainerHeaderBytes - 1;
    out.public_key_bytes = rlwe::serialize_public_key(*ctx, pk).size();
    out.secret_key_bytes = rlwe::serialize_secret_key(*ctx, sk).size();
    out.relin_key_bytes = rlwe::serialize_relin_key(*ctx, rk).size();
    out.galois_keys_bytes = rlwe::serialize_galois_keys(*ctx, gks).size();
  }
  out.hardware = cpu_model();

  JsonWriter w;
  w.begin_object();
  w.kv("report", "hb-bench");
  w.kv("version", 1);
  w.kv("hardware", out.hardware);
  w.kv("dim", config.dim);
  w.kv("scale", config.scale);
  w.kv("repetitions", static_cast<std::int64_t>(config.repetitions));
  w.kv("ring_degree", ctx->params().ring_degree);
  w.key("median_seconds");
  w.begin_object();
  w.kv("encrypt_probe", out.encrypt_seconds);
  w.kv("euclid_compute", out.euclid_compute_seconds);
  w.kv("decrypt_and_score", out.decrypt_score_seconds);
  w.kv("encrypted_match_total", out.total_encrypted_match_seconds);
  w.kv("innerprod_compute_and_score", out.innerprod_compute_seconds);
  w.kv("plain_match", out.plain_match_seconds);
  w.end_object();
  w.key("encrypted_to_plain_ratio");
  w.value(out.plain_match_seconds > 0
              ? out.total_encrypted_match_seconds / out.plain_match_seconds
              : 0.0);
  w.key("container_bytes");
  w.begin_object();
  w.kv("ciphertext", out.ciphertext_bytes);
  w.kv("ciphertext_payload", out.ciphertext_payload_bytes);
  w.kv("public_key", out.public_key_bytes);
  w.kv("secret_key", out.secret_key_bytes);
  w.kv("relin_key", out.relin_key_bytes);
  w.kv("galois_keys", out.galois_keys_bytes);
  w.end_object();
  w.key("reference");
  w.begin_object();
  w.kv("note", "published reference values; not pass/fail targets");
  w.kv("encrypted_match_seconds", 1.05);
  w.kv("plain_match_seconds", 0.63);
  w.key("container_bytes");
  w.begin_object();
  w.kv("public_key", static_cast<std::uint64_t>(736) * 1024);
  w.kv("secret_key", static_cast<std::uint64_t>(272) * 1024);
  w.kv("encrypted_template", static_cast<std::uint64_t>(128) * 1024);
  w.kv("relin_key", static_cast<std::uint64_t>(418304));   // 408.5 KB
  w.kv("galois_keys", static_cast<std::uint64_t>(9646899));  // 9.2 MB
  w.end_object();
  w.end_object();
  w.end_object();
  out.report_json = w.take();

  if (!config.out_path.empty()) atomic_write_file(config.out_path, out.report_json);
  return out;
}

}  // namespace hb::eval
