#pragma once

#include "hb/bio/dataset.hpp"
#include "hb/bio/iris.hpp"

namespace hb::bio {

// Generates a synthetic identity dataset under out_dir and returns its
// manifest. Per subject: one latent iris pattern per eye (smooth banded
// random field thresholded to bits) and a latent unit face vector. Each
// session sample applies i.i.d. bit flips at p_flip plus a circular column
// shift (same shift for both eyes), and face noise of width face_sigma
// followed by renormalization. Fully deterministic given config.seed.
DatasetManifest synth_generate(const SynthConfig& config, const std::string& out_dir);

// The latent-field construction, exposed for tests: a coarse Gaussian grid
// bilinearly upsampled to 128x512 and thresholded at zero.
IrisCode synth_latent_iris(Prng& prng);

}  // namespace hb::bio
