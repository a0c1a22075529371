// speechaug/features.hpp

// Copyright 2026  speechaug authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef SPEECHAUG_FEATURES_HPP
#define SPEECHAUG_FEATURES_HPP

#include <cstdint>
#include <filesystem>

#include "speechaug/audio.hpp"

namespace speechaug::features {

/// Log-mel filterbank front-end configuration.  HTK mel scale:
/// m = 1127 ln(1 + f/700).
struct FbankConfig {
  int sample_rate_hz = 16000;
  double frame_length_ms = 25.0;
  double frame_shift_ms = 10.0;
  int n_fft = 512;
  int n_mels = 80;
  double f_min_hz = 20.0;
  double f_max_hz = 7600.0;
  double log_floor = 1e-10;
  double preemphasis = 0.97;
};

/// Frames x mel-bins matrix of log filterbank energies.  Row-major so the
/// on-disk layout matches memory.
using FeatureMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct SpecAugmentConfig {
  int n_freq_masks = 2;
  int max_freq_width = 27;  // mel bins
  int n_time_masks = 2;
  int max_time_width = 100;  // frames
  bool time_warp_enabled = false;
  int max_warp = 80;  // frames
  enum class Fill { matrix_mean, zero };
  Fill fill = Fill::matrix_mean;
};

double hz_to_mel(double hz);
double mel_to_hz(double mel);

// Triangular mel filterbank, n_mels x (n_fft/2 + 1).
Eigen::MatrixXd mel_filterbank(const FbankConfig &cfg);

// Center frequencies (Hz) of the mel filters; exposes the bin geometry for
// callers that need to reason about where a tone lands.
Eigen::VectorXd mel_center_frequencies(const FbankConfig &cfg);

// Per frame: DC removal, pre-emphasis, Hann window, zero-pad to n_fft,
// power spectrum, mel filterbank, ln(max(energy, log_floor)).
// frames = 1 + floor((len - frame_len) / frame_shift).
FeatureMatrix compute_fbank(const AudioBuffer &buf, const FbankConfig &cfg = {});

// Frequency/time masking (optionally time warping) driven entirely by the
// seeded generator; same (input, config, seed) gives bit-identical output.
FeatureMatrix spec_augment(const FeatureMatrix &m, const SpecAugmentConfig &cfg,
                           std::uint64_t seed);

// "FBM1" container: magic, u32le rows, u32le cols, float32le row-major.
void write_fbm1(const FeatureMatrix &m, const std::filesystem::path &path);
FeatureMatrix read_fbm1(const std::filesystem::path &path);

// Plain-text CSV, one frame per line; debugging aid.
void write_csv(const FeatureMatrix &m, const std::filesystem::path &path);

}  // namespace speechaug::features

#endif  // SPEECHAUG_FEATURES_HPP
