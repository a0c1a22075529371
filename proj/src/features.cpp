// src/features.cpp

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

#include "speechaug/features.hpp"

#include <unsupported/Eigen/FFT>

#include <cmath>
#include <cstring>
#include <fstream>
#include <numbers>
#include <vector>

#include "speechaug/error.hpp"
#include "speechaug/rng.hpp"

namespace speechaug::features {

namespace {

constexpr double kPi = std::numbers::pi;

Eigen::Index ms_to_samples(double ms, int rate) {
  return static_cast<Eigen::Index>(std::lround(ms * 1e-3 * rate));
}

}  // namespace

double hz_to_mel(double hz) { return 1127.0 * std::log(1.0 + hz / 700.0); }
double mel_to_hz(double mel) { return 700.0 * (std::exp(mel / 1127.0) - 1.0); }

Eigen::MatrixXd mel_filterbank(const FbankConfig &cfg) {
  const int n_bins = cfg.n_fft / 2 + 1;
  const double mel_lo = hz_to_mel(cfg.f_min_hz);
  const double mel_hi = hz_to_mel(cfg.f_max_hz);
  // n_mels + 2 edge points evenly spaced in mel
  Eigen::VectorXd edges(cfg.n_mels + 2);
  for (int i = 0; i < cfg.n_mels + 2; ++i)
    edges[i] = mel_to_hz(mel_lo + (mel_hi - mel_lo) * i / (cfg.n_mels + 1));

  Eigen::MatrixXd fb = Eigen::MatrixXd::Zero(cfg.n_mels, n_bins);
  for (int j = 0; j < cfg.n_mels; ++j) {
    const double left = edges[j], center = edges[j + 1], right = edges[j + 2];
    for (int k = 0; k < n_bins; ++k) {
      const double f = static_cast<double>(k) * cfg.sample_rate_hz / cfg.n_fft;
      double w = 0.0;
      if (f > left && f < center)
        w = (f - left) / (center - left);
      else if (f >= center && f < right)
        w = (right - f) / (right - center);
      fb(j, k) = w;
    }
  }
  return fb;
}

Eigen::VectorXd mel_center_frequencies(const FbankConfig &cfg) {
  const double mel_lo = hz_to_mel(cfg.f_min_hz);
  const double mel_hi = hz_to_mel(cfg.f_max_hz);
  Eigen::VectorXd centers(cfg.n_mels);
  for (int j = 0; j < cfg.n_mels; ++j)
    centers[j] = mel_to_hz(mel_lo + (mel_hi - mel_lo) * (j + 1) / (cfg.n_mels + 1));
  return centers;
}

FeatureMatrix compute_fbank(const AudioBuffer &buf, const FbankConfig &cfg) {
  if (buf.sample_rate != cfg.sample_rate_hz)
    throw RateMismatch("buffer at " + std::to_string(buf.sample_rate) + " Hz, config wants " +
                       std::to_string(cfg.sample_rate_hz));
  const Eigen::Index frame_len = ms_to_samples(cfg.frame_length_ms, cfg.sample_rate_hz);
  const Eigen::Index frame_shift = ms_to_samples(cfg.frame_shift_ms, cfg.sample_rate_hz);
  if (buf.samples.size() < frame_len)
    throw TooShort("signal shorter than one frame");

  const Eigen::Index n_frames = 1 + (buf.samples.size() - frame_len) / frame_shift;
  const int n_bins = cfg.n_fft / 2 + 1;

  Eigen::ArrayXd window(frame_len);
  for (Eigen::Index i = 0; i < frame_len; ++i)
    window[i] = 0.5 - 0.5 * std::cos(2.0 * kPi * i / static_cast<double>(frame_len - 1));

  const Eigen::MatrixXd fb = mel_filterbank(cfg);
  Eigen::FFT<double> fft;
  std::vector<double> padded(cfg.n_fft);
  std::vector<std::complex<double>> spectrum;

  FeatureMatrix out(n_frames, cfg.n_mels);
  Eigen::ArrayXd frame(frame_len);
  for (Eigen::Index t = 0; t < n_frames; ++t) {
    frame = buf.samples.segment(t * frame_shift, frame_len);
    frame -= frame.mean();
    for (Eigen::Index i = frame_len - 1; i > 0; --i)
      frame[i] -= cfg.preemphasis * frame[i - 1];
    frame[0] *= 1.0 - cfg.preemphasis;
    frame *= window;

    std::fill(padded.begin(), padded.end(), 0.0);
    std::copy(frame.data(), frame.data() + frame_len, padded.begin());
    fft.fwd(spectrum, padded);

    Eigen::VectorXd power(n_bins);
    for (int k = 0; k < n_bins; ++k) power[k] = std::norm(spectrum[k]);
    const Eigen::VectorXd energies = fb * power;
    for (int j = 0; j < cfg.n_mels; ++j)
      out(t, j) = std::log(std::max(energies[j], cfg.log_floor));
  }
  return out;
}

FeatureMatrix spec_augment(const FeatureMatrix &m, const SpecAugmentConfig &cfg,
                           std::uint64_t seed) {
  const Eigen::Index rows = m.rows(), cols = m.cols();
  if (cfg.max_freq_width < 0 || cfg.max_time_width < 0 || cfg.n_freq_masks < 0 ||
      cfg.n_time_masks < 0)
    throw ConfigShapeMismatch("negative mask count or width");
  if (cfg.time_warp_enabled && cfg.max_warp >= rows)
    throw ConfigShapeMismatch("max_warp must be smaller than the frame count");

  SplitMix64 rng(seed);
  FeatureMatrix out = m;

  if (cfg.time_warp_enabled && cfg.max_warp > 0 && rows > 2 * cfg.max_warp) {
    // Pick an interior anchor, move it by up to max_warp frames, and linearly
    // interpolate the frames on each side.
    const Eigen::Index anchor = rng.uniform_int(cfg.max_warp, rows - 1 - cfg.max_warp);
    const Eigen::Index shift = rng.uniform_int(-cfg.max_warp, cfg.max_warp);
    const Eigen::Index target = anchor + shift;
    FeatureMatrix warped(rows, cols);
    for (Eigen::Index t = 0; t < rows; ++t) {
      double src;
      if (t <= target)
        src = target > 0 ? static_cast<double>(t) * anchor / target : 0.0;
      else
        src = anchor + static_cast<double>(t - target) * (rows - 1 - anchor) /
                           (rows - 1 - target);
      const Eigen::Index lo = std::clamp<Eigen::Index>(
          static_cast<Eigen::Index>(std::floor(src)), 0, rows - 1);
      const Eigen::Index hi = std::min<Eigen::Index>(lo + 1, rows - 1);
      const double frac = src - static_cast<double>(lo);
      warped.row(t) = (1.0 - frac) * out.row(lo) + frac * out.row(hi);
    }
    out = std::move(warped);
  }

  const double fill =
      cfg.fill == SpecAugmentConfig::Fill::matrix_mean ? out.mean() : 0.0;

  for (int i = 0; i < cfg.n_freq_masks; ++i) {
    const Eigen::Index w = rng.uniform_int(0, std::min<Eigen::Index>(cfg.max_freq_width, cols));
    const Eigen::Index f0 = rng.uniform_int(0, cols - w);
    if (w > 0) out.middleCols(f0, w).setConstant(fill);
  }
  for (int i = 0; i < cfg.n_time_masks; ++i) {
    const Eigen::Index w = rng.uniform_int(0, std::min<Eigen::Index>(cfg.max_time_width, rows));
    const Eigen::Index t0 = rng.uniform_int(0, rows - w);
    if (w > 0) out.middleRows(t0, w).setConstant(fill);
  }
  return out;
}

void write_fbm1(const FeatureMatrix &m, const std::filesystem::path &path) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open for write: " + path.string());
  const std::uint32_t rows = static_cast<std::uint32_t>(m.rows());
  const std::uint32_t cols = static_cast<std::uint32_t>(m.cols());
  f.write("FBM1", 4);
  f.write(reinterpret_cast<const char *>(&rows), 4);
  f.write(reinterpret_cast<const char *>(&cols), 4);
  std::vector<float> row(m.cols());
  for (Eigen::Index t = 0; t < m.rows(); ++t) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) row[j] = static_cast<float>(m(t, j));
    f.write(reinterpret_cast<const char *>(row.data()),
            static_cast<std::streamsize>(row.size() * sizeof(float)));
  }
  if (!f) throw IoError("write failed: " + path.string());
}

FeatureMatrix read_fbm1(const std::filesystem::path &path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open " + path.string());
  char magic[4];
  std::uint32_t rows = 0, cols = 0;
  f.read(magic, 4);
  f.read(reinterpret_cast<char *>(&rows), 4);
  f.read(reinterpret_cast<char *>(&cols), 4);
  if (!f || std::memcmp(magic, "FBM1", 4) != 0)
    throw IoError("bad FBM1 header: " + path.string());
  FeatureMatrix m(rows, cols);
  std::vector<float> row(cols);
  for (std::uint32_t t = 0; t < rows; ++t) {
    f.read(reinterpret_cast<char *>(row.data()),
           static_cast<std::streamsize>(row.size() * sizeof(float)));
    if (!f) throw IoError("truncated FBM1 data: " + path.string());
    for (std::uint32_t j = 0; j < cols; ++j) m(t, j) = row[j];
  }
  return m;
}

void write_csv(const FeatureMatrix &m, const std::filesystem::path &path) {
  std::ofstream f(path, std::ios::trunc);
  if (!f) throw IoError("cannot open for write: " + path.string());
  f.precision(9);
  for (Eigen::Index t = 0; t < m.rows(); ++t) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) f << ',';
      f << m(t, j);
    }
    f << '\n';
  }
}

}  // namespace speechaug::features
