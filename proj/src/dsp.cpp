// src/dsp.cpp

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

#include "speechaug/dsp.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <vector>

#include "speechaug/error.hpp"

namespace speechaug::dsp {

namespace {

constexpr double kPi = std::numbers::pi;

void check_factor(double factor) {
  if (!(factor >= 0.5 && factor <= 2.0))
    throw FactorOutOfRange("factor " + std::to_string(factor) + " outside [0.5, 2]");
}

void check_nonempty(const AudioBuffer &buf) {
  if (buf.samples.size() == 0) throw EmptyBuffer("empty input buffer");
}

// Modified Bessel function of the first kind, order zero (power series).
double bessel_i0(double x) {
  double sum = 1.0, term = 1.0;
  const double half_sq = 0.25 * x * x;
  for (int k = 1; k < 64; ++k) {
    term *= half_sq / (static_cast<double>(k) * k);
    sum += term;
    if (term < 1e-14 * sum) break;
  }
  return sum;
}

double sinc(double x) {
  if (std::abs(x) < 1e-12) return 1.0;
  return std::sin(kPi * x) / (kPi * x);
}

int round_to_int(double x) { return static_cast<int>(std::lround(x)); }

}  // namespace

AudioBuffer resample(const AudioBuffer &buf, double factor) {
  check_factor(factor);
  check_nonempty(buf);
  if (factor == 1.0) return buf;

  const Eigen::Index n_in = buf.samples.size();
  const Eigen::Index n_out = static_cast<Eigen::Index>(std::llround(n_in / factor));

  // Anti-alias at the lower of the two rates: when compressing in time
  // (factor > 1) the kernel is stretched and its gain reduced accordingly.
  const double scale = std::min(1.0, 1.0 / factor);
  const double cutoff = 0.95 * 0.5 * scale;  // cycles per input sample
  const double beta = 8.6;
  const int half_taps = 32;  // 64 taps per phase at the narrower rate
  const double half_width = half_taps / scale;
  const double i0_beta = bessel_i0(beta);

  // Kaiser window sampled on a fine grid; linear interpolation is well below
  // the stopband error of the kernel itself.
  constexpr int kWinGrid = 4096;
  std::vector<double> win_table(kWinGrid + 2);
  for (int i = 0; i <= kWinGrid; ++i) {
    const double u = static_cast<double>(i) / kWinGrid;
    win_table[i] = bessel_i0(beta * std::sqrt(std::max(0.0, 1.0 - u * u))) / i0_beta;
  }
  win_table[kWinGrid + 1] = 0.0;
  auto kaiser = [&](double u) {
    const double x = std::abs(u) * kWinGrid;
    const int i = static_cast<int>(x);
    if (i >= kWinGrid) return 0.0;
    const double f = x - i;
    return win_table[i] * (1.0 - f) + win_table[i + 1] * f;
  };

  AudioBuffer out;
  out.sample_rate = buf.sample_rate;
  out.samples.resize(n_out);

  for (Eigen::Index n = 0; n < n_out; ++n) {
    const double pos = n * factor;
    const Eigen::Index i0 = static_cast<Eigen::Index>(std::floor(pos));
    const double frac = pos - static_cast<double>(i0);
    const Eigen::Index k_lo = static_cast<Eigen::Index>(std::ceil(frac - half_width));
    const Eigen::Index k_hi = static_cast<Eigen::Index>(std::floor(frac + half_width));
    double acc = 0.0, wsum = 0.0;
    for (Eigen::Index k = k_lo; k <= k_hi; ++k) {
      const double t = static_cast<double>(k) - frac;
      const double win = kaiser(t / half_width);
      const double h = 2.0 * cutoff * sinc(2.0 * cutoff * t) * win;
      wsum += h;
      const Eigen::Index idx = i0 + k;
      if (idx >= 0 && idx < n_in) acc += h * buf.samples[idx];
    }
    out.samples[n] = wsum > 0.0 ? acc / wsum : 0.0;
  }
  return out;
}

AudioBuffer speed_perturb(const AudioBuffer &buf, double factor) {
  return resample(buf, factor);
}

AudioBuffer wsola_stretch(const AudioBuffer &buf, double factor, const WsolaConfig &cfg) {
  check_factor(factor);
  check_nonempty(buf);
  if (factor == 1.0) return buf;

  const Eigen::Index n_in = buf.samples.size();
  const int rate = buf.sample_rate;
  Eigen::Index win = std::max<Eigen::Index>(2, round_to_int(cfg.window_ms * 1e-3 * rate));
  if (win % 2) ++win;
  const Eigen::Index hop =
      std::max<Eigen::Index>(1, round_to_int(static_cast<double>(win) * (1.0 - cfg.overlap_fraction)));
  const Eigen::Index seek = std::max<Eigen::Index>(0, round_to_int(cfg.seek_ms * 1e-3 * rate));
  const Eigen::Index overlap = win - hop;
  if (win > n_in)
    throw WindowLongerThanSignal("window " + std::to_string(win) + " samples > signal " +
                                 std::to_string(n_in));

  const Eigen::Index n_out = static_cast<Eigen::Index>(std::llround(n_in / factor));

  // Periodic Hann; weighted OLA normalizes residual ripple at the edges and
  // for overlap fractions without the COLA property.
  Eigen::ArrayXd window(win);
  for (Eigen::Index i = 0; i < win; ++i)
    window[i] = 0.5 - 0.5 * std::cos(2.0 * kPi * i / static_cast<double>(win));

  Eigen::ArrayXd acc = Eigen::ArrayXd::Zero(n_out + win);
  Eigen::ArrayXd wsum = Eigen::ArrayXd::Zero(n_out + win);

  const Eigen::Index a_max = n_in - win;
  Eigen::Index prev_a = -1;
  for (Eigen::Index synth = 0; synth < n_out; synth += hop) {
    const Eigen::Index natural =
        std::clamp<Eigen::Index>(static_cast<Eigen::Index>(std::llround(synth * factor)), 0, a_max);
    Eigen::Index a = natural;
    if (prev_a >= 0 && overlap > 0 && seek > 0) {
      // Reference is the natural continuation of the previous frame, i.e. the
      // content of the already-synthesized overlap region.
      const Eigen::Index ref = std::clamp<Eigen::Index>(prev_a + hop, 0, n_in - overlap);
      const auto ref_seg = buf.samples.segment(ref, overlap);
      double best = -2.0;
      for (Eigen::Index d = -seek; d <= seek; ++d) {
        const Eigen::Index cand = natural + d;
        if (cand < 0 || cand > a_max) continue;
        const auto seg = buf.samples.segment(cand, overlap);
        const double energy = (seg * seg).sum();
        const double score = (seg * ref_seg).sum() / std::sqrt(energy + 1e-12);
        if (score > best) {
          best = score;
          a = cand;
        }
      }
    }
    acc.segment(synth, win) += buf.samples.segment(a, win) * window;
    wsum.segment(synth, win) += window;
    prev_a = a;
  }

  AudioBuffer out;
  out.sample_rate = rate;
  out.samples = (acc / wsum.max(1e-9)).head(n_out);
  return out;
}

AudioBuffer tempo_perturb(const AudioBuffer &buf, double factor, const WsolaConfig &cfg) {
  return wsola_stretch(buf, factor, cfg);
}

AudioBuffer pitch_shift_cents(const AudioBuffer &buf, double cents, const WsolaConfig &cfg) {
  if (!(std::abs(cents) <= 1200.0))
    throw CentsOutOfRange("cents " + std::to_string(cents) + " outside [-1200, 1200]");
  check_nonempty(buf);
  if (cents == 0.0) return buf;
  const double ratio = cents_to_ratio(cents);
  return wsola_stretch(resample(buf, ratio), 1.0 / ratio, cfg);
}

AudioBuffer volume_scale(const AudioBuffer &buf, double gain) {
  if (!(gain >= 0.125 && gain <= 2.0))
    throw GainOutOfRange("gain " + std::to_string(gain) + " outside [0.125, 2]");
  AudioBuffer out;
  out.sample_rate = buf.sample_rate;
  out.samples = (buf.samples * gain).min(1.0).max(-1.0);
  return out;
}

AudioBuffer reverberate(const AudioBuffer &buf, const ReverbConfig &cfg) {
  if (!(cfg.reverberance >= 0.0 && cfg.reverberance <= 1.0))
    throw ConfigOutOfRange("reverberance outside [0, 1]");
  if (!(cfg.damping >= 0.0 && cfg.damping <= 1.0))
    throw ConfigOutOfRange("damping outside [0, 1]");
  if (!(cfg.tail_ms >= 0.0)) throw ConfigOutOfRange("tail_ms negative");
  check_nonempty(buf);

  // Freeverb tunings, defined at 44.1 kHz and scaled to the buffer's rate.
  static constexpr std::array<int, 8> kCombDelays = {1116, 1188, 1277, 1356,
                                                     1422, 1491, 1557, 1617};
  static constexpr std::array<int, 4> kAllpassDelays = {556, 441, 341, 225};

  const double rate_scale = buf.sample_rate / 44100.0;
  const double feedback = 0.7 + 0.28 * cfg.reverberance;
  const double damp = cfg.damping * 0.4;
  const double allpass_gain = 0.5;

  const Eigen::Index n_in = buf.samples.size();
  const Eigen::Index n_out = n_in + round_to_int(cfg.tail_ms * 1e-3 * buf.sample_rate);

  struct Comb {
    std::vector<double> line;
    std::size_t idx = 0;
    double store = 0.0;
  };
  struct Allpass {
    std::vector<double> line;
    std::size_t idx = 0;
  };

  std::array<Comb, 8> combs;
  for (std::size_t c = 0; c < combs.size(); ++c)
    combs[c].line.assign(std::max(1, round_to_int(kCombDelays[c] * rate_scale)), 0.0);
  std::array<Allpass, 4> allpasses;
  for (std::size_t a = 0; a < allpasses.size(); ++a)
    allpasses[a].line.assign(std::max(1, round_to_int(kAllpassDelays[a] * rate_scale)), 0.0);

  AudioBuffer out;
  out.sample_rate = buf.sample_rate;
  out.samples.resize(n_out);

  for (Eigen::Index i = 0; i < n_out; ++i) {
    const double x = i < n_in ? buf.samples[i] : 0.0;
    double wet = 0.0;
    for (auto &c : combs) {
      const double y = c.line[c.idx];
      c.store = y * (1.0 - damp) + c.store * damp;
      c.line[c.idx] = x + c.store * feedback;
      if (++c.idx == c.line.size()) c.idx = 0;
      wet += y;
    }
    for (auto &a : allpasses) {
      const double bufout = a.line[a.idx];
      const double y = -wet + bufout;
      a.line[a.idx] = wet + bufout * allpass_gain;
      if (++a.idx == a.line.size()) a.idx = 0;
      wet = y;
    }
    out.samples[i] = std::clamp(cfg.dry_gain * x + cfg.wet_gain * wet, -1.0, 1.0);
  }
  return out;
}

}  // namespace speechaug::dsp
