// speechaug/dsp.hpp

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

#ifndef SPEECHAUG_DSP_HPP
#define SPEECHAUG_DSP_HPP

#include "speechaug/audio.hpp"

namespace speechaug::dsp {

/// Analysis/synthesis parameters for waveform-similarity overlap-add
/// time-scale modification.  Defaults are standard speech TSM settings.
struct WsolaConfig {
  double window_ms = 50.0;        // analysis/synthesis window length
  double overlap_fraction = 0.5;  // fraction of the window overlapped
  double seek_ms = 15.0;          // max tolerance search, +/-
};

/// Schroeder-style reverberator: 8 parallel feedback combs with low-pass
/// damping in the loop, followed by 4 series allpasses.
struct ReverbConfig {
  double reverberance = 0.5;  // in [0, 1]; comb feedback = 0.7 + 0.28 * r
  double damping = 0.5;       // in [0, 1]; loop low-pass coefficient = d * 0.4
  double wet_gain = 1.0;
  double dry_gain = 1.0;
  double tail_ms = 500.0;  // extra output length
};

// Playback-rate resampling: output length = round(len / factor), a tone at f
// comes out at f * factor, sample_rate field is unchanged.
// Windowed-sinc kernel, 64 taps per phase, Kaiser beta = 8.6, cutoff at
// 0.95 x Nyquist of the lower rate.
AudioBuffer resample(const AudioBuffer &buf, double factor);

// Speed perturbation: alias of resample (duration x 1/factor, pitch x factor).
AudioBuffer speed_perturb(const AudioBuffer &buf, double factor);

// Time-scale modification at constant pitch.  factor > 1 shortens.
// factor == 1 is an exact pass-through.
AudioBuffer wsola_stretch(const AudioBuffer &buf, double factor,
                          const WsolaConfig &cfg = {});

// Tempo perturbation: changes speaking rate without changing pitch.
AudioBuffer tempo_perturb(const AudioBuffer &buf, double factor,
                          const WsolaConfig &cfg = {});

// Pitch shift by `cents` (1/100 semitone): resample by r = 2^(cents/1200),
// then stretch by 1/r to restore the duration.
AudioBuffer pitch_shift_cents(const AudioBuffer &buf, double cents,
                              const WsolaConfig &cfg = {});

// Gain in [0.125, 2]; result hard-clamped to [-1, 1].
AudioBuffer volume_scale(const AudioBuffer &buf, double gain);

// dry_gain * input + wet_gain * (combs -> allpasses); output extended by
// tail_ms and clamped to [-1, 1].
AudioBuffer reverberate(const AudioBuffer &buf, const ReverbConfig &cfg = {});

// Pitch ratio for a shift in cents: 2^(cents/1200).
inline double cents_to_ratio(double cents) { return std::exp2(cents / 1200.0); }

}  // namespace speechaug::dsp

#endif  // SPEECHAUG_DSP_HPP
