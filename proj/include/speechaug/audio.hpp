// speechaug/audio.hpp

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

#ifndef SPEECHAUG_AUDIO_HPP
#define SPEECHAUG_AUDIO_HPP

#include <Eigen/Dense>
#include <filesystem>

namespace speechaug {

/// Mono waveform with samples normalized to [-1, 1].  All DSP operates on
/// this type; integer quantization happens only at write time.
struct AudioBuffer {
  Eigen::ArrayXd samples;
  int sample_rate = 16000;

  Eigen::Index size() const { return samples.size(); }
  double duration_seconds() const {
    return static_cast<double>(samples.size()) / sample_rate;
  }
};

// Reads a RIFF/WAVE file.  Only PCM (format code 1), 16-bit, mono is
// accepted; samples are decoded as int16 / 32768.0.
AudioBuffer read_wav(const std::filesystem::path &path);

// Writes 16-bit PCM mono.  Quantization: clamp(round(s * 32767), -32768, 32767).
void write_wav(const AudioBuffer &buffer, const std::filesystem::path &path);

}  // namespace speechaug

#endif  // SPEECHAUG_AUDIO_HPP
