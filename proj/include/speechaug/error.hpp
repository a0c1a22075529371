// speechaug/error.hpp

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

#ifndef SPEECHAUG_ERROR_HPP
#define SPEECHAUG_ERROR_HPP

#include <stdexcept>
#include <string>

namespace speechaug {

// Base for all library errors; `kind()` is a stable machine-readable tag.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string &msg)
      : std::runtime_error(kind + ": " + msg), kind_(std::move(kind)) {}
  const std::string &kind() const { return kind_; }

 private:
  std::string kind_;
};

#define SPEECHAUG_DEFINE_ERROR(NAME)                      \
  class NAME : public Error {                             \
   public:                                                \
    explicit NAME(const std::string &msg)                 \
        : Error(#NAME, msg) {}                            \
  }

// audio_io
SPEECHAUG_DEFINE_ERROR(MalformedWav);
SPEECHAUG_DEFINE_ERROR(UnsupportedFormat);
SPEECHAUG_DEFINE_ERROR(EmptyBuffer);
SPEECHAUG_DEFINE_ERROR(IoError);

// dsp
SPEECHAUG_DEFINE_ERROR(FactorOutOfRange);
SPEECHAUG_DEFINE_ERROR(WindowLongerThanSignal);
SPEECHAUG_DEFINE_ERROR(CentsOutOfRange);
SPEECHAUG_DEFINE_ERROR(GainOutOfRange);
SPEECHAUG_DEFINE_ERROR(ConfigOutOfRange);

// features
SPEECHAUG_DEFINE_ERROR(RateMismatch);
SPEECHAUG_DEFINE_ERROR(TooShort);
SPEECHAUG_DEFINE_ERROR(ConfigShapeMismatch);

// corpus
SPEECHAUG_DEFINE_ERROR(TooManySpeakers);
SPEECHAUG_DEFINE_ERROR(UnknownSourceSet);
SPEECHAUG_DEFINE_ERROR(DuplicateOutputId);
SPEECHAUG_DEFINE_ERROR(MalformedScpLine);
SPEECHAUG_DEFINE_ERROR(MissingFile);
SPEECHAUG_DEFINE_ERROR(MalformedManifest);
SPEECHAUG_DEFINE_ERROR(MalformedRecipe);

// scoring
SPEECHAUG_DEFINE_ERROR(EmptyReference);

#undef SPEECHAUG_DEFINE_ERROR

}  // namespace speechaug

#endif  // SPEECHAUG_ERROR_HPP
