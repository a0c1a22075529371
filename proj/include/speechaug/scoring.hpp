// speechaug/scoring.hpp

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

#ifndef SPEECHAUG_SCORING_HPP
#define SPEECHAUG_SCORING_HPP

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace speechaug::scoring {

/// Counts from a minimum-edit-distance character alignment.
/// correct + substitutions + deletions == ref_len always holds.
struct AlignmentCounts {
  std::int64_t substitutions = 0;
  std::int64_t deletions = 0;
  std::int64_t insertions = 0;
  std::int64_t correct = 0;
  std::int64_t ref_len = 0;

  std::int64_t errors() const { return substitutions + deletions + insertions; }
  AlignmentCounts &operator+=(const AlignmentCounts &o) {
    substitutions += o.substitutions;
    deletions += o.deletions;
    insertions += o.insertions;
    correct += o.correct;
    ref_len += o.ref_len;
    return *this;
  }
};

// Unit-cost Levenshtein alignment at codepoint level; ties during backtrace
// prefer substitution over insertion over deletion.
AlignmentCounts align_codepoints(std::span<const char32_t> ref,
                                 std::span<const char32_t> hyp);

// NFC-normalizes, strips whitespace, then aligns.
AlignmentCounts align_chars(std::string_view ref, std::string_view hyp);

// Corpus-level character error rate: pooled (S + D + I) / sum of ref lengths.
double cer(const std::vector<std::pair<std::string, std::string>> &pairs);

}  // namespace speechaug::scoring

#endif  // SPEECHAUG_SCORING_HPP
