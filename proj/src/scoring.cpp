// src/scoring.cpp

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

#include "speechaug/scoring.hpp"

#include <algorithm>

#include "speechaug/error.hpp"
#include "speechaug/text.hpp"

namespace speechaug::scoring {

AlignmentCounts align_codepoints(std::span<const char32_t> ref,
                                 std::span<const char32_t> hyp) {
  const std::size_t n = ref.size(), m = hyp.size();
  // d[i][j] = edit distance between ref[0..i) and hyp[0..j)
  std::vector<std::int32_t> d((n + 1) * (m + 1));
  auto at = [&](std::size_t i, std::size_t j) -> std::int32_t & {
    return d[i * (m + 1) + j];
  };
  for (std::size_t i = 0; i <= n; ++i) at(i, 0) = static_cast<std::int32_t>(i);
  for (std::size_t j = 0; j <= m; ++j) at(0, j) = static_cast<std::int32_t>(j);
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = 1; j <= m; ++j) {
      const std::int32_t sub = at(i - 1, j - 1) + (ref[i - 1] == hyp[j - 1] ? 0 : 1);
      const std::int32_t del = at(i - 1, j) + 1;
      const std::int32_t ins = at(i, j - 1) + 1;
      at(i, j) = std::min({sub, ins, del});
    }
  }

  AlignmentCounts c;
  c.ref_len = static_cast<std::int64_t>(n);
  std::size_t i = n, j = m;
  while (i > 0 || j > 0) {
    if (i > 0 && j > 0 &&
        at(i, j) == at(i - 1, j - 1) + (ref[i - 1] == hyp[j - 1] ? 0 : 1)) {
      if (ref[i - 1] == hyp[j - 1])
        ++c.correct;
      else
        ++c.substitutions;
      --i;
      --j;
    } else if (j > 0 && at(i, j) == at(i, j - 1) + 1) {
      ++c.insertions;
      --j;
    } else {
      ++c.deletions;
      --i;
    }
  }
  return c;
}

AlignmentCounts align_chars(std::string_view ref, std::string_view hyp) {
  const auto r = text::scoring_codepoints(ref);
  const auto h = text::scoring_codepoints(hyp);
  return align_codepoints(r, h);
}

double cer(const std::vector<std::pair<std::string, std::string>> &pairs) {
  AlignmentCounts total;
  for (const auto &[ref, hyp] : pairs) total += align_chars(ref, hyp);
  if (total.ref_len == 0) throw EmptyReference("total reference length is zero");
  return static_cast<double>(total.errors()) / static_cast<double>(total.ref_len);
}

}  // namespace speechaug::scoring
