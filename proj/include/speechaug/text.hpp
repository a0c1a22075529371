// speechaug/text.hpp

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

#ifndef SPEECHAUG_TEXT_HPP
#define SPEECHAUG_TEXT_HPP

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace speechaug::text {

// UTF-8 <-> codepoints.  Invalid sequences decode to U+FFFD.
std::vector<char32_t> utf8_decode(std::string_view s);
std::string utf8_encode(const std::vector<char32_t> &cps);

// Canonical composition pass covering the algorithmic Hangul jamo range.
// CJK text is NFC-stable, so this is sufficient for the corpora this toolkit
// targets; precomposed Latin is passed through unchanged.
std::string nfc(std::string_view s);

bool is_whitespace(char32_t cp);

// Codepoints of s after NFC and whitespace removal.
std::vector<char32_t> scoring_codepoints(std::string_view s);

}  // namespace speechaug::text

#endif  // SPEECHAUG_TEXT_HPP
