// Copyright (c) 2026 The svs Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SVS_BASE_UTF8_H_
#define SVS_BASE_UTF8_H_

#include <string>
#include <string_view>
#include <vector>

namespace svs {

// Splits UTF-8 text into one string per code point. Throws
// Error(kMalformedLine) on invalid encodings.
std::vector<std::string> SplitUtf8(std::string_view text);

// Decodes one code point per element of SplitUtf8.
std::vector<char32_t> DecodeUtf8(std::string_view text);

std::string EncodeUtf8(char32_t code_point);

std::vector<std::string> SplitWhitespace(std::string_view text);

std::string Trim(std::string_view text);

}  // namespace svs

#endif  // SVS_BASE_UTF8_H_
