/*
 * Copyright 2026 The Lacuna Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef LACUNA_COMMON_UTF8_HPP_
#define LACUNA_COMMON_UTF8_HPP_

#include <string>
#include <string_view>
#include <vector>

namespace lacuna::utf8 {

// Decodes UTF-8; malformed bytes become U+FFFD.
std::u32string decode(std::string_view text);

std::string encode(char32_t codepoint);
std::string encode(std::u32string_view text);

// Byte length of the UTF-8 sequence starting with `lead`.
std::size_t sequence_length(unsigned char lead);

// Canonical composition (NFC).
std::string nfc(std::string_view text);

bool is_alnum(char32_t c);
bool is_combining_mark(char32_t c);
bool is_space(char32_t c);

// Splits on Unicode whitespace, dropping empty pieces.
std::vector<std::string_view> split_whitespace(std::string_view text);

}  // namespace lacuna::utf8

#endif  // LACUNA_COMMON_UTF8_HPP_
