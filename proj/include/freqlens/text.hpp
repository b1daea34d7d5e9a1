/*
 * Copyright 2026 The freqlens Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *    http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace freqlens::text {

/// Decode one code point starting at `pos`; advances `pos`.
/// Throws DecodeError reporting `base_offset + pos` of the bad byte.
auto decode_next(std::string_view s, std::size_t &pos, std::uint64_t base_offset = 0)
	-> char32_t;

/// Decode a whole string.
auto decode(std::string_view s, std::uint64_t base_offset = 0) -> std::u32string;

void append_utf8(std::string &out, char32_t cp);

/// ASCII letters and digits, plus non-ASCII code points outside the common
/// punctuation, symbol, and private-use blocks.
auto is_alnum(char32_t cp) -> bool;

/// Simple case mapping for ASCII, Latin-1, Latin Extended-A, Greek and
/// Cyrillic capitals; identity elsewhere.
auto to_lower(char32_t cp) -> char32_t;

auto has_uppercase(std::string_view utf8) -> bool;

/// Split on any ASCII whitespace, dropping empty pieces.
auto split_ws(std::string_view s) -> std::vector<std::string_view>;

} // namespace freqlens::text
