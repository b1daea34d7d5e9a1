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

#include "freqlens/text.hpp"

#include "freqlens/error.hpp"

namespace freqlens::text {

namespace {

[[noreturn]] void bad_byte(std::uint64_t offset, const char *why)
{
	throw DecodeError("invalid UTF-8 at byte offset " + std::to_string(offset) +
			": " + why,
		offset);
}

auto is_space(char c) -> bool
{
	return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f';
}

} // namespace

auto decode_next(std::string_view s, std::size_t &pos, std::uint64_t base_offset) -> char32_t
{
	const auto start = pos;
	const auto b0 = static_cast<unsigned char>(s[pos]);
	if (b0 < 0x80) {
		++pos;
		return b0;
	}

	std::size_t len;
	char32_t cp;
	char32_t min_cp;
	if ((b0 & 0xE0) == 0xC0) {
		len = 2;
		cp = b0 & 0x1F;
		min_cp = 0x80;
	}
	else if ((b0 & 0xF0) == 0xE0) {
		len = 3;
		cp = b0 & 0x0F;
		min_cp = 0x800;
	}
	else if ((b0 & 0xF8) == 0xF0) {
		len = 4;
		cp = b0 & 0x07;
		min_cp = 0x10000;
	}
	else {
		bad_byte(base_offset + start, "unexpected lead byte");
	}

	for (std::size_t k = 1; k < len; ++k) {
		if (start + k >= s.size()) {
			bad_byte(base_offset + start, "truncated sequence");
		}
		const auto b = static_cast<unsigned char>(s[start + k]);
		if ((b & 0xC0) != 0x80) {
			bad_byte(base_offset + start + k, "expected continuation byte");
		}
		cp = (cp << 6) | (b & 0x3F);
	}
	if (cp < min_cp) {
		bad_byte(base_offset + start, "overlong encoding");
	}
	if (cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
		bad_byte(base_offset + start, "code point out of range");
	}
	pos = start + len;
	return cp;
}

auto decode(std::string_view s, std::uint64_t base_offset) -> std::u32string
{
	std::u32string out;
	out.reserve(s.size());
	std::size_t pos = 0;
	while (pos < s.size()) {
		out.push_back(decode_next(s, pos, base_offset));
	}
	return out;
}

void append_utf8(std::string &out, char32_t cp)
{
	if (cp < 0x80) {
		out.push_back(static_cast<char>(cp));
	}
	else if (cp < 0x800) {
		out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
		out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
	}
	else if (cp < 0x10000) {
		out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
		out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
		out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
	}
	else {
		out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
		out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
		out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
		out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
	}
}

auto is_alnum(char32_t cp) -> bool
{
	if (cp < 0x80) {
		return (cp >= 'a' && cp <= 'z') || (cp >= 'A' && cp <= 'Z') ||
			(cp >= '0' && cp <= '9');
	}
	if (cp <= 0xBF) {
		// Latin-1 controls and punctuation, except the ordinal/micro letters.
		return cp == 0xAA || cp == 0xB5 || cp == 0xBA;
	}
	if (cp == 0xD7 || cp == 0xF7) {
		return false;
	}
	struct Range {
		char32_t lo, hi;
	};
	static constexpr Range non_word[] = {
		{0x2000, 0x2BFF},   // punctuation, currency, arrows, math, shapes
		{0x2E00, 0x2E7F},   // supplemental punctuation
		{0x3000, 0x303F},   // CJK symbols and punctuation
		{0xD800, 0xF8FF},   // surrogates and private use
		{0xFE00, 0xFE0F},   // variation selectors
		{0xFE30, 0xFE4F},   // CJK compatibility forms
		{0xFEFF, 0xFEFF},   // byte order mark
		{0xFF00, 0xFF0F},   // fullwidth punctuation
		{0xFF1A, 0xFF20},
		{0xFF3B, 0xFF40},
		{0xFF5B, 0xFF65},
		{0x1F000, 0x1FAFF}, // emoji and pictographs
		{0xE0000, 0x10FFFF},
	};
	for (const auto &r : non_word) {
		if (cp >= r.lo && cp <= r.hi) {
			return false;
		}
	}
	return true;
}

auto to_lower(char32_t cp) -> char32_t
{
	if (cp >= 'A' && cp <= 'Z') {
		return cp + 0x20;
	}
	if (cp < 0xC0) {
		return cp;
	}
	if (cp <= 0xDE) {
		return cp == 0xD7 ? cp : cp + 0x20;
	}
	if (cp >= 0x100 && cp <= 0x17F) {
		if (cp == 0x130) {
			return 'i';
		}
		if (cp == 0x178) {
			return 0xFF;
		}
		const bool odd_upper = (cp >= 0x139 && cp <= 0x148) || (cp >= 0x179 && cp <= 0x17E);
		if (odd_upper) {
			return (cp % 2 == 1) ? cp + 1 : cp;
		}
		if (cp == 0x138 || cp == 0x149 || cp == 0x17F) {
			return cp;
		}
		return (cp % 2 == 0) ? cp + 1 : cp;
	}
	if (cp >= 0x391 && cp <= 0x3A9 && cp != 0x3A2) {
		return cp + 0x20;
	}
	if (cp >= 0x410 && cp <= 0x42F) {
		return cp + 0x20;
	}
	if (cp >= 0x400 && cp <= 0x40F) {
		return cp + 0x50;
	}
	return cp;
}

auto has_uppercase(std::string_view utf8) -> bool
{
	std::size_t pos = 0;
	while (pos < utf8.size()) {
		const auto cp = decode_next(utf8, pos);
		if (to_lower(cp) != cp) {
			return true;
		}
	}
	return false;
}

auto split_ws(std::string_view s) -> std::vector<std::string_view>
{
	std::vector<std::string_view> out;
	std::size_t i = 0;
	while (i < s.size()) {
		while (i < s.size() && is_space(s[i])) {
			++i;
		}
		const auto start = i;
		while (i < s.size() && !is_space(s[i])) {
			++i;
		}
		if (i > start) {
			out.push_back(s.substr(start, i - start));
		}
	}
	return out;
}

} // namespace freqlens::text
