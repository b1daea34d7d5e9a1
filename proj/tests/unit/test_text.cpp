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


#include "freqlens/error.hpp"
#include "freqlens/text.hpp"

#include <doctest.h>

using namespace freqlens;

TEST_CASE("decode handles multi-byte sequences")
{
	const std::string s = "a\xC3\xA9\xE2\x82\xAC\xF0\x9F\x98\x80";
	const auto cps = text::decode(s);
	REQUIRE(cps.size() == 4);
	CHECK(cps[0] == U'a');
	CHECK(cps[1] == U'é');
	CHECK(cps[2] == U'€');
	CHECK(cps[3] == U'\U0001F600');
	std::string back;
	for (auto cp : cps) {
		text::append_utf8(back, cp);
	}
	CHECK(back == s);
}

TEST_CASE("decode rejects malformed input with the byte offset")
{
	const std::string bad = std::string("abc") + "\xC3";
	try {
		text::decode(bad, 100);
		FAIL("expected DecodeError");
	}
	catch (const DecodeError &e) {
		CHECK(e.offset() == 103);
	}
	CHECK_THROWS_AS(text::decode("\xC0\xAF"), DecodeError);     // overlong
	CHECK_THROWS_AS(text::decode("\xED\xA0\x80"), DecodeError); // surrogate
	CHECK_THROWS_AS(text::decode("\x80"), DecodeError);
}

TEST_CASE("character classes")
{
	CHECK(text::is_alnum(U'a'));
	CHECK(text::is_alnum(U'7'));
	CHECK_FALSE(text::is_alnum(U'-'));
	CHECK_FALSE(text::is_alnum(U' '));
	CHECK(text::is_alnum(U'é'));
	CHECK_FALSE(text::is_alnum(U'—'));
	CHECK(text::to_lower(U'A') == U'a');
	CHECK(text::to_lower(U'É') == U'é');
	CHECK(text::to_lower(U'Ж') == U'ж');
	CHECK(text::to_lower(U'Σ') == U'σ');
	CHECK(text::has_uppercase("Paris"));
	CHECK_FALSE(text::has_uppercase("paris"));
	CHECK(text::has_uppercase("\xC3\x89t\xC3\xA9"));
}

TEST_CASE("split_ws drops empty pieces")
{
	const auto parts = text::split_ws("  a\tbb \n c  ");
	REQUIRE(parts.size() == 3);
	CHECK(parts[0] == "a");
	CHECK(parts[1] == "bb");
	CHECK(parts[2] == "c");
	CHECK(text::split_ws("   ").empty());
}
