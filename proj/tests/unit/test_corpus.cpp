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


#include "freqlens/corpus.hpp"
#include "freqlens/error.hpp"
#include "freqlens/rng.hpp"

#include <doctest.h>

#include <algorithm>
#include <map>
#include <sstream>

using namespace freqlens;

namespace {

auto make_corpus(const std::vector<std::vector<std::string>> &sentences) -> Corpus
{
	Corpus c;
	for (const auto &s : sentences) {
		c.add_sentence(std::span<const std::string>(s));
	}
	return c;
}

auto word_counts(const Corpus &c) -> std::map<std::string, std::uint64_t>
{
	std::map<std::string, std::uint64_t> m;
	for (const auto &w : c.token_strings()) {
		++m[w];
	}
	return m;
}

auto sentences_of(const Corpus &c) -> std::vector<std::vector<std::string>>
{
	std::vector<std::vector<std::string>> out;
	for (std::size_t i = 0; i < c.sentence_count(); ++i) {
		std::vector<std::string> s;
		for (auto id : c.sentence(i)) {
			s.push_back(c.word(id));
		}
		out.push_back(std::move(s));
	}
	return out;
}

auto random_corpus(std::size_t n_tokens, std::size_t n_words, std::uint64_t seed) -> Corpus
{
	Rng rng(seed);
	Corpus c;
	std::vector<std::string> sent;
	for (std::size_t i = 0; i < n_tokens; ++i) {
		sent.push_back("w" + std::to_string(rng.below(n_words)));
		if (sent.size() == 1 + rng.below(12)) {
			c.add_sentence(std::span<const std::string>(sent));
			sent.clear();
		}
	}
	if (!sent.empty()) {
		c.add_sentence(std::span<const std::string>(sent));
	}
	return c;
}

} // namespace

TEST_CASE("preprocess lowercases and splits sentences")
{
	const auto c = preprocess("The Cat sat.", 1);
	REQUIRE(c.sentence_count() == 1);
	CHECK(c.token_strings() == std::vector<std::string>{"the", "cat", "sat"});
}

TEST_CASE("preprocess replaces non-alphanumerics with whitespace")
{
	const auto c = preprocess("A-B c3", 1);
	CHECK(c.token_strings() == std::vector<std::string>{"a", "b", "c3"});
}

TEST_CASE("preprocess drops short documents")
{
	std::string doc;
	for (int i = 0; i < 49; ++i) {
		doc += "word ";
	}
	CHECK(preprocess(doc, 50).empty());
	CHECK(preprocess(doc + "last", 50).token_count() == 50);

	const auto two = preprocess("one two three.\n\nfour five six seven eight.", 4);
	CHECK(two.token_strings() == std::vector<std::string>{"four", "five", "six", "seven", "eight"});
}

TEST_CASE("preprocess splits on terminal punctuation and newlines")
{
	const auto c = preprocess("Hi there! Who? me.\nnext line", 1);
	const auto s = sentences_of(c);
	REQUIRE(s.size() == 4);
	CHECK(s[0] == std::vector<std::string>{"hi", "there"});
	CHECK(s[1] == std::vector<std::string>{"who"});
	CHECK(s[2] == std::vector<std::string>{"me"});
	CHECK(s[3] == std::vector<std::string>{"next", "line"});
}

TEST_CASE("preprocess reports the byte offset of invalid UTF-8")
{
	const std::string raw = "good line\nbad \xFF here";
	try {
		preprocess(raw, 1);
		FAIL("expected DecodeError");
	}
	catch (const DecodeError &e) {
		CHECK(e.offset() == 14);
	}
}

TEST_CASE("preprocess is idempotent")
{
	const std::string raw = "Über-cool Text, with ÉCOLE and 42 numbers!\nSecond: line?\n\nAnother doc here.";
	const auto once = preprocess(raw, 1);
	std::ostringstream out;
	write_corpus(once, out);
	const auto twice = preprocess(out.str(), 1);
	CHECK(twice.token_strings() == once.token_strings());
}

TEST_CASE("build_vocab applies the threshold and orders IDs")
{
	Corpus c;
	std::vector<std::string> s;
	for (int i = 0; i < 150; ++i) {
		s.push_back("a");
	}
	for (int i = 0; i < 99; ++i) {
		s.push_back("b");
	}
	c.add_sentence(std::span<const std::string>(s));
	const auto v = build_vocab(c, 100);
	REQUIRE(v.size() == 1);
	CHECK(v.word(0) == "a");
	CHECK(v.count(0) == 150);
	CHECK_FALSE(v.contains("b"));

	CHECK(build_vocab(Corpus{}, 1).empty());

	const auto tie = build_vocab(make_corpus({{"b", "a", "b", "a", "b", "a", "b", "a", "b", "a"}}), 1);
	CHECK(tie.id("a") == 0);
	CHECK(tie.id("b") == 1);
	CHECK_THROWS_AS(tie.id("zzz"), UnknownWordError);
}

TEST_CASE("Vocabulary validates its invariants")
{
	CHECK_THROWS_AS(Vocabulary({"a", "a"}, {5, 5}, 1), ConfigError);
	CHECK_THROWS_AS(Vocabulary({"a"}, {0}, 1), ConfigError);
	CHECK_THROWS_AS(Vocabulary({"a", "b"}, {5}, 1), ConfigError);
}

TEST_CASE("project drops out-of-vocabulary tokens and empty sentences")
{
	const auto c = make_corpus({{"a", "x", "b"}, {"x"}, {"b", "a"}});
	const Vocabulary v({"a", "b"}, {2, 2}, 1);
	const auto p = project(c, v);
	CHECK(p.lexicon() == v.words());
	REQUIRE(p.sentence_count() == 2);
	CHECK(sentences_of(p)[0] == std::vector<std::string>{"a", "b"});
	CHECK(sentences_of(p)[1] == std::vector<std::string>{"b", "a"});
}

TEST_CASE("shuffle_tokens conserves lengths and counts")
{
	const auto c = make_corpus({{"a", "b"}, {"c"}});
	const auto s = shuffle_tokens(c, 3);
	CHECK(s.sentence_lengths() == std::vector<std::size_t>{2, 1});
	auto toks = s.token_strings();
	std::sort(toks.begin(), toks.end());
	CHECK(toks == std::vector<std::string>{"a", "b", "c"});
	CHECK(s.provenance() == Provenance::shuffled(3));
	CHECK(s.provenance().describe() == "shuffled(3)");

	const auto big = random_corpus(10'000, 300, 11);
	const auto sb = shuffle_tokens(big, 5);
	CHECK(word_counts(sb) == word_counts(big));
	CHECK(sb.sentence_lengths() == big.sentence_lengths());
	CHECK(shuffle_tokens(big, 5).token_strings() == sb.token_strings());
	CHECK(shuffle_tokens(big, 6).token_strings() != sb.token_strings());
}

TEST_CASE("resample undersamples exactly with single-occurrence sentences")
{
	std::vector<std::vector<std::string>> sents;
	for (int i = 0; i < 1000; ++i) {
		sents.push_back({"he", "w" + std::to_string(i % 17)});
	}
	for (int i = 0; i < 50; ++i) {
		sents.push_back({"she", "x"});
	}
	const auto c = make_corpus(sents);
	const std::vector<std::string> watch{"she", "w3"};
	const auto [out, report] = resample(c, "he", 100, 9, watch);
	CHECK(out.count_of("he") == 100);
	CHECK(report.count_before == 1000);
	CHECK(report.count_after == 100);
	CHECK(report.sentences_dropped == 900);
	CHECK(report.sentences_replicated == 0);
	CHECK(report.side_effect_counts.at("she") == 0);
	CHECK(report.side_effect_counts.at("w3") < 0);
	CHECK(out.count_of("she") == 50);
	CHECK(out.provenance() == Provenance::resampled("he", 100, 9));
}

TEST_CASE("resample oversamples exactly with single-occurrence sentences")
{
	std::vector<std::vector<std::string>> sents;
	for (int i = 0; i < 50; ++i) {
		sents.push_back({"b", "y"});
	}
	sents.push_back({"z"});
	const auto c = make_corpus(sents);
	const auto [out, report] = resample(c, "b", 200, 4);
	CHECK(out.count_of("b") == 200);
	CHECK(report.sentences_replicated == 150);
	CHECK(report.sentences_dropped == 0);
	// Original sentences come first and are untouched.
	const auto before = sentences_of(c);
	const auto after = sentences_of(out);
	CHECK(std::equal(before.begin(), before.end(), after.begin()));
}

TEST_CASE("resample identity and errors")
{
	const auto c = make_corpus({{"a", "b"}, {"a"}});
	const auto [same, report] = resample(c, "a", 2, 1);
	CHECK(same.token_strings() == c.token_strings());
	CHECK(report.sentences_dropped == 0);
	CHECK(report.sentences_replicated == 0);
	CHECK_THROWS_AS(resample(c, "nope", 5, 1), UnknownWordError);
	CHECK_THROWS_AS(resample(c, "a", 0, 1), RangeError);
}

TEST_CASE("resample stays within the per-sentence occurrence bound")
{
	Rng rng(17);
	for (int trial = 0; trial < 20; ++trial) {
		Corpus c;
		std::uint64_t max_occ = 0;
		for (int s = 0; s < 300; ++s) {
			std::vector<std::string> sent{"filler"};
			const auto k = rng.below(4);
			for (std::uint64_t j = 0; j < k; ++j) {
				sent.push_back("t");
			}
			max_occ = std::max<std::uint64_t>(max_occ, k);
			c.add_sentence(std::span<const std::string>(sent));
		}
		const auto count = c.count_of("t");
		for (std::uint64_t target : {count / 3, count * 3}) {
			const auto [out, report] = resample(c, "t", target, static_cast<std::uint64_t>(trial));
			const auto got = out.count_of("t");
			const auto diff = got > target ? got - target : target - got;
			CHECK(diff <= max_occ - 1);
			if (target < count) {
				CHECK(got <= target);
			}
			else {
				CHECK(got >= target);
			}
			CHECK(((report.sentences_dropped == 0) || (report.sentences_replicated == 0)));
		}
	}
}

TEST_CASE("resample never touches sentences without the word")
{
	const auto c = random_corpus(5000, 40, 23);
	const auto [out, report] = resample(c, "w1", c.count_of("w1") / 2, 8);
	std::vector<std::vector<std::string>> kept_without, orig_without;
	for (const auto &s : sentences_of(c)) {
		if (std::find(s.begin(), s.end(), "w1") == s.end()) {
			orig_without.push_back(s);
		}
	}
	for (const auto &s : sentences_of(out)) {
		if (std::find(s.begin(), s.end(), "w1") == s.end()) {
			kept_without.push_back(s);
		}
	}
	CHECK(kept_without == orig_without);
}

TEST_CASE("resample is reproducible")
{
	const auto c = random_corpus(5000, 40, 29);
	const auto a = resample(c, "w2", 400, 5).first.token_strings();
	const auto b = resample(c, "w2", 400, 5).first.token_strings();
	CHECK(a == b);
}

TEST_CASE("balance_frequencies oversamples the rarer word")
{
	std::vector<std::vector<std::string>> sents;
	for (int i = 0; i < 100; ++i) {
		sents.push_back({"b"});
	}
	for (int i = 0; i < 10; ++i) {
		sents.push_back({"a"});
	}
	const auto c = make_corpus(sents);
	const auto [out, report] = balance_frequencies(c, "a", "b", 3);
	CHECK(report.word == "a");
	CHECK(out.count_of("a") == 100);

	const auto [out2, report2] = balance_frequencies(c, "b", "a", 3);
	CHECK(report2.word == "a");
	CHECK(out2.count_of("a") == 100);

	std::vector<std::vector<std::string>> even;
	for (int i = 0; i < 100; ++i) {
		even.push_back({"a", "b"});
	}
	const auto e = make_corpus(even);
	const auto [same, r3] = balance_frequencies(e, "a", "b", 3);
	CHECK(same.token_strings() == e.token_strings());
	CHECK(r3.sentences_replicated == 0);
}

TEST_CASE("resample report serializes every field")
{
	const auto c = make_corpus({{"a"}, {"a"}, {"b"}});
	const std::vector<std::string> watch{"b"};
	const auto [out, report] = resample(c, "a", 1, 2, watch);
	const auto json = report.to_json();
	for (const char *key : {"\"word\"", "\"count_before\"", "\"count_after\"", "\"target\"",
		     "\"sentences_dropped\"", "\"sentences_replicated\"", "\"side_effect_counts\""}) {
		CHECK(json.find(key) != std::string::npos);
	}
}

TEST_CASE("corpus and vocabulary files round-trip")
{
	const auto c = make_corpus({{"a", "b"}, {"caf\xC3\xA9"}});
	std::stringstream ss;
	write_corpus(c, ss);
	CHECK(ss.str() == "a b\ncaf\xC3\xA9\n");
	const auto back = read_corpus(ss);
	CHECK(sentences_of(back) == sentences_of(c));

	const Vocabulary v({"x", "y"}, {7, 3}, 3);
	std::stringstream vs;
	write_vocab(v, vs);
	CHECK(vs.str() == "word\tcount\nx\t7\ny\t3\n");
	const auto vb = read_vocab(vs);
	CHECK(vb.words() == v.words());
	CHECK(vb.counts() == v.counts());

	std::istringstream bad("word\tcount\nx\tseven\n");
	CHECK_THROWS_AS(read_vocab(bad), ParseError);
	std::istringstream no_header("x\t7\n");
	CHECK_THROWS_AS(read_vocab(no_header), ParseError);
}
