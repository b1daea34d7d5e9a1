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
#include "freqlens/text.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>

namespace freqlens {

namespace {

auto open_in(const std::filesystem::path &path) -> std::ifstream
{
	std::ifstream in(path, std::ios::binary);
	if (!in) {
		throw Error("cannot open '" + path.string() + "' for reading");
	}
	return in;
}

auto open_out(const std::filesystem::path &path) -> std::ofstream
{
	std::ofstream out(path, std::ios::binary | std::ios::trunc);
	if (!out) {
		throw Error("cannot open '" + path.string() + "' for writing");
	}
	return out;
}

} // namespace

void write_corpus(const Corpus &corpus, std::ostream &out)
{
	const auto &lex = corpus.lexicon();
	std::string line;
	for (std::size_t s = 0; s < corpus.sentence_count(); ++s) {
		line.clear();
		for (auto t : corpus.sentence(s)) {
			if (!line.empty()) {
				line.push_back(' ');
			}
			line += lex[t];
		}
		line.push_back('\n');
		out.write(line.data(), static_cast<std::streamsize>(line.size()));
	}
}

void write_corpus(const Corpus &corpus, const std::filesystem::path &path)
{
	auto out = open_out(path);
	write_corpus(corpus, out);
}

auto read_corpus(std::istream &in) -> Corpus
{
	Corpus corpus;
	std::string line;
	std::uint64_t offset = 0;
	while (std::getline(in, line)) {
		text::decode(line, offset);
		auto toks = text::split_ws(line);
		if (!toks.empty()) {
			corpus.add_sentence(std::span<const std::string_view>(toks));
		}
		offset += line.size() + 1;
	}
	return corpus;
}

auto read_corpus(const std::filesystem::path &path) -> Corpus
{
	auto in = open_in(path);
	return read_corpus(in);
}

void write_vocab(const Vocabulary &vocab, std::ostream &out)
{
	out << "word\tcount\n";
	for (TokenId i = 0; i < vocab.size(); ++i) {
		out << vocab.word(i) << '\t' << vocab.count(i) << '\n';
	}
}

void write_vocab(const Vocabulary &vocab, const std::filesystem::path &path)
{
	auto out = open_out(path);
	write_vocab(vocab, out);
}

auto read_vocab(std::istream &in) -> Vocabulary
{
	std::string line;
	std::uint64_t lineno = 1;
	if (!std::getline(in, line) || (line != "word\tcount" && line != "word\tcount\r")) {
		throw ParseError("vocabulary: expected header 'word<TAB>count' at line 1", 1);
	}
	std::vector<std::string> words;
	std::vector<std::uint64_t> counts;
	while (std::getline(in, line)) {
		++lineno;
		if (!line.empty() && line.back() == '\r') {
			line.pop_back();
		}
		if (line.empty()) {
			continue;
		}
		const auto tab = line.find('\t');
		if (tab == std::string::npos || tab == 0 || line.find('\t', tab + 1) != std::string::npos) {
			throw ParseError("vocabulary: malformed row at line " + std::to_string(lineno), lineno);
		}
		std::uint64_t c = 0;
		const char *first = line.data() + tab + 1;
		const char *last = line.data() + line.size();
		auto [ptr, ec] = std::from_chars(first, last, c);
		if (ec != std::errc() || ptr != last) {
			throw ParseError("vocabulary: bad count at line " + std::to_string(lineno), lineno);
		}
		words.push_back(line.substr(0, tab));
		counts.push_back(c);
	}
	const auto min_count =
		counts.empty() ? std::uint64_t{0} : *std::min_element(counts.begin(), counts.end());
	try {
		return Vocabulary(std::move(words), std::move(counts), min_count);
	}
	catch (const ConfigError &e) {
		throw ParseError(std::string("vocabulary: ") + e.what(), lineno);
	}
}

auto read_vocab(const std::filesystem::path &path) -> Vocabulary
{
	auto in = open_in(path);
	return read_vocab(in);
}

} // namespace freqlens
