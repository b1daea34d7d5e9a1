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
#include "freqlens/text.hpp"

#include <istream>
#include <sstream>

namespace freqlens {

namespace {

auto is_blank(std::string_view line) -> bool
{
	for (char c : line) {
		if (c != ' ' && c != '\t' && c != '\r' && c != '\v' && c != '\f') {
			return false;
		}
	}
	return true;
}

auto is_sentence_end(char c) -> bool
{
	return c == '.' || c == '!' || c == '?';
}

struct Document {
	std::vector<std::vector<std::string>> sentences;
	std::uint64_t tokens = 0;

	void add_line(std::string_view line, std::uint64_t line_offset)
	{
		std::size_t start = 0;
		for (std::size_t i = 0; i <= line.size(); ++i) {
			if (i == line.size() || is_sentence_end(line[i])) {
				auto toks = normalize_tokens(line.substr(start, i - start), line_offset + start);
				if (!toks.empty()) {
					tokens += toks.size();
					sentences.push_back(std::move(toks));
				}
				start = i + 1;
			}
		}
	}

	void flush_into(Corpus &corpus, std::uint64_t min_doc_tokens)
	{
		if (tokens > 0 && tokens >= min_doc_tokens) {
			for (const auto &s : sentences) {
				corpus.add_sentence(std::span<const std::string>(s));
			}
		}
		sentences.clear();
		tokens = 0;
	}
};

} // namespace

auto normalize_tokens(std::string_view text, std::uint64_t base_offset) -> std::vector<std::string>
{
	std::vector<std::string> out;
	std::string current;
	std::size_t pos = 0;
	while (pos < text.size()) {
		const auto cp = text::decode_next(text, pos, base_offset);
		if (text::is_alnum(cp)) {
			text::append_utf8(current, text::to_lower(cp));
		}
		else if (!current.empty()) {
			out.push_back(std::move(current));
			current.clear();
		}
	}
	if (!current.empty()) {
		out.push_back(std::move(current));
	}
	return out;
}

auto preprocess(std::istream &raw, std::uint64_t min_doc_tokens) -> Corpus
{
	Corpus corpus;
	Document doc;
	std::string line;
	std::uint64_t offset = 0;
	while (std::getline(raw, line)) {
		if (is_blank(line)) {
			doc.flush_into(corpus, min_doc_tokens);
		}
		else {
			doc.add_line(line, offset);
		}
		offset += line.size() + 1;
	}
	doc.flush_into(corpus, min_doc_tokens);
	return corpus;
}

auto preprocess(std::string_view raw, std::uint64_t min_doc_tokens) -> Corpus
{
	std::istringstream in{std::string(raw)};
	return preprocess(in, min_doc_tokens);
}

} // namespace freqlens
