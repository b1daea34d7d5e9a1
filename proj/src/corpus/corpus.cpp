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

#include <json.hpp>

#include <algorithm>
#include <numeric>

namespace freqlens {

auto Provenance::describe() const -> std::string
{
	switch (kind) {
	case Kind::original:
		return "original";
	case Kind::shuffled:
		return "shuffled(" + std::to_string(seed) + ")";
	case Kind::resampled:
		return "resampled(" + word + "," + std::to_string(target) + "," +
			std::to_string(seed) + ")";
	}
	return "unknown";
}

auto Corpus::find(std::string_view word) const -> std::optional<TokenId>
{
	auto it = index_.find(std::string(word));
	if (it == index_.end()) {
		return std::nullopt;
	}
	return it->second;
}

auto Corpus::intern(std::string_view word) -> TokenId
{
	auto [it, inserted] = index_.try_emplace(std::string(word),
		static_cast<TokenId>(lexicon_.size()));
	if (inserted) {
		lexicon_.emplace_back(word);
	}
	return it->second;
}

void Corpus::add_sentence(std::span<const std::string_view> tokens)
{
	for (auto t : tokens) {
		tokens_.push_back(intern(t));
	}
	offsets_.push_back(tokens_.size());
}

void Corpus::add_sentence(std::span<const std::string> tokens)
{
	for (const auto &t : tokens) {
		tokens_.push_back(intern(t));
	}
	offsets_.push_back(tokens_.size());
}

void Corpus::add_sentence_ids(std::span<const TokenId> ids)
{
	for (auto id : ids) {
		if (id >= lexicon_.size()) {
			throw ConfigError("token id " + std::to_string(id) + " outside lexicon of size " +
				std::to_string(lexicon_.size()));
		}
	}
	tokens_.insert(tokens_.end(), ids.begin(), ids.end());
	offsets_.push_back(tokens_.size());
}

auto Corpus::counts() const -> std::vector<std::uint64_t>
{
	std::vector<std::uint64_t> c(lexicon_.size(), 0);
	for (auto t : tokens_) {
		++c[t];
	}
	return c;
}

auto Corpus::count_of(std::string_view word) const -> std::uint64_t
{
	auto id = find(word);
	if (!id) {
		return 0;
	}
	return static_cast<std::uint64_t>(std::count(tokens_.begin(), tokens_.end(), *id));
}

auto Corpus::sentence_lengths() const -> std::vector<std::size_t>
{
	std::vector<std::size_t> lengths(sentence_count());
	for (std::size_t i = 0; i < lengths.size(); ++i) {
		lengths[i] = offsets_[i + 1] - offsets_[i];
	}
	return lengths;
}

auto Corpus::with_tokens(std::vector<TokenId> tokens) const -> Corpus
{
	if (tokens.size() != tokens_.size()) {
		throw ConfigError("token vector length does not match corpus");
	}
	Corpus out = *this;
	out.tokens_ = std::move(tokens);
	return out;
}

auto Corpus::token_strings() const -> std::vector<std::string>
{
	std::vector<std::string> out;
	out.reserve(tokens_.size());
	for (auto t : tokens_) {
		out.push_back(lexicon_[t]);
	}
	return out;
}

Vocabulary::Vocabulary(std::vector<std::string> words, std::vector<std::uint64_t> counts,
	std::uint64_t min_count)
	: words_(std::move(words)), counts_(std::move(counts)), min_count_(min_count)
{
	if (words_.size() != counts_.size()) {
		throw ConfigError("vocabulary words and counts differ in length");
	}
	index_.reserve(words_.size());
	for (std::size_t i = 0; i < words_.size(); ++i) {
		if (counts_[i] < min_count_) {
			throw ConfigError("word '" + words_[i] + "' below min_count");
		}
		if (!index_.emplace(words_[i], static_cast<TokenId>(i)).second) {
			throw ConfigError("duplicate vocabulary word '" + words_[i] + "'");
		}
	}
}

auto Vocabulary::total_count() const -> std::uint64_t
{
	return std::accumulate(counts_.begin(), counts_.end(), std::uint64_t{0});
}

auto Vocabulary::find(std::string_view word) const -> std::optional<TokenId>
{
	auto it = index_.find(std::string(word));
	if (it == index_.end()) {
		return std::nullopt;
	}
	return it->second;
}

auto Vocabulary::id(std::string_view word) const -> TokenId
{
	auto found = find(word);
	if (!found) {
		throw UnknownWordError(std::string(word));
	}
	return *found;
}

auto ResampleReport::to_json() const -> std::string
{
	nlohmann::ordered_json j;
	j["word"] = word;
	j["count_before"] = count_before;
	j["count_after"] = count_after;
	j["target"] = target;
	j["sentences_dropped"] = sentences_dropped;
	j["sentences_replicated"] = sentences_replicated;
	j["side_effect_counts"] = nlohmann::ordered_json::object();
	for (const auto &[w, delta] : side_effect_counts) {
		j["side_effect_counts"][w] = delta;
	}
	return j.dump(2);
}

auto build_vocab(const Corpus &corpus, std::uint64_t min_count) -> Vocabulary
{
	const auto counts = corpus.counts();
	std::vector<TokenId> kept;
	for (TokenId id = 0; id < counts.size(); ++id) {
		if (counts[id] > 0 && counts[id] >= min_count) {
			kept.push_back(id);
		}
	}
	const auto &lex = corpus.lexicon();
	std::sort(kept.begin(), kept.end(), [&](TokenId a, TokenId b) {
		if (counts[a] != counts[b]) {
			return counts[a] > counts[b];
		}
		return lex[a] < lex[b];
	});
	std::vector<std::string> words;
	std::vector<std::uint64_t> kept_counts;
	words.reserve(kept.size());
	kept_counts.reserve(kept.size());
	for (auto id : kept) {
		words.push_back(lex[id]);
		kept_counts.push_back(counts[id]);
	}
	return Vocabulary(std::move(words), std::move(kept_counts), min_count);
}

auto project(const Corpus &corpus, const Vocabulary &vocab) -> Corpus
{
	const auto &lex = corpus.lexicon();
	constexpr auto missing = static_cast<TokenId>(-1);
	std::vector<TokenId> remap(lex.size(), missing);
	for (std::size_t i = 0; i < lex.size(); ++i) {
		if (auto id = vocab.find(lex[i])) {
			remap[i] = *id;
		}
	}

	Corpus out;
	for (const auto &w : vocab.words()) {
		out.intern(w);
	}
	std::vector<TokenId> buf;
	for (std::size_t s = 0; s < corpus.sentence_count(); ++s) {
		buf.clear();
		for (auto t : corpus.sentence(s)) {
			if (remap[t] != missing) {
				buf.push_back(remap[t]);
			}
		}
		if (!buf.empty()) {
			out.add_sentence_ids(buf);
		}
	}
	out.set_provenance(corpus.provenance());
	return out;
}

} // namespace freqlens
