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

#include <algorithm>

namespace freqlens {

namespace {

auto empty_like(const Corpus &corpus) -> Corpus
{
	Corpus out;
	for (const auto &w : corpus.lexicon()) {
		out.intern(w);
	}
	return out;
}

struct Containing {
	std::size_t sentence;
	std::uint64_t occurrences;
};

} // namespace

auto shuffle_tokens(const Corpus &corpus, std::uint64_t seed) -> Corpus
{
	std::vector<TokenId> tokens(corpus.tokens().begin(), corpus.tokens().end());
	Rng rng(seed);
	rng.shuffle(std::span<TokenId>(tokens));
	auto out = corpus.with_tokens(std::move(tokens));
	out.set_provenance(Provenance::shuffled(seed));
	return out;
}

auto resample(const Corpus &corpus, std::string_view word, std::uint64_t target_count,
	std::uint64_t seed, std::span<const std::string> watch)
	-> std::pair<Corpus, ResampleReport>
{
	if (target_count == 0) {
		throw RangeError("resample target must be at least 1");
	}
	const auto id = corpus.find(word);
	if (!id) {
		throw UnknownWordError(std::string(word));
	}

	std::vector<Containing> containing;
	std::uint64_t count = 0;
	for (std::size_t s = 0; s < corpus.sentence_count(); ++s) {
		auto sent = corpus.sentence(s);
		auto occ = static_cast<std::uint64_t>(std::count(sent.begin(), sent.end(), *id));
		if (occ > 0) {
			containing.push_back({s, occ});
			count += occ;
		}
	}
	if (count == 0) {
		throw UnknownWordError(std::string(word));
	}

	ResampleReport report;
	report.word = std::string(word);
	report.count_before = count;
	report.target = target_count;

	Rng rng(seed);
	Corpus out = empty_like(corpus);

	if (count > target_count) {
		std::vector<std::size_t> order(containing.size());
		for (std::size_t i = 0; i < order.size(); ++i) {
			order[i] = i;
		}
		rng.shuffle(std::span<std::size_t>(order));
		std::vector<bool> dropped(corpus.sentence_count(), false);
		for (auto k : order) {
			if (count <= target_count) {
				break;
			}
			dropped[containing[k].sentence] = true;
			count -= containing[k].occurrences;
			++report.sentences_dropped;
		}
		for (std::size_t s = 0; s < corpus.sentence_count(); ++s) {
			if (!dropped[s]) {
				out.add_sentence_ids(corpus.sentence(s));
			}
		}
	}
	else {
		for (std::size_t s = 0; s < corpus.sentence_count(); ++s) {
			out.add_sentence_ids(corpus.sentence(s));
		}
		while (count < target_count) {
			const auto &pick = containing[rng.below(containing.size())];
			out.add_sentence_ids(corpus.sentence(pick.sentence));
			count += pick.occurrences;
			++report.sentences_replicated;
		}
	}
	report.count_after = count;

	for (const auto &w : watch) {
		const auto before = static_cast<std::int64_t>(corpus.count_of(w));
		const auto after = static_cast<std::int64_t>(out.count_of(w));
		report.side_effect_counts[w] = after - before;
	}

	out.set_provenance(Provenance::resampled(std::string(word), target_count, seed));
	return {std::move(out), std::move(report)};
}

auto balance_frequencies(const Corpus &corpus, std::string_view word_a,
	std::string_view word_b, std::uint64_t seed, std::span<const std::string> watch)
	-> std::pair<Corpus, ResampleReport>
{
	const auto count_a = corpus.count_of(word_a);
	const auto count_b = corpus.count_of(word_b);
	if (count_a == 0) {
		throw UnknownWordError(std::string(word_a));
	}
	if (count_b == 0) {
		throw UnknownWordError(std::string(word_b));
	}
	if (count_a <= count_b) {
		return resample(corpus, word_a, count_b, seed, watch);
	}
	return resample(corpus, word_b, count_a, seed, watch);
}

} // namespace freqlens
