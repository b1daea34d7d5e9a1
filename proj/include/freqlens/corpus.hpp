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
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace freqlens {

using TokenId = std::uint32_t;

struct Provenance {
	enum class Kind { original, shuffled, resampled };

	Kind kind = Kind::original;
	std::uint64_t seed = 0;
	std::string word;        // resampled only
	std::uint64_t target = 0; // resampled only

	static auto original() -> Provenance
	{
		return {};
	}
	static auto shuffled(std::uint64_t seed) -> Provenance
	{
		return {Kind::shuffled, seed, {}, 0};
	}
	static auto resampled(std::string word, std::uint64_t target,
		std::uint64_t seed) -> Provenance
	{
		return {Kind::resampled, seed, std::move(word), target};
	}

	/// e.g. "original", "shuffled(7)", "resampled(he,1000,7)".
	auto describe() const -> std::string;

	auto operator==(const Provenance &) const -> bool = default;
};

/// Sentences of token IDs over an interned lexicon.
///
/// Before vocabulary pruning the lexicon holds every distinct token string in
/// order of first appearance; after `project` it is exactly the vocabulary
/// word list, so token IDs coincide with vocabulary IDs. Tokens are stored
/// flat with sentence offsets.
class Corpus {
public:
	Corpus() = default;

	void add_sentence(std::span<const std::string_view> tokens);
	void add_sentence(std::span<const std::string> tokens);
	/// IDs must be valid under the current lexicon.
	void add_sentence_ids(std::span<const TokenId> ids);

	auto sentence_count() const -> std::size_t
	{
		return offsets_.size() - 1;
	}
	auto sentence(std::size_t i) const -> std::span<const TokenId>
	{
		return {tokens_.data() + offsets_[i], offsets_[i + 1] - offsets_[i]};
	}
	auto token_count() const -> std::uint64_t
	{
		return tokens_.size();
	}
	auto tokens() const -> std::span<const TokenId>
	{
		return tokens_;
	}
	auto empty() const -> bool
	{
		return tokens_.empty();
	}

	auto lexicon() const -> const std::vector<std::string> &
	{
		return lexicon_;
	}
	auto word(TokenId id) const -> const std::string &
	{
		return lexicon_[id];
	}
	auto find(std::string_view word) const -> std::optional<TokenId>;
	auto intern(std::string_view word) -> TokenId;

	/// Occurrence count per lexicon ID.
	auto counts() const -> std::vector<std::uint64_t>;
	auto count_of(std::string_view word) const -> std::uint64_t;
	auto sentence_lengths() const -> std::vector<std::size_t>;

	auto provenance() const -> const Provenance &
	{
		return provenance_;
	}
	void set_provenance(Provenance p)
	{
		provenance_ = std::move(p);
	}

	/// Same sentences, tokens rearranged; lengths must sum to token_count().
	auto with_tokens(std::vector<TokenId> tokens) const -> Corpus;

	/// Token strings of the whole corpus, for comparisons in tests.
	auto token_strings() const -> std::vector<std::string>;

private:
	std::vector<std::string> lexicon_;
	std::unordered_map<std::string, TokenId> index_;
	std::vector<TokenId> tokens_;
	std::vector<std::size_t> offsets_{0};
	Provenance provenance_;
};

/// Retained words with their corpus counts. IDs are assigned by descending
/// count, ties broken lexicographically.
class Vocabulary {
public:
	Vocabulary() = default;
	/// Entries must already be in ID order.
	Vocabulary(std::vector<std::string> words, std::vector<std::uint64_t> counts,
		std::uint64_t min_count);

	auto size() const -> std::size_t
	{
		return words_.size();
	}
	auto empty() const -> bool
	{
		return words_.empty();
	}
	auto word(TokenId id) const -> const std::string &
	{
		return words_[id];
	}
	auto count(TokenId id) const -> std::uint64_t
	{
		return counts_[id];
	}
	auto words() const -> const std::vector<std::string> &
	{
		return words_;
	}
	auto counts() const -> const std::vector<std::uint64_t> &
	{
		return counts_;
	}
	auto min_count() const -> std::uint64_t
	{
		return min_count_;
	}
	auto total_count() const -> std::uint64_t;

	auto find(std::string_view word) const -> std::optional<TokenId>;
	/// Throws UnknownWordError.
	auto id(std::string_view word) const -> TokenId;
	auto contains(std::string_view word) const -> bool
	{
		return find(word).has_value();
	}

private:
	std::vector<std::string> words_;
	std::vector<std::uint64_t> counts_;
	std::uint64_t min_count_ = 0;
	std::unordered_map<std::string, TokenId> index_;
};

struct ResampleReport {
	std::string word;
	std::uint64_t count_before = 0;
	std::uint64_t count_after = 0;
	std::uint64_t target = 0;
	std::uint64_t sentences_dropped = 0;
	std::uint64_t sentences_replicated = 0;
	/// Signed count change for each watched word.
	std::map<std::string, std::int64_t> side_effect_counts;

	auto to_json() const -> std::string;
};

/// Split documents into normalized sentences. Documents are separated by
/// blank lines; sentences end at '.', '!', '?' or a newline. Characters that
/// are not alphanumeric become whitespace and letters are lowercased.
/// Documents with fewer than `min_doc_tokens` tokens are dropped.
/// Throws DecodeError on invalid UTF-8.
auto preprocess(std::istream &raw, std::uint64_t min_doc_tokens) -> Corpus;
auto preprocess(std::string_view raw, std::uint64_t min_doc_tokens) -> Corpus;

/// Normalize one piece of text into tokens (no sentence splitting).
/// `base_offset` positions decode errors within a larger input.
auto normalize_tokens(std::string_view text, std::uint64_t base_offset = 0)
	-> std::vector<std::string>;

auto build_vocab(const Corpus &corpus, std::uint64_t min_count) -> Vocabulary;

/// Re-express the corpus over vocabulary IDs: out-of-vocabulary tokens are
/// removed and sentences left empty are dropped.
auto project(const Corpus &corpus, const Vocabulary &vocab) -> Corpus;

/// Global Fisher-Yates permutation of all tokens, re-cut into the original
/// sentence lengths.
auto shuffle_tokens(const Corpus &corpus, std::uint64_t seed) -> Corpus;

/// Drop (or replicate) random sentences containing `word` until its count
/// first crosses `target`. Throws UnknownWordError and RangeError.
auto resample(const Corpus &corpus, std::string_view word,
	std::uint64_t target_count, std::uint64_t seed,
	std::span<const std::string> watch = {})
	-> std::pair<Corpus, ResampleReport>;

/// Oversample the rarer of the two words up to the other's count.
auto balance_frequencies(const Corpus &corpus, std::string_view word_a,
	std::string_view word_b, std::uint64_t seed,
	std::span<const std::string> watch = {})
	-> std::pair<Corpus, ResampleReport>;

// I/O. Corpus files hold one sentence per line, tokens separated by a single
// space. Vocabulary files are TSV with a `word<TAB>count` header.
void write_corpus(const Corpus &corpus, std::ostream &out);
void write_corpus(const Corpus &corpus, const std::filesystem::path &path);
auto read_corpus(std::istream &in) -> Corpus;
auto read_corpus(const std::filesystem::path &path) -> Corpus;

void write_vocab(const Vocabulary &vocab, std::ostream &out);
void write_vocab(const Vocabulary &vocab, const std::filesystem::path &path);
auto read_vocab(std::istream &in) -> Vocabulary;
auto read_vocab(const std::filesystem::path &path) -> Vocabulary;

} // namespace freqlens
