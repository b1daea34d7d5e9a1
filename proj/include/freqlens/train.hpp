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

#include "freqlens/corpus.hpp"
#include "freqlens/embedding_set.hpp"
#include "freqlens/hyperparams.hpp"

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace freqlens {

/// Receives the model state after each epoch (SGNS, FastText) or iteration
/// (GloVe). The set is a copy; the sink cannot affect training.
using SnapshotSink = std::function<void(const EmbeddingSet &)>;

struct TrainOptions {
	/// 1 is deterministic. More workers train disjoint sentence shards with
	/// unsynchronized updates and give no reproducibility guarantee.
	int workers = 1;
	/// Epoch, loss and words/sec on stderr.
	bool progress = false;
	/// Per-epoch (or per-iteration) mean loss, filled when non-null.
	std::vector<double> *loss_history = nullptr;
};

enum class PairLabel { positive, negative };

struct PairLossGrad {
	double loss = 0.0;
	std::vector<double> grad_w;
	std::vector<double> grad_c;
};

/// One term of the negative-sampling objective: -log s(w.c) for a positive
/// pair, -log s(-w.c) for a negative one, with exact gradients.
/// Throws ShapeError on unequal lengths.
auto sgns_pair_loss_grad(std::span<const double> w, std::span<const double> c, PairLabel label)
	-> PairLossGrad;

struct SubwordPairLossGrad {
	double loss = 0.0;
	std::vector<double> grad_word;
	/// Gradient for each n-gram vector, in input order.
	std::vector<std::vector<double>> grad_ngrams;
	std::vector<double> grad_c;
};

/// The same term when the input vector is the sum of a word vector and its
/// n-gram vectors.
auto subword_pair_loss_grad(std::span<const double> word, std::span<const std::vector<double>> ngrams,
	std::span<const double> c, PairLabel label) -> SubwordPairLossGrad;

/// Character n-grams of `<word>` with code-point lengths in [min_n, max_n].
auto char_ngrams(std::string_view word, int min_n, int max_n) -> std::vector<std::string>;

/// 32-bit FNV-1a over the UTF-8 bytes.
auto fnv1a32(std::string_view bytes) -> std::uint32_t;

/// Bucket indices of a word's n-grams; empty when buckets == 0.
auto ngram_buckets(std::string_view word, int min_n, int max_n, std::uint32_t buckets)
	-> std::vector<std::uint32_t>;

/// Walker alias table over non-negative weights.
class AliasSampler {
public:
	explicit AliasSampler(std::span<const double> weights);

	template <typename Rng>
	auto sample(Rng &rng) const -> std::uint32_t
	{
		const auto k = static_cast<std::uint32_t>(rng.below(prob_.size()));
		return rng.uniform() < prob_[k] ? k : alias_[k];
	}

	auto size() const -> std::size_t
	{
		return prob_.size();
	}

private:
	std::vector<double> prob_;
	std::vector<std::uint32_t> alias_;
};

/// Negative-sampling weights count^cds.
auto noise_weights(const Vocabulary &vocab, double cds_exponent) -> std::vector<double>;

/// Skip-gram with negative sampling. `corpus` must be projected onto `vocab`
/// (see project()). Throws ConfigError on empty input or a method mismatch.
auto train_sgns(const Corpus &corpus, std::shared_ptr<const Vocabulary> vocab, const Hyperparams &hp,
	const SnapshotSink &sink = {}, const TrainOptions &options = {}) -> EmbeddingSet;

/// SGNS where each target vector is the word vector plus its hashed n-gram
/// vectors. The returned W holds the composed vectors.
auto train_fasttext(const Corpus &corpus, std::shared_ptr<const Vocabulary> vocab, const Hyperparams &hp,
	const SnapshotSink &sink = {}, const TrainOptions &options = {}) -> EmbeddingSet;

/// Symmetric co-occurrence weights: each pair of tokens at distance d <= window
/// in the same sentence adds 1/d to X_ij and X_ji.
class CooccurrenceTable {
public:
	struct Entry {
		TokenId row;
		TokenId col;
		double weight;
	};

	CooccurrenceTable() = default;
	/// Entries must be sorted by (row, col) and list both orientations.
	CooccurrenceTable(std::size_t vocab_size, std::vector<Entry> entries);

	auto vocab_size() const -> std::size_t
	{
		return vocab_size_;
	}
	auto entries() const -> std::span<const Entry>
	{
		return entries_;
	}
	auto nonzeros() const -> std::size_t
	{
		return entries_.size();
	}
	auto empty() const -> bool
	{
		return entries_.empty();
	}
	/// Zero when absent.
	auto at(TokenId row, TokenId col) const -> double;

private:
	std::size_t vocab_size_ = 0;
	std::vector<Entry> entries_;
};

auto build_cooccurrence(const Corpus &corpus, const Vocabulary &vocab, int window) -> CooccurrenceTable;

/// f(x) = min(1, (x / x_max)^alpha).
auto glove_weight(double x, double x_max, double alpha) -> double;

/// Sum of f(X_ij) (w_i.c_j + b_i + b'_j - log X_ij)^2 over the table.
auto glove_loss(const CooccurrenceTable &table, const EmbeddingSet &set, double x_max, double alpha) -> double;

/// AdaGrad over shuffled nonzero entries; one snapshot per iteration.
/// `hp.epochs` is the iteration count and training is single-threaded.
/// Throws ConfigError on an empty table.
auto train_glove(const CooccurrenceTable &table, std::shared_ptr<const Vocabulary> vocab, const Hyperparams &hp,
	const SnapshotSink &sink = {}, const TrainOptions &options = {}) -> EmbeddingSet;

/// Dispatch on hp.method over a corpus already projected onto `vocab`. For
/// GloVe the co-occurrence table is built with hp.window. Applies
/// combine_w_plus_c when hp.add_context is set.
auto train_embeddings(const Corpus &projected, std::shared_ptr<const Vocabulary> vocab, const Hyperparams &hp,
	const SnapshotSink &sink = {}, const TrainOptions &options = {}) -> EmbeddingSet;

} // namespace freqlens
