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
#include "freqlens/rng.hpp"
#include "freqlens/train.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <iostream>
#include <thread>

namespace freqlens {

namespace {

constexpr std::uint64_t init_stream = 0;
constexpr std::uint64_t train_stream = 1;

void check_inputs(const Corpus &corpus, const std::shared_ptr<const Vocabulary> &vocab, const Hyperparams &hp)
{
	hp.validate();
	if (!vocab || vocab->empty()) {
		throw ConfigError("training requires a non-empty vocabulary");
	}
	if (corpus.empty()) {
		throw ConfigError("training requires a non-empty corpus");
	}
	if (corpus.lexicon() != vocab->words()) {
		throw ConfigError("corpus is not projected onto the training vocabulary");
	}
}

/// Shared skip-gram engine. Plain SGNS is the case with no n-gram buckets.
class SkipGram {
public:
	SkipGram(const Corpus &corpus, std::shared_ptr<const Vocabulary> vocab, const Hyperparams &hp, bool subwords)
		: corpus_(corpus), vocab_(std::move(vocab)), hp_(hp), dim_(static_cast<std::size_t>(hp.dim)),
		  w_(vocab_->size(), dim_), c_(vocab_->size(), dim_),
		  noise_(noise_weights(*vocab_, hp.cds_exponent))
	{
		const auto v = vocab_->size();
		if (subwords && hp.buckets > 0) {
			g_ = Matrix(hp.buckets, dim_);
			ngrams_.resize(v);
			for (TokenId i = 0; i < v; ++i) {
				ngrams_[i] = ngram_buckets(vocab_->word(i), hp.ngram_min, hp.ngram_max, hp.buckets);
			}
		}

		Rng init(mix_seed(hp.seed, init_stream));
		const float bound = 0.5f / static_cast<float>(dim_);
		for (auto &x : w_.data()) {
			x = static_cast<float>(init.uniform(-bound, bound));
		}
		for (auto &x : g_.data()) {
			x = static_cast<float>(init.uniform(-bound, bound));
		}

		total_words_ = corpus_.token_count();
		keep_prob_.assign(v, 1.0f);
		if (hp.subsample > 0.0) {
			const double threshold = hp.subsample * static_cast<double>(vocab_->total_count());
			for (TokenId i = 0; i < v; ++i) {
				const double cn = static_cast<double>(vocab_->count(i));
				const double keep = (std::sqrt(cn / threshold) + 1.0) * threshold / cn;
				keep_prob_[i] = static_cast<float>(std::min(1.0, keep));
			}
		}
	}

	auto train(const SnapshotSink &sink, const TrainOptions &options) -> EmbeddingSet
	{
		const int workers = std::max(1, options.workers);
		track_loss_ = options.progress || options.loss_history != nullptr;
		const auto n_sent = corpus_.sentence_count();
		for (int epoch = 0; epoch < hp_.epochs; ++epoch) {
			const auto t0 = std::chrono::steady_clock::now();
			std::vector<double> losses(workers, 0.0);
			std::vector<std::uint64_t> pairs(workers, 0);
			if (workers == 1) {
				Rng rng(mix_seed(hp_.seed, train_stream + static_cast<std::uint64_t>(epoch)));
				run_shard(0, n_sent, rng, losses[0], pairs[0]);
			}
			else {
				std::vector<std::jthread> threads;
				for (int k = 0; k < workers; ++k) {
					const auto begin = n_sent * k / workers;
					const auto end = n_sent * (k + 1) / workers;
					threads.emplace_back([&, k, begin, end] {
						Rng rng(mix_seed(hp_.seed,
							train_stream + 1000003ULL * static_cast<std::uint64_t>(k + 1) +
								static_cast<std::uint64_t>(epoch)));
						run_shard(begin, end, rng, losses[k], pairs[k]);
					});
				}
			}

			double loss = 0.0;
			std::uint64_t n_pairs = 0;
			for (int k = 0; k < workers; ++k) {
				loss += losses[k];
				n_pairs += pairs[k];
			}
			const double mean_loss = n_pairs > 0 ? loss / static_cast<double>(n_pairs) : 0.0;
			if (options.loss_history) {
				options.loss_history->push_back(mean_loss);
			}
			if (options.progress) {
				const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;
				std::cerr << method_name(hp_.method) << " epoch " << (epoch + 1) << "/" << hp_.epochs
						  << " loss " << mean_loss << " words/sec "
						  << static_cast<std::uint64_t>(static_cast<double>(total_words_) / std::max(dt.count(), 1e-9))
						  << '\n';
			}
			if (sink) {
				sink(snapshot(epoch + 1));
			}
		}
		return snapshot(std::nullopt);
	}

private:
	auto learning_rate() const -> float
	{
		const double progress = static_cast<double>(processed_.load(std::memory_order_relaxed)) /
			(static_cast<double>(hp_.epochs) * static_cast<double>(total_words_) + 1.0);
		return static_cast<float>(std::max(hp_.learning_rate * (1.0 - progress), hp_.min_learning_rate));
	}

	void run_shard(std::size_t begin, std::size_t end, Rng &rng, double &loss, std::uint64_t &n_pairs)
	{
		std::vector<TokenId> kept;
		std::vector<float> h(dim_), grad(dim_);
		for (std::size_t s = begin; s < end; ++s) {
			const auto sent = corpus_.sentence(s);
			const float lr = learning_rate();
			kept.clear();
			for (auto t : sent) {
				if (hp_.subsample > 0.0 && keep_prob_[t] < 1.0f && static_cast<float>(rng.uniform()) > keep_prob_[t]) {
					continue;
				}
				kept.push_back(t);
			}
			const auto n = kept.size();
			for (std::size_t pos = 0; pos < n; ++pos) {
				const auto span = hp_.dynamic_window ? 1 + rng.below(static_cast<std::uint64_t>(hp_.window))
								     : static_cast<std::uint64_t>(hp_.window);
				const auto lo = pos >= span ? pos - span : 0;
				const auto hi = std::min<std::size_t>(n - 1, pos + span);
				for (auto ctx = lo; ctx <= hi; ++ctx) {
					if (ctx == pos) {
						continue;
					}
					loss += update(kept[pos], kept[ctx], lr, rng, h, grad);
					++n_pairs;
				}
			}
			processed_.fetch_add(sent.size(), std::memory_order_relaxed);
		}
	}

	/// One positive pair plus its negatives; returns the pair loss.
	auto update(TokenId center, TokenId context, float lr, Rng &rng, std::vector<float> &h, std::vector<float> &grad)
		-> double
	{
		auto wrow = w_.row(center);
		std::copy(wrow.begin(), wrow.end(), h.begin());
		const std::vector<std::uint32_t> *grams = ngrams_.empty() ? nullptr : &ngrams_[center];
		if (grams) {
			for (auto b : *grams) {
				auto grow = g_.row(b);
				for (std::size_t k = 0; k < dim_; ++k) {
					h[k] += grow[k];
				}
			}
		}
		std::fill(grad.begin(), grad.end(), 0.0f);

		double loss = 0.0;
		for (int d = 0; d <= hp_.negatives; ++d) {
			TokenId target;
			float label;
			if (d == 0) {
				target = context;
				label = 1.0f;
			}
			else {
				target = noise_.sample(rng);
				if (target == context) {
					continue;
				}
				label = 0.0f;
			}
			auto crow = c_.row(target);
			float f = 0.0f;
#pragma omp simd reduction(+ : f)
			for (std::size_t k = 0; k < dim_; ++k) {
				f += h[k] * crow[k];
			}
			const float sig = 1.0f / (1.0f + std::exp(-f));
			if (track_loss_) {
				const double z = label > 0.5f ? -static_cast<double>(f) : static_cast<double>(f);
				loss += std::max(z, 0.0) + std::log1p(std::exp(-std::abs(z)));
			}
			const float g = (label - sig) * lr;
			for (std::size_t k = 0; k < dim_; ++k) {
				grad[k] += g * crow[k];
			}
			for (std::size_t k = 0; k < dim_; ++k) {
				crow[k] += g * h[k];
			}
		}
		for (std::size_t k = 0; k < dim_; ++k) {
			wrow[k] += grad[k];
		}
		if (grams) {
			for (auto b : *grams) {
				auto grow = g_.row(b);
				for (std::size_t k = 0; k < dim_; ++k) {
					grow[k] += grad[k];
				}
			}
		}
		return loss;
	}

	auto composed_w() const -> Matrix
	{
		Matrix out = w_;
		if (ngrams_.empty()) {
			return out;
		}
		for (TokenId i = 0; i < out.rows(); ++i) {
			auto row = out.row(i);
			for (auto b : ngrams_[i]) {
				auto grow = g_.row(b);
				for (std::size_t k = 0; k < dim_; ++k) {
					row[k] += grow[k];
				}
			}
		}
		return out;
	}

	auto snapshot(std::optional<int> epoch) const -> EmbeddingSet
	{
		return EmbeddingSet(vocab_, composed_w(), c_, hp_, epoch);
	}

	const Corpus &corpus_;
	std::shared_ptr<const Vocabulary> vocab_;
	Hyperparams hp_;
	std::size_t dim_;
	Matrix w_;
	Matrix c_;
	Matrix g_;
	std::vector<std::vector<std::uint32_t>> ngrams_;
	AliasSampler noise_;
	std::vector<float> keep_prob_;
	std::uint64_t total_words_ = 0;
	std::atomic<std::uint64_t> processed_{0};
	bool track_loss_ = false;
};

} // namespace

auto train_sgns(const Corpus &corpus, std::shared_ptr<const Vocabulary> vocab, const Hyperparams &hp,
	const SnapshotSink &sink, const TrainOptions &options) -> EmbeddingSet
{
	if (hp.method != Method::sgns) {
		throw ConfigError("train_sgns called with method " + std::string(method_name(hp.method)));
	}
	check_inputs(corpus, vocab, hp);
	SkipGram model(corpus, std::move(vocab), hp, false);
	return model.train(sink, options);
}

auto train_fasttext(const Corpus &corpus, std::shared_ptr<const Vocabulary> vocab, const Hyperparams &hp,
	const SnapshotSink &sink, const TrainOptions &options) -> EmbeddingSet
{
	if (hp.method != Method::fasttext) {
		throw ConfigError("train_fasttext called with method " + std::string(method_name(hp.method)));
	}
	check_inputs(corpus, vocab, hp);
	SkipGram model(corpus, std::move(vocab), hp, true);
	return model.train(sink, options);
}

} // namespace freqlens
