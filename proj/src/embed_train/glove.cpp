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
#include <chrono>
#include <cmath>
#include <iostream>

namespace freqlens {

namespace {

constexpr std::uint64_t glove_init_stream = 10;
constexpr std::uint64_t glove_order_stream = 11;

/// Accumulates canonical (i <= j) pair weights. Pairs among the most frequent
/// words go to a dense block; the rest are buffered, sorted and merged.
class CooccurrenceAccumulator {
public:
	explicit CooccurrenceAccumulator(std::size_t vocab_size)
		: vocab_size_(vocab_size), dense_n_(std::min<std::size_t>(vocab_size, 1024)),
		  dense_(dense_n_ * dense_n_, 0.0)
	{
	}

	void add(TokenId a, TokenId b, double w)
	{
		if (a > b) {
			std::swap(a, b);
		}
		if (b < dense_n_) {
			dense_[a * dense_n_ + b] += w;
			return;
		}
		buffer_.push_back({key(a, b), w});
		if (buffer_.size() >= flush_at) {
			flush();
		}
	}

	auto finish() -> CooccurrenceTable
	{
		flush();
		std::vector<CooccurrenceTable::Entry> entries;
		auto emit = [&](TokenId i, TokenId j, double w) {
			entries.push_back({i, j, w});
			if (i != j) {
				entries.push_back({j, i, w});
			}
		};
		for (std::size_t i = 0; i < dense_n_; ++i) {
			for (std::size_t j = i; j < dense_n_; ++j) {
				const double w = dense_[i * dense_n_ + j];
				if (w > 0.0) {
					emit(static_cast<TokenId>(i), static_cast<TokenId>(j), w);
				}
			}
		}
		for (const auto &[k, w] : merged_) {
			emit(static_cast<TokenId>(k >> 32), static_cast<TokenId>(k & 0xFFFFFFFFu), w);
		}
		std::sort(entries.begin(), entries.end(), [](const auto &x, const auto &y) {
			return x.row != y.row ? x.row < y.row : x.col < y.col;
		});
		return CooccurrenceTable(vocab_size_, std::move(entries));
	}

private:
	using Cell = std::pair<std::uint64_t, double>;
	static constexpr std::size_t flush_at = std::size_t{1} << 22;

	static auto key(TokenId a, TokenId b) -> std::uint64_t
	{
		return (static_cast<std::uint64_t>(a) << 32) | b;
	}

	void flush()
	{
		if (buffer_.empty()) {
			return;
		}
		std::sort(buffer_.begin(), buffer_.end(), [](const Cell &x, const Cell &y) { return x.first < y.first; });
		std::vector<Cell> reduced;
		for (const auto &cell : buffer_) {
			if (!reduced.empty() && reduced.back().first == cell.first) {
				reduced.back().second += cell.second;
			}
			else {
				reduced.push_back(cell);
			}
		}
		buffer_.clear();

		std::vector<Cell> out;
		out.reserve(merged_.size() + reduced.size());
		auto a = merged_.begin();
		auto b = reduced.begin();
		while (a != merged_.end() || b != reduced.end()) {
			if (b == reduced.end() || (a != merged_.end() && a->first < b->first)) {
				out.push_back(*a++);
			}
			else if (a == merged_.end() || b->first < a->first) {
				out.push_back(*b++);
			}
			else {
				out.push_back({a->first, a->second + b->second});
				++a;
				++b;
			}
		}
		merged_ = std::move(out);
	}

	std::size_t vocab_size_;
	std::size_t dense_n_;
	std::vector<double> dense_;
	std::vector<Cell> buffer_;
	std::vector<Cell> merged_;
};

} // namespace

CooccurrenceTable::CooccurrenceTable(std::size_t vocab_size, std::vector<Entry> entries)
	: vocab_size_(vocab_size), entries_(std::move(entries))
{
	for (std::size_t k = 0; k < entries_.size(); ++k) {
		const auto &e = entries_[k];
		if (e.row >= vocab_size_ || e.col >= vocab_size_) {
			throw ConfigError("co-occurrence entry outside vocabulary");
		}
		if (!(e.weight > 0.0)) {
			throw ConfigError("co-occurrence weights must be positive");
		}
		if (k > 0) {
			const auto &p = entries_[k - 1];
			if (p.row > e.row || (p.row == e.row && p.col >= e.col)) {
				throw ConfigError("co-occurrence entries must be sorted and unique");
			}
		}
	}
}

auto CooccurrenceTable::at(TokenId row, TokenId col) const -> double
{
	auto it = std::lower_bound(entries_.begin(), entries_.end(), std::pair{row, col},
		[](const Entry &e, const std::pair<TokenId, TokenId> &k) {
			return e.row != k.first ? e.row < k.first : e.col < k.second;
		});
	if (it != entries_.end() && it->row == row && it->col == col) {
		return it->weight;
	}
	return 0.0;
}

auto build_cooccurrence(const Corpus &corpus, const Vocabulary &vocab, int window) -> CooccurrenceTable
{
	if (window < 1) {
		throw RangeError("window must be >= 1");
	}
	if (!corpus.empty() && corpus.lexicon() != vocab.words()) {
		throw ConfigError("corpus is not projected onto the vocabulary");
	}
	CooccurrenceAccumulator acc(vocab.size());
	const auto win = static_cast<std::size_t>(window);
	for (std::size_t s = 0; s < corpus.sentence_count(); ++s) {
		const auto sent = corpus.sentence(s);
		for (std::size_t i = 0; i < sent.size(); ++i) {
			const auto hi = std::min(sent.size(), i + win + 1);
			for (auto j = i + 1; j < hi; ++j) {
				const double w = 1.0 / static_cast<double>(j - i);
				if (sent[i] == sent[j]) {
					// Both directions land on the same diagonal cell.
					acc.add(sent[i], sent[j], 2.0 * w);
				}
				else {
					acc.add(sent[i], sent[j], w);
				}
			}
		}
	}
	return acc.finish();
}

auto glove_weight(double x, double x_max, double alpha) -> double
{
	return x >= x_max ? 1.0 : std::pow(x / x_max, alpha);
}

auto glove_loss(const CooccurrenceTable &table, const EmbeddingSet &set, double x_max, double alpha) -> double
{
	const auto &bw = set.w_bias();
	const auto &bc = set.c_bias();
	double total = 0.0;
	for (const auto &e : table.entries()) {
		auto wi = set.w().row(e.row);
		auto cj = set.c().row(e.col);
		double diff = 0.0;
		for (std::size_t k = 0; k < wi.size(); ++k) {
			diff += static_cast<double>(wi[k]) * static_cast<double>(cj[k]);
		}
		if (!bw.empty()) {
			diff += static_cast<double>(bw[e.row]) + static_cast<double>(bc[e.col]);
		}
		diff -= std::log(e.weight);
		total += glove_weight(e.weight, x_max, alpha) * diff * diff;
	}
	return total;
}

namespace {

class GloveModel {
public:
	GloveModel(const CooccurrenceTable &table, std::shared_ptr<const Vocabulary> vocab, const Hyperparams &hp)
		: table_(table), vocab_(std::move(vocab)), hp_(hp), v_(vocab_->size()), dim_(static_cast<std::size_t>(hp.dim)),
		  w_(v_ * dim_), c_(v_ * dim_), bw_(v_, 0.0), bc_(v_, 0.0), gw_(v_ * dim_, 1.0), gc_(v_ * dim_, 1.0),
		  gbw_(v_, 1.0), gbc_(v_, 1.0)
	{
		Rng init(mix_seed(hp.seed, glove_init_stream));
		const double bound = 0.5 / static_cast<double>(dim_);
		for (auto &x : w_) {
			x = init.uniform(-bound, bound);
		}
		for (auto &x : c_) {
			x = init.uniform(-bound, bound);
		}
		log_x_.reserve(table.nonzeros());
		weight_.reserve(table.nonzeros());
		for (const auto &e : table.entries()) {
			log_x_.push_back(std::log(e.weight));
			weight_.push_back(glove_weight(e.weight, hp.x_max, hp.alpha));
		}
	}

	auto train(const SnapshotSink &sink, const TrainOptions &options) -> EmbeddingSet
	{
		const auto entries = table_.entries();
		std::vector<std::uint32_t> order(entries.size());
		for (std::size_t k = 0; k < order.size(); ++k) {
			order[k] = static_cast<std::uint32_t>(k);
		}
		Rng rng(mix_seed(hp_.seed, glove_order_stream));
		const double lr = hp_.learning_rate;

		for (int iter = 0; iter < hp_.epochs; ++iter) {
			const auto t0 = std::chrono::steady_clock::now();
			rng.shuffle(std::span<std::uint32_t>(order));
			for (auto k : order) {
				const auto &e = entries[k];
				double *wi = &w_[e.row * dim_];
				double *cj = &c_[e.col * dim_];
				double *gwi = &gw_[e.row * dim_];
				double *gcj = &gc_[e.col * dim_];
				double dot = 0.0;
#pragma omp simd reduction(+ : dot)
				for (std::size_t d = 0; d < dim_; ++d) {
					dot += wi[d] * cj[d];
				}
				const double diff = dot + bw_[e.row] + bc_[e.col] - log_x_[k];
				const double fdiff = weight_[k] * diff;
				for (std::size_t d = 0; d < dim_; ++d) {
					const double g_w = fdiff * cj[d];
					const double g_c = fdiff * wi[d];
					gwi[d] += g_w * g_w;
					gcj[d] += g_c * g_c;
					wi[d] -= lr * g_w / std::sqrt(gwi[d]);
					cj[d] -= lr * g_c / std::sqrt(gcj[d]);
				}
				gbw_[e.row] += fdiff * fdiff;
				gbc_[e.col] += fdiff * fdiff;
				bw_[e.row] -= lr * fdiff / std::sqrt(gbw_[e.row]);
				bc_[e.col] -= lr * fdiff / std::sqrt(gbc_[e.col]);
			}

			if (options.loss_history || options.progress) {
				const double loss = current_loss();
				if (options.loss_history) {
					options.loss_history->push_back(loss);
				}
				if (options.progress) {
					const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;
					std::cerr << "glove iteration " << (iter + 1) << "/" << hp_.epochs << " loss " << loss
						  << " entries/sec "
						  << static_cast<std::uint64_t>(static_cast<double>(entries.size()) /
							     std::max(dt.count(), 1e-9))
						  << '\n';
				}
			}
			if (sink) {
				sink(snapshot(iter + 1));
			}
		}
		return snapshot(std::nullopt);
	}

private:
	auto current_loss() const -> double
	{
		const auto entries = table_.entries();
		double total = 0.0;
		for (std::size_t k = 0; k < entries.size(); ++k) {
			const auto &e = entries[k];
			const double *wi = &w_[e.row * dim_];
			const double *cj = &c_[e.col * dim_];
			double dot = 0.0;
#pragma omp simd reduction(+ : dot)
			for (std::size_t d = 0; d < dim_; ++d) {
				dot += wi[d] * cj[d];
			}
			const double diff = dot + bw_[e.row] + bc_[e.col] - log_x_[k];
			total += weight_[k] * diff * diff;
		}
		return total;
	}

	auto snapshot(std::optional<int> iter) const -> EmbeddingSet
	{
		Matrix w(v_, dim_), c(v_, dim_);
		auto wd = w.data();
		auto cd = c.data();
		for (std::size_t k = 0; k < wd.size(); ++k) {
			wd[k] = static_cast<float>(w_[k]);
			cd[k] = static_cast<float>(c_[k]);
		}
		EmbeddingSet set(vocab_, std::move(w), std::move(c), hp_, iter);
		set.set_biases(std::vector<float>(bw_.begin(), bw_.end()), std::vector<float>(bc_.begin(), bc_.end()));
		return set;
	}

	const CooccurrenceTable &table_;
	std::shared_ptr<const Vocabulary> vocab_;
	Hyperparams hp_;
	std::size_t v_;
	std::size_t dim_;
	std::vector<double> w_, c_, bw_, bc_;
	std::vector<double> gw_, gc_, gbw_, gbc_;
	std::vector<double> log_x_;
	std::vector<double> weight_;
};

} // namespace

auto train_glove(const CooccurrenceTable &table, std::shared_ptr<const Vocabulary> vocab, const Hyperparams &hp,
	const SnapshotSink &sink, const TrainOptions &options) -> EmbeddingSet
{
	if (hp.method != Method::glove) {
		throw ConfigError("train_glove called with method " + std::string(method_name(hp.method)));
	}
	hp.validate();
	if (!vocab || vocab->empty()) {
		throw ConfigError("training requires a non-empty vocabulary");
	}
	if (table.empty()) {
		throw ConfigError("GloVe training requires a non-empty co-occurrence table");
	}
	if (table.vocab_size() != vocab->size()) {
		throw ConfigError("co-occurrence table and vocabulary sizes differ");
	}
	GloveModel model(table, std::move(vocab), hp);
	return model.train(sink, options);
}

auto train_embeddings(const Corpus &projected, std::shared_ptr<const Vocabulary> vocab, const Hyperparams &hp,
	const SnapshotSink &sink, const TrainOptions &options) -> EmbeddingSet
{
	auto result = [&]() {
		switch (hp.method) {
		case Method::sgns:
			return train_sgns(projected, vocab, hp, sink, options);
		case Method::fasttext:
			return train_fasttext(projected, vocab, hp, sink, options);
		case Method::glove:
			break;
		}
		if (!vocab) {
			throw ConfigError("training requires a vocabulary");
		}
		const auto table = build_cooccurrence(projected, *vocab, hp.window);
		return train_glove(table, vocab, hp, sink, options);
	}();
	return hp.add_context ? combine_w_plus_c(result) : result;
}

} // namespace freqlens
