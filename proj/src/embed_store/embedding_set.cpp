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

#include "freqlens/embedding_set.hpp"

namespace freqlens {

EmbeddingSet::EmbeddingSet(std::shared_ptr<const Vocabulary> vocab, Matrix w, Matrix c,
	Hyperparams hp, std::optional<int> epoch_tag)
	: vocab_(std::move(vocab)), w_(std::move(w)), c_(std::move(c)), hp_(hp), epoch_tag_(epoch_tag)
{
	if (!vocab_) {
		throw ConfigError("embedding set requires a vocabulary");
	}
	if (w_.rows() != c_.rows() || w_.cols() != c_.cols()) {
		throw ShapeError("W and C shapes differ");
	}
	if (w_.rows() != vocab_->size()) {
		throw ShapeError("matrix rows (" + std::to_string(w_.rows()) +
			") do not match vocabulary size (" + std::to_string(vocab_->size()) + ")");
	}
	for (std::size_t i = 0; i < w_.rows(); ++i) {
		for (auto x : w_.row(i)) {
			if (!std::isfinite(x)) {
				throw ConfigError("non-finite value in W row of '" + vocab_->word(static_cast<TokenId>(i)) + "'");
			}
		}
		for (auto x : c_.row(i)) {
			if (!std::isfinite(x)) {
				throw ConfigError("non-finite value in C row of '" + vocab_->word(static_cast<TokenId>(i)) + "'");
			}
		}
	}
}

void EmbeddingSet::set_biases(std::vector<float> w_bias, std::vector<float> c_bias)
{
	if (w_bias.size() != size() || c_bias.size() != size()) {
		throw ShapeError("bias vectors must have one entry per word");
	}
	w_bias_ = std::move(w_bias);
	c_bias_ = std::move(c_bias);
}

auto EmbeddingSet::with_vocab(std::shared_ptr<const Vocabulary> vocab) const -> EmbeddingSet
{
	if (!vocab || vocab->words() != vocab_->words()) {
		throw ShapeError("replacement vocabulary does not list the same words in the same order");
	}
	EmbeddingSet out = *this;
	out.vocab_ = std::move(vocab);
	return out;
}

auto combine_w_plus_c(const EmbeddingSet &set) -> EmbeddingSet
{
	const auto &w = set.w();
	const auto &c = set.c();
	if (w.rows() != c.rows() || w.cols() != c.cols()) {
		throw ShapeError("W and C shapes differ");
	}
	Matrix sum = w;
	auto out = sum.data();
	auto cd = c.data();
	for (std::size_t i = 0; i < out.size(); ++i) {
		out[i] += cd[i];
	}
	Hyperparams hp = set.hyperparams();
	hp.add_context = true;
	EmbeddingSet combined(set.vocab_ptr(), std::move(sum), c, hp, set.epoch_tag());
	if (!set.w_bias().empty()) {
		combined.set_biases(set.w_bias(), set.c_bias());
	}
	return combined;
}

auto metric_name(Metric m) -> std::string_view
{
	return m == Metric::cosine ? "cosine" : "neg_euclidean";
}

auto parse_metric(std::string_view name) -> Metric
{
	if (name == "cosine") {
		return Metric::cosine;
	}
	if (name == "neg_euclidean") {
		return Metric::neg_euclidean;
	}
	throw ConfigError("unknown metric '" + std::string(name) + "' (expected one of {cosine, neg_euclidean})");
}

} // namespace freqlens
