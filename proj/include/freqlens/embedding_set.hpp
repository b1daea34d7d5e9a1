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
#include "freqlens/error.hpp"
#include "freqlens/hyperparams.hpp"

#include <cmath>
#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace freqlens {

/// Dense row-major float matrix.
class Matrix {
public:
	Matrix() = default;
	Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0.0f) {}

	auto rows() const -> std::size_t
	{
		return rows_;
	}
	auto cols() const -> std::size_t
	{
		return cols_;
	}
	auto row(std::size_t i) -> std::span<float>
	{
		return {data_.data() + i * cols_, cols_};
	}
	auto row(std::size_t i) const -> std::span<const float>
	{
		return {data_.data() + i * cols_, cols_};
	}
	auto data() -> std::span<float>
	{
		return data_;
	}
	auto data() const -> std::span<const float>
	{
		return data_;
	}
	auto operator()(std::size_t i, std::size_t j) -> float &
	{
		return data_[i * cols_ + j];
	}
	auto operator()(std::size_t i, std::size_t j) const -> float
	{
		return data_[i * cols_ + j];
	}
	auto operator==(const Matrix &) const -> bool = default;

private:
	std::size_t rows_ = 0;
	std::size_t cols_ = 0;
	std::vector<float> data_;
};

/// Target (W) and context (C) vectors over a vocabulary; row i is vocab ID i.
/// Immutable after construction. GloVe sets additionally keep their bias
/// terms, which are not persisted.
class EmbeddingSet {
public:
	/// Throws ShapeError on mismatched shapes and ConfigError on non-finite values.
	EmbeddingSet(std::shared_ptr<const Vocabulary> vocab, Matrix w, Matrix c, Hyperparams hp,
		std::optional<int> epoch_tag = std::nullopt);

	auto vocab() const -> const Vocabulary &
	{
		return *vocab_;
	}
	auto vocab_ptr() const -> const std::shared_ptr<const Vocabulary> &
	{
		return vocab_;
	}
	auto w() const -> const Matrix &
	{
		return w_;
	}
	auto c() const -> const Matrix &
	{
		return c_;
	}
	auto size() const -> std::size_t
	{
		return w_.rows();
	}
	auto dim() const -> std::size_t
	{
		return w_.cols();
	}
	auto method() const -> Method
	{
		return hp_.method;
	}
	auto hyperparams() const -> const Hyperparams &
	{
		return hp_;
	}
	auto epoch_tag() const -> std::optional<int>
	{
		return epoch_tag_;
	}
	auto vector(TokenId id) const -> std::span<const float>
	{
		return w_.row(id);
	}
	/// Throws UnknownWordError.
	auto vector(std::string_view word) const -> std::span<const float>
	{
		return w_.row(vocab_->id(word));
	}

	auto w_bias() const -> const std::vector<float> &
	{
		return w_bias_;
	}
	auto c_bias() const -> const std::vector<float> &
	{
		return c_bias_;
	}
	void set_biases(std::vector<float> w_bias, std::vector<float> c_bias);

	/// Same vectors over a vocabulary with identical words in identical order
	/// (typically one carrying counts read from a vocabulary file).
	auto with_vocab(std::shared_ptr<const Vocabulary> vocab) const -> EmbeddingSet;

private:
	std::shared_ptr<const Vocabulary> vocab_;
	Matrix w_;
	Matrix c_;
	Hyperparams hp_;
	std::optional<int> epoch_tag_;
	std::vector<float> w_bias_;
	std::vector<float> c_bias_;
};

/// W' = W + C, C' = C; add_context is marked.
auto combine_w_plus_c(const EmbeddingSet &set) -> EmbeddingSet;

enum class Metric { cosine, neg_euclidean };

auto metric_name(Metric m) -> std::string_view;
auto parse_metric(std::string_view name) -> Metric;

/// Cosine similarity or negative Euclidean distance, accumulated in double.
/// Evaluation is symmetric in its arguments. Throws UndefinedSimilarityError
/// for a zero vector under cosine and ShapeError for unequal lengths.
template <typename T>
auto similarity(std::span<const T> u, std::span<const T> v, Metric metric) -> double
{
	if (u.size() != v.size()) {
		throw ShapeError("similarity: dimension mismatch");
	}
	if (metric == Metric::neg_euclidean) {
		double ss = 0.0;
		for (std::size_t i = 0; i < u.size(); ++i) {
			const double d = static_cast<double>(u[i]) - static_cast<double>(v[i]);
			ss += d * d;
		}
		return -std::sqrt(ss);
	}
	double dot = 0.0, nu = 0.0, nv = 0.0;
	for (std::size_t i = 0; i < u.size(); ++i) {
		const double a = u[i];
		const double b = v[i];
		dot += a * b;
		nu += a * a;
		nv += b * b;
	}
	if (nu == 0.0 || nv == 0.0) {
		throw UndefinedSimilarityError("cosine similarity of a zero vector");
	}
	return dot / (std::sqrt(nu) * std::sqrt(nv));
}

inline auto similarity(std::span<const float> u, std::span<const float> v, Metric metric) -> double
{
	return similarity<float>(u, v, metric);
}

inline auto similarity(std::span<const double> u, std::span<const double> v, Metric metric) -> double
{
	return similarity<double>(u, v, metric);
}

enum class StoreFormat { text, binary };

/// Binary: "FQL1", u32 V, u32 D, then per word a u16 byte length, the UTF-8
/// bytes, D float32 for W and D float32 for C, all little-endian.
/// Text: "V D" then V lines "word v1 ... vD" with W only, six decimals.
void persist(const EmbeddingSet &set, const std::filesystem::path &path, StoreFormat format);

/// Detects the format from the magic bytes. Text files restore C as zeros.
/// The returned vocabulary carries zero counts. Throws ParseError.
auto restore(const std::filesystem::path &path, const Hyperparams &hp = {}) -> EmbeddingSet;
auto restore_from_bytes(std::string_view bytes, const Hyperparams &hp = {}) -> EmbeddingSet;

} // namespace freqlens
