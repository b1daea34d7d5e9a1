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

#include "freqlens/train.hpp"

#include <algorithm>
#include <cmath>

namespace freqlens {

namespace {

auto softplus(double z) -> double
{
	return std::max(z, 0.0) + std::log1p(std::exp(-std::abs(z)));
}

auto sigmoid(double x) -> double
{
	if (x >= 0) {
		return 1.0 / (1.0 + std::exp(-x));
	}
	const double e = std::exp(x);
	return e / (1.0 + e);
}

auto dot(std::span<const double> a, std::span<const double> b) -> double
{
	double s = 0.0;
	for (std::size_t i = 0; i < a.size(); ++i) {
		s += a[i] * b[i];
	}
	return s;
}

/// Loss and d(loss)/d(score) for one labelled pair.
auto term(double score, PairLabel label) -> std::pair<double, double>
{
	if (label == PairLabel::positive) {
		return {softplus(-score), sigmoid(score) - 1.0};
	}
	return {softplus(score), sigmoid(score)};
}

auto scaled(std::span<const double> v, double k) -> std::vector<double>
{
	std::vector<double> out(v.size());
	for (std::size_t i = 0; i < v.size(); ++i) {
		out[i] = k * v[i];
	}
	return out;
}

} // namespace

auto sgns_pair_loss_grad(std::span<const double> w, std::span<const double> c, PairLabel label) -> PairLossGrad
{
	if (w.size() != c.size()) {
		throw ShapeError("sgns_pair_loss_grad: dimension mismatch (" + std::to_string(w.size()) + " vs " +
			std::to_string(c.size()) + ")");
	}
	const auto [loss, dscore] = term(dot(w, c), label);
	return {loss, scaled(c, dscore), scaled(w, dscore)};
}

auto subword_pair_loss_grad(std::span<const double> word, std::span<const std::vector<double>> ngrams,
	std::span<const double> c, PairLabel label) -> SubwordPairLossGrad
{
	if (word.size() != c.size()) {
		throw ShapeError("subword_pair_loss_grad: dimension mismatch");
	}
	std::vector<double> h(word.begin(), word.end());
	for (const auto &g : ngrams) {
		if (g.size() != h.size()) {
			throw ShapeError("subword_pair_loss_grad: n-gram dimension mismatch");
		}
		for (std::size_t i = 0; i < h.size(); ++i) {
			h[i] += g[i];
		}
	}
	const auto [loss, dscore] = term(dot(h, c), label);
	SubwordPairLossGrad out;
	out.loss = loss;
	out.grad_word = scaled(c, dscore);
	out.grad_ngrams.assign(ngrams.size(), out.grad_word);
	out.grad_c = scaled(h, dscore);
	return out;
}

} // namespace freqlens
