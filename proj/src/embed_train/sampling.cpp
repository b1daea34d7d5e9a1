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
#include "freqlens/train.hpp"

#include <cmath>
#include <numeric>

namespace freqlens {

AliasSampler::AliasSampler(std::span<const double> weights)
{
	const auto n = weights.size();
	if (n == 0) {
		throw ConfigError("alias sampler needs at least one weight");
	}
	const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
	if (!(total > 0.0)) {
		throw ConfigError("alias sampler weights must have a positive sum");
	}

	prob_.resize(n);
	alias_.resize(n);
	std::vector<double> scaled(n);
	std::vector<std::uint32_t> small, large;
	for (std::size_t i = 0; i < n; ++i) {
		if (weights[i] < 0.0) {
			throw ConfigError("alias sampler weights must be non-negative");
		}
		scaled[i] = weights[i] * static_cast<double>(n) / total;
		(scaled[i] < 1.0 ? small : large).push_back(static_cast<std::uint32_t>(i));
	}
	while (!small.empty() && !large.empty()) {
		const auto s = small.back();
		small.pop_back();
		const auto l = large.back();
		prob_[s] = scaled[s];
		alias_[s] = l;
		scaled[l] = (scaled[l] + scaled[s]) - 1.0;
		if (scaled[l] < 1.0) {
			large.pop_back();
			small.push_back(l);
		}
	}
	// Leftovers are 1 up to rounding.
	for (auto i : large) {
		prob_[i] = 1.0;
		alias_[i] = i;
	}
	for (auto i : small) {
		prob_[i] = 1.0;
		alias_[i] = i;
	}
}

auto noise_weights(const Vocabulary &vocab, double cds_exponent) -> std::vector<double>
{
	std::vector<double> w(vocab.size());
	for (TokenId i = 0; i < vocab.size(); ++i) {
		w[i] = std::pow(static_cast<double>(vocab.count(i)), cds_exponent);
	}
	return w;
}

} // namespace freqlens
