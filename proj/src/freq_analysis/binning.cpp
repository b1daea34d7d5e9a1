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
#include "freqlens/freq_analysis.hpp"
#include "freqlens/rng.hpp"

#include <algorithm>
#include <set>

namespace freqlens {

auto frequency_bin(std::uint64_t count) -> int
{
	if (count == 0) {
		throw RangeError("frequency bin of a zero count is undefined");
	}
	int bin = 0;
	while (count >= 10) {
		count /= 10;
		++bin;
	}
	return bin;
}

auto FrequencyBinning::position(int bin) const -> std::optional<std::size_t>
{
	auto it = std::lower_bound(bins.begin(), bins.end(), bin);
	if (it == bins.end() || *it != bin) {
		return std::nullopt;
	}
	return static_cast<std::size_t>(it - bins.begin());
}

auto assign_bins(const Vocabulary &vocab) -> FrequencyBinning
{
	if (vocab.empty()) {
		throw ConfigError("cannot bin an empty vocabulary");
	}
	FrequencyBinning out;
	out.bin_of.resize(vocab.size());
	for (TokenId i = 0; i < vocab.size(); ++i) {
		if (vocab.count(i) == 0) {
			throw ConfigError("word '" + vocab.word(i) + "' has count 0; load the vocabulary counts first");
		}
		out.bin_of[i] = frequency_bin(vocab.count(i));
	}
	out.bins = out.bin_of;
	std::sort(out.bins.begin(), out.bins.end());
	out.bins.erase(std::unique(out.bins.begin(), out.bins.end()), out.bins.end());
	out.members.resize(out.bins.size());
	for (TokenId i = 0; i < vocab.size(); ++i) {
		out.members[*out.position(out.bin_of[i])].push_back(i);
	}
	return out;
}

namespace {

/// k distinct values from [0, n), ascending (Floyd's algorithm).
auto sample_indices(std::uint64_t n, std::uint64_t k, Rng &rng) -> std::vector<std::uint64_t>
{
	std::vector<std::uint64_t> out;
	if (k >= n) {
		out.resize(n);
		for (std::uint64_t i = 0; i < n; ++i) {
			out[i] = i;
		}
		return out;
	}
	std::set<std::uint64_t> chosen;
	for (auto j = n - k; j < n; ++j) {
		const auto t = rng.below(j + 1);
		if (!chosen.insert(t).second) {
			chosen.insert(j);
		}
	}
	return {chosen.begin(), chosen.end()};
}

/// Unordered pair number t among n items, in row-major upper-triangle order.
auto triangle_pair(std::uint64_t t, std::uint64_t n) -> std::pair<std::uint64_t, std::uint64_t>
{
	auto before = [n](std::uint64_t a) { return a * (2 * n - a - 1) / 2; };
	std::uint64_t lo = 0, hi = n - 1;
	while (lo + 1 < hi) {
		const auto mid = (lo + hi) / 2;
		if (before(mid) <= t) {
			lo = mid;
		}
		else {
			hi = mid;
		}
	}
	return {lo, lo + 1 + (t - before(lo))};
}

} // namespace

auto sample_pairs(const FrequencyBinning &binning, std::size_t n_per_cell, std::uint64_t seed) -> PairSample
{
	if (binning.bins.empty()) {
		throw ConfigError("cannot sample pairs from an empty binning");
	}
	PairSample out;
	out.bins = binning.bins;
	out.n_per_cell = n_per_cell;
	Rng rng(seed);
	const auto nb = binning.bins.size();
	for (std::size_t r = 0; r < nb; ++r) {
		for (std::size_t c = r; c < nb; ++c) {
			const auto &mr = binning.members[r];
			const auto &mc = binning.members[c];
			const std::uint64_t total = r == c ? mr.size() * (mr.size() - 1) / 2 : mr.size() * mc.size();
			PairCell cell;
			cell.row = r;
			cell.col = c;
			cell.shortfall = total < n_per_cell;
			for (auto t : sample_indices(total, n_per_cell, rng)) {
				if (r == c) {
					const auto [a, b] = triangle_pair(t, mr.size());
					cell.pairs.emplace_back(mr[a], mr[b]);
				}
				else {
					cell.pairs.emplace_back(mr[t / mc.size()], mc[t % mc.size()]);
				}
			}
			out.cells.push_back(std::move(cell));
		}
	}
	return out;
}

} // namespace freqlens
