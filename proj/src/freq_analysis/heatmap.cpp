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
#include "freqlens/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace freqlens {

namespace {

constexpr double nan = std::numeric_limits<double>::quiet_NaN();

auto mean_of(std::span<const double> v) -> double
{
	if (v.empty()) {
		return nan;
	}
	return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

auto rmse_of(std::span<const double> means) -> double
{
	double sum = 0.0;
	std::size_t n = 0;
	for (double m : means) {
		if (!std::isnan(m)) {
			sum += m;
			++n;
		}
	}
	if (n == 0) {
		throw InsufficientDataError("RMSE needs at least one occupied heatmap cell");
	}
	const double grand = sum / static_cast<double>(n);
	double ss = 0.0;
	for (double m : means) {
		if (!std::isnan(m)) {
			ss += (m - grand) * (m - grand);
		}
	}
	return std::sqrt(ss / static_cast<double>(n));
}

} // namespace

Heatmap::Heatmap(std::vector<int> bins, Metric metric, std::vector<HeatmapCell> cells)
	: bins_(std::move(bins)), metric_(metric), cells_(std::move(cells))
{
	const auto n = bins_.size();
	if (cells_.size() != n * (n + 1) / 2) {
		throw ShapeError("heatmap over " + std::to_string(n) + " bins needs " + std::to_string(n * (n + 1) / 2) +
			" cells, got " + std::to_string(cells_.size()));
	}
	std::size_t k = 0;
	double sum = 0.0;
	std::size_t occupied = 0;
	for (std::size_t i = 0; i < n; ++i) {
		for (std::size_t j = i; j < n; ++j, ++k) {
			auto &c = cells_[k];
			if (c.row != i || c.col != j) {
				throw ShapeError("heatmap cells out of order");
			}
			c.mean = mean_of(c.values);
			if (!c.values.empty()) {
				sum += c.mean;
				++occupied;
			}
		}
	}
	grand_mean_ = occupied > 0 ? sum / static_cast<double>(occupied) : nan;
}

auto Heatmap::cell(std::size_t i, std::size_t j) const -> const HeatmapCell &
{
	if (i >= size() || j >= size()) {
		throw RangeError("heatmap cell index out of range");
	}
	if (i > j) {
		std::swap(i, j);
	}
	// Cells before row i: i * n - i * (i - 1) / 2.
	const auto n = size();
	return cells_[i * n - i * (i - 1) / 2 + (j - i)];
}

auto Heatmap::occupied_cells() const -> std::size_t
{
	return static_cast<std::size_t>(
		std::count_if(cells_.begin(), cells_.end(), [](const HeatmapCell &c) { return !c.values.empty(); }));
}

auto heatmap(const EmbeddingSet &set, const PairSample &sample, Metric metric) -> Heatmap
{
	std::vector<HeatmapCell> cells;
	cells.reserve(sample.cells.size());
	const auto &w = set.w();
	for (const auto &pc : sample.cells) {
		HeatmapCell cell;
		cell.row = pc.row;
		cell.col = pc.col;
		cell.shortfall = pc.shortfall;
		cell.values.reserve(pc.pairs.size());
		for (const auto &[u, v] : pc.pairs) {
			if (u >= set.size() || v >= set.size()) {
				throw RangeError("pair refers to word ID outside the embedding set");
			}
			try {
				cell.values.push_back(similarity(w.row(u), w.row(v), metric));
			}
			catch (const UndefinedSimilarityError &) {
				const auto zero = std::all_of(w.row(u).begin(), w.row(u).end(), [](float x) { return x == 0.0f; })
					? u
					: v;
				throw UndefinedSimilarityError("cosine similarity undefined: '" + set.vocab().word(zero) +
					"' has a zero vector");
			}
		}
		cells.push_back(std::move(cell));
	}
	return Heatmap(sample.bins, metric, std::move(cells));
}

auto rmse(const Heatmap &heatmap) -> double
{
	std::vector<double> means;
	means.reserve(heatmap.cells().size());
	for (const auto &c : heatmap.cells()) {
		means.push_back(c.mean);
	}
	return rmse_of(means);
}

auto permutation_baseline(const Heatmap &heatmap, std::size_t n_permutations, std::uint64_t seed)
	-> std::vector<double>
{
	std::vector<double> pool;
	for (const auto &c : heatmap.cells()) {
		pool.insert(pool.end(), c.values.begin(), c.values.end());
	}
	if (pool.empty()) {
		throw InsufficientDataError("permutation baseline needs at least one pair value");
	}
	Rng rng(seed);
	std::vector<double> out;
	out.reserve(n_permutations);
	std::vector<double> means(heatmap.cells().size());
	for (std::size_t r = 0; r < n_permutations; ++r) {
		rng.shuffle(std::span<double>(pool));
		std::size_t pos = 0;
		for (std::size_t k = 0; k < means.size(); ++k) {
			const auto n = heatmap.cells()[k].values.size();
			means[k] = mean_of(std::span<const double>(pool).subspan(pos, n));
			pos += n;
		}
		out.push_back(rmse_of(means));
	}
	return out;
}

auto summarize(const RmseResult &r) -> RmseRow
{
	RmseRow row;
	row.setting_id = r.setting_id;
	row.metric = r.metric;
	row.rmse_actual = r.rmse_actual;
	row.n_perm = r.rmse_baseline.size();
	if (r.rmse_baseline.empty()) {
		row.baseline_q50 = row.baseline_q99 = row.baseline_max = nan;
	}
	else {
		row.baseline_q50 = stats::quantile(r.rmse_baseline, 0.5);
		row.baseline_q99 = stats::quantile(r.rmse_baseline, 0.99);
		row.baseline_max = *std::max_element(r.rmse_baseline.begin(), r.rmse_baseline.end());
	}
	return row;
}

} // namespace freqlens
