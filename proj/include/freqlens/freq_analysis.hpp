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

#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace freqlens {

/// floor(log10(count)) by integer arithmetic. Throws RangeError for 0.
auto frequency_bin(std::uint64_t count) -> int;

/// Words grouped by frequency bin. `bins` lists the occupied bins in
/// ascending order; `members[k]` holds the IDs in bin `bins[k]`.
struct FrequencyBinning {
	std::vector<int> bin_of;
	std::vector<int> bins;
	std::vector<std::vector<TokenId>> members;

	/// Position of `bin` in `bins`, if occupied.
	auto position(int bin) const -> std::optional<std::size_t>;
};

/// Throws ConfigError on an empty vocabulary or a zero count (restored
/// embeddings need their counts attached first).
auto assign_bins(const Vocabulary &vocab) -> FrequencyBinning;

/// Sampled pairs for one cell. `row` and `col` index FrequencyBinning::bins,
/// row <= col.
struct PairCell {
	std::size_t row = 0;
	std::size_t col = 0;
	std::vector<std::pair<TokenId, TokenId>> pairs;
	/// Fewer distinct pairs existed than were requested.
	bool shortfall = false;
};

struct PairSample {
	std::vector<int> bins;
	std::size_t n_per_cell = 0;
	/// Cells (0,0), (0,1), ..., (0,n-1), (1,1), ..., (n-1,n-1).
	std::vector<PairCell> cells;
};

/// Up to n_per_cell distinct pairs per cell, drawn uniformly without
/// replacement. Within a bin, pairs are unordered and never repeat a word.
auto sample_pairs(const FrequencyBinning &binning, std::size_t n_per_cell = 500, std::uint64_t seed = 0)
	-> PairSample;

struct HeatmapCell {
	std::size_t row = 0;
	std::size_t col = 0;
	std::vector<double> values;
	bool shortfall = false;
	/// NaN when the cell has no pairs.
	double mean = 0.0;
};

/// Mean similarity per pair of frequency bins. Only cells row <= col are
/// stored; lookups mirror.
class Heatmap {
public:
	/// Cells must cover each row <= col exactly once, in PairSample order.
	/// Means and the grand mean are computed here.
	Heatmap(std::vector<int> bins, Metric metric, std::vector<HeatmapCell> cells);

	auto bins() const -> const std::vector<int> &
	{
		return bins_;
	}
	auto size() const -> std::size_t
	{
		return bins_.size();
	}
	auto metric() const -> Metric
	{
		return metric_;
	}
	auto cells() const -> const std::vector<HeatmapCell> &
	{
		return cells_;
	}
	auto cell(std::size_t i, std::size_t j) const -> const HeatmapCell &;
	auto mean(std::size_t i, std::size_t j) const -> double
	{
		return cell(i, j).mean;
	}
	/// Unweighted mean of the occupied cell means (each unordered cell once).
	auto grand_mean() const -> double
	{
		return grand_mean_;
	}
	auto occupied_cells() const -> std::size_t;

private:
	std::vector<int> bins_;
	Metric metric_;
	std::vector<HeatmapCell> cells_;
	double grand_mean_ = 0.0;
};

/// Similarities of the sampled pairs over W rows. Throws
/// UndefinedSimilarityError naming the word for a zero row under cosine.
auto heatmap(const EmbeddingSet &set, const PairSample &sample, Metric metric) -> Heatmap;

/// Root mean squared deviation of the occupied cell means from the grand
/// mean. Throws InsufficientDataError with no occupied cell.
auto rmse(const Heatmap &heatmap) -> double;

/// RMSE after pooling all pair values, permuting them and refilling each cell
/// with its original pair count; one value per replicate.
auto permutation_baseline(const Heatmap &heatmap, std::size_t n_permutations = 200, std::uint64_t seed = 0)
	-> std::vector<double>;

struct RmseResult {
	std::string setting_id;
	Metric metric = Metric::cosine;
	double rmse_actual = 0.0;
	std::vector<double> rmse_baseline;
};

/// Baseline median, 99th percentile and maximum as stored in RMSE CSV rows.
struct RmseRow {
	std::string setting_id;
	Metric metric = Metric::cosine;
	double rmse_actual = 0.0;
	double baseline_q50 = 0.0;
	double baseline_q99 = 0.0;
	double baseline_max = 0.0;
	std::size_t n_perm = 0;
};

auto summarize(const RmseResult &r) -> RmseRow;

struct PcaFit {
	/// Unit-length components, one per row.
	Eigen::MatrixXd components;
	/// Variance along each component, descending.
	Eigen::VectorXd explained_variance;
	/// Centered samples projected on the components, one row per sample.
	Eigen::MatrixXd projections;
	/// Power iterations used per component.
	std::vector<int> iterations;
};

/// Principal components of the rows of `samples` from the sample covariance
/// (n - 1 denominator), by power iteration with deflation. Each component's
/// largest-magnitude coordinate is positive. Throws InsufficientDataError for
/// fewer than 3 rows and RangeError when k exceeds the dimension.
auto fit_pca(const Eigen::MatrixXd &samples, int k = 2, double tolerance = 1e-10, int max_iterations = 10'000)
	-> PcaFit;

struct PcaPoint {
	TokenId word = 0;
	int bin = 0;
	double pc1 = 0.0;
	double pc2 = 0.0;
};

struct PcaCentroid {
	int bin = 0;
	double pc1 = 0.0;
	double pc2 = 0.0;
};

struct PcaResult {
	std::vector<PcaPoint> points;
	std::vector<PcaCentroid> centroids;
	std::array<double, 2> explained_variance{};
};

/// Samples up to words_per_bin words per bin, normalizes them to unit length
/// and projects them on the top two components of the sample. Throws
/// InsufficientDataError for fewer than 3 sampled words and
/// UndefinedSimilarityError naming a sampled word with a zero vector.
auto pca_stratified(const EmbeddingSet &set, const FrequencyBinning &binning, std::size_t words_per_bin = 100,
	std::uint64_t seed = 0) -> PcaResult;

struct RegressionResult {
	std::vector<std::string> terms;
	std::vector<double> coef;
	std::vector<double> se;
	std::vector<double> t;
	std::vector<double> p;
	std::size_t n_observations = 0;
	double r_squared = 0.0;
};

/// Least squares by column-pivoted QR, with standard errors from
/// s^2 (X'X)^-1 and two-sided t-test p-values on n - k degrees of freedom.
/// Throws SingularDesignError when X lacks full column rank and
/// InsufficientDataError when n <= k.
auto ols(const Eigen::MatrixXd &x, const Eigen::VectorXd &y, std::vector<std::string> terms = {})
	-> RegressionResult;

struct Design {
	Eigen::MatrixXd x;
	std::vector<std::string> terms;
};

/// Intercept plus dummy columns against the reference levels win=2,
/// w+c=no, neg=1, cds=0.75 (and method=sgns when methods are mixed). Levels
/// absent from the data get no column; neg and cds enter only when every
/// setting has them.
auto hyperparameter_design(std::span<const Hyperparams> settings) -> Design;

/// Regression of rmse_actual on the hyperparameters encoded in the setting
/// IDs of the rows measured with `metric`.
auto regress_rmse(std::span<const RmseRow> rows, Metric metric) -> RegressionResult;

void write_heatmap_csv(std::ostream &out, const Heatmap &heatmap);
void write_rmse_csv(std::ostream &out, std::span<const RmseRow> rows);
auto read_rmse_csv(std::istream &in) -> std::vector<RmseRow>;
void write_pca_csv(std::ostream &out, const PcaResult &result, const Vocabulary &vocab);
void write_regression_csv(std::ostream &out, const RegressionResult &result);

} // namespace freqlens
