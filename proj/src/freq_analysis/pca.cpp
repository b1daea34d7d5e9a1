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
#include <cmath>

namespace freqlens {

namespace {

/// Unit vector orthogonal to the first `k` rows of `basis`.
auto orthogonal_unit(const Eigen::MatrixXd &basis, int k, Eigen::Index dim) -> Eigen::VectorXd
{
	for (Eigen::Index e = 0; e < dim; ++e) {
		Eigen::VectorXd v = Eigen::VectorXd::Unit(dim, e);
		for (int p = 0; p < k; ++p) {
			v -= basis.row(p).dot(v) * basis.row(p).transpose();
		}
		if (v.norm() > 0.5) {
			return v.normalized();
		}
	}
	throw RangeError("no direction left orthogonal to the previous components");
}

void fix_sign(Eigen::Ref<Eigen::VectorXd> v)
{
	Eigen::Index arg = 0;
	v.cwiseAbs().maxCoeff(&arg);
	if (v[arg] < 0.0) {
		v = -v;
	}
}

} // namespace

auto fit_pca(const Eigen::MatrixXd &samples, int k, double tolerance, int max_iterations) -> PcaFit
{
	const auto n = samples.rows();
	const auto dim = samples.cols();
	if (n < 3) {
		throw InsufficientDataError("PCA needs at least 3 samples, got " + std::to_string(n));
	}
	if (k < 1 || k > dim) {
		throw RangeError("PCA component count must lie in [1, " + std::to_string(dim) + "]");
	}

	const Eigen::RowVectorXd center = samples.colwise().mean();
	const Eigen::MatrixXd centered = samples.rowwise() - center;
	Eigen::MatrixXd a = (centered.transpose() * centered) / static_cast<double>(n - 1);
	const double scale = std::max(a.cwiseAbs().maxCoeff(), 1e-300);

	PcaFit fit;
	fit.components.resize(k, dim);
	fit.explained_variance.resize(k);
	for (int c = 0; c < k; ++c) {
		auto orthogonalize = [&](Eigen::VectorXd &v) {
			for (int p = 0; p < c; ++p) {
				v -= fit.components.row(p).dot(v) * fit.components.row(p).transpose();
			}
		};

		Eigen::Index start = 0;
		a.colwise().norm().maxCoeff(&start);
		Eigen::VectorXd v = a.col(start);
		orthogonalize(v);
		if (v.norm() <= 1e-13 * scale) {
			v = orthogonal_unit(fit.components, c, dim);
		}
		else {
			v.normalize();
		}

		int iter = 0;
		for (; iter < max_iterations; ++iter) {
			Eigen::VectorXd w = a * v;
			orthogonalize(w);
			const double norm = w.norm();
			if (norm <= 1e-13 * scale) {
				// v lies in the null space of what remains.
				break;
			}
			w /= norm;
			const double change = (w - v).norm();
			v = std::move(w);
			if (change < tolerance) {
				++iter;
				break;
			}
		}
		fix_sign(v);
		const double lambda = v.dot(a * v);
		fit.components.row(c) = v.transpose();
		fit.explained_variance[c] = std::max(lambda, 0.0);
		fit.iterations.push_back(iter);
		a -= lambda * v * v.transpose();
	}
	fit.projections = centered * fit.components.transpose();
	return fit;
}

auto pca_stratified(const EmbeddingSet &set, const FrequencyBinning &binning, std::size_t words_per_bin,
	std::uint64_t seed) -> PcaResult
{
	if (binning.bin_of.size() != set.size()) {
		throw ShapeError("binning and embedding set cover different vocabularies");
	}
	Rng rng(seed);
	std::vector<TokenId> chosen;
	std::vector<std::size_t> chosen_bin;
	for (std::size_t b = 0; b < binning.bins.size(); ++b) {
		auto members = binning.members[b];
		rng.shuffle(std::span<TokenId>(members));
		members.resize(std::min(words_per_bin, members.size()));
		std::sort(members.begin(), members.end());
		for (auto id : members) {
			chosen.push_back(id);
			chosen_bin.push_back(b);
		}
	}
	if (chosen.size() < 3) {
		throw InsufficientDataError("PCA needs at least 3 sampled words, got " + std::to_string(chosen.size()));
	}

	Eigen::MatrixXd x(static_cast<Eigen::Index>(chosen.size()), static_cast<Eigen::Index>(set.dim()));
	for (std::size_t r = 0; r < chosen.size(); ++r) {
		const auto row = set.w().row(chosen[r]);
		double ss = 0.0;
		for (float f : row) {
			ss += static_cast<double>(f) * static_cast<double>(f);
		}
		if (ss == 0.0) {
			throw UndefinedSimilarityError("cannot normalize the zero vector of '" + set.vocab().word(chosen[r]) + "'");
		}
		const double inv = 1.0 / std::sqrt(ss);
		for (std::size_t d = 0; d < row.size(); ++d) {
			x(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(d)) = static_cast<double>(row[d]) * inv;
		}
	}

	const auto fit = fit_pca(x, 2);
	PcaResult out;
	out.explained_variance = {fit.explained_variance[0], fit.explained_variance[1]};
	std::vector<double> sum1(binning.bins.size(), 0.0), sum2(binning.bins.size(), 0.0);
	std::vector<std::size_t> count(binning.bins.size(), 0);
	for (std::size_t r = 0; r < chosen.size(); ++r) {
		const auto ri = static_cast<Eigen::Index>(r);
		PcaPoint p{chosen[r], binning.bins[chosen_bin[r]], fit.projections(ri, 0), fit.projections(ri, 1)};
		sum1[chosen_bin[r]] += p.pc1;
		sum2[chosen_bin[r]] += p.pc2;
		++count[chosen_bin[r]];
		out.points.push_back(p);
	}
	for (std::size_t b = 0; b < binning.bins.size(); ++b) {
		if (count[b] > 0) {
			const auto n = static_cast<double>(count[b]);
			out.centroids.push_back({binning.bins[b], sum1[b] / n, sum2[b] / n});
		}
	}
	return out;
}

} // namespace freqlens
