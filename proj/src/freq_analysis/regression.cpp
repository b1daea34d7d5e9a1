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


#include "freqlens/csv.hpp"
#include "freqlens/error.hpp"
#include "freqlens/freq_analysis.hpp"
#include "freqlens/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <functional>
#include <set>

namespace freqlens {

auto ols(const Eigen::MatrixXd &x, const Eigen::VectorXd &y, std::vector<std::string> terms) -> RegressionResult
{
	const auto n = x.rows();
	const auto k = x.cols();
	if (y.size() != n) {
		throw ShapeError("ols: design has " + std::to_string(n) + " rows but response has " +
			std::to_string(y.size()));
	}
	if (terms.empty()) {
		for (Eigen::Index j = 0; j < k; ++j) {
			terms.push_back("x" + std::to_string(j));
		}
	}
	if (static_cast<Eigen::Index>(terms.size()) != k) {
		throw ShapeError("ols: term count differs from design width");
	}
	if (k == 0 || n < k) {
		throw SingularDesignError("ols: design with " + std::to_string(n) + " rows and " + std::to_string(k) +
			" columns cannot have full column rank");
	}
	const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
	if (qr.rank() < k) {
		throw SingularDesignError("ols: design matrix has rank " + std::to_string(qr.rank()) + " < " +
			std::to_string(k) + " columns");
	}
	if (n == k) {
		throw InsufficientDataError("ols: standard errors need more observations than columns");
	}

	const Eigen::VectorXd beta = qr.solve(y);
	const Eigen::VectorXd resid = y - x * beta;
	const double rss = resid.squaredNorm();
	const double df = static_cast<double>(n - k);
	const double s2 = rss / df;

	// (X'X)^-1 = P R^-1 R^-T P' for X P = Q R.
	const Eigen::MatrixXd r = qr.matrixR().topLeftCorner(k, k).triangularView<Eigen::Upper>();
	const Eigen::MatrixXd r_inv =
		r.triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(k, k));
	const Eigen::MatrixXd unscaled = qr.colsPermutation() * (r_inv * r_inv.transpose()) *
		qr.colsPermutation().transpose();

	RegressionResult out;
	out.terms = std::move(terms);
	out.n_observations = static_cast<std::size_t>(n);
	for (Eigen::Index j = 0; j < k; ++j) {
		const double coef = beta[j];
		const double se = std::sqrt(std::max(s2 * unscaled(j, j), 0.0));
		double t = 0.0;
		double p = 1.0;
		if (se > 0.0) {
			t = coef / se;
			p = stats::student_t_two_sided_p(t, df);
		}
		else if (coef != 0.0) {
			t = std::copysign(std::numeric_limits<double>::infinity(), coef);
			p = 0.0;
		}
		out.coef.push_back(coef);
		out.se.push_back(se);
		out.t.push_back(t);
		out.p.push_back(p);
	}
	const double tss = (y.array() - y.mean()).square().sum();
	if (tss > 0.0) {
		out.r_squared = std::clamp(1.0 - rss / tss, 0.0, 1.0);
	}
	else {
		out.r_squared = 1.0;
	}
	return out;
}

namespace {

template <typename T>
auto levels(std::span<const Hyperparams> settings, T Hyperparams::*field, T reference) -> std::vector<T>
{
	std::set<T> seen;
	for (const auto &s : settings) {
		if (s.*field != reference) {
			seen.insert(s.*field);
		}
	}
	return {seen.begin(), seen.end()};
}

} // namespace

auto hyperparameter_design(std::span<const Hyperparams> settings) -> Design
{
	if (settings.empty()) {
		throw InsufficientDataError("design needs at least one setting");
	}
	const bool has_negatives = std::none_of(
		settings.begin(), settings.end(), [](const Hyperparams &h) { return h.method == Method::glove; });

	std::vector<std::string> terms{"(Intercept)"};
	std::vector<std::function<double(const Hyperparams &)>> columns{[](const Hyperparams &) { return 1.0; }};

	for (int w : levels(settings, &Hyperparams::window, 2)) {
		terms.push_back("win=" + std::to_string(w));
		columns.emplace_back([w](const Hyperparams &h) { return h.window == w ? 1.0 : 0.0; });
	}
	if (!levels(settings, &Hyperparams::add_context, false).empty()) {
		terms.push_back("w+c=yes");
		columns.emplace_back([](const Hyperparams &h) { return h.add_context ? 1.0 : 0.0; });
	}
	if (has_negatives) {
		for (int neg : levels(settings, &Hyperparams::negatives, 1)) {
			terms.push_back("neg=" + std::to_string(neg));
			columns.emplace_back([neg](const Hyperparams &h) { return h.negatives == neg ? 1.0 : 0.0; });
		}
		for (double cds : levels(settings, &Hyperparams::cds_exponent, 0.75)) {
			terms.push_back("cds=" + csv::format_number(cds));
			columns.emplace_back([cds](const Hyperparams &h) { return h.cds_exponent == cds ? 1.0 : 0.0; });
		}
	}
	std::set<Method> methods;
	for (const auto &s : settings) {
		methods.insert(s.method);
	}
	for (auto it = std::next(methods.begin()); it != methods.end(); ++it) {
		const Method m = *it;
		terms.push_back("method=" + std::string(method_name(m)));
		columns.emplace_back([m](const Hyperparams &h) { return h.method == m ? 1.0 : 0.0; });
	}

	Design d;
	d.terms = std::move(terms);
	d.x.resize(static_cast<Eigen::Index>(settings.size()), static_cast<Eigen::Index>(columns.size()));
	for (std::size_t i = 0; i < settings.size(); ++i) {
		for (std::size_t j = 0; j < columns.size(); ++j) {
			d.x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = columns[j](settings[i]);
		}
	}
	return d;
}

auto regress_rmse(std::span<const RmseRow> rows, Metric metric) -> RegressionResult
{
	std::vector<Hyperparams> settings;
	std::vector<double> response;
	for (const auto &r : rows) {
		if (r.metric == metric) {
			settings.push_back(parse_setting_id(r.setting_id));
			response.push_back(r.rmse_actual);
		}
	}
	if (settings.empty()) {
		throw InsufficientDataError("no RMSE rows for metric " + std::string(metric_name(metric)));
	}
	auto design = hyperparameter_design(settings);
	const Eigen::VectorXd y = Eigen::Map<const Eigen::VectorXd>(response.data(), static_cast<Eigen::Index>(response.size()));
	return ols(design.x, y, std::move(design.terms));
}

} // namespace freqlens
