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


#include "freqlens/stats.hpp"
#include "freqlens/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

namespace freqlens::stats {

namespace {

auto beta_continued_fraction(double a, double b, double x) -> double
{
	constexpr int max_iter = 1000;
	constexpr double eps = 1e-16;
	constexpr double tiny = 1e-300;

	const double qab = a + b;
	const double qap = a + 1.0;
	const double qam = a - 1.0;
	double c = 1.0;
	double d = 1.0 - qab * x / qap;
	if (std::abs(d) < tiny) {
		d = tiny;
	}
	d = 1.0 / d;
	double h = d;
	for (int m = 1; m <= max_iter; ++m) {
		const double m2 = 2.0 * m;
		double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
		d = 1.0 + aa * d;
		if (std::abs(d) < tiny) {
			d = tiny;
		}
		c = 1.0 + aa / c;
		if (std::abs(c) < tiny) {
			c = tiny;
		}
		d = 1.0 / d;
		h *= d * c;
		aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
		d = 1.0 + aa * d;
		if (std::abs(d) < tiny) {
			d = tiny;
		}
		c = 1.0 + aa / c;
		if (std::abs(c) < tiny) {
			c = tiny;
		}
		d = 1.0 / d;
		const double del = d * c;
		h *= del;
		if (std::abs(del - 1.0) < eps) {
			break;
		}
	}
	return h;
}

auto ranks(std::span<const double> v) -> std::vector<double>
{
	std::vector<std::size_t> idx(v.size());
	std::iota(idx.begin(), idx.end(), 0);
	std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
	std::vector<double> r(v.size());
	for (std::size_t i = 0; i < idx.size();) {
		auto j = i;
		while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) {
			++j;
		}
		const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
		for (auto k = i; k <= j; ++k) {
			r[idx[k]] = avg;
		}
		i = j + 1;
	}
	return r;
}

} // namespace

auto incomplete_beta(double a, double b, double x) -> double
{
	if (!(a > 0.0) || !(b > 0.0)) {
		throw RangeError("incomplete_beta: shape parameters must be positive");
	}
	if (!(x >= 0.0 && x <= 1.0)) {
		throw RangeError("incomplete_beta: x must lie in [0, 1]");
	}
	if (x == 0.0 || x == 1.0) {
		return x;
	}
	const double log_front =
		std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log1p(-x);
	const double front = std::exp(log_front);
	// The continued fraction converges fast only below the mean; use the
	// symmetry I_x(a, b) = 1 - I_{1-x}(b, a) above it.
	if (x < (a + 1.0) / (a + b + 2.0)) {
		return front * beta_continued_fraction(a, b, x) / a;
	}
	return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

auto student_t_two_sided_p(double t, double df) -> double
{
	if (!(df > 0.0)) {
		throw RangeError("student_t: degrees of freedom must be positive");
	}
	if (std::isnan(t)) {
		return std::numeric_limits<double>::quiet_NaN();
	}
	if (std::isinf(t)) {
		return 0.0;
	}
	const double x = df / (df + t * t);
	return std::clamp(incomplete_beta(0.5 * df, 0.5, x), 0.0, 1.0);
}

auto student_t_cdf(double t, double df) -> double
{
	const double tail = 0.5 * student_t_two_sided_p(t, df);
	return t < 0.0 ? tail : 1.0 - tail;
}

auto mean(std::span<const double> values) -> double
{
	if (values.empty()) {
		throw InsufficientDataError("mean of an empty sample");
	}
	return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

auto quantile(std::span<const double> values, double q) -> double
{
	if (values.empty()) {
		throw InsufficientDataError("quantile of an empty sample");
	}
	if (!(q >= 0.0 && q <= 1.0)) {
		throw RangeError("quantile level must lie in [0, 1]");
	}
	std::vector<double> s(values.begin(), values.end());
	std::sort(s.begin(), s.end());
	const double h = q * static_cast<double>(s.size() - 1);
	const auto lo = static_cast<std::size_t>(std::floor(h));
	const auto hi = std::min(lo + 1, s.size() - 1);
	return s[lo] + (h - static_cast<double>(lo)) * (s[hi] - s[lo]);
}

auto spearman(std::span<const double> x, std::span<const double> y) -> double
{
	if (x.size() != y.size()) {
		throw ShapeError("spearman: samples differ in length");
	}
	if (x.size() < 2) {
		throw InsufficientDataError("spearman needs at least two points");
	}
	const auto rx = ranks(x);
	const auto ry = ranks(y);
	const double mx = mean(rx);
	const double my = mean(ry);
	double sxy = 0.0, sxx = 0.0, syy = 0.0;
	for (std::size_t i = 0; i < rx.size(); ++i) {
		sxy += (rx[i] - mx) * (ry[i] - my);
		sxx += (rx[i] - mx) * (rx[i] - mx);
		syy += (ry[i] - my) * (ry[i] - my);
	}
	if (sxx == 0.0 || syy == 0.0) {
		return std::numeric_limits<double>::quiet_NaN();
	}
	return sxy / std::sqrt(sxx * syy);
}

} // namespace freqlens::stats
