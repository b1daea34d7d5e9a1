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

#include <span>

namespace freqlens::stats {

/// I_x(a, b) by Lentz's continued fraction. Throws RangeError for
/// a <= 0, b <= 0 or x outside [0, 1].
auto incomplete_beta(double a, double b, double x) -> double;

/// P(T <= t) for Student's t with `df` > 0 degrees of freedom.
auto student_t_cdf(double t, double df) -> double;

/// P(|T| >= |t|).
auto student_t_two_sided_p(double t, double df) -> double;

auto mean(std::span<const double> values) -> double;

/// Linear interpolation between order statistics (Hyndman-Fan type 7).
/// Throws InsufficientDataError on empty input and RangeError for q outside [0, 1].
auto quantile(std::span<const double> values, double q) -> double;

/// Pearson correlation of average ranks. Throws ShapeError on unequal
/// lengths and InsufficientDataError for fewer than two points; returns NaN
/// when either side is constant.
auto spearman(std::span<const double> x, std::span<const double> y) -> double;

} // namespace freqlens::stats
