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

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace freqlens {

enum class Method { sgns, glove, fasttext };

auto method_name(Method m) -> std::string_view;
/// Throws ConfigError for unknown names.
auto parse_method(std::string_view name) -> Method;

/// Training configuration. Desk-scale defaults; `defaults(Method)` fills
/// the per-method optimizer settings.
struct Hyperparams {
	Method method = Method::sgns;
	int dim = 50;
	int window = 10;
	bool add_context = false;
	int negatives = 5;
	double cds_exponent = 0.75;
	int epochs = 5;
	std::uint64_t seed = 1;
	double learning_rate = 0.025;
	double min_learning_rate = 1e-4;
	std::uint64_t min_count = 10;

	// SGNS / FastText
	double subsample = 1e-3; // 0 disables frequent-word subsampling
	bool dynamic_window = true;

	// FastText
	int ngram_min = 3;
	int ngram_max = 6;
	std::uint32_t buckets = 100'000;

	// GloVe
	double x_max = 100.0;
	double alpha = 0.75;

	static auto defaults(Method m) -> Hyperparams;

	/// Throws RangeError naming the offending field.
	void validate() const;

	auto operator==(const Hyperparams &) const -> bool = default;
};

struct GridSetting {
	Hyperparams params;
	std::string id;
};

/// Stable identifier, e.g. "sgns-win5-wc_no-neg15-cds0.75" or "glove-win2-wc_yes".
auto setting_id(const Hyperparams &hp) -> std::string;

/// Inverse of setting_id for the varied fields; other fields take defaults.
auto parse_setting_id(std::string_view id) -> Hyperparams;

/// Window values explored by the hyperparameter grid.
inline constexpr int grid_windows[] = {2, 5, 10};
inline constexpr int grid_negatives[] = {1, 5, 15};
inline constexpr double grid_cds[] = {0.75, 1.0};

/// Cartesian product of the grid values that apply to `method`, starting
/// from `base` for everything else. Order: window, w+c, neg, cds.
auto enumerate_grid(Method method, const Hyperparams &base) -> std::vector<GridSetting>;
auto enumerate_grid(Method method) -> std::vector<GridSetting>;

} // namespace freqlens
