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

#include "freqlens/embedding_set.hpp"
#include "freqlens/freq_analysis.hpp"

#include <cstdint>
#include <filesystem>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace freqlens {

/// Two disjoint, nonempty sets of context words (e.g. A = {she}, B = {he}).
struct ContextGroups {
	std::vector<std::string> a;
	std::vector<std::string> b;
	std::string label;

	/// Throws ConfigError on an empty group or a word in both.
	void validate() const;
};

/// Mean cosine of x to the words of A minus its mean cosine to the words of
/// B, over W rows. Throws UnknownWordError naming a missing word and
/// UndefinedSimilarityError for a zero vector.
auto bias_we(const EmbeddingSet &set, std::string_view x, const ContextGroups &groups) -> double;

enum class NormClass { male, female, neutral };

auto norm_class_name(NormClass c) -> std::string_view;

/// male at or below 2, female at or above 6, neutral between.
auto classify_femaleness(double femaleness) -> NormClass;

struct NormEntry {
	std::string word;
	/// 1 (masculine) to 7 (feminine).
	double femaleness = 4.0;
	NormClass cls = NormClass::neutral;
};

/// CSV with columns word, gender_norm (1 feminine to 7 masculine) and
/// is_homonym (0/1/true/false/yes/no). The scale is flipped to
/// femaleness = 8 - raw; homonyms and words with an uppercase character are
/// dropped. Throws ParseError with the line number for malformed rows and
/// RangeError for a norm outside [1, 7].
auto load_norms(std::istream &in) -> std::vector<NormEntry>;
auto load_norms(const std::filesystem::path &path) -> std::vector<NormEntry>;

/// Norm entries whose word is in every vocabulary and falls in the same
/// frequency bin in all of them, in input order without duplicates.
/// `binnings[k]` must come from `vocabs[k]`.
auto filter_targets(std::span<const NormEntry> norms, std::span<const Vocabulary *const> vocabs,
	std::span<const FrequencyBinning> binnings) -> std::vector<NormEntry>;

struct BootstrapCi {
	double mean = 0.0;
	double ci_low = 0.0;
	double ci_high = 0.0;
};

/// Percentile bootstrap of the mean with type-7 quantiles. Throws
/// InsufficientDataError on empty input and RangeError for n_resamples < 1
/// or level outside (0, 1).
auto bootstrap_mean_ci(std::span<const double> values, std::size_t n_resamples = 1000, double level = 0.95,
	std::uint64_t seed = 0) -> BootstrapCi;

struct BootstrapConfig {
	std::size_t n_resamples = 1000;
	double level = 0.95;
	std::uint64_t seed = 0;
};

/// One embedding set under audit with the binning of its own corpus.
struct AuditedCorpus {
	std::string corpus_id;
	const EmbeddingSet *set = nullptr;
	const FrequencyBinning *binning = nullptr;
};

struct BiasRow {
	std::string corpus_id;
	std::string word;
	int bin = 0;
	NormClass cls = NormClass::neutral;
	double bias = 0.0;
};

/// `cls` is a NormClass name or "all".
struct BiasAggregate {
	std::string corpus_id;
	int bin = 0;
	std::string cls;
	std::size_t n = 0;
	double mean = 0.0;
	double ci_low = 0.0;
	double ci_high = 0.0;
};

struct BiasReport {
	std::vector<BiasRow> rows;
	std::vector<BiasAggregate> aggregates;
};

/// Bias of every target in every corpus (corpus-major, target order), then
/// per (corpus, bin) aggregates over all targets and per class, each with a
/// bootstrap CI.
auto bias_experiment(std::span<const AuditedCorpus> corpora, std::span<const NormEntry> targets,
	const ContextGroups &groups, const BootstrapConfig &bootstrap = {}) -> BiasReport;

void write_bias_csv(std::ostream &out, std::span<const BiasRow> rows);
void write_bias_aggregate_csv(std::ostream &out, std::span<const BiasAggregate> rows);

} // namespace freqlens
