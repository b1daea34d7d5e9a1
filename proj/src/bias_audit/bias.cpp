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


#include "freqlens/bias_audit.hpp"
#include "freqlens/csv.hpp"
#include "freqlens/error.hpp"
#include "freqlens/rng.hpp"
#include "freqlens/stats.hpp"
#include "freqlens/text.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <set>
#include <unordered_set>

namespace freqlens {

void ContextGroups::validate() const
{
	if (a.empty() || b.empty()) {
		throw ConfigError("context groups must both be nonempty");
	}
	const std::set<std::string> in_a(a.begin(), a.end());
	for (const auto &w : b) {
		if (in_a.contains(w)) {
			throw ConfigError("context word '" + w + "' is in both groups");
		}
	}
}

namespace {

auto mean_cosine(const EmbeddingSet &set, std::span<const float> x, const std::vector<std::string> &group) -> double
{
	double sum = 0.0;
	for (const auto &w : group) {
		sum += similarity(x, set.vector(w), Metric::cosine);
	}
	return sum / static_cast<double>(group.size());
}

} // namespace

auto bias_we(const EmbeddingSet &set, std::string_view x, const ContextGroups &groups) -> double
{
	if (groups.a.empty() || groups.b.empty()) {
		throw ConfigError("context groups must both be nonempty");
	}
	const auto v = set.vector(x);
	try {
		return mean_cosine(set, v, groups.a) - mean_cosine(set, v, groups.b);
	}
	catch (const UndefinedSimilarityError &) {
		throw UndefinedSimilarityError("bias of '" + std::string(x) + "' involves a zero vector");
	}
}

auto norm_class_name(NormClass c) -> std::string_view
{
	switch (c) {
	case NormClass::male:
		return "male";
	case NormClass::female:
		return "female";
	case NormClass::neutral:
		return "neutral";
	}
	return "neutral";
}

auto classify_femaleness(double femaleness) -> NormClass
{
	if (femaleness <= 2.0) {
		return NormClass::male;
	}
	if (femaleness >= 6.0) {
		return NormClass::female;
	}
	return NormClass::neutral;
}

namespace {

auto parse_flag(std::string field, std::uint64_t line) -> bool
{
	std::transform(field.begin(), field.end(), field.begin(), [](unsigned char c) { return std::tolower(c); });
	if (field == "1" || field == "true" || field == "yes") {
		return true;
	}
	if (field == "0" || field == "false" || field == "no") {
		return false;
	}
	throw ParseError("line " + std::to_string(line) + ": invalid is_homonym '" + field + "'", line);
}

} // namespace

auto load_norms(std::istream &in) -> std::vector<NormEntry>
{
	const auto table = csv::read_table(in);
	const auto c_word = table.column("word");
	const auto c_norm = table.column("gender_norm");
	const auto c_hom = table.column("is_homonym");
	std::vector<NormEntry> out;
	for (std::size_t i = 0; i < table.rows.size(); ++i) {
		const auto &f = table.rows[i];
		const auto line = table.lines[i];
		if (f[c_word].empty()) {
			throw ParseError("line " + std::to_string(line) + ": empty word", line);
		}
		const double raw = csv::parse_double(f[c_norm], line, "gender_norm");
		if (!(raw >= 1.0 && raw <= 7.0)) {
			throw RangeError("line " + std::to_string(line) + ": gender_norm " + f[c_norm] + " outside [1, 7]");
		}
		const bool homonym = parse_flag(f[c_hom], line);
		if (homonym || text::has_uppercase(f[c_word])) {
			continue;
		}
		NormEntry e;
		e.word = f[c_word];
		e.femaleness = 8.0 - raw;
		e.cls = classify_femaleness(e.femaleness);
		out.push_back(std::move(e));
	}
	return out;
}

auto load_norms(const std::filesystem::path &path) -> std::vector<NormEntry>
{
	std::ifstream in(path);
	if (!in) {
		throw ConfigError("cannot open norms file " + path.string());
	}
	return load_norms(in);
}

auto filter_targets(std::span<const NormEntry> norms, std::span<const Vocabulary *const> vocabs,
	std::span<const FrequencyBinning> binnings) -> std::vector<NormEntry>
{
	if (vocabs.empty()) {
		throw ConfigError("filter_targets needs at least one vocabulary");
	}
	if (vocabs.size() != binnings.size()) {
		throw ShapeError("filter_targets: one binning per vocabulary required");
	}
	std::vector<NormEntry> out;
	std::unordered_set<std::string> seen;
	for (const auto &e : norms) {
		if (seen.contains(e.word)) {
			continue;
		}
		bool keep = true;
		std::optional<int> bin;
		for (std::size_t k = 0; k < vocabs.size() && keep; ++k) {
			const auto id = vocabs[k]->find(e.word);
			if (!id) {
				keep = false;
				break;
			}
			const int b = binnings[k].bin_of.at(*id);
			if (bin && *bin != b) {
				keep = false;
			}
			bin = b;
		}
		if (keep) {
			seen.insert(e.word);
			out.push_back(e);
		}
	}
	return out;
}

auto bootstrap_mean_ci(std::span<const double> values, std::size_t n_resamples, double level, std::uint64_t seed)
	-> BootstrapCi
{
	if (values.empty()) {
		throw InsufficientDataError("bootstrap of an empty sample");
	}
	if (n_resamples < 1) {
		throw RangeError("bootstrap needs at least one resample");
	}
	if (!(level > 0.0 && level < 1.0)) {
		throw RangeError("bootstrap level must lie in (0, 1)");
	}
	Rng rng(seed);
	const auto n = values.size();
	std::vector<double> means(n_resamples);
	for (auto &m : means) {
		double sum = 0.0;
		for (std::size_t i = 0; i < n; ++i) {
			sum += values[rng.below(n)];
		}
		m = sum / static_cast<double>(n);
	}
	const double tail = (1.0 - level) / 2.0;
	return {stats::mean(values), stats::quantile(means, tail), stats::quantile(means, 1.0 - tail)};
}

auto bias_experiment(std::span<const AuditedCorpus> corpora, std::span<const NormEntry> targets,
	const ContextGroups &groups, const BootstrapConfig &bootstrap) -> BiasReport
{
	groups.validate();
	BiasReport report;
	std::uint64_t group_index = 0;
	for (const auto &corpus : corpora) {
		if (!corpus.set || !corpus.binning) {
			throw ConfigError("audited corpus '" + corpus.corpus_id + "' lacks embeddings or binning");
		}
		// bin -> class name -> values, classes in a fixed order.
		std::map<int, std::map<std::string, std::vector<double>>> grouped;
		for (const auto &t : targets) {
			BiasRow row;
			row.corpus_id = corpus.corpus_id;
			row.word = t.word;
			row.bin = corpus.binning->bin_of.at(corpus.set->vocab().id(t.word));
			row.cls = t.cls;
			row.bias = bias_we(*corpus.set, t.word, groups);
			grouped[row.bin]["all"].push_back(row.bias);
			grouped[row.bin][std::string(norm_class_name(row.cls))].push_back(row.bias);
			report.rows.push_back(std::move(row));
		}
		for (const auto &[bin, by_class] : grouped) {
			for (std::string_view cls : {"all", "male", "female", "neutral"}) {
				auto it = by_class.find(std::string(cls));
				if (it == by_class.end()) {
					continue;
				}
				const auto ci = bootstrap_mean_ci(
					it->second, bootstrap.n_resamples, bootstrap.level, mix_seed(bootstrap.seed, group_index++));
				report.aggregates.push_back(
					{corpus.corpus_id, bin, std::string(cls), it->second.size(), ci.mean, ci.ci_low, ci.ci_high});
			}
		}
	}
	return report;
}

void write_bias_csv(std::ostream &out, std::span<const BiasRow> rows)
{
	out << "corpus_id,word,bin,class,bias\n";
	for (const auto &r : rows) {
		csv::write_row(out, {r.corpus_id, r.word, std::to_string(r.bin), std::string(norm_class_name(r.cls)),
			csv::format_number(r.bias)});
	}
}

void write_bias_aggregate_csv(std::ostream &out, std::span<const BiasAggregate> rows)
{
	out << "corpus_id,bin,class,n,mean,ci_low,ci_high\n";
	for (const auto &r : rows) {
		csv::write_row(out, {r.corpus_id, std::to_string(r.bin), r.cls, std::to_string(r.n),
			csv::format_number(r.mean), csv::format_number(r.ci_low), csv::format_number(r.ci_high)});
	}
}

} // namespace freqlens
