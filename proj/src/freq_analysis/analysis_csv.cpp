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

#include <charconv>

namespace freqlens {

using csv::format_number;

void write_heatmap_csv(std::ostream &out, const Heatmap &heatmap)
{
	out << "bin_row,bin_col,mean_sim,n_pairs,shortfall\n";
	for (std::size_t i = 0; i < heatmap.size(); ++i) {
		for (std::size_t j = 0; j < heatmap.size(); ++j) {
			const auto &c = heatmap.cell(i, j);
			out << heatmap.bins()[i] << ',' << heatmap.bins()[j] << ',' << format_number(c.mean) << ','
			    << c.values.size() << ',' << (c.shortfall ? 1 : 0) << '\n';
		}
	}
}

void write_rmse_csv(std::ostream &out, std::span<const RmseRow> rows)
{
	out << "setting_id,metric,rmse_actual,baseline_q50,baseline_q99,baseline_max,n_perm\n";
	for (const auto &r : rows) {
		csv::write_row(out, {r.setting_id, std::string(metric_name(r.metric)), format_number(r.rmse_actual),
			format_number(r.baseline_q50), format_number(r.baseline_q99), format_number(r.baseline_max),
			std::to_string(r.n_perm)});
	}
}

auto read_rmse_csv(std::istream &in) -> std::vector<RmseRow>
{
	const auto table = csv::read_table(in);
	const auto c_id = table.column("setting_id");
	const auto c_metric = table.column("metric");
	const auto c_actual = table.column("rmse_actual");
	const auto c_q50 = table.column("baseline_q50");
	const auto c_q99 = table.column("baseline_q99");
	const auto c_max = table.column("baseline_max");
	const auto c_n = table.column("n_perm");
	std::vector<RmseRow> rows;
	for (std::size_t i = 0; i < table.rows.size(); ++i) {
		const auto &f = table.rows[i];
		const auto line = table.lines[i];
		RmseRow r;
		r.setting_id = f[c_id];
		try {
			r.metric = parse_metric(f[c_metric]);
		}
		catch (const ConfigError &e) {
			throw ParseError("line " + std::to_string(line) + ": " + e.what(), line);
		}
		r.rmse_actual = csv::parse_double(f[c_actual], line, "rmse_actual");
		r.baseline_q50 = csv::parse_double(f[c_q50], line, "baseline_q50");
		r.baseline_q99 = csv::parse_double(f[c_q99], line, "baseline_q99");
		r.baseline_max = csv::parse_double(f[c_max], line, "baseline_max");
		const auto &n = f[c_n];
		auto [ptr, ec] = std::from_chars(n.data(), n.data() + n.size(), r.n_perm);
		if (n.empty() || ec != std::errc() || ptr != n.data() + n.size()) {
			throw ParseError("line " + std::to_string(line) + ": invalid n_perm '" + n + "'", line);
		}
		rows.push_back(std::move(r));
	}
	return rows;
}

void write_pca_csv(std::ostream &out, const PcaResult &result, const Vocabulary &vocab)
{
	out << "word,bin,pc1,pc2,is_centroid\n";
	for (const auto &p : result.points) {
		csv::write_row(out, {vocab.word(p.word), std::to_string(p.bin), format_number(p.pc1),
			format_number(p.pc2), "0"});
	}
	for (const auto &c : result.centroids) {
		csv::write_row(out, {"", std::to_string(c.bin), format_number(c.pc1), format_number(c.pc2), "1"});
	}
}

void write_regression_csv(std::ostream &out, const RegressionResult &result)
{
	out << "term,coef,se,t,p\n";
	for (std::size_t j = 0; j < result.terms.size(); ++j) {
		csv::write_row(out, {result.terms[j], format_number(result.coef[j]), format_number(result.se[j]),
			format_number(result.t[j]), format_number(result.p[j])});
	}
}

} // namespace freqlens
