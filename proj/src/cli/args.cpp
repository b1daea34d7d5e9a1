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


#include "freqlens/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cstdlib>

namespace freqlens::cli {

auto command_name(Command c) -> std::string_view
{
	switch (c) {
	case Command::preprocess:
		return "preprocess";
	case Command::shuffle:
		return "shuffle";
	case Command::resample:
		return "resample";
	case Command::train:
		return "train";
	case Command::grid:
		return "grid";
	case Command::heatmap:
		return "heatmap";
	case Command::rmse:
		return "rmse";
	case Command::pca:
		return "pca";
	case Command::bias:
		return "bias";
	case Command::regress:
		return "regress";
	}
	return "?";
}

namespace {

const std::vector<std::string> metric_names{"cosine", "neg_euclidean"};
const std::vector<std::string> method_names{"sgns", "glove", "fasttext"};

/// Training flags shared by train and grid; applied over the method defaults.
struct TrainFlags {
	std::string method = "sgns";
	int dim = 0;
	int window = 0;
	int negatives = 0;
	double cds = 0.0;
	int epochs = 0;
	double lr = 0.0;
	double subsample = 0.0;
	int ngram_min = 0;
	int ngram_max = 0;
	std::uint32_t buckets = 0;
	double x_max = 0.0;
	double alpha = 0.0;
	bool add_context = false;
	bool fixed_window = false;
	std::vector<CLI::Option *> opts;

	void add(CLI::App *sub, bool single_setting)
	{
		sub->add_option("--method", method, "sgns, glove or fasttext")
			->required()
			->check(CLI::IsMember(method_names));
		opts = {
			sub->add_option("--dim", dim, "Vector dimension"),
			sub->add_option("--epochs", epochs, "Epochs (GloVe: iterations)"),
			sub->add_option("--lr", lr, "Initial learning rate"),
			sub->add_option("--subsample", subsample, "Frequent-word subsampling threshold, 0 disables"),
			sub->add_option("--ngram-min", ngram_min, "Shortest character n-gram"),
			sub->add_option("--ngram-max", ngram_max, "Longest character n-gram"),
			sub->add_option("--buckets", buckets, "n-gram hash buckets, 0 disables n-grams"),
			sub->add_option("--x-max", x_max, "GloVe weighting cutoff"),
			sub->add_option("--alpha", alpha, "GloVe weighting exponent"),
		};
		if (single_setting) {
			opts.push_back(sub->add_option("--window", window, "Context window"));
			opts.push_back(sub->add_option("--neg", negatives, "Negative samples per pair"));
			opts.push_back(sub->add_option("--cds", cds, "Noise distribution exponent"));
			sub->add_flag("--add-context", add_context, "Use W + C as the word vectors");
		}
		sub->add_flag("--fixed-window", fixed_window, "Always use the full window");
	}

	auto given(std::string_view name) const -> bool
	{
		for (auto *o : opts) {
			if (o->get_name() == name) {
				return o->count() > 0;
			}
		}
		return false;
	}

	auto build(std::uint64_t seed, std::uint64_t min_count) const -> Hyperparams
	{
		auto hp = Hyperparams::defaults(parse_method(method));
		if (given("--dim")) {
			hp.dim = dim;
		}
		if (given("--window")) {
			hp.window = window;
		}
		if (given("--neg")) {
			hp.negatives = negatives;
		}
		if (given("--cds")) {
			hp.cds_exponent = cds;
		}
		if (given("--epochs")) {
			hp.epochs = epochs;
		}
		if (given("--lr")) {
			hp.learning_rate = lr;
		}
		if (given("--subsample")) {
			hp.subsample = subsample;
		}
		if (given("--ngram-min")) {
			hp.ngram_min = ngram_min;
		}
		if (given("--ngram-max")) {
			hp.ngram_max = ngram_max;
		}
		if (given("--buckets")) {
			hp.buckets = buckets;
		}
		if (given("--x-max")) {
			hp.x_max = x_max;
		}
		if (given("--alpha")) {
			hp.alpha = alpha;
		}
		hp.add_context = add_context;
		hp.dynamic_window = !fixed_window;
		hp.seed = seed;
		hp.min_count = min_count;
		return hp;
	}
};

auto env_seed() -> std::optional<std::uint64_t>
{
	const char *s = std::getenv("FREQLENS_SEED");
	if (!s || !*s) {
		return std::nullopt;
	}
	std::uint64_t v = 0;
	const std::string_view sv(s);
	auto [ptr, ec] = std::from_chars(sv.data(), sv.data() + sv.size(), v);
	if (ec != std::errc() || ptr != sv.data() + sv.size()) {
		throw UsageError("FREQLENS_SEED must be a non-negative integer, got '" + std::string(sv) + "'", 2);
	}
	return v;
}

auto parse_run(const std::string &spec) -> std::pair<std::string, std::filesystem::path>
{
	const auto eq = spec.find('=');
	if (eq != std::string::npos) {
		if (eq == 0 || eq + 1 == spec.size()) {
			throw UsageError("--run expects DIR or ID=DIR, got '" + spec + "'", 2);
		}
		return {spec.substr(0, eq), spec.substr(eq + 1)};
	}
	std::filesystem::path dir(spec);
	auto id = dir.filename().string();
	if (id.empty()) {
		id = dir.parent_path().filename().string();
	}
	return {id, dir};
}

} // namespace

auto parse_args(const std::vector<std::string> &args) -> RunPlan
{
	RunPlan plan;
	plan.argv = args;

	CLI::App app{"Frequency effects in static word embeddings", "freqlens"};
	app.set_version_flag("--version", std::string(version));
	app.require_subcommand(1);

	std::optional<std::uint64_t> seed;
	TrainFlags train_flags;
	TrainFlags grid_flags;
	std::vector<std::string> metrics;
	std::string metric = "cosine";
	std::string balance;
	std::string format = "binary";
	std::vector<std::string> runs;

	auto *pre = app.add_subcommand("preprocess", "Normalize raw text into a one-sentence-per-line corpus");
	pre->add_option("--input", plan.input, "Raw UTF-8 text, documents separated by blank lines")->required();
	pre->add_option("--output", plan.output, "Corpus file")->required();
	pre->add_option("--min-doc-tokens", plan.min_doc_tokens, "Drop shorter documents");
	pre->add_option("--vocab-out", plan.vocab_out, "Also write the vocabulary");
	pre->add_option("--min-count", plan.min_count, "Vocabulary count threshold");

	auto *shuf = app.add_subcommand("shuffle", "Permute all tokens of a corpus");
	shuf->add_option("--input", plan.input, "Corpus file")->required();
	shuf->add_option("--output", plan.output, "Corpus file")->required();
	shuf->add_option("--seed", seed, "Random seed");

	auto *res = app.add_subcommand("resample", "Under- or oversample the sentences containing a word");
	res->add_option("--input", plan.input, "Corpus file")->required();
	res->add_option("--output", plan.output, "Corpus file")->required();
	auto *word_opt = res->add_option("--word", plan.word, "Word to resample");
	auto *target_opt = res->add_option("--target", plan.target, "Target count")->check(CLI::PositiveNumber);
	auto *balance_opt = res->add_option("--balance", balance, "A,B: oversample the rarer word to the other's count");
	word_opt->needs(target_opt)->excludes(balance_opt);
	target_opt->needs(word_opt);
	res->add_option("--watch", plan.watch, "Words whose counts are reported")->delimiter(',');
	res->add_option("--report", plan.report, "JSON report path");
	res->add_option("--seed", seed, "Random seed");

	auto *train = app.add_subcommand("train", "Train one embedding setting");
	train->add_option("--input", plan.input, "Corpus file")->required();
	train->add_option("--output-dir", plan.output_dir, "Directory for embeddings.bin and vocab.tsv")->required();
	train_flags.add(train, true);
	train->add_option("--min-count", plan.min_count, "Vocabulary count threshold");
	train->add_option("--seed", seed, "Random seed");
	train->add_option("--workers", plan.workers, "Training threads; above 1 is not reproducible")
		->check(CLI::PositiveNumber);
	train->add_flag("--snapshots", plan.snapshots, "Write embeddings.epoch<k>.bin after every epoch");
	train->add_flag("--progress", plan.progress, "Report loss and speed on stderr");
	train->add_option("--format", format, "binary or text")->check(CLI::IsMember({"binary", "text"}));

	auto *grid = app.add_subcommand("grid", "Train every setting of the hyperparameter grid");
	grid->add_option("--input", plan.input, "Corpus file")->required();
	grid->add_option("--output-dir", plan.output_dir, "One subdirectory per setting")->required();
	grid_flags.add(grid, false);
	grid->add_option("--windows", plan.grid_windows, "Subset of the window values")->delimiter(',');
	grid->add_option("--negatives", plan.grid_negatives, "Subset of the negative-sample values")->delimiter(',');
	grid->add_option("--cds-values", plan.grid_cds, "Subset of the cds values")->delimiter(',');
	grid->add_option("--min-count", plan.min_count, "Vocabulary count threshold");
	grid->add_option("--seed", seed, "Random seed");
	grid->add_option("--workers", plan.workers, "Training threads")->check(CLI::PositiveNumber);
	grid->add_flag("--snapshots", plan.snapshots, "Write per-epoch snapshots");
	grid->add_flag("--progress", plan.progress, "Report loss and speed on stderr");

	auto *heat = app.add_subcommand("heatmap", "Mean similarity per pair of frequency bins");
	heat->add_option("--embeddings", plan.embeddings, "Embedding file")->required();
	heat->add_option("--vocab", plan.vocab, "Vocabulary TSV with counts")->required();
	heat->add_option("--metric", metric, "cosine or neg_euclidean")->check(CLI::IsMember(metric_names));
	heat->add_option("--pairs", plan.n_per_cell, "Pairs per cell")->check(CLI::PositiveNumber);
	heat->add_option("--seed", seed, "Random seed");
	heat->add_option("--out", plan.out, "Heatmap CSV")->required();

	auto *rm = app.add_subcommand("rmse", "RMSE of heatmaps against a permutation baseline");
	auto *grid_dir_opt = rm->add_option("--grid-dir", plan.grid_dir, "Output of grid");
	auto *emb_opt = rm->add_option("--embeddings", plan.embeddings, "Single embedding file");
	auto *voc_opt = rm->add_option("--vocab", plan.vocab, "Vocabulary TSV for --embeddings");
	rm->add_option("--setting-id", plan.setting_id, "Label for --embeddings");
	grid_dir_opt->excludes(emb_opt)->excludes(voc_opt);
	emb_opt->needs(voc_opt);
	voc_opt->needs(emb_opt);
	rm->add_option("--metric", metrics, "Repeatable; default both")->check(CLI::IsMember(metric_names));
	rm->add_option("--pairs", plan.n_per_cell, "Pairs per cell")->check(CLI::PositiveNumber);
	rm->add_option("--permutations", plan.n_permutations, "Baseline replicates")->check(CLI::PositiveNumber);
	rm->add_option("--seed", seed, "Random seed");
	rm->add_option("--out", plan.out, "RMSE CSV")->required();

	auto *pca = app.add_subcommand("pca", "Two-component PCA of a frequency-stratified sample");
	pca->add_option("--embeddings", plan.embeddings, "Embedding file")->required();
	pca->add_option("--vocab", plan.vocab, "Vocabulary TSV with counts")->required();
	pca->add_option("--words-per-bin", plan.words_per_bin, "Sample size per bin")->check(CLI::PositiveNumber);
	pca->add_option("--seed", seed, "Random seed");
	pca->add_option("--out", plan.out, "PCA CSV")->required();

	auto *bias = app.add_subcommand("bias", "Bias scores of norm words across corpora");
	bias->add_option("--run", runs, "DIR or ID=DIR holding embeddings.bin and vocab.tsv; repeatable")->required();
	bias->add_option("--norms", plan.norms, "CSV with word,gender_norm,is_homonym")->required();
	bias->add_option("--a", plan.groups.a, "Context group A, comma separated")->required()->delimiter(',');
	bias->add_option("--b", plan.groups.b, "Context group B, comma separated")->required()->delimiter(',');
	bias->add_option("--label", plan.groups.label, "Name of the audited dimension");
	bias->add_option("--bootstrap", plan.bootstrap.n_resamples, "Bootstrap resamples")->check(CLI::PositiveNumber);
	bias->add_option("--level", plan.bootstrap.level, "Confidence level")->check(CLI::Range(0.0, 1.0));
	bias->add_option("--seed", seed, "Random seed");
	bias->add_option("--out", plan.out, "Per-word CSV")->required();
	bias->add_option("--agg-out", plan.agg_out, "Aggregate CSV")->required();

	auto *reg = app.add_subcommand("regress", "Regress RMSE on the hyperparameters");
	reg->add_option("--rmse", plan.rmse_csv, "RMSE CSV")->required();
	reg->add_option("--metric", metric, "cosine or neg_euclidean")->check(CLI::IsMember(metric_names));
	reg->add_option("--out", plan.out, "Regression CSV")->required();

	try {
		std::vector<std::string> reversed(args.rbegin(), args.rend());
		app.parse(reversed);
	}
	catch (const CLI::CallForHelp &) {
		throw UsageError(app.help(), 0);
	}
	catch (const CLI::CallForAllHelp &) {
		throw UsageError(app.help("", CLI::AppFormatMode::All), 0);
	}
	catch (const CLI::CallForVersion &e) {
		throw UsageError(e.what(), 0);
	}
	catch (const CLI::ParseError &e) {
		throw UsageError(e.what(), 2);
	}

	const std::vector<std::pair<CLI::App *, Command>> commands{{pre, Command::preprocess},
		{shuf, Command::shuffle}, {res, Command::resample}, {train, Command::train}, {grid, Command::grid},
		{heat, Command::heatmap}, {rm, Command::rmse}, {pca, Command::pca}, {bias, Command::bias},
		{reg, Command::regress}};
	for (const auto &[sub, cmd] : commands) {
		if (sub->parsed()) {
			plan.command = cmd;
		}
	}

	plan.seed = seed ? *seed : env_seed().value_or(1);
	plan.bootstrap.seed = plan.seed;
	plan.format = format == "text" ? StoreFormat::text : StoreFormat::binary;

	try {
		switch (plan.command) {
		case Command::resample:
			if (!balance.empty()) {
				const auto comma = balance.find(',');
				if (comma == std::string::npos || comma == 0 || comma + 1 == balance.size() ||
					balance.find(',', comma + 1) != std::string::npos) {
					throw UsageError("--balance expects two words A,B", 2);
				}
				plan.balance = std::pair{balance.substr(0, comma), balance.substr(comma + 1)};
			}
			else if (plan.word.empty()) {
				throw UsageError("resample needs --word with --target, or --balance", 2);
			}
			break;
		case Command::train:
			plan.hp = train_flags.build(plan.seed, plan.min_count);
			plan.hp.validate();
			break;
		case Command::grid:
			plan.hp = grid_flags.build(plan.seed, plan.min_count);
			plan.hp.validate();
			break;
		case Command::heatmap:
		case Command::regress:
			plan.metrics = {parse_metric(metric)};
			break;
		case Command::rmse:
			if (plan.grid_dir.empty() && plan.embeddings.empty()) {
				throw UsageError("rmse needs --grid-dir or --embeddings with --vocab", 2);
			}
			if (metrics.empty()) {
				metrics = metric_names;
			}
			for (const auto &m : metrics) {
				plan.metrics.push_back(parse_metric(m));
			}
			break;
		case Command::bias:
			for (const auto &r : runs) {
				plan.runs.push_back(parse_run(r));
			}
			plan.groups.validate();
			if (!(plan.bootstrap.level > 0.0 && plan.bootstrap.level < 1.0)) {
				throw UsageError("--level must lie strictly between 0 and 1", 2);
			}
			break;
		default:
			break;
		}
	}
	catch (const UsageError &) {
		throw;
	}
	catch (const Error &e) {
		throw UsageError(e.what(), 2);
	}
	return plan;
}

} // namespace freqlens::cli
