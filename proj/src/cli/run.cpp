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
#include "freqlens/cli.hpp"
#include "freqlens/corpus.hpp"
#include "freqlens/freq_analysis.hpp"
#include "freqlens/rng.hpp"
#include "freqlens/train.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>

namespace freqlens::cli {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

auto file_digest(const fs::path &path) -> std::string
{
	std::ifstream in(path, std::ios::binary);
	if (!in) {
		throw ConfigError("cannot open " + path.string());
	}
	std::uint64_t h = 14695981039346656037ULL;
	char buf[1 << 16];
	while (in) {
		in.read(buf, sizeof buf);
		for (std::streamsize i = 0; i < in.gcount(); ++i) {
			h ^= static_cast<unsigned char>(buf[i]);
			h *= 1099511628211ULL;
		}
	}
	char hex[17];
	std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(h));
	return hex;
}

namespace {

auto open_out(const fs::path &path) -> std::ofstream
{
	if (path.has_parent_path()) {
		fs::create_directories(path.parent_path());
	}
	std::ofstream out(path, std::ios::binary);
	if (!out) {
		throw ConfigError("cannot write " + path.string());
	}
	return out;
}

auto open_in(const fs::path &path) -> std::ifstream
{
	std::ifstream in(path, std::ios::binary);
	if (!in) {
		throw ConfigError("cannot open " + path.string());
	}
	return in;
}

auto hyperparams_json(const Hyperparams &hp) -> json
{
	json j;
	j["method"] = method_name(hp.method);
	j["setting_id"] = setting_id(hp);
	j["dim"] = hp.dim;
	j["window"] = hp.window;
	j["add_context"] = hp.add_context;
	j["negatives"] = hp.negatives;
	j["cds"] = hp.cds_exponent;
	j["epochs"] = hp.epochs;
	j["seed"] = hp.seed;
	j["learning_rate"] = hp.learning_rate;
	j["min_learning_rate"] = hp.min_learning_rate;
	j["min_count"] = hp.min_count;
	j["subsample"] = hp.subsample;
	j["dynamic_window"] = hp.dynamic_window;
	if (hp.method == Method::fasttext) {
		j["ngram_min"] = hp.ngram_min;
		j["ngram_max"] = hp.ngram_max;
		j["buckets"] = hp.buckets;
	}
	if (hp.method == Method::glove) {
		j["x_max"] = hp.x_max;
		j["alpha"] = hp.alpha;
	}
	return j;
}

/// Writes `<artifact>.meta.json`.
void write_meta(const RunPlan &plan, const fs::path &artifact, const std::vector<fs::path> &inputs,
	const json &extra = json::object())
{
	json j;
	j["command"] = command_name(plan.command);
	j["argv"] = plan.argv;
	j["seed"] = plan.seed;
	j["version"] = version;
	json in = json::object();
	for (const auto &p : inputs) {
		in[p.string()] = file_digest(p);
	}
	j["inputs"] = in;
	for (const auto &[k, v] : extra.items()) {
		j[k] = v;
	}
	auto out = open_out(fs::path(artifact.string() + ".meta.json"));
	out << j.dump(2) << '\n';
}

struct LoadedRun {
	EmbeddingSet set;
	FrequencyBinning binning;
};

auto load_run(const fs::path &embeddings, const fs::path &vocab_path) -> LoadedRun
{
	auto vocab = std::make_shared<const Vocabulary>(read_vocab(vocab_path));
	auto set = restore(embeddings).with_vocab(vocab);
	auto binning = assign_bins(set.vocab());
	return {std::move(set), std::move(binning)};
}

void persist_run(const EmbeddingSet &set, const fs::path &dir, StoreFormat format)
{
	fs::create_directories(dir);
	persist(set, dir / "embeddings.bin", format);
	write_vocab(set.vocab(), dir / "vocab.tsv");
}

void cmd_preprocess(const RunPlan &plan)
{
	auto in = open_in(plan.input);
	const auto corpus = preprocess(in, plan.min_doc_tokens);
	write_corpus(corpus, plan.output);
	json extra{{"sentences", corpus.sentence_count()}, {"tokens", corpus.token_count()}};
	write_meta(plan, plan.output, {plan.input}, extra);
	if (!plan.vocab_out.empty()) {
		const auto vocab = build_vocab(corpus, plan.min_count);
		write_vocab(vocab, plan.vocab_out);
		write_meta(plan, plan.vocab_out, {plan.input}, json{{"min_count", plan.min_count}, {"size", vocab.size()}});
	}
}

void cmd_shuffle(const RunPlan &plan)
{
	const auto shuffled = shuffle_tokens(read_corpus(plan.input), plan.seed);
	write_corpus(shuffled, plan.output);
	write_meta(plan, plan.output, {plan.input}, json{{"provenance", shuffled.provenance().describe()}});
}

void cmd_resample(const RunPlan &plan)
{
	const auto corpus = read_corpus(plan.input);
	auto [out, report] = plan.balance
		? balance_frequencies(corpus, plan.balance->first, plan.balance->second, plan.seed, plan.watch)
		: resample(corpus, plan.word, plan.target, plan.seed, plan.watch);
	write_corpus(out, plan.output);
	const auto report_json = report.to_json();
	if (!plan.report.empty()) {
		auto r = open_out(plan.report);
		r << report_json << '\n';
	}
	write_meta(plan, plan.output, {plan.input},
		json{{"provenance", out.provenance().describe()}, {"report", json::parse(report_json)}});
}

/// Trains one setting with add_context off and writes it to `dirs[false]`,
/// plus its W + C variant to `dirs[true]` when that path is set.
void train_and_persist(const RunPlan &plan, const Corpus &projected, const std::shared_ptr<const Vocabulary> &vocab,
	Hyperparams hp, const fs::path &plain_dir, const fs::path &wc_dir, const std::vector<fs::path> &inputs)
{
	const bool want_plain = !plain_dir.empty();
	const bool want_wc = !wc_dir.empty();
	hp.add_context = false;
	SnapshotSink sink;
	if (plan.snapshots) {
		sink = [&](const EmbeddingSet &s) {
			const auto name = "embeddings.epoch" + std::to_string(*s.epoch_tag()) + ".bin";
			if (want_plain) {
				fs::create_directories(plain_dir);
				persist(s, plain_dir / name, plan.format);
			}
			if (want_wc) {
				fs::create_directories(wc_dir);
				persist(combine_w_plus_c(s), wc_dir / name, plan.format);
			}
		};
	}
	std::vector<double> losses;
	TrainOptions options;
	options.workers = plan.workers;
	options.progress = plan.progress;
	if (plan.progress) {
		options.loss_history = &losses;
	}
	const auto set = train_embeddings(projected, vocab, hp, sink, options);

	auto emit = [&](const EmbeddingSet &s, const fs::path &dir, const Hyperparams &h) {
		persist_run(s, dir, plan.format);
		json extra{{"hyperparams", hyperparams_json(h)}, {"workers", plan.workers}};
		if (!losses.empty()) {
			extra["loss_history"] = losses;
		}
		write_meta(plan, dir / "embeddings.bin", inputs, extra);
	};
	if (want_plain) {
		emit(set, plain_dir, hp);
	}
	if (want_wc) {
		auto wc = hp;
		wc.add_context = true;
		emit(combine_w_plus_c(set), wc_dir, wc);
	}
}

void cmd_train(const RunPlan &plan)
{
	const auto corpus = read_corpus(plan.input);
	auto vocab = std::make_shared<const Vocabulary>(build_vocab(corpus, plan.hp.min_count));
	const auto projected = project(corpus, *vocab);
	if (plan.hp.add_context) {
		train_and_persist(plan, projected, vocab, plan.hp, {}, plan.output_dir, {plan.input});
	}
	else {
		train_and_persist(plan, projected, vocab, plan.hp, plan.output_dir, {}, {plan.input});
	}
}

template <typename T>
auto allowed(const std::vector<T> &subset, T value) -> bool
{
	return subset.empty() || std::find(subset.begin(), subset.end(), value) != subset.end();
}

void cmd_grid(const RunPlan &plan)
{
	const auto corpus = read_corpus(plan.input);
	auto vocab = std::make_shared<const Vocabulary>(build_vocab(corpus, plan.hp.min_count));
	const auto projected = project(corpus, *vocab);
	const bool glove = plan.hp.method == Method::glove;
	std::vector<std::string> written;
	for (const auto &s : enumerate_grid(plan.hp.method, plan.hp)) {
		const auto &h = s.params;
		if (h.add_context || !allowed(plan.grid_windows, h.window) ||
			(!glove && (!allowed(plan.grid_negatives, h.negatives) || !allowed(plan.grid_cds, h.cds_exponent)))) {
			continue;
		}
		auto wc = h;
		wc.add_context = true;
		const auto plain_id = setting_id(h);
		const auto wc_id = setting_id(wc);
		if (plan.progress) {
			std::cerr << "training " << plain_id << " (and " << wc_id << ")\n";
		}
		train_and_persist(plan, projected, vocab, h, plan.output_dir / plain_id, plan.output_dir / wc_id, {plan.input});
		written.push_back(plain_id);
		written.push_back(wc_id);
	}
	if (written.empty()) {
		throw ConfigError("the grid subset selects no settings");
	}
	std::sort(written.begin(), written.end());
	auto index = open_out(plan.output_dir / "settings.txt");
	for (const auto &id : written) {
		index << id << '\n';
	}
	write_meta(plan, plan.output_dir / "settings.txt", {plan.input}, json{{"settings", written}});
}

void cmd_heatmap(const RunPlan &plan)
{
	const auto run = load_run(plan.embeddings, plan.vocab);
	const auto sample = sample_pairs(run.binning, plan.n_per_cell, plan.seed);
	const auto h = heatmap(run.set, sample, plan.metrics.front());
	auto out = open_out(plan.out);
	write_heatmap_csv(out, h);
	out.close();
	write_meta(plan, plan.out, {plan.embeddings, plan.vocab},
		json{{"metric", metric_name(h.metric())}, {"n_per_cell", plan.n_per_cell}, {"bins", h.bins()},
			{"grand_mean", h.grand_mean()}, {"rmse", rmse(h)}});
}

void cmd_rmse(const RunPlan &plan)
{
	std::vector<std::pair<std::string, fs::path>> runs;
	if (!plan.grid_dir.empty()) {
		for (const auto &entry : fs::directory_iterator(plan.grid_dir)) {
			if (entry.is_directory() && fs::exists(entry.path() / "embeddings.bin")) {
				runs.emplace_back(entry.path().filename().string(), entry.path());
			}
		}
		std::sort(runs.begin(), runs.end());
		if (runs.empty()) {
			throw ConfigError("no setting directories with embeddings.bin under " + plan.grid_dir.string());
		}
	}
	std::vector<fs::path> inputs;
	std::vector<RmseRow> rows;
	auto measure = [&](const std::string &id, const fs::path &emb, const fs::path &voc) {
		const auto run = load_run(emb, voc);
		inputs.push_back(emb);
		inputs.push_back(voc);
		const auto sample = sample_pairs(run.binning, plan.n_per_cell, plan.seed);
		for (auto m : plan.metrics) {
			const auto h = heatmap(run.set, sample, m);
			RmseResult r{id, m, rmse(h), permutation_baseline(h, plan.n_permutations, mix_seed(plan.seed, 1))};
			rows.push_back(summarize(r));
		}
	};
	if (runs.empty()) {
		auto id = plan.setting_id;
		if (id.empty()) {
			id = plan.embeddings.parent_path().filename().string();
		}
		measure(id.empty() ? plan.embeddings.stem().string() : id, plan.embeddings, plan.vocab);
	}
	for (const auto &[id, dir] : runs) {
		measure(id, dir / "embeddings.bin", dir / "vocab.tsv");
	}
	auto out = open_out(plan.out);
	write_rmse_csv(out, rows);
	out.close();
	json metrics = json::array();
	for (auto m : plan.metrics) {
		metrics.push_back(metric_name(m));
	}
	write_meta(plan, plan.out, inputs,
		json{{"metrics", metrics}, {"n_per_cell", plan.n_per_cell}, {"n_permutations", plan.n_permutations}});
}

void cmd_pca(const RunPlan &plan)
{
	const auto run = load_run(plan.embeddings, plan.vocab);
	const auto result = pca_stratified(run.set, run.binning, plan.words_per_bin, plan.seed);
	auto out = open_out(plan.out);
	write_pca_csv(out, result, run.set.vocab());
	out.close();
	write_meta(plan, plan.out, {plan.embeddings, plan.vocab},
		json{{"words_per_bin", plan.words_per_bin},
			{"explained_variance", {result.explained_variance[0], result.explained_variance[1]}}});
}

void cmd_bias(const RunPlan &plan)
{
	std::vector<LoadedRun> loaded;
	std::vector<fs::path> inputs{plan.norms};
	for (const auto &[id, dir] : plan.runs) {
		loaded.push_back(load_run(dir / "embeddings.bin", dir / "vocab.tsv"));
		inputs.push_back(dir / "embeddings.bin");
		inputs.push_back(dir / "vocab.tsv");
	}
	std::vector<const Vocabulary *> vocabs;
	std::vector<FrequencyBinning> binnings;
	std::vector<AuditedCorpus> corpora;
	for (std::size_t k = 0; k < loaded.size(); ++k) {
		vocabs.push_back(&loaded[k].set.vocab());
		binnings.push_back(loaded[k].binning);
		corpora.push_back({plan.runs[k].first, &loaded[k].set, &loaded[k].binning});
	}
	const auto norms = load_norms(plan.norms);
	const auto targets = filter_targets(norms, vocabs, binnings);
	const auto report = bias_experiment(corpora, targets, plan.groups, plan.bootstrap);

	auto out = open_out(plan.out);
	write_bias_csv(out, report.rows);
	out.close();
	auto agg = open_out(plan.agg_out);
	write_bias_aggregate_csv(agg, report.aggregates);
	agg.close();
	json extra{{"label", plan.groups.label}, {"a", plan.groups.a}, {"b", plan.groups.b},
		{"norm_entries", norms.size()}, {"targets", targets.size()},
		{"bootstrap", {{"resamples", plan.bootstrap.n_resamples}, {"level", plan.bootstrap.level}}}};
	write_meta(plan, plan.out, inputs, extra);
	write_meta(plan, plan.agg_out, inputs, extra);
}

void cmd_regress(const RunPlan &plan)
{
	auto in = open_in(plan.rmse_csv);
	const auto rows = read_rmse_csv(in);
	const auto result = regress_rmse(rows, plan.metrics.front());
	auto out = open_out(plan.out);
	write_regression_csv(out, result);
	out.close();
	write_meta(plan, plan.out, {plan.rmse_csv},
		json{{"metric", metric_name(plan.metrics.front())}, {"n_observations", result.n_observations},
			{"r_squared", result.r_squared}});
}

} // namespace

auto run(const RunPlan &plan, std::ostream &err) -> int
{
	try {
		switch (plan.command) {
		case Command::preprocess:
			cmd_preprocess(plan);
			break;
		case Command::shuffle:
			cmd_shuffle(plan);
			break;
		case Command::resample:
			cmd_resample(plan);
			break;
		case Command::train:
			cmd_train(plan);
			break;
		case Command::grid:
			cmd_grid(plan);
			break;
		case Command::heatmap:
			cmd_heatmap(plan);
			break;
		case Command::rmse:
			cmd_rmse(plan);
			break;
		case Command::pca:
			cmd_pca(plan);
			break;
		case Command::bias:
			cmd_bias(plan);
			break;
		case Command::regress:
			cmd_regress(plan);
			break;
		}
	}
	catch (const std::exception &e) {
		err << "freqlens " << command_name(plan.command) << ": " << e.what() << '\n';
		return 1;
	}
	return 0;
}

auto main_entry(int argc, char **argv) -> int
{
	std::vector<std::string> args(argv + 1, argv + argc);
	RunPlan plan;
	try {
		plan = parse_args(args);
	}
	catch (const UsageError &e) {
		if (e.is_help()) {
			std::cout << e.what();
			return 0;
		}
		std::cerr << "freqlens: " << e.what() << "\nRun with --help for usage.\n";
		return e.exit_code();
	}
	return run(plan, std::cerr);
}

} // namespace freqlens::cli
