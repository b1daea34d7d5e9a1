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
#include "freqlens/corpus.hpp"
#include "freqlens/csv.hpp"
#include "synthetic.hpp"

#include <doctest.h>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace freqlens;
namespace fs = std::filesystem;

namespace {

auto slurp(const fs::path &p) -> std::string
{
	std::ifstream in(p, std::ios::binary);
	std::ostringstream ss;
	ss << in.rdbuf();
	return ss.str();
}

auto usage_code(const std::vector<std::string> &args) -> int
{
	try {
		cli::parse_args(args);
	}
	catch (const cli::UsageError &e) {
		return e.exit_code();
	}
	return -1;
}

auto usage_message(const std::vector<std::string> &args) -> std::string
{
	try {
		cli::parse_args(args);
	}
	catch (const cli::UsageError &e) {
		return e.what();
	}
	return {};
}

auto table_of(const std::string &path) -> csv::Table
{
	std::ifstream in(path);
	return csv::read_table(in);
}

/// Runs a command line and returns its exit status.
auto invoke(const std::vector<std::string> &args) -> int
{
	std::ostringstream err;
	const int status = cli::run(cli::parse_args(args), err);
	if (status != 0) {
		MESSAGE(err.str());
	}
	return status;
}

struct Workspace {
	fs::path dir;

	Workspace()
	{
		dir = fs::temp_directory_path() / "freqlens_cli_test";
		fs::remove_all(dir);
		fs::create_directories(dir);
		testing::SyntheticTextConfig cfg;
		cfg.tokens = 40'000;
		cfg.vocab = 800;
		cfg.topics = 5;
		cfg.topic_words = 40;
		std::ofstream(dir / "raw.txt") << testing::synthetic_text(cfg);
	}
	~Workspace()
	{
		fs::remove_all(dir);
	}
	auto path(const std::string &name) const -> std::string
	{
		return (dir / name).string();
	}
};

} // namespace

TEST_CASE("parse_args builds plans")
{
	const auto plan = cli::parse_args({"heatmap", "--embeddings", "e.bin", "--vocab", "v.tsv", "--metric", "cosine",
		"--pairs", "500", "--seed", "7", "--out", "h.csv"});
	CHECK(plan.command == cli::Command::heatmap);
	CHECK(plan.n_per_cell == 500);
	CHECK(plan.seed == 7);
	CHECK(plan.embeddings == "e.bin");
	CHECK(plan.out == "h.csv");
	REQUIRE(plan.metrics.size() == 1);
	CHECK(plan.metrics[0] == Metric::cosine);

	const auto train = cli::parse_args({"train", "--input", "c.txt", "--output-dir", "d", "--method", "fasttext",
		"--window", "5", "--neg", "15", "--cds", "1", "--add-context", "--seed", "3"});
	CHECK(train.hp.method == Method::fasttext);
	CHECK(train.hp.window == 5);
	CHECK(train.hp.negatives == 15);
	CHECK(train.hp.cds_exponent == 1.0);
	CHECK(train.hp.add_context);
	CHECK(train.hp.seed == 3);
	CHECK(train.hp.dim == 50);

	const auto bias = cli::parse_args({"bias", "--run", "x=runs/x", "--run", "runs/y", "--norms", "n.csv", "--a",
		"she", "--b", "he,him", "--out", "b.csv", "--agg-out", "a.csv"});
	REQUIRE(bias.runs.size() == 2);
	CHECK(bias.runs[0].first == "x");
	CHECK(bias.runs[1].first == "y");
	CHECK(bias.groups.b == std::vector<std::string>{"he", "him"});
}

TEST_CASE("parse_args rejects bad command lines")
{
	CHECK(usage_code({"train", "--input", "c", "--output-dir", "d", "--method", "sgns", "--neg", "0"}) == 2);
	CHECK(usage_message({"train", "--input", "c", "--output-dir", "d", "--method", "sgns", "--neg", "0"})
			  .find("neg") != std::string::npos);
	const auto msg = usage_message({"heatmap", "--embeddings", "e", "--vocab", "v", "--metric", "manhattan", "--out", "o"});
	CHECK(msg.find("cosine") != std::string::npos);
	CHECK(msg.find("neg_euclidean") != std::string::npos);
	CHECK(usage_code({"shuffle", "--input", "a", "--output", "b", "--bogus"}) == 2);
	CHECK(usage_code({"shuffle", "--input", "a"}) == 2);
	CHECK(usage_code({"nonsense"}) == 2);
	CHECK(usage_code({}) == 2);
	CHECK(usage_code({"--help"}) == 0);
	CHECK(usage_code({"train", "--help"}) == 0);
	CHECK(usage_code({"resample", "--input", "a", "--output", "b", "--word", "x"}) == 2);
}

TEST_CASE("seed falls back to FREQLENS_SEED, then 1")
{
	unsetenv("FREQLENS_SEED");
	CHECK(cli::parse_args({"shuffle", "--input", "a", "--output", "b"}).seed == 1);
	setenv("FREQLENS_SEED", "42", 1);
	CHECK(cli::parse_args({"shuffle", "--input", "a", "--output", "b"}).seed == 42);
	CHECK(cli::parse_args({"shuffle", "--input", "a", "--output", "b", "--seed", "5"}).seed == 5);
	setenv("FREQLENS_SEED", "banana", 1);
	CHECK(usage_code({"shuffle", "--input", "a", "--output", "b"}) == 2);
	unsetenv("FREQLENS_SEED");
}

TEST_CASE("pipeline runs end to end with sidecars")
{
	const Workspace ws;
	REQUIRE(invoke({"preprocess", "--input", ws.path("raw.txt"), "--output", ws.path("corpus.txt"), "--vocab-out",
		ws.path("vocab.tsv"), "--min-count", "5"}) == 0);
	const auto corpus = read_corpus(fs::path(ws.path("corpus.txt")));
	CHECK(corpus.token_count() > 30'000);

	const auto meta = nlohmann::json::parse(slurp(ws.path("corpus.txt") + ".meta.json"));
	CHECK(meta["command"] == "preprocess");
	CHECK(meta["version"] == "0.1.0");
	CHECK(meta["seed"] == 1);
	CHECK(meta["inputs"][ws.path("raw.txt")] == cli::file_digest(ws.path("raw.txt")));
	CHECK(meta["argv"].size() == 9);

	SUBCASE("shuffle preserves counts")
	{
		REQUIRE(invoke({"shuffle", "--input", ws.path("corpus.txt"), "--output", ws.path("shuffled.txt"), "--seed",
			"9"}) == 0);
		const auto shuffled = read_corpus(fs::path(ws.path("shuffled.txt")));
		CHECK(shuffled.sentence_lengths() == corpus.sentence_lengths());
		for (const auto &w : corpus.lexicon()) {
			CHECK(shuffled.count_of(w) == corpus.count_of(w));
		}
		CHECK(nlohmann::json::parse(slurp(ws.path("shuffled.txt") + ".meta.json"))["seed"] == 9);
	}

	SUBCASE("resample writes a report")
	{
		const auto word = corpus.word(corpus.tokens()[0]);
		const auto count = corpus.count_of(word);
		REQUIRE(invoke({"resample", "--input", ws.path("corpus.txt"), "--output", ws.path("res.txt"), "--word", word,
			"--target", std::to_string(count / 2), "--report", ws.path("res.json")}) == 0);
		const auto report = nlohmann::json::parse(slurp(ws.path("res.json")));
		CHECK(report["count_before"] == count);
		CHECK(report["count_after"] == read_corpus(fs::path(ws.path("res.txt"))).count_of(word));
	}

	SUBCASE("train, heatmap and pca are deterministic")
	{
		REQUIRE(invoke({"train", "--input", ws.path("corpus.txt"), "--output-dir", ws.path("run"), "--method", "sgns",
			"--dim", "10", "--epochs", "2", "--min-count", "5", "--snapshots", "--add-context"}) == 0);
		CHECK(fs::exists(ws.path("run/embeddings.epoch1.bin")));
		CHECK(fs::exists(ws.path("run/embeddings.epoch2.bin")));
		CHECK(fs::exists(ws.path("run/embeddings.bin.meta.json")));
		const auto hm = {std::string("heatmap"), std::string("--embeddings"), ws.path("run/embeddings.bin"),
			std::string("--vocab"), ws.path("run/vocab.tsv"), std::string("--metric"), std::string("cosine"),
			std::string("--pairs"), std::string("50"), std::string("--seed"), std::string("7"), std::string("--out")};
		std::vector<std::string> first(hm), second(hm);
		first.push_back(ws.path("h1.csv"));
		second.push_back(ws.path("h2.csv"));
		REQUIRE(invoke(first) == 0);
		REQUIRE(invoke(second) == 0);
		CHECK(slurp(ws.path("h1.csv")) == slurp(ws.path("h2.csv")));
		const auto table = table_of(ws.path("h1.csv"));
		CHECK(table.header == std::vector<std::string>{"bin_row", "bin_col", "mean_sim", "n_pairs", "shortfall"});
		const auto bins = assign_bins(read_vocab(fs::path(ws.path("run/vocab.tsv")))).bins.size();
		CHECK(table.rows.size() == bins * bins);

		REQUIRE(invoke({"pca", "--embeddings", ws.path("run/embeddings.bin"), "--vocab", ws.path("run/vocab.tsv"),
			"--words-per-bin", "20", "--out", ws.path("pca.csv")}) == 0);
		CHECK(table_of(ws.path("pca.csv")).header ==
			std::vector<std::string>{"word", "bin", "pc1", "pc2", "is_centroid"});

		std::ofstream(ws.path("norms.csv")) << "word,gender_norm,is_homonym\n"
						    << corpus.word(5) << ",2,0\n"
						    << corpus.word(6) << ",6,0\n"
						    << corpus.word(7) << ",4,0\n";
		const auto a = corpus.word(corpus.tokens()[0]);
		auto b = corpus.word(corpus.tokens()[1]);
		REQUIRE(a != b);
		REQUIRE(invoke({"bias", "--run", "r=" + ws.path("run"), "--norms", ws.path("norms.csv"), "--a", a, "--b", b,
			"--out", ws.path("bias.csv"), "--agg-out", ws.path("agg.csv")}) == 0);
		CHECK(table_of(ws.path("bias.csv")).header ==
			std::vector<std::string>{"corpus_id", "word", "bin", "class", "bias"});
		CHECK(table_of(ws.path("agg.csv")).header ==
			std::vector<std::string>{"corpus_id", "bin", "class", "n", "mean", "ci_low", "ci_high"});
		CHECK(fs::exists(ws.path("bias.csv.meta.json")));
	}

	SUBCASE("glove grid, rmse and regression")
	{
		REQUIRE(invoke({"grid", "--input", ws.path("corpus.txt"), "--output-dir", ws.path("grid"), "--method", "glove",
			"--dim", "8", "--epochs", "2", "--min-count", "5"}) == 0);
		std::size_t dirs = 0;
		for (const auto &e : fs::directory_iterator(ws.path("grid"))) {
			if (e.is_directory()) {
				++dirs;
				CHECK(fs::exists(e.path() / "embeddings.bin"));
				CHECK(fs::exists(e.path() / "vocab.tsv"));
			}
		}
		CHECK(dirs == 6);

		REQUIRE(invoke({"rmse", "--grid-dir", ws.path("grid"), "--pairs", "30", "--permutations", "20", "--out",
			ws.path("rmse.csv")}) == 0);
		const auto table = table_of(ws.path("rmse.csv"));
		CHECK(table.rows.size() == 12);
		REQUIRE(invoke({"regress", "--rmse", ws.path("rmse.csv"), "--metric", "neg_euclidean", "--out",
			ws.path("reg.csv")}) == 0);
		const auto reg = table_of(ws.path("reg.csv"));
		CHECK(reg.header == std::vector<std::string>{"term", "coef", "se", "t", "p"});
		CHECK(reg.rows.size() == 4);
	}

	SUBCASE("errors surface as nonzero exits")
	{
		std::ostringstream err;
		CHECK(cli::run(cli::parse_args({"shuffle", "--input", ws.path("missing.txt"), "--output", ws.path("x.txt")}),
			      err) != 0);
		CHECK_FALSE(err.str().empty());
	}
}
