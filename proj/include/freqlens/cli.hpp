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

#include "freqlens/bias_audit.hpp"
#include "freqlens/embedding_set.hpp"
#include "freqlens/error.hpp"
#include "freqlens/hyperparams.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace freqlens::cli {

inline constexpr std::string_view version = "0.1.0";

enum class Command { preprocess, shuffle, resample, train, grid, heatmap, rmse, pca, bias, regress };

auto command_name(Command c) -> std::string_view;

/// Bad command line. `exit_code` is 0 for --help, whose text is in `what()`.
class UsageError : public Error {
public:
	UsageError(const std::string &msg, int exit_code) : Error(msg), exit_code_(exit_code) {}
	auto exit_code() const -> int
	{
		return exit_code_;
	}
	auto is_help() const -> bool
	{
		return exit_code_ == 0;
	}

private:
	int exit_code_;
};

struct RunPlan {
	Command command = Command::preprocess;
	/// Arguments after the program name, as given.
	std::vector<std::string> argv;
	std::uint64_t seed = 1;

	std::filesystem::path input;
	std::filesystem::path output;
	std::filesystem::path output_dir;
	std::filesystem::path vocab_out;
	std::filesystem::path embeddings;
	std::filesystem::path vocab;
	std::filesystem::path grid_dir;
	std::filesystem::path rmse_csv;
	std::filesystem::path norms;
	std::filesystem::path out;
	std::filesystem::path agg_out;
	std::filesystem::path report;
	/// corpus_id and run directory (embeddings.bin + vocab.tsv).
	std::vector<std::pair<std::string, std::filesystem::path>> runs;

	std::uint64_t min_doc_tokens = 50;
	std::uint64_t min_count = 10;

	std::string word;
	std::uint64_t target = 0;
	std::optional<std::pair<std::string, std::string>> balance;
	std::vector<std::string> watch;

	Hyperparams hp;
	int workers = 1;
	bool snapshots = false;
	bool progress = false;
	StoreFormat format = StoreFormat::binary;
	std::vector<int> grid_windows;
	std::vector<int> grid_negatives;
	std::vector<double> grid_cds;

	std::vector<Metric> metrics;
	std::string setting_id;
	std::size_t n_per_cell = 500;
	std::size_t n_permutations = 200;
	std::size_t words_per_bin = 100;

	ContextGroups groups;
	BootstrapConfig bootstrap;
};

/// Parses the arguments after the program name. Unset seeds fall back to
/// FREQLENS_SEED, then 1. Throws UsageError.
auto parse_args(const std::vector<std::string> &args) -> RunPlan;

/// Executes the plan, writing artifacts and their `<file>.meta.json`
/// sidecars. Errors go to `err`; returns the exit status.
auto run(const RunPlan &plan, std::ostream &err) -> int;

/// parse_args then run, printing usage errors and help.
auto main_entry(int argc, char **argv) -> int;

/// 64-bit FNV-1a of a file's bytes, as 16 hex digits.
auto file_digest(const std::filesystem::path &path) -> std::string;

} // namespace freqlens::cli
