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

#include "freqlens/hyperparams.hpp"

#include "freqlens/error.hpp"

#include <charconv>

namespace freqlens {

auto method_name(Method m) -> std::string_view
{
	switch (m) {
	case Method::sgns:
		return "sgns";
	case Method::glove:
		return "glove";
	case Method::fasttext:
		return "fasttext";
	}
	return "unknown";
}

auto parse_method(std::string_view name) -> Method
{
	if (name == "sgns") {
		return Method::sgns;
	}
	if (name == "glove") {
		return Method::glove;
	}
	if (name == "fasttext") {
		return Method::fasttext;
	}
	throw ConfigError("unknown method '" + std::string(name) +
		"' (expected sgns, glove or fasttext)");
}

auto Hyperparams::defaults(Method m) -> Hyperparams
{
	Hyperparams hp;
	hp.method = m;
	if (m == Method::glove) {
		hp.learning_rate = 0.05;
		hp.epochs = 15;
	}
	return hp;
}

void Hyperparams::validate() const
{
	auto fail = [](const std::string &msg) { throw RangeError(msg); };
	if (dim < 1) {
		fail("dim must be >= 1");
	}
	if (window < 1) {
		fail("window must be >= 1");
	}
	if (negatives < 1) {
		fail("neg must be >= 1");
	}
	if (!(cds_exponent > 0.0 && cds_exponent <= 1.0)) {
		fail("cds must be in (0, 1]");
	}
	if (epochs < 1) {
		fail("epochs must be >= 1");
	}
	if (!(learning_rate > 0.0)) {
		fail("learning rate must be > 0");
	}
	if (min_learning_rate < 0.0 || min_learning_rate > learning_rate) {
		fail("min learning rate must be in [0, learning rate]");
	}
	if (subsample < 0.0) {
		fail("subsample threshold must be >= 0");
	}
	if (ngram_min < 1 || ngram_max < ngram_min) {
		fail("n-gram range must satisfy 1 <= min <= max");
	}
	if (!(x_max > 0.0)) {
		fail("x_max must be > 0");
	}
	if (!(alpha > 0.0)) {
		fail("alpha must be > 0");
	}
}

namespace {

auto format_cds(double cds) -> std::string
{
	char buf[32];
	auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, cds);
	return std::string(buf, ptr);
}

} // namespace

auto setting_id(const Hyperparams &hp) -> std::string
{
	std::string id = std::string(method_name(hp.method)) + "-win" + std::to_string(hp.window) +
		"-wc_" + (hp.add_context ? "yes" : "no");
	if (hp.method != Method::glove) {
		id += "-neg" + std::to_string(hp.negatives) + "-cds" + format_cds(hp.cds_exponent);
	}
	return id;
}

auto parse_setting_id(std::string_view id) -> Hyperparams
{
	auto bad = [&]() -> ConfigError {
		return ConfigError("malformed setting id '" + std::string(id) + "'");
	};
	std::vector<std::string_view> parts;
	std::size_t start = 0;
	while (start <= id.size()) {
		auto dash = id.find('-', start);
		if (dash == std::string_view::npos) {
			dash = id.size();
		}
		parts.push_back(id.substr(start, dash - start));
		start = dash + 1;
	}
	if (parts.size() < 3) {
		throw bad();
	}
	Hyperparams hp = Hyperparams::defaults(parse_method(parts[0]));

	auto read_int = [&](std::string_view s, std::string_view prefix) {
		if (s.substr(0, prefix.size()) != prefix) {
			throw bad();
		}
		s.remove_prefix(prefix.size());
		int v = 0;
		auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
		if (ec != std::errc() || ptr != s.data() + s.size()) {
			throw bad();
		}
		return v;
	};

	hp.window = read_int(parts[1], "win");
	if (parts[2] == "wc_yes") {
		hp.add_context = true;
	}
	else if (parts[2] != "wc_no") {
		throw bad();
	}
	if (hp.method == Method::glove) {
		if (parts.size() != 3) {
			throw bad();
		}
		return hp;
	}
	if (parts.size() != 5) {
		throw bad();
	}
	hp.negatives = read_int(parts[3], "neg");
	auto cds = parts[4];
	if (cds.substr(0, 3) != "cds") {
		throw bad();
	}
	cds.remove_prefix(3);
	auto [ptr, ec] = std::from_chars(cds.data(), cds.data() + cds.size(), hp.cds_exponent);
	if (ec != std::errc() || ptr != cds.data() + cds.size()) {
		throw bad();
	}
	return hp;
}

auto enumerate_grid(Method method, const Hyperparams &base) -> std::vector<GridSetting>
{
	std::vector<GridSetting> out;
	for (int win : grid_windows) {
		for (bool wc : {false, true}) {
			Hyperparams hp = base;
			hp.method = method;
			hp.window = win;
			hp.add_context = wc;
			if (method == Method::glove) {
				out.push_back({hp, setting_id(hp)});
				continue;
			}
			for (int neg : grid_negatives) {
				for (double cds : grid_cds) {
					hp.negatives = neg;
					hp.cds_exponent = cds;
					out.push_back({hp, setting_id(hp)});
				}
			}
		}
	}
	return out;
}

auto enumerate_grid(Method method) -> std::vector<GridSetting>
{
	return enumerate_grid(method, Hyperparams::defaults(method));
}

} // namespace freqlens
