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


#include "freqlens/rng.hpp"
#include "freqlens/train.hpp"

#include <boost/math/distributions/chi_squared.hpp>
#include <doctest.h>

#include <cmath>
#include <map>
#include <set>

using namespace freqlens;

namespace {

auto random_vec(Rng &rng, std::size_t d) -> std::vector<double>
{
	std::vector<double> v(d);
	for (auto &x : v) {
		x = rng.uniform(-1.0, 1.0);
	}
	return v;
}

auto rel_err(double analytic, double numeric) -> double
{
	return std::abs(analytic - numeric) / std::max({std::abs(analytic), std::abs(numeric), 1e-6});
}

struct Toy {
	Corpus corpus;
	std::shared_ptr<const Vocabulary> vocab;
};

auto toy(const Corpus &raw, std::uint64_t min_count = 1) -> Toy
{
	auto vocab = std::make_shared<const Vocabulary>(build_vocab(raw, min_count));
	return {project(raw, *vocab), vocab};
}

/// Random filler sentences with "a b" always adjacent and "c" dropped anywhere.
auto adjacency_corpus(std::uint64_t seed, int n_sentences) -> Corpus
{
	Rng rng(seed);
	Corpus c;
	for (int s = 0; s < n_sentences; ++s) {
		std::vector<std::string> sent;
		for (int k = 0; k < 12; ++k) {
			sent.push_back("f" + std::to_string(rng.below(60)));
		}
		const auto at = rng.below(sent.size() - 1);
		sent[at] = "a";
		sent[at + 1] = "b";
		auto pos = rng.below(sent.size());
		while (pos == at || pos == at + 1) {
			pos = rng.below(sent.size());
		}
		sent[pos] = "c";
		c.add_sentence(std::span<const std::string>(sent));
	}
	return c;
}

auto small_hp(Method m) -> Hyperparams
{
	auto hp = Hyperparams::defaults(m);
	hp.dim = 16;
	hp.epochs = 3;
	hp.min_count = 1;
	hp.buckets = 2000;
	return hp;
}

} // namespace

TEST_CASE("pair loss at the origin is ln 2")
{
	const std::vector<double> z(4, 0.0);
	for (auto label : {PairLabel::positive, PairLabel::negative}) {
		const auto r = sgns_pair_loss_grad(z, z, label);
		CHECK(r.loss == doctest::Approx(std::log(2.0)).epsilon(1e-15));
	}
	const std::vector<double> three(3, 0.0);
	CHECK_THROWS_AS(sgns_pair_loss_grad(z, three, PairLabel::positive), ShapeError);
}

TEST_CASE("SGNS gradients match central differences")
{
	Rng rng(5);
	const double h = 1e-5;
	for (int trial = 0; trial < 100; ++trial) {
		auto w = random_vec(rng, 8);
		auto c = random_vec(rng, 8);
		const auto label = rng.below(2) ? PairLabel::positive : PairLabel::negative;
		const auto r = sgns_pair_loss_grad(w, c, label);
		for (std::size_t k = 0; k < 8; ++k) {
			auto wp = w, wm = w;
			wp[k] += h;
			wm[k] -= h;
			const double nw =
				(sgns_pair_loss_grad(wp, c, label).loss - sgns_pair_loss_grad(wm, c, label).loss) / (2 * h);
			CHECK(rel_err(r.grad_w[k], nw) <= 1e-4);
			auto cp = c, cm = c;
			cp[k] += h;
			cm[k] -= h;
			const double nc =
				(sgns_pair_loss_grad(w, cp, label).loss - sgns_pair_loss_grad(w, cm, label).loss) / (2 * h);
			CHECK(rel_err(r.grad_c[k], nc) <= 1e-4);
		}
	}
}

TEST_CASE("subword gradients match central differences")
{
	Rng rng(6);
	const double h = 1e-5;
	for (int trial = 0; trial < 30; ++trial) {
		auto word = random_vec(rng, 6);
		std::vector<std::vector<double>> grams{random_vec(rng, 6), random_vec(rng, 6), random_vec(rng, 6)};
		auto c = random_vec(rng, 6);
		const auto label = trial % 2 ? PairLabel::positive : PairLabel::negative;
		const auto r = subword_pair_loss_grad(word, grams, c, label);
		auto loss = [&](const std::vector<double> &wv, const std::vector<std::vector<double>> &gv,
				    const std::vector<double> &cv) { return subword_pair_loss_grad(wv, gv, cv, label).loss; };
		for (std::size_t k = 0; k < 6; ++k) {
			auto wp = word, wm = word;
			wp[k] += h;
			wm[k] -= h;
			CHECK(rel_err(r.grad_word[k], (loss(wp, grams, c) - loss(wm, grams, c)) / (2 * h)) <= 1e-4);
			for (std::size_t g = 0; g < grams.size(); ++g) {
				auto gp = grams, gm = grams;
				gp[g][k] += h;
				gm[g][k] -= h;
				CHECK(rel_err(r.grad_ngrams[g][k], (loss(word, gp, c) - loss(word, gm, c)) / (2 * h)) <= 1e-4);
			}
			auto cp = c, cm = c;
			cp[k] += h;
			cm[k] -= h;
			CHECK(rel_err(r.grad_c[k], (loss(word, grams, cp) - loss(word, grams, cm)) / (2 * h)) <= 1e-4);
		}
	}
}

TEST_CASE("character n-grams use boundary markers")
{
	CHECK(char_ngrams("where", 3, 3) == std::vector<std::string>{"<wh", "whe", "her", "ere", "re>"});
	CHECK(char_ngrams("a", 3, 6) == std::vector<std::string>{"<a>"});
	CHECK(char_ngrams("a", 4, 6).empty());
	CHECK(char_ngrams("\xC3\xA9t\xC3\xA9", 3, 3) ==
		std::vector<std::string>{"<\xC3\xA9t", "\xC3\xA9t\xC3\xA9", "t\xC3\xA9>"});
	CHECK(ngram_buckets("where", 3, 6, 0).empty());
	for (auto b : ngram_buckets("where", 3, 6, 97)) {
		CHECK(b < 97);
	}
}

TEST_CASE("FNV-1a reference values")
{
	CHECK(fnv1a32("") == 0x811c9dc5u);
	CHECK(fnv1a32("a") == 0xe40c292cu);
	CHECK(fnv1a32("foobar") == 0xbf9cf968u);
}

TEST_CASE("noise sampler matches the smoothed unigram distribution")
{
	std::vector<std::string> words;
	std::vector<std::uint64_t> counts;
	for (int i = 0; i < 20; ++i) {
		words.push_back("w" + std::to_string(i));
		counts.push_back(static_cast<std::uint64_t>(5000 / (i + 1)));
	}
	const Vocabulary vocab(words, counts, 1);
	for (double cds : {0.75, 1.0}) {
		const auto weights = noise_weights(vocab, cds);
		double total = 0.0;
		for (auto w : weights) {
			total += w;
		}
		const AliasSampler sampler(weights);
		Rng rng(99);
		const int n = 1'000'000;
		std::vector<int> hits(20, 0);
		for (int k = 0; k < n; ++k) {
			++hits[sampler.sample(rng)];
		}
		double chi2 = 0.0;
		for (int i = 0; i < 20; ++i) {
			const double p = weights[i] / total;
			const double expected = n * p;
			CHECK(std::abs(hits[i] - expected) <= 3.0 * std::sqrt(n * p * (1 - p)));
			chi2 += (hits[i] - expected) * (hits[i] - expected) / expected;
		}
		const boost::math::chi_squared dist(19);
		CHECK(chi2 < boost::math::quantile(dist, 0.999));
	}
}

TEST_CASE("cooccurrence weights use inverse distance")
{
	const auto t = toy([] {
		Corpus c;
		const std::vector<std::string> s{"a", "b", "c"};
		c.add_sentence(std::span<const std::string>(s));
		return c;
	}());
	const auto a = t.vocab->id("a"), b = t.vocab->id("b"), c = t.vocab->id("c");
	const auto x = build_cooccurrence(t.corpus, *t.vocab, 10);
	CHECK(x.at(a, b) == 1.0);
	CHECK(x.at(b, c) == 1.0);
	CHECK(x.at(a, c) == 0.5);
	CHECK(x.at(c, a) == 0.5);
	CHECK(x.at(a, a) == 0.0);
	CHECK(build_cooccurrence(t.corpus, *t.vocab, 1).at(a, c) == 0.0);
	CHECK(build_cooccurrence(Corpus{}, *t.vocab, 5).empty());
	CHECK_THROWS_AS(build_cooccurrence(t.corpus, *t.vocab, 0), RangeError);
}

TEST_CASE("cooccurrence matches a brute-force count")
{
	Rng rng(12);
	Corpus raw;
	for (int s = 0; s < 300; ++s) {
		std::vector<std::string> sent;
		const auto len = 1 + rng.below(15);
		for (std::uint64_t k = 0; k < len; ++k) {
			sent.push_back("t" + std::to_string(rng.below(1500)));
		}
		raw.add_sentence(std::span<const std::string>(sent));
	}
	const auto t = toy(raw);
	const int window = 4;
	std::map<std::pair<TokenId, TokenId>, double> oracle;
	for (std::size_t s = 0; s < t.corpus.sentence_count(); ++s) {
		const auto sent = t.corpus.sentence(s);
		for (std::size_t i = 0; i < sent.size(); ++i) {
			for (std::size_t j = 0; j < sent.size(); ++j) {
				const auto d = i > j ? i - j : j - i;
				if (d >= 1 && d <= static_cast<std::size_t>(window)) {
					oracle[{sent[i], sent[j]}] += 1.0 / static_cast<double>(d);
				}
			}
		}
	}
	const auto table = build_cooccurrence(t.corpus, *t.vocab, window);
	CHECK(table.nonzeros() == oracle.size());
	for (const auto &e : table.entries()) {
		CHECK(e.weight == doctest::Approx(oracle.at({e.row, e.col})).epsilon(1e-12));
		CHECK(table.at(e.col, e.row) == e.weight);
	}
}

TEST_CASE("GloVe weighting function")
{
	CHECK(glove_weight(100.0, 100.0, 0.75) == 1.0);
	CHECK(glove_weight(500.0, 100.0, 0.75) == 1.0);
	CHECK(glove_weight(10.0, 100.0, 0.75) == doctest::Approx(std::pow(0.1, 0.75)).epsilon(1e-14));
}

TEST_CASE("GloVe loss decreases over the first iterations")
{
	Rng rng(8);
	Corpus raw;
	for (int s = 0; s < 100; ++s) {
		std::vector<std::string> sent;
		for (int k = 0; k < 10; ++k) {
			sent.push_back("g" + std::to_string(rng.below(40)));
		}
		raw.add_sentence(std::span<const std::string>(sent));
	}
	const auto t = toy(raw);
	auto hp = small_hp(Method::glove);
	hp.epochs = 6;
	const auto table = build_cooccurrence(t.corpus, *t.vocab, hp.window);
	std::vector<double> history;
	std::vector<double> recomputed;
	TrainOptions opts;
	opts.loss_history = &history;
	train_glove(
		table, t.vocab, hp,
		[&](const EmbeddingSet &snap) { recomputed.push_back(glove_loss(table, snap, hp.x_max, hp.alpha)); },
		opts);
	REQUIRE(history.size() == 6);
	REQUIRE(recomputed.size() == 6);
	for (std::size_t k = 0; k < 5; ++k) {
		CHECK(recomputed[k + 1] < recomputed[k]);
		CHECK(history[k] == doctest::Approx(recomputed[k]).epsilon(1e-5));
	}

	auto wrong = hp;
	wrong.method = Method::sgns;
	CHECK_THROWS_AS(train_glove(table, t.vocab, wrong), ConfigError);
	CHECK_THROWS_AS(train_glove(CooccurrenceTable(t.vocab->size(), {}), t.vocab, hp), ConfigError);
}

TEST_CASE("training is deterministic with one worker and snapshots once per epoch")
{
	const auto t = toy(adjacency_corpus(1, 200));
	for (auto m : {Method::sgns, Method::fasttext, Method::glove}) {
		const auto hp = small_hp(m);
		std::vector<EmbeddingSet> snaps;
		const auto first = train_embeddings(t.corpus, t.vocab, hp, [&](const EmbeddingSet &s) { snaps.push_back(s); });
		const auto second = train_embeddings(t.corpus, t.vocab, hp);
		CHECK(first.w() == second.w());
		CHECK(first.c() == second.c());
		REQUIRE(snaps.size() == static_cast<std::size_t>(hp.epochs));
		for (int e = 0; e < hp.epochs; ++e) {
			CHECK(snaps[e].epoch_tag() == e + 1);
		}
		CHECK(snaps.back().w() == first.w());
		CHECK_FALSE(snaps.front().w() == snaps.back().w());
	}
}

TEST_CASE("training rejects bad inputs")
{
	const auto t = toy(adjacency_corpus(1, 20));
	auto hp = small_hp(Method::sgns);
	CHECK_THROWS_AS(train_sgns(Corpus{}, t.vocab, hp), ConfigError);
	CHECK_THROWS_AS(train_sgns(t.corpus, std::make_shared<const Vocabulary>(), hp), ConfigError);
	CHECK_THROWS_AS(train_fasttext(t.corpus, t.vocab, hp), ConfigError);
	hp.negatives = 0;
	CHECK_THROWS_AS(train_sgns(t.corpus, t.vocab, hp), RangeError);
}

TEST_CASE("FastText without buckets reproduces SGNS bitwise")
{
	const auto t = toy(adjacency_corpus(2, 150));
	auto sg = small_hp(Method::sgns);
	auto ft = sg;
	ft.method = Method::fasttext;
	ft.buckets = 0;
	const auto a = train_sgns(t.corpus, t.vocab, sg);
	const auto b = train_fasttext(t.corpus, t.vocab, ft);
	CHECK(a.w() == b.w());
	CHECK(a.c() == b.c());
}

TEST_CASE("w+c training returns the summed vectors")
{
	const auto t = toy(adjacency_corpus(3, 100));
	auto hp = small_hp(Method::glove);
	const auto plain = train_embeddings(t.corpus, t.vocab, hp);
	hp.add_context = true;
	const auto summed = train_embeddings(t.corpus, t.vocab, hp);
	CHECK(summed.w() == combine_w_plus_c(plain).w());
}

TEST_CASE("adjacent words end up closer than randomly placed ones under w+c")
{
	int wins = 0;
	for (std::uint64_t seed = 1; seed <= 5; ++seed) {
		const auto t = toy(adjacency_corpus(100 + seed, 2000));
		auto hp = Hyperparams::defaults(Method::sgns);
		hp.dim = 20;
		hp.min_count = 1;
		hp.window = 2;
		hp.seed = seed;
		const auto set = combine_w_plus_c(train_sgns(t.corpus, t.vocab, hp));
		const double ab = similarity(set.vector("a"), set.vector("b"), Metric::cosine);
		const double ac = similarity(set.vector("a"), set.vector("c"), Metric::cosine);
		wins += ab > ac ? 1 : 0;
	}
	CHECK(wins >= 3);
}

TEST_CASE("hyperparameter grid")
{
	CHECK(enumerate_grid(Method::glove).size() == 6);
	CHECK(enumerate_grid(Method::sgns).size() == 36);
	CHECK(enumerate_grid(Method::fasttext).size() == 36);
	for (auto m : {Method::sgns, Method::glove, Method::fasttext}) {
		std::set<std::string> ids;
		for (const auto &g : enumerate_grid(m)) {
			ids.insert(g.id);
			CHECK(g.id == setting_id(g.params));
			const auto back = parse_setting_id(g.id);
			CHECK(back.method == g.params.method);
			CHECK(back.window == g.params.window);
			CHECK(back.add_context == g.params.add_context);
			if (m != Method::glove) {
				CHECK(back.negatives == g.params.negatives);
				CHECK(back.cds_exponent == g.params.cds_exponent);
			}
		}
		CHECK(ids.size() == enumerate_grid(m).size());
	}
	CHECK(setting_id(enumerate_grid(Method::sgns).front().params) == "sgns-win2-wc_no-neg1-cds0.75");
	CHECK_THROWS_AS(parse_setting_id("sgns-win2"), ConfigError);
	CHECK_THROWS_AS(parse_setting_id("glove-winX-wc_no"), ConfigError);
}

TEST_CASE("hyperparameter validation")
{
	auto expect_range = [](auto mutate) {
		auto hp = Hyperparams::defaults(Method::sgns);
		mutate(hp);
		CHECK_THROWS_AS(hp.validate(), RangeError);
	};
	expect_range([](Hyperparams &h) { h.dim = 0; });
	expect_range([](Hyperparams &h) { h.window = 0; });
	expect_range([](Hyperparams &h) { h.negatives = 0; });
	expect_range([](Hyperparams &h) { h.cds_exponent = 0.0; });
	expect_range([](Hyperparams &h) { h.cds_exponent = 1.5; });
	expect_range([](Hyperparams &h) { h.epochs = 0; });
	CHECK_NOTHROW(Hyperparams::defaults(Method::glove).validate());
	CHECK(Hyperparams::defaults(Method::glove).epochs == 15);
	CHECK(Hyperparams::defaults(Method::sgns).epochs == 5);
}
