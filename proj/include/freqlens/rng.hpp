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
#include <random>
#include <span>
#include <utility>

namespace freqlens {

/// splitmix64 finalizer; used to derive independent child seeds.
constexpr auto mix_seed(std::uint64_t seed, std::uint64_t stream) -> std::uint64_t
{
	std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
	z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
	z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
	return z ^ (z >> 31);
}

/// Seeded generator with portable derived draws. The standard distribution
/// classes are implementation-defined, so bounded integers and unit reals are
/// derived here directly from the mt19937_64 stream.
class Rng {
public:
	explicit Rng(std::uint64_t seed) : engine_(seed) {}

	auto next() -> std::uint64_t
	{
		return engine_();
	}

	/// Uniform integer in [0, n). n must be positive.
	auto below(std::uint64_t n) -> std::uint64_t
	{
		// Lemire's multiply-shift with rejection.
		auto x = engine_();
		auto m = static_cast<unsigned __int128>(x) * n;
		auto low = static_cast<std::uint64_t>(m);
		if (low < n) {
			const std::uint64_t threshold = -n % n;
			while (low < threshold) {
				x = engine_();
				m = static_cast<unsigned __int128>(x) * n;
				low = static_cast<std::uint64_t>(m);
			}
		}
		return static_cast<std::uint64_t>(m >> 64);
	}

	/// Uniform real in [0, 1) with 53 random bits.
	auto uniform() -> double
	{
		return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
	}

	auto uniform(double lo, double hi) -> double
	{
		return lo + (hi - lo) * uniform();
	}

	template <typename T>
	void shuffle(std::span<T> items)
	{
		for (std::size_t i = items.size(); i > 1; --i) {
			auto j = static_cast<std::size_t>(below(i));
			using std::swap;
			swap(items[i - 1], items[j]);
		}
	}

private:
	std::mt19937_64 engine_;
};

} // namespace freqlens
