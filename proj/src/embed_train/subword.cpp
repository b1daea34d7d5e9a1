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

#include "freqlens/text.hpp"
#include "freqlens/train.hpp"

namespace freqlens {

auto fnv1a32(std::string_view bytes) -> std::uint32_t
{
	std::uint32_t h = 2166136261u;
	for (char ch : bytes) {
		h ^= static_cast<unsigned char>(ch);
		h *= 16777619u;
	}
	return h;
}

auto char_ngrams(std::string_view word, int min_n, int max_n) -> std::vector<std::string>
{
	const std::string wrapped = "<" + std::string(word) + ">";
	// Byte offset of every code point, plus the end.
	std::vector<std::size_t> starts;
	std::size_t pos = 0;
	while (pos < wrapped.size()) {
		starts.push_back(pos);
		text::decode_next(wrapped, pos);
	}
	starts.push_back(wrapped.size());
	const auto n_chars = static_cast<int>(starts.size()) - 1;

	std::vector<std::string> out;
	for (int i = 0; i < n_chars; ++i) {
		for (int n = min_n; n <= max_n && i + n <= n_chars; ++n) {
			out.push_back(wrapped.substr(starts[i], starts[i + n] - starts[i]));
		}
	}
	return out;
}

auto ngram_buckets(std::string_view word, int min_n, int max_n, std::uint32_t buckets)
	-> std::vector<std::uint32_t>
{
	std::vector<std::uint32_t> out;
	if (buckets == 0) {
		return out;
	}
	for (const auto &g : char_ngrams(word, min_n, max_n)) {
		out.push_back(fnv1a32(g) % buckets);
	}
	return out;
}

} // namespace freqlens
