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

#include "freqlens/embedding_set.hpp"
#include "freqlens/text.hpp"

#include <bit>
#include <charconv>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iterator>
#include <unordered_set>

namespace freqlens {

namespace {

constexpr char magic[4] = {'F', 'Q', 'L', '1'};

void put_u16(std::string &out, std::uint16_t v)
{
	out.push_back(static_cast<char>(v & 0xFF));
	out.push_back(static_cast<char>(v >> 8));
}

void put_u32(std::string &out, std::uint32_t v)
{
	for (int k = 0; k < 4; ++k) {
		out.push_back(static_cast<char>((v >> (8 * k)) & 0xFF));
	}
}

void put_floats(std::string &out, std::span<const float> xs)
{
	for (float x : xs) {
		put_u32(out, std::bit_cast<std::uint32_t>(x));
	}
}

/// Bounds-checked little-endian cursor.
class ByteReader {
public:
	explicit ByteReader(std::string_view bytes) : bytes_(bytes) {}

	auto position() const -> std::size_t
	{
		return pos_;
	}

	void need(std::size_t n, const char *what)
	{
		if (bytes_.size() - pos_ < n) {
			throw ParseError(std::string("truncated payload while reading ") + what +
					" at byte offset " + std::to_string(pos_),
				pos_);
		}
	}

	auto u16(const char *what) -> std::uint16_t
	{
		need(2, what);
		std::uint16_t v = static_cast<unsigned char>(bytes_[pos_]) |
			(static_cast<unsigned char>(bytes_[pos_ + 1]) << 8);
		pos_ += 2;
		return v;
	}

	auto u32(const char *what) -> std::uint32_t
	{
		need(4, what);
		std::uint32_t v = 0;
		for (int k = 0; k < 4; ++k) {
			v |= static_cast<std::uint32_t>(static_cast<unsigned char>(bytes_[pos_ + k])) << (8 * k);
		}
		pos_ += 4;
		return v;
	}

	auto str(std::size_t n, const char *what) -> std::string_view
	{
		need(n, what);
		auto s = bytes_.substr(pos_, n);
		pos_ += n;
		return s;
	}

	void floats(std::span<float> out, const char *what)
	{
		need(out.size() * 4, what);
		for (auto &x : out) {
			x = std::bit_cast<float>(u32(what));
		}
	}

private:
	std::string_view bytes_;
	std::size_t pos_ = 0;
};

auto encode_binary(const EmbeddingSet &set) -> std::string
{
	const auto &vocab = set.vocab();
	std::string out(magic, magic + 4);
	put_u32(out, static_cast<std::uint32_t>(set.size()));
	put_u32(out, static_cast<std::uint32_t>(set.dim()));
	for (TokenId i = 0; i < set.size(); ++i) {
		const auto &w = vocab.word(i);
		if (w.size() > 0xFFFF) {
			throw ConfigError("word longer than 65535 bytes cannot be stored");
		}
		put_u16(out, static_cast<std::uint16_t>(w.size()));
		out += w;
		put_floats(out, set.w().row(i));
		put_floats(out, set.c().row(i));
	}
	return out;
}

auto encode_text(const EmbeddingSet &set) -> std::string
{
	std::string out = std::to_string(set.size()) + " " + std::to_string(set.dim()) + "\n";
	char buf[64];
	for (TokenId i = 0; i < set.size(); ++i) {
		out += set.vocab().word(i);
		for (float x : set.w().row(i)) {
			std::snprintf(buf, sizeof buf, " %.6f", static_cast<double>(x));
			out += buf;
		}
		out.push_back('\n');
	}
	return out;
}

auto make_set(std::vector<std::string> words, Matrix w, Matrix c, const Hyperparams &hp)
	-> EmbeddingSet
{
	std::vector<std::uint64_t> counts(words.size(), 0);
	auto vocab = std::make_shared<const Vocabulary>(std::move(words), std::move(counts), 0);
	return EmbeddingSet(std::move(vocab), std::move(w), std::move(c), hp);
}

auto decode_binary(std::string_view bytes, const Hyperparams &hp) -> EmbeddingSet
{
	ByteReader in(bytes);
	auto head = in.str(4, "magic");
	if (std::memcmp(head.data(), magic, 4) != 0) {
		throw ParseError("malformed header: bad magic at byte offset 0", 0);
	}
	const auto v = in.u32("vocabulary size");
	const auto d = in.u32("dimension");
	// Each row needs at least 2 + 8*d bytes; reject absurd headers before allocating.
	const std::uint64_t min_row = 2 + 8ULL * d;
	if (static_cast<std::uint64_t>(v) * min_row > bytes.size()) {
		throw ParseError("truncated payload: header claims " + std::to_string(v) + " rows of dimension " +
				std::to_string(d) + " but file has " + std::to_string(bytes.size()) + " bytes",
			in.position());
	}
	Matrix w(v, d), c(v, d);
	std::vector<std::string> words;
	words.reserve(v);
	std::unordered_set<std::string_view> seen;
	for (std::uint32_t i = 0; i < v; ++i) {
		const auto at = in.position();
		const auto len = in.u16("word length");
		auto word = in.str(len, "word bytes");
		text::decode(word, at + 2);
		if (!seen.insert(word).second) {
			throw ParseError("duplicate word '" + std::string(word) + "' at byte offset " + std::to_string(at), at);
		}
		words.emplace_back(word);
		in.floats(w.row(i), "W row");
		in.floats(c.row(i), "C row");
	}
	if (in.position() != bytes.size()) {
		throw ParseError("trailing bytes after last row at byte offset " + std::to_string(in.position()),
			in.position());
	}
	return make_set(std::move(words), std::move(w), std::move(c), hp);
}

auto parse_count(std::string_view s, std::uint64_t line) -> std::uint32_t
{
	std::uint32_t v = 0;
	auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
	if (ec != std::errc() || ptr != s.data() + s.size()) {
		throw ParseError("malformed header at line " + std::to_string(line), line);
	}
	return v;
}

auto decode_text(std::string_view bytes, const Hyperparams &hp) -> EmbeddingSet
{
	std::uint64_t line_no = 0;
	std::size_t pos = 0;
	auto next_line = [&](std::string_view &line) {
		if (pos >= bytes.size()) {
			return false;
		}
		auto nl = bytes.find('\n', pos);
		if (nl == std::string_view::npos) {
			nl = bytes.size();
		}
		line = bytes.substr(pos, nl - pos);
		if (!line.empty() && line.back() == '\r') {
			line.remove_suffix(1);
		}
		pos = nl + 1;
		++line_no;
		return true;
	};

	std::string_view line;
	if (!next_line(line)) {
		throw ParseError("malformed header: empty file", 1);
	}
	auto head = text::split_ws(line);
	if (head.size() != 2) {
		throw ParseError("malformed header at line 1: expected 'V D'", 1);
	}
	const auto v = parse_count(head[0], 1);
	const auto d = parse_count(head[1], 1);
	if (static_cast<std::uint64_t>(v) * (2ULL * d + 2) > bytes.size() + 2) {
		throw ParseError("truncated payload: header claims V=" + std::to_string(v) + ", D=" + std::to_string(d) +
				" but file is too short",
			1);
	}

	Matrix w(v, d), c(v, d);
	std::vector<std::string> words;
	words.reserve(v);
	std::unordered_set<std::string_view> seen;
	for (std::uint32_t i = 0; i < v; ++i) {
		if (!next_line(line)) {
			throw ParseError("truncated payload: header claims V=" + std::to_string(v) + " but " +
					std::to_string(i) + " rows present (line " + std::to_string(line_no + 1) + ")",
				line_no + 1);
		}
		auto fields = text::split_ws(line);
		if (fields.size() != static_cast<std::size_t>(d) + 1) {
			throw ParseError("expected word and " + std::to_string(d) + " values at line " +
					std::to_string(line_no),
				line_no);
		}
		text::decode(fields[0], static_cast<std::uint64_t>(fields[0].data() - bytes.data()));
		if (!seen.insert(fields[0]).second) {
			throw ParseError("duplicate word '" + std::string(fields[0]) + "' at line " + std::to_string(line_no),
				line_no);
		}
		words.emplace_back(fields[0]);
		auto row = w.row(i);
		for (std::uint32_t k = 0; k < d; ++k) {
			auto f = fields[k + 1];
			auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), row[k]);
			if (ec != std::errc() || ptr != f.data() + f.size()) {
				throw ParseError("bad number '" + std::string(f) + "' at line " + std::to_string(line_no), line_no);
			}
		}
	}
	while (next_line(line)) {
		if (!text::split_ws(line).empty()) {
			throw ParseError("more rows than the header declares at line " + std::to_string(line_no), line_no);
		}
	}
	return make_set(std::move(words), std::move(w), std::move(c), hp);
}

} // namespace

void persist(const EmbeddingSet &set, const std::filesystem::path &path, StoreFormat format)
{
	const auto bytes = format == StoreFormat::binary ? encode_binary(set) : encode_text(set);
	std::ofstream out(path, std::ios::binary | std::ios::trunc);
	if (!out) {
		throw Error("cannot open '" + path.string() + "' for writing");
	}
	out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
	if (!out) {
		throw Error("write to '" + path.string() + "' failed");
	}
}

auto restore_from_bytes(std::string_view bytes, const Hyperparams &hp) -> EmbeddingSet
{
	if (bytes.size() >= 4 && std::memcmp(bytes.data(), magic, 4) == 0) {
		return decode_binary(bytes, hp);
	}
	return decode_text(bytes, hp);
}

auto restore(const std::filesystem::path &path, const Hyperparams &hp) -> EmbeddingSet
{
	std::ifstream in(path, std::ios::binary);
	if (!in) {
		throw Error("cannot open '" + path.string() + "' for reading");
	}
	std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
	return restore_from_bytes(bytes, hp);
}

} // namespace freqlens
