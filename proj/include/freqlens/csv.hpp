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
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace freqlens::csv {

/// Shortest round-trip decimal form; "nan", "inf", "-inf" for non-finite values.
auto format_number(double x) -> std::string;

/// Quotes the field when it contains a comma, quote or newline.
auto escape(std::string_view field) -> std::string;

void write_row(std::ostream &out, const std::vector<std::string> &fields);

/// One record per line; double-quoted fields may contain commas and "" escapes.
/// Throws ParseError (1-based line number) on an unterminated quote.
auto split_line(std::string_view line, std::uint64_t line_no) -> std::vector<std::string>;

/// Header plus records. Blank lines are skipped; a trailing '\r' is dropped.
struct Table {
	std::vector<std::string> header;
	std::vector<std::vector<std::string>> rows;
	/// 1-based source line of each row.
	std::vector<std::uint64_t> lines;

	/// Throws ParseError when the column is absent.
	auto column(std::string_view name) const -> std::size_t;
};

/// Throws ParseError on an empty input or a row whose width differs from the header.
auto read_table(std::istream &in) -> Table;

/// Strict numeric parse of a whole field. Throws ParseError naming `what`.
auto parse_double(std::string_view field, std::uint64_t line_no, std::string_view what) -> double;

} // namespace freqlens::csv
