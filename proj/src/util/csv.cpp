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


#include "freqlens/csv.hpp"
#include "freqlens/error.hpp"

#include <charconv>
#include <cmath>
#include <string>

namespace freqlens::csv {

auto format_number(double x) -> std::string
{
	if (std::isnan(x)) {
		return "nan";
	}
	if (std::isinf(x)) {
		return x > 0 ? "inf" : "-inf";
	}
	char buf[64];
	auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
	return std::string(buf, end);
}

auto escape(std::string_view field) -> std::string
{
	if (field.find_first_of(",\"\n\r") == std::string_view::npos) {
		return std::string(field);
	}
	std::string out = "\"";
	for (char ch : field) {
		if (ch == '"') {
			out += '"';
		}
		out += ch;
	}
	out += '"';
	return out;
}

void write_row(std::ostream &out, const std::vector<std::string> &fields)
{
	for (std::size_t i = 0; i < fields.size(); ++i) {
		if (i > 0) {
			out << ',';
		}
		out << escape(fields[i]);
	}
	out << '\n';
}

auto split_line(std::string_view line, std::uint64_t line_no) -> std::vector<std::string>
{
	std::vector<std::string> out;
	std::string cur;
	bool quoted = false;
	bool field_start = true;
	for (std::size_t i = 0; i < line.size(); ++i) {
		const char ch = line[i];
		if (quoted) {
			if (ch == '"') {
				if (i + 1 < line.size() && line[i + 1] == '"') {
					cur += '"';
					++i;
				}
				else {
					quoted = false;
				}
			}
			else {
				cur += ch;
			}
			continue;
		}
		if (ch == '"' && field_start) {
			quoted = true;
			field_start = false;
		}
		else if (ch == ',') {
			out.push_back(std::move(cur));
			cur.clear();
			field_start = true;
		}
		else {
			cur += ch;
			field_start = false;
		}
	}
	if (quoted) {
		throw ParseError("line " + std::to_string(line_no) + ": unterminated quoted field", line_no);
	}
	out.push_back(std::move(cur));
	return out;
}

auto Table::column(std::string_view name) const -> std::size_t
{
	for (std::size_t i = 0; i < header.size(); ++i) {
		if (header[i] == name) {
			return i;
		}
	}
	throw ParseError("missing column '" + std::string(name) + "'", 1);
}

auto read_table(std::istream &in) -> Table
{
	Table t;
	std::string line;
	std::uint64_t line_no = 0;
	bool have_header = false;
	while (std::getline(in, line)) {
		++line_no;
		if (!line.empty() && line.back() == '\r') {
			line.pop_back();
		}
		if (line.find_first_not_of(" \t") == std::string::npos) {
			continue;
		}
		auto fields = split_line(line, line_no);
		if (!have_header) {
			t.header = std::move(fields);
			have_header = true;
			continue;
		}
		if (fields.size() != t.header.size()) {
			throw ParseError("line " + std::to_string(line_no) + ": expected " + std::to_string(t.header.size()) +
					" fields, found " + std::to_string(fields.size()),
				line_no);
		}
		t.rows.push_back(std::move(fields));
		t.lines.push_back(line_no);
	}
	if (!have_header) {
		throw ParseError("empty CSV input", 0);
	}
	return t;
}

auto parse_double(std::string_view field, std::uint64_t line_no, std::string_view what) -> double
{
	double x = 0.0;
	const char *first = field.data();
	const char *last = field.data() + field.size();
	if (!field.empty() && *first == '+') {
		++first;
	}
	auto [ptr, ec] = std::from_chars(first, last, x);
	if (field.empty() || ec != std::errc() || ptr != last) {
		throw ParseError("line " + std::to_string(line_no) + ": invalid " + std::string(what) + " '" +
				std::string(field) + "'",
			line_no);
	}
	return x;
}

} // namespace freqlens::csv
