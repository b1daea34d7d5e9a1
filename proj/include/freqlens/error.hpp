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
#include <stdexcept>
#include <string>

namespace freqlens {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
	using std::runtime_error::runtime_error;
};

/// Invalid training or analysis configuration (empty corpus, bad hyperparameter).
class ConfigError : public Error {
public:
	using Error::Error;
};

/// A numeric argument outside its documented range.
class RangeError : public Error {
public:
	using Error::Error;
};

/// Malformed input bytes. `offset` is a byte offset or a 1-based line number
/// depending on the format; `what()` says which.
class ParseError : public Error {
public:
	ParseError(const std::string &msg, std::uint64_t offset)
		: Error(msg), offset_(offset)
	{
	}
	auto offset() const -> std::uint64_t
	{
		return offset_;
	}

private:
	std::uint64_t offset_;
};

/// Invalid UTF-8 in text input.
class DecodeError : public ParseError {
public:
	using ParseError::ParseError;
};

class UnknownWordError : public Error {
public:
	explicit UnknownWordError(const std::string &word)
		: Error("unknown word: '" + word + "'"), word_(word)
	{
	}
	auto word() const -> const std::string &
	{
		return word_;
	}

private:
	std::string word_;
};

/// Cosine similarity requested for a zero vector.
class UndefinedSimilarityError : public Error {
public:
	using Error::Error;
};

class ShapeError : public Error {
public:
	using Error::Error;
};

class InsufficientDataError : public Error {
public:
	using Error::Error;
};

class SingularDesignError : public Error {
public:
	using Error::Error;
};

} // namespace freqlens
