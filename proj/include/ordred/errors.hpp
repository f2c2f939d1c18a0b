#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ordred {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
	using std::runtime_error::runtime_error;
};

/// Malformed ordinal, formula, or set literal.  `position` is a byte offset
/// into the parsed text.
class ParseError : public Error {
public:
	ParseError(const std::string& what, std::size_t position)
		: Error(what + " at position " + std::to_string(position)), position_(position) {}

	std::size_t position() const noexcept { return position_; }

private:
	std::size_t position_;
};

/// Arithmetic outside the domain of an operation (left subtraction with
/// a > b, notation size caps, ...).
class ArithmeticError : public Error {
public:
	using Error::Error;
};

/// A query that falls outside a structure's bound or a size cap.
class DomainError : public Error {
public:
	using Error::Error;
};

/// A query whose shape does not match the oracle it is sent to.
class OracleError : public Error {
public:
	using Error::Error;
};

/// Violation of a declared contract (approximator monotonicity, program
/// well-formedness, reduction type matching).
class ContractError : public Error {
public:
	using Error::Error;
};

/// A scripted oracle was called more often than its script allows.
class ScriptExhausted : public Error {
public:
	using Error::Error;
};

} // namespace ordred
