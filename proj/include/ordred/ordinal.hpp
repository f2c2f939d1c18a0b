#pragma once

// Ordinals below epsilon_0 in Cantor normal form.
//
// An ordinal is a finite sum  w^e1*c1 + w^e2*c2 + ... + w^ek*ck  with
// e1 > e2 > ... > ek (each itself an Ordinal) and ci >= 1.  Zero is the empty
// sum.  Every value has exactly one representation, so structural equality is
// ordinal equality.
//
// Canonical text form:
//
//   ordinal := "0" | term ("+" term)*
//   term    := nat | "w" | "w*" nat | "w^" factor | "w^" factor "*" nat
//   factor  := nat | "w" | "(" ordinal ")"
//
// render() prints finite exponents bare and every infinite exponent in
// parentheses, so w^w renders as "w^(w)".

#include <compare>
#include <limits>
#include <ostream>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "ordred/errors.hpp"

namespace ordred {

using Natural = boost::multiprecision::cpp_int;

struct Term;

class Ordinal {
public:
	Ordinal() = default;
	Ordinal(std::uint64_t n); // NOLINT: finite ordinals convert implicitly
	explicit Ordinal(const Natural& n);

	/// Builds from terms, rejecting anything that is not in normal form.
	static Ordinal from_terms(std::vector<Term> terms);
	static Ordinal omega();
	static Ordinal omega_power(Ordinal exponent, Natural coefficient = 1);

	const std::vector<Term>& terms() const noexcept { return terms_; }

	bool is_zero() const noexcept { return terms_.empty(); }
	bool is_finite() const;
	bool is_limit() const;
	bool is_successor() const;

	/// Value of a finite ordinal; throws ArithmeticError otherwise.
	Natural to_natural() const;
	/// Value of a finite ordinal that fits in 64 bits.
	std::uint64_t to_u64() const;

	friend bool operator==(const Ordinal& a, const Ordinal& b);
	friend std::strong_ordering operator<=>(const Ordinal& a, const Ordinal& b);

private:
	std::vector<Term> terms_;
};

struct Term {
	Ordinal exponent;
	Natural coefficient;

	friend bool operator==(const Term&, const Term&) = default;
};

enum class OrdinalKind { zero, successor, limit };

// --- construction and queries ------------------------------------------------

inline Ordinal::Ordinal(std::uint64_t n) {
	if (n != 0) terms_.push_back(Term{Ordinal{}, Natural(n)});
}

inline Ordinal::Ordinal(const Natural& n) {
	if (n < 0) throw ArithmeticError("negative natural");
	if (n != 0) terms_.push_back(Term{Ordinal{}, n});
}

inline Ordinal Ordinal::omega() { return omega_power(Ordinal(1)); }

inline Ordinal Ordinal::omega_power(Ordinal exponent, Natural coefficient) {
	if (coefficient < 1) throw ArithmeticError("term coefficient must be positive");
	Ordinal r;
	r.terms_.push_back(Term{std::move(exponent), std::move(coefficient)});
	return r;
}

inline bool operator==(const Ordinal& a, const Ordinal& b) { return a.terms_ == b.terms_; }

inline std::strong_ordering operator<=>(const Ordinal& a, const Ordinal& b) {
	const std::size_t n = std::min(a.terms_.size(), b.terms_.size());
	for (std::size_t i = 0; i < n; ++i) {
		const Term& x = a.terms_[i];
		const Term& y = b.terms_[i];
		if (auto c = x.exponent <=> y.exponent; c != 0) return c;
		if (x.coefficient != y.coefficient)
			return x.coefficient < y.coefficient ? std::strong_ordering::less : std::strong_ordering::greater;
	}
	return a.terms_.size() <=> b.terms_.size();
}

inline Ordinal Ordinal::from_terms(std::vector<Term> terms) {
	for (std::size_t i = 0; i < terms.size(); ++i) {
		if (terms[i].coefficient < 1) throw ArithmeticError("term coefficient must be positive");
		if (i > 0 && !(terms[i].exponent < terms[i - 1].exponent))
			throw ArithmeticError("exponents must be strictly decreasing");
	}
	Ordinal r;
	r.terms_ = std::move(terms);
	return r;
}

inline bool Ordinal::is_finite() const {
	return terms_.empty() || (terms_.size() == 1 && terms_[0].exponent.is_zero());
}

inline bool Ordinal::is_successor() const { return !terms_.empty() && terms_.back().exponent.is_zero(); }

inline bool Ordinal::is_limit() const { return !terms_.empty() && !terms_.back().exponent.is_zero(); }

inline Natural Ordinal::to_natural() const {
	if (!is_finite()) throw ArithmeticError("ordinal is not finite");
	return terms_.empty() ? Natural(0) : terms_[0].coefficient;
}

inline std::uint64_t Ordinal::to_u64() const {
	Natural n = to_natural();
	if (n > std::numeric_limits<std::uint64_t>::max()) throw ArithmeticError("natural does not fit in 64 bits");
	return n.convert_to<std::uint64_t>();
}

inline OrdinalKind classify(const Ordinal& a) {
	if (a.is_zero()) return OrdinalKind::zero;
	return a.is_successor() ? OrdinalKind::successor : OrdinalKind::limit;
}

inline Ordinal leading_exponent(const Ordinal& a) {
	if (a.is_zero()) throw ArithmeticError("leading_exponent of 0");
	return a.terms().front().exponent;
}

/// Coefficient of the w^0 term, or 0.
inline Natural finite_part(const Ordinal& a) {
	return a.is_successor() ? a.terms().back().coefficient : Natural(0);
}

/// a with its finite tail removed; the greatest limit-or-zero ordinal <= a.
inline Ordinal limit_part(const Ordinal& a) {
	std::vector<Term> t = a.terms();
	if (!t.empty() && t.back().exponent.is_zero()) t.pop_back();
	return Ordinal::from_terms(std::move(t));
}

/// Keeps only the terms whose exponent is >= e.  The result is the greatest
/// multiple of w^e that is <= a.
inline Ordinal truncate_below(const Ordinal& a, const Ordinal& e) {
	std::vector<Term> t;
	for (const Term& x : a.terms()) {
		if (x.exponent < e) break;
		t.push_back(x);
	}
	return Ordinal::from_terms(std::move(t));
}

// --- arithmetic --------------------------------------------------------------

inline Ordinal add(const Ordinal& a, const Ordinal& b) {
	if (b.is_zero()) return a;
	const Ordinal& lead = b.terms().front().exponent;
	std::vector<Term> out;
	out.reserve(a.terms().size() + b.terms().size());
	auto it = b.terms().begin();
	for (const Term& x : a.terms()) {
		if (x.exponent > lead) {
			out.push_back(x);
		} else {
			if (x.exponent == lead) {
				out.push_back(Term{lead, x.coefficient + it->coefficient});
				++it;
			}
			break;
		}
	}
	out.insert(out.end(), it, b.terms().end());
	return Ordinal::from_terms(std::move(out));
}

inline Ordinal successor(const Ordinal& a) { return add(a, Ordinal(1)); }

inline Ordinal mul(const Ordinal& a, const Ordinal& b) {
	if (a.is_zero() || b.is_zero()) return Ordinal{};
	const Ordinal& lead = a.terms().front().exponent;
	Ordinal result;
	for (const Term& t : b.terms()) {
		if (t.exponent.is_zero()) {
			std::vector<Term> piece = a.terms();
			piece.front().coefficient *= t.coefficient;
			result = add(result, Ordinal::from_terms(std::move(piece)));
		} else {
			result = add(result, Ordinal::omega_power(add(lead, t.exponent), t.coefficient));
		}
	}
	return result;
}

/// The unique g with a + g == b.  Requires a <= b.
inline Ordinal left_sub(const Ordinal& a, const Ordinal& b) {
	if (a > b) throw ArithmeticError("left_sub requires a <= b");
	const auto& x = a.terms();
	const auto& y = b.terms();
	std::size_t i = 0;
	while (i < x.size() && i < y.size() && x[i] == y[i]) ++i;
	if (i == y.size()) return Ordinal{};
	std::vector<Term> out;
	if (i < x.size() && x[i].exponent == y[i].exponent) {
		out.push_back(Term{y[i].exponent, y[i].coefficient - x[i].coefficient});
		++i;
	}
	out.insert(out.end(), y.begin() + static_cast<std::ptrdiff_t>(i), y.end());
	return Ordinal::from_terms(std::move(out));
}

namespace detail {

inline constexpr std::uint64_t kMaxFiniteExponent = 1u << 20;

// b = w*quotient + remainder with remainder finite.
inline std::pair<Ordinal, Natural> split_by_omega(const Ordinal& b) {
	std::vector<Term> q;
	for (const Term& t : b.terms()) {
		if (t.exponent.is_zero()) break;
		q.push_back(Term{left_sub(Ordinal(1), t.exponent), t.coefficient});
	}
	return {Ordinal::from_terms(std::move(q)), finite_part(b)};
}

inline Ordinal pow_finite_exponent(Ordinal base, Natural n) {
	if (n > kMaxFiniteExponent) throw ArithmeticError("exponent exceeds the notation size cap");
	Ordinal result(1);
	while (n > 0) {
		if ((n & 1) != 0) result = mul(result, base);
		n >>= 1;
		if (n > 0) base = mul(base, base);
	}
	return result;
}

} // namespace detail

inline Ordinal opow(const Ordinal& a, const Ordinal& b) {
	if (b.is_zero()) return Ordinal(1);
	if (a.is_zero()) return Ordinal{};
	if (a == Ordinal(1)) return Ordinal(1);
	auto [quotient, n] = detail::split_by_omega(b);
	if (a.is_finite()) {
		if (quotient.is_zero()) {
			if (n > detail::kMaxFiniteExponent) throw ArithmeticError("exponent exceeds the notation size cap");
			Natural r = boost::multiprecision::pow(a.to_natural(), n.convert_to<unsigned>());
			return Ordinal(r);
		}
		// k^(w*q + n) = w^q * k^n for finite k >= 2
		return mul(Ordinal::omega_power(quotient), detail::pow_finite_exponent(a, n));
	}
	Ordinal head;
	if (!quotient.is_zero()) {
		// a^(w*q) = w^(lead(a) * w * q)
		head = Ordinal::omega_power(mul(mul(leading_exponent(a), Ordinal::omega()), quotient));
	} else {
		head = Ordinal(1);
	}
	return mul(head, detail::pow_finite_exponent(a, n));
}

inline Ordinal operator+(const Ordinal& a, const Ordinal& b) { return add(a, b); }
inline Ordinal operator*(const Ordinal& a, const Ordinal& b) { return mul(a, b); }

// --- text --------------------------------------------------------------------

inline std::string render(const Ordinal& a) {
	if (a.is_zero()) return "0";
	std::string out;
	for (std::size_t i = 0; i < a.terms().size(); ++i) {
		const Term& t = a.terms()[i];
		if (i > 0) out += '+';
		if (t.exponent.is_zero()) {
			out += t.coefficient.str();
			continue;
		}
		out += 'w';
		if (t.exponent != Ordinal(1)) {
			out += '^';
			if (t.exponent.is_finite())
				out += t.exponent.to_natural().str();
			else
				out += '(' + render(t.exponent) + ')';
		}
		if (t.coefficient != 1) out += '*' + t.coefficient.str();
	}
	return out;
}

namespace detail {

class OrdinalParser {
public:
	explicit OrdinalParser(std::string_view text) : text_(text) {}

	Ordinal parse_all() {
		Ordinal r = ordinal();
		if (pos_ != text_.size()) fail("unexpected character '" + std::string(1, text_[pos_]) + "'");
		return r;
	}

private:
	std::string_view text_;
	std::size_t pos_ = 0;

	[[noreturn]] void fail(const std::string& what) const { throw ParseError(what, pos_); }

	bool peek(char c) const { return pos_ < text_.size() && text_[pos_] == c; }

	bool accept(char c) {
		if (!peek(c)) return false;
		++pos_;
		return true;
	}

	Natural nat() {
		const std::size_t start = pos_;
		while (pos_ < text_.size() && text_[pos_] >= '0' && text_[pos_] <= '9') ++pos_;
		if (start == pos_) fail("expected a natural number");
		if (text_[start] == '0') {
			pos_ = start;
			fail("natural must be a nonzero decimal without leading zeros");
		}
		return Natural(std::string(text_.substr(start, pos_ - start)));
	}

	Ordinal ordinal() {
		if (peek('0')) {
			++pos_;
			return Ordinal{};
		}
		std::vector<Term> terms;
		do {
			const std::size_t at = pos_;
			Term t = term();
			if (!terms.empty() && !(t.exponent < terms.back().exponent)) {
				pos_ = at;
				fail("terms must appear in strictly decreasing exponent order");
			}
			terms.push_back(std::move(t));
		} while (accept('+'));
		return Ordinal::from_terms(std::move(terms));
	}

	Term term() {
		if (!accept('w')) return Term{Ordinal{}, nat()};
		Ordinal exponent(1);
		if (accept('^')) {
			const std::size_t at = pos_;
			exponent = factor();
			if (exponent.is_zero()) {
				pos_ = at;
				fail("exponent must be nonzero");
			}
		}
		Natural coefficient = 1;
		if (accept('*')) coefficient = nat();
		return Term{std::move(exponent), std::move(coefficient)};
	}

	Ordinal factor() {
		if (accept('w')) return Ordinal::omega();
		if (accept('(')) {
			Ordinal r = ordinal();
			if (!accept(')')) fail("expected ')'");
			return r;
		}
		return Ordinal(nat());
	}
};

} // namespace detail

inline Ordinal parse_ordinal(std::string_view text) { return detail::OrdinalParser(text).parse_all(); }

inline std::ostream& operator<<(std::ostream& os, const Ordinal& a) { return os << render(a); }

namespace literals {
inline Ordinal operator""_ord(const char* s, std::size_t n) { return parse_ordinal(std::string_view(s, n)); }
} // namespace literals

} // namespace ordred
