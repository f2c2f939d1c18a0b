#pragma once

// Infix ordinal expressions for the calculator:
//
//   expr    := term ('+' term)*
//   term    := factor ('*' factor)*
//   factor  := primary ('^' factor)?          (right associative)
//   primary := natural | 'w' | '(' expr ')' | 'leftsub' '(' expr ',' expr ')'
//
// Whitespace is ignored.  Canonical normal forms such as w^(w)*2+1 are valid
// expressions and evaluate to themselves.

#include <cctype>
#include <string>
#include <string_view>

#include "ordred/errors.hpp"
#include "ordred/ordinal.hpp"

namespace ordred {

namespace detail {

class ExprParser {
public:
	explicit ExprParser(std::string_view text) : t_(text) {}

	Ordinal parse_all() {
		Ordinal v = expr();
		skip();
		if (pos_ != t_.size()) fail("unexpected '" + std::string(1, t_[pos_]) + "'");
		return v;
	}

private:
	Ordinal expr() {
		Ordinal v = term();
		while (eat('+')) v = add(v, term());
		return v;
	}

	Ordinal term() {
		Ordinal v = factor();
		while (eat('*')) v = mul(v, factor());
		return v;
	}

	Ordinal factor() {
		Ordinal base = primary();
		if (eat('^')) return opow(base, factor());
		return base;
	}

	Ordinal primary() {
		skip();
		if (pos_ >= t_.size()) fail("expression ends early");
		const char c = t_[pos_];
		if (std::isdigit(static_cast<unsigned char>(c))) {
			std::size_t start = pos_;
			while (pos_ < t_.size() && std::isdigit(static_cast<unsigned char>(t_[pos_]))) ++pos_;
			return Ordinal(Natural(std::string(t_.substr(start, pos_ - start))));
		}
		if (t_.substr(pos_, 7) == "leftsub") {
			pos_ += 7;
			expect('(');
			Ordinal a = expr();
			expect(',');
			Ordinal b = expr();
			expect(')');
			return left_sub(a, b);
		}
		if (c == 'w') {
			++pos_;
			return Ordinal::omega();
		}
		if (eat('(')) {
			Ordinal v = expr();
			expect(')');
			return v;
		}
		fail("unexpected '" + std::string(1, c) + "'");
	}

	void skip() {
		while (pos_ < t_.size() && std::isspace(static_cast<unsigned char>(t_[pos_]))) ++pos_;
	}

	bool eat(char c) {
		skip();
		if (pos_ < t_.size() && t_[pos_] == c) {
			++pos_;
			return true;
		}
		return false;
	}

	void expect(char c) {
		if (!eat(c)) fail(std::string("expected '") + c + "'");
	}

	[[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }

	std::string_view t_;
	std::size_t pos_ = 0;
};

} // namespace detail

inline Ordinal eval_ordinal_expr(std::string_view text) { return detail::ExprParser(text).parse_all(); }

} // namespace ordred
