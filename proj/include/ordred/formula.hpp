#pragma once

// Prenex ∈-formulas: a quantifier prefix over a quantifier-free matrix of
// atoms x∈y, x=y built with !, &, |.  Terms are bound variables or
// parameter slots #0, #1, ...
//
// Variables are identified by number.  The parser numbers them by binding
// position; names are kept for display only and do not take part in ==.
//
// Index scheme (frozen):  code(node) = 1 + cantor(tag, payload)
//
//   tag 0  E v . body     payload cantor(v, code(body))
//   tag 1  A v . body     payload cantor(v, code(body))
//   tag 2  l in r         payload cantor(term(l), term(r))
//   tag 3  l = r          payload cantor(term(l), term(r))
//   tag 4  !a             payload code(a)
//   tag 5  a & b          payload cantor(code(a), code(b))
//   tag 6  a | b          payload cantor(code(a), code(b))
//
// with term(variable i) = 2i and term(#j) = 2j+1.  Indices that do not
// decode to a well-formed formula (including 0) denote the false formula
// "E v0 (!(v0 = v0))".

#include <cctype>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "ordred/errors.hpp"
#include "ordred/hfset.hpp"
#include "ordred/pairing.hpp"

namespace ordred {

struct FTerm {
	enum class Kind { var, param } kind = Kind::var;
	unsigned index = 0;

	static FTerm var(unsigned i) { return {Kind::var, i}; }
	static FTerm param(unsigned j) { return {Kind::param, j}; }
	friend bool operator==(const FTerm&, const FTerm&) = default;
};

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
	enum class Op { in, eq, not_, and_, or_ } op = Op::in;
	FTerm l, r;    // atoms
	ExprPtr a, b;  // connectives

	static ExprPtr atom(Op op, FTerm l, FTerm r) {
		auto e = std::make_shared<Expr>();
		e->op = op;
		e->l = l;
		e->r = r;
		return e;
	}
	static ExprPtr in(FTerm l, FTerm r) { return atom(Op::in, l, r); }
	static ExprPtr eq(FTerm l, FTerm r) { return atom(Op::eq, l, r); }
	static ExprPtr not_(ExprPtr x) {
		auto e = std::make_shared<Expr>();
		e->op = Op::not_;
		e->a = std::move(x);
		return e;
	}
	static ExprPtr binary(Op op, ExprPtr x, ExprPtr y) {
		auto e = std::make_shared<Expr>();
		e->op = op;
		e->a = std::move(x);
		e->b = std::move(y);
		return e;
	}
	static ExprPtr and_(ExprPtr x, ExprPtr y) { return binary(Op::and_, std::move(x), std::move(y)); }
	static ExprPtr or_(ExprPtr x, ExprPtr y) { return binary(Op::or_, std::move(x), std::move(y)); }

	bool is_atom() const { return op == Op::in || op == Op::eq; }
};

inline bool same_expr(const ExprPtr& x, const ExprPtr& y) {
	if (x == y) return true;
	if (!x || !y || x->op != y->op) return false;
	if (x->is_atom()) return x->l == y->l && x->r == y->r;
	if (x->op == Expr::Op::not_) return same_expr(x->a, y->a);
	return same_expr(x->a, y->a) && same_expr(x->b, y->b);
}

struct Quantifier {
	bool exists = true;
	unsigned var = 0;
	friend bool operator==(const Quantifier&, const Quantifier&) = default;
};

class Formula {
public:
	/// Validates: prefix variables distinct, every matrix variable bound,
	/// parameter slots used contiguously from 0.  `names` maps variable ids to
	/// display names; missing ids render as v<id>.
	static Formula make(std::vector<Quantifier> prefix, ExprPtr matrix, std::map<unsigned, std::string> names = {}) {
		if (!matrix) throw DomainError("formula without a matrix");
		std::set<unsigned> bound;
		for (const Quantifier& q : prefix)
			if (!bound.insert(q.var).second) throw DomainError("variable v" + std::to_string(q.var) + " bound twice");
		std::set<unsigned> params;
		std::vector<const Expr*> todo{matrix.get()};
		while (!todo.empty()) {
			const Expr* e = todo.back();
			todo.pop_back();
			if (e->is_atom()) {
				for (const FTerm& t : {e->l, e->r}) {
					if (t.kind == FTerm::Kind::param) params.insert(t.index);
					else if (!bound.count(t.index)) throw DomainError("unbound variable v" + std::to_string(t.index));
				}
			} else {
				todo.push_back(e->a.get());
				if (e->b) todo.push_back(e->b.get());
			}
		}
		unsigned count = 0;
		for (unsigned p : params) {
			if (p != count) throw DomainError("parameter slots must be numbered contiguously from #0");
			++count;
		}
		Formula f;
		f.prefix_ = std::move(prefix);
		f.matrix_ = std::move(matrix);
		f.names_ = std::move(names);
		f.param_count_ = count;
		return f;
	}

	/// E v0 (!(v0 = v0))
	static Formula falsum() { return make({{true, 0}}, Expr::not_(Expr::eq(FTerm::var(0), FTerm::var(0)))); }

	const std::vector<Quantifier>& prefix() const { return prefix_; }
	const ExprPtr& matrix() const { return matrix_; }
	unsigned param_count() const { return param_count_; }

	std::string name_of(unsigned var) const {
		auto it = names_.find(var);
		return it != names_.end() ? it->second : "v" + std::to_string(var);
	}

	friend bool operator==(const Formula& x, const Formula& y) {
		return x.prefix_ == y.prefix_ && same_expr(x.matrix_, y.matrix_);
	}

private:
	Formula() = default;
	std::vector<Quantifier> prefix_;
	ExprPtr matrix_;
	std::map<unsigned, std::string> names_;
	unsigned param_count_ = 0;
};

// --- classification ----------------------------------------------------------

/// Least n with f in Σn: like quantifiers merge into blocks, and a leading
/// universal block counts as following an empty existential one.
inline unsigned classify_level(const Formula& f) {
	const auto& p = f.prefix();
	if (p.empty()) return 0;
	unsigned blocks = 1;
	for (std::size_t i = 1; i < p.size(); ++i)
		if (p[i].exists != p[i - 1].exists) ++blocks;
	return p.front().exists ? blocks : blocks + 1;
}

// --- text --------------------------------------------------------------------

namespace detail {

inline std::string render_term(const Formula& f, const FTerm& t) {
	return t.kind == FTerm::Kind::param ? "#" + std::to_string(t.index) : f.name_of(t.index);
}

inline std::string render_expr(const Formula& f, const ExprPtr& e) {
	using Op = Expr::Op;
	switch (e->op) {
	case Op::in: return render_term(f, e->l) + " in " + render_term(f, e->r);
	case Op::eq: return render_term(f, e->l) + " = " + render_term(f, e->r);
	case Op::not_: return "!(" + render_expr(f, e->a) + ")";
	case Op::and_:
	case Op::or_: {
		// left-associative; a child needs parentheses when it binds more loosely
		// (| inside &) or is the same operator on the right
		auto wrap = [&](const ExprPtr& c, bool right) {
			const bool paren = (e->op == Op::and_ && c->op == Op::or_) || (right && c->op == e->op);
			return paren ? "(" + render_expr(f, c) + ")" : render_expr(f, c);
		};
		return wrap(e->a, false) + (e->op == Op::and_ ? " & " : " | ") + wrap(e->b, true);
	}
	}
	return "?";
}

class FormulaParser {
public:
	explicit FormulaParser(std::string_view text) : s_(text) {}

	Formula parse() {
		std::vector<Quantifier> prefix;
		ExprPtr m = parse_formula(prefix);
		skip();
		if (pos_ != s_.size()) fail("unexpected trailing input");
		try {
			return Formula::make(std::move(prefix), std::move(m), names_);
		} catch (const DomainError& e) {
			throw ParseError(e.what(), pos_);
		}
	}

private:
	[[noreturn]] void fail(const std::string& what) const { throw ParseError(what, pos_); }

	void skip() {
		while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
	}

	bool eat(char c) {
		skip();
		if (pos_ < s_.size() && s_[pos_] == c) {
			++pos_;
			return true;
		}
		return false;
	}

	void expect(char c) {
		if (!eat(c)) fail(std::string("expected '") + c + "'");
	}

	static bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
	static bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

	std::optional<std::string> peek_ident(std::size_t at) const {
		if (at >= s_.size() || !ident_start(s_[at])) return std::nullopt;
		std::size_t e = at;
		while (e < s_.size() && ident_char(s_[e])) ++e;
		return std::string(s_.substr(at, e - at));
	}

	std::string ident() {
		skip();
		auto id = peek_ident(pos_);
		if (!id) fail("expected a variable name");
		pos_ += id->size();
		return *id;
	}

	// "E x" / "A x" at the current position?
	bool at_quantifier() {
		skip();
		auto word = peek_ident(pos_);
		if (!word || (*word != "E" && *word != "A")) return false;
		std::size_t p = pos_ + 1;
		while (p < s_.size() && std::isspace(static_cast<unsigned char>(s_[p]))) ++p;
		auto next = peek_ident(p);
		return p > pos_ + 1 && next && *next != "in";
	}

	ExprPtr parse_formula(std::vector<Quantifier>& prefix) {
		if (at_quantifier()) {
			const bool exists = s_[pos_] == 'E';
			++pos_;
			const std::size_t at = pos_;
			const std::string name = ident();
			if (scope_.count(name)) {
				pos_ = at;
				fail("variable '" + name + "' bound twice");
			}
			const unsigned id = static_cast<unsigned>(prefix.size());
			scope_[name] = id;
			names_[id] = name;
			prefix.push_back({exists, id});
			expect('(');
			ExprPtr body = parse_formula(prefix);
			expect(')');
			return body;
		}
		return parse_or();
	}

	ExprPtr parse_or() {
		ExprPtr x = parse_and();
		while (eat('|')) x = Expr::or_(x, parse_and());
		return x;
	}

	ExprPtr parse_and() {
		ExprPtr x = parse_unary();
		while (eat('&')) x = Expr::and_(x, parse_unary());
		return x;
	}

	ExprPtr parse_unary() {
		if (at_quantifier()) fail("quantifier inside a connective (formula is not prenex)");
		if (eat('!')) return Expr::not_(parse_unary());
		if (eat('(')) {
			ExprPtr x = parse_or();
			expect(')');
			return x;
		}
		FTerm l = parse_term();
		skip();
		if (eat('=')) return Expr::eq(l, parse_term());
		if (auto w = peek_ident(pos_); w && *w == "in") {
			pos_ += 2;
			return Expr::in(l, parse_term());
		}
		fail("expected 'in' or '='");
	}

	FTerm parse_term() {
		skip();
		if (eat('#')) {
			const std::size_t start = pos_;
			while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
			if (start == pos_) fail("expected a parameter number after '#'");
			if (pos_ - start > 6) fail("parameter number too large");
			return FTerm::param(static_cast<unsigned>(std::stoul(std::string(s_.substr(start, pos_ - start)))));
		}
		const std::size_t at = pos_;
		const std::string name = ident();
		auto it = scope_.find(name);
		if (it == scope_.end()) {
			pos_ = at;
			fail("unbound variable '" + name + "'");
		}
		return FTerm::var(it->second);
	}

	std::string_view s_;
	std::size_t pos_ = 0;
	std::map<std::string, unsigned> scope_;
	std::map<unsigned, std::string> names_;
};

} // namespace detail

inline Formula parse_formula(std::string_view text) { return detail::FormulaParser(text).parse(); }

inline std::string render_formula(const Formula& f) {
	std::string out;
	for (const Quantifier& q : f.prefix()) out += std::string(q.exists ? "E " : "A ") + f.name_of(q.var) + " (";
	out += detail::render_expr(f, f.matrix());
	out.append(f.prefix().size(), ')');
	return out;
}

// --- indexing ----------------------------------------------------------------

namespace detail {

inline Natural term_code(const FTerm& t) { return Natural(2) * t.index + (t.kind == FTerm::Kind::param ? 1 : 0); }

inline Natural node_code(unsigned tag, const Natural& payload) { return 1 + cantor_pair(Natural(tag), payload); }

inline Natural expr_index(const ExprPtr& e) {
	using Op = Expr::Op;
	switch (e->op) {
	case Op::in: return node_code(2, cantor_pair(term_code(e->l), term_code(e->r)));
	case Op::eq: return node_code(3, cantor_pair(term_code(e->l), term_code(e->r)));
	case Op::not_: return node_code(4, expr_index(e->a));
	case Op::and_: return node_code(5, cantor_pair(expr_index(e->a), expr_index(e->b)));
	case Op::or_: return node_code(6, cantor_pair(expr_index(e->a), expr_index(e->b)));
	}
	return 0;
}

struct IllFormed {};

inline FTerm decode_term(const Natural& t) {
	if (t > Natural(2) * 1000000) throw IllFormed{};
	const unsigned v = t.convert_to<unsigned>();
	return v % 2 ? FTerm::param(v / 2) : FTerm::var(v / 2);
}

// Splits k = 1 + cantor(tag, payload).
inline std::pair<unsigned, Natural> split_node(const Natural& k) {
	if (k == 0) throw IllFormed{};
	auto [tag, payload] = cantor_unpair(k - 1);
	if (tag > 6) throw IllFormed{};
	return {tag.convert_to<unsigned>(), payload};
}

inline ExprPtr decode_expr(const Natural& k) {
	auto [tag, payload] = split_node(k);
	switch (tag) {
	case 2:
	case 3: {
		auto [l, r] = cantor_unpair(payload);
		return Expr::atom(tag == 2 ? Expr::Op::in : Expr::Op::eq, decode_term(l), decode_term(r));
	}
	case 4: return Expr::not_(decode_expr(payload));
	case 5:
	case 6: {
		auto [l, r] = cantor_unpair(payload);
		return Expr::binary(tag == 5 ? Expr::Op::and_ : Expr::Op::or_, decode_expr(l), decode_expr(r));
	}
	default: throw IllFormed{}; // quantifier below a connective
	}
}

} // namespace detail

inline Natural formula_index(const Formula& f) {
	Natural k = detail::expr_index(f.matrix());
	for (auto it = f.prefix().rbegin(); it != f.prefix().rend(); ++it)
		k = detail::node_code(it->exists ? 0 : 1, cantor_pair(Natural(it->var), k));
	return k;
}

inline Formula formula_from_index(const Natural& k) {
	try {
		std::vector<Quantifier> prefix;
		Natural cur = k;
		for (;;) {
			auto [tag, payload] = detail::split_node(cur);
			if (tag > 1) break;
			auto [v, body] = cantor_unpair(payload);
			if (v > 1000000) throw detail::IllFormed{};
			prefix.push_back({tag == 0, v.convert_to<unsigned>()});
			cur = body;
		}
		return Formula::make(std::move(prefix), detail::decode_expr(cur));
	} catch (const detail::IllFormed&) {
	} catch (const DomainError&) {
	}
	return Formula::falsum();
}

// --- evaluation --------------------------------------------------------------

inline constexpr unsigned kMaxTruthRank = 5;

struct TruthEnv {
	unsigned rank = 0;            // quantifiers range over V_rank
	std::vector<HFSet> params;
};

/// |V_r| for r <= 5.
inline std::uint32_t universe_size(unsigned r) {
	static constexpr std::uint32_t sizes[] = {0, 1, 2, 4, 16, 65536};
	if (r > kMaxTruthRank) throw DomainError("universe rank " + std::to_string(r) + " exceeds the cap of 5");
	return sizes[r];
}

namespace detail {

// Sets of rank < 6 are identified with their Ackermann codes; x ∈ y iff bit x of y.
struct Evaluator {
	const Formula& f;
	std::uint32_t size;
	std::vector<std::uint32_t> params;
	std::vector<std::uint32_t> vars;

	std::uint32_t value(const FTerm& t) const { return t.kind == FTerm::Kind::param ? params[t.index] : vars[t.index]; }

	static bool member(std::uint32_t x, std::uint32_t y) { return x < 32 && ((y >> x) & 1u); }

	bool matrix(const Expr* e) const {
		using Op = Expr::Op;
		switch (e->op) {
		case Op::in: return member(value(e->l), value(e->r));
		case Op::eq: return value(e->l) == value(e->r);
		case Op::not_: return !matrix(e->a.get());
		case Op::and_: return matrix(e->a.get()) && matrix(e->b.get());
		case Op::or_: return matrix(e->a.get()) || matrix(e->b.get());
		}
		return false;
	}

	bool run(std::size_t i) {
		if (i == f.prefix().size()) return matrix(f.matrix().get());
		const Quantifier& q = f.prefix()[i];
		for (std::uint32_t x = 0; x < size; ++x) {
			vars[q.var] = x;
			if (run(i + 1) == q.exists) return q.exists;
		}
		return !q.exists;
	}
};

} // namespace detail

/// Truth of f at env.params, quantifiers ranging over V_rank.
inline bool eval_formula(const Formula& f, const TruthEnv& env) {
	const std::uint32_t size = universe_size(env.rank);
	if (env.params.size() < f.param_count())
		throw DomainError("formula has " + std::to_string(f.param_count()) + " parameters, environment supplies " +
		                  std::to_string(env.params.size()));
	detail::Evaluator ev{f, size, {}, {}};
	for (const HFSet& p : env.params) {
		if (p.rank() >= env.rank) throw DomainError("parameter " + render(p) + " is not in V_" + std::to_string(env.rank));
		ev.params.push_back(static_cast<std::uint32_t>(*ackermann_code(p)));
	}
	unsigned max_var = 0;
	for (const Quantifier& q : f.prefix()) max_var = std::max(max_var, q.var);
	ev.vars.assign(max_var + 1, 0);
	return ev.run(0);
}

} // namespace ordred
