#pragma once

// Values that flow through registers, oracle queries and oracle answers.

#include <string>
#include <variant>
#include <vector>

#include "ordred/ordinal.hpp"
#include "ordred/set_code.hpp"

namespace ordred {

/// (k, c(p)): formula index and the codes of its parameters.
struct TruthQuery {
	Natural index;
	std::vector<SetCode> params;
	friend bool operator==(const TruthQuery&, const TruthQuery&) = default;
};

/// (c(S), k, c(p)).
struct SepQuery {
	SetCode set;
	Natural index;
	std::vector<SetCode> params;
	friend bool operator==(const SepQuery&, const SepQuery&) = default;
};

using Value = std::variant<Ordinal, SetCode, TruthQuery, SepQuery>;

inline std::string summarize(const Value& v) {
	struct {
		std::string operator()(const Ordinal& a) const { return render(a); }
		std::string operator()(const SetCode& c) const {
			// small sets are shown literally, large ones by their shape
			if (c.domain <= 24) {
				if (auto err = code_error(c); !err) return render(decode_set(c));
			}
			return summarize(c);
		}
		std::string params(const std::vector<SetCode>& ps) const {
			std::string s = "(";
			for (std::size_t i = 0; i < ps.size(); ++i) s += (i ? "," : "") + (*this)(ps[i]);
			return s + ")";
		}
		std::string operator()(const TruthQuery& q) const { return "(k=" + q.index.str() + ", p=" + params(q.params) + ")"; }
		std::string operator()(const SepQuery& q) const {
			return "(S=" + (*this)(q.set) + ", k=" + q.index.str() + ", p=" + params(q.params) + ")";
		}
	} visitor;
	return std::visit(visitor, v);
}

inline const Ordinal& as_ordinal(const Value& v, const char* what = "value") {
	if (auto* a = std::get_if<Ordinal>(&v)) return *a;
	throw OracleError(std::string(what) + " is not an ordinal");
}

inline const SetCode& as_code(const Value& v, const char* what = "value") {
	if (auto* c = std::get_if<SetCode>(&v)) return *c;
	throw OracleError(std::string(what) + " is not a set code");
}

} // namespace ordred
