#pragma once

// The query ledger: the sequence of oracle calls of one run.  A transfinite
// scan cannot log each call, so it is stored as one Run entry holding the
// interval of queries, its order type and where the 1-answers fell.

#include <optional>
#include <string>
#include <vector>

#include "ordred/effectivizer.hpp"
#include "ordred/errors.hpp"
#include "ordred/ordinal.hpp"
#include "ordred/ranked_set.hpp"
#include "ordred/value.hpp"

namespace ordred {

struct LedgerEntry {
	enum class Kind { single, run } kind = Kind::single;
	std::string oracle;
	Ordinal time;        // clock value when the first call of the entry is made
	std::string from;    // single: the query; run: the first query
	std::string to;      // single: the query; run: first ordinal past the last query
	Ordinal order_type;  // 1 for singles
	std::string response;
	std::string query;   // singles only
	Value query_value;    // singles only
	Value response_value; // singles only
	RankedSet hits;      // runs only: run-local positions of the 1-answers

	/// Equality ignores `hits` (its descriptor is not a value); the response
	/// pattern and interval already pin down the answers a run observed.
	friend bool operator==(const LedgerEntry& a, const LedgerEntry& b) {
		return a.kind == b.kind && a.oracle == b.oracle && a.time == b.time && a.from == b.from && a.to == b.to &&
		       a.order_type == b.order_type && a.response == b.response && a.query == b.query && a.query_value == b.query_value &&
		       a.response_value == b.response_value;
	}
};

/// "all-0", "all-0-then-final-1" or "mixed".
inline std::string run_pattern(const RankedSet& hits, const Ordinal& length) {
	auto first = hits.least_at_or_above(Ordinal{});
	if (!first || *first >= length) return "all-0";
	if (length.is_successor()) {
		std::vector<Term> t = length.terms();
		if (--t.back().coefficient == 0) t.pop_back();
		if (*first == Ordinal::from_terms(std::move(t))) return "all-0-then-final-1";
	}
	return "mixed";
}

class QueryLedger {
public:
	const std::vector<LedgerEntry>& entries() const noexcept { return entries_; }
	std::size_t size() const noexcept { return entries_.size(); }
	bool empty() const noexcept { return entries_.empty(); }

	/// Clock value right after the last entry.
	Ordinal end_time() const {
		if (entries_.empty()) return Ordinal{};
		return add(entries_.back().time, entries_.back().order_type);
	}

	void add_single(const Ordinal& time, std::string oracle, const Value& query, Value response) {
		LedgerEntry e;
		e.kind = LedgerEntry::Kind::single;
		e.oracle = std::move(oracle);
		e.time = time;
		e.query = summarize(query);
		e.query_value = query;
		e.from = e.query;
		e.to = e.query;
		e.order_type = Ordinal(1);
		e.response = summarize(response);
		e.response_value = std::move(response);
		push(std::move(e));
	}

	/// Queries from `from` up to (excluding) `to`; `hits` are run-local.
	void add_run(const Ordinal& time, std::string oracle, const Ordinal& from, const Ordinal& to, RankedSet hits) {
		LedgerEntry e;
		e.kind = LedgerEntry::Kind::run;
		e.oracle = std::move(oracle);
		e.time = time;
		e.from = render(from);
		e.to = render(to);
		e.order_type = left_sub(from, to);
		if (e.order_type.is_zero()) throw ContractError("empty run");
		e.response = run_pattern(hits, e.order_type);
		e.hits = std::move(hits);
		push(std::move(e));
	}

	/// Appends another ledger's entries with their times moved by `shift`.
	void append_shifted(const QueryLedger& other, const Ordinal& shift) {
		for (LedgerEntry e : other.entries_) {
			e.time = add(shift, e.time);
			push(std::move(e));
		}
	}

	/// Ordinal sum of the entry lengths in sequence order.
	Ordinal total_order_type() const {
		Ordinal total;
		for (const LedgerEntry& e : entries_) total = add(total, e.order_type);
		return total;
	}

	/// The sequence of returned values, as a script that replays it.
	Script responses() const {
		Script s;
		for (const LedgerEntry& e : entries_) {
			if (e.kind == LedgerEntry::Kind::single) s.push_back(e.response_value);
			else s.push_back(BitRun{e.order_type, e.hits});
		}
		return s;
	}

	friend bool operator==(const QueryLedger&, const QueryLedger&) = default;

private:
	void push(LedgerEntry e) {
		if (e.time < end_time())
			throw ContractError("ledger entry at time " + render(e.time) + " overlaps the previous entry ending at " +
			                    render(end_time()));
		entries_.push_back(std::move(e));
	}

	std::vector<LedgerEntry> entries_;
};

inline Ordinal ledger_total_order_type(const QueryLedger& l) { return l.total_order_type(); }

} // namespace ordred
