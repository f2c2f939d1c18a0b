#pragma once

// JSON forms of values, ledgers, runs and verification reports.  Ordinals are
// always written in canonical notation; objects have sorted keys, so equal
// runs serialize to identical bytes.

#include <string>

#include <nlohmann/json.hpp>

#include "ordred/formula.hpp"
#include "ordred/ledger.hpp"
#include "ordred/machine.hpp"
#include "ordred/reductions.hpp"

namespace ordred {

using json = nlohmann::json;

inline json code_to_json(const SetCode& c) {
	if (validate_code(c)) return render(decode_set(c));
	return summarize(c);
}

inline json value_to_json(const Value& v) {
	struct {
		json operator()(const Ordinal& a) const { return render(a); }
		json operator()(const SetCode& c) const { return code_to_json(c); }
		json params(const std::vector<SetCode>& ps) const {
			json out = json::array();
			for (const SetCode& p : ps) out.push_back(code_to_json(p));
			return out;
		}
		json operator()(const TruthQuery& q) const {
			return {{"formula", render_formula(formula_from_index(q.index))}, {"index", q.index.str()}, {"params", params(q.params)}};
		}
		json operator()(const SepQuery& q) const {
			return {{"set", code_to_json(q.set)},
			        {"formula", render_formula(formula_from_index(q.index))},
			        {"index", q.index.str()},
			        {"params", params(q.params)}};
		}
	} visit;
	return std::visit(visit, v);
}

inline json entry_to_json(const LedgerEntry& e) {
	json j{{"kind", e.kind == LedgerEntry::Kind::single ? "single" : "run"},
	       {"oracle", e.oracle},
	       {"time", render(e.time)},
	       {"from", e.from},
	       {"to", e.to},
	       {"order_type", render(e.order_type)},
	       {"response", e.response}};
	if (e.kind == LedgerEntry::Kind::single) j["query"] = e.query;
	return j;
}

inline json ledger_to_json(const QueryLedger& l) {
	json entries = json::array();
	for (const LedgerEntry& e : l.entries()) entries.push_back(entry_to_json(e));
	return entries;
}

/// program, input, status, output, halt_time, entries, total_order_type
inline json run_to_json(const std::string& program, const Value& input, const RunResult& r) {
	return {{"program", program},
	        {"input", value_to_json(input)},
	        {"status", to_string(r.status)},
	        {"output", r.output ? value_to_json(*r.output) : json(nullptr)},
	        {"halt_time", r.halt_time ? json(render(*r.halt_time)) : json(nullptr)},
	        {"entries", ledger_to_json(r.ledger)},
	        {"total_order_type", render(r.ledger.total_order_type())}};
}

/// Sum of the entries' order types, in ledger order.
inline Ordinal ledger_total_from_json(const json& run) {
	Ordinal total;
	for (const json& e : run.at("entries")) total = add(total, parse_ordinal(e.at("order_type").get<std::string>()));
	return total;
}

inline json instance_to_json(const std::string& program, const InstanceReport& i) {
	json j = run_to_json(program, i.input, i.result);
	j["expected"] = i.expected ? value_to_json(*i.expected) : json(nullptr);
	j["correct"] = i.correct;
	j["bound"] = i.bound ? json(i.bound->text()) : json(nullptr);
	j["within_bound"] = i.within_bound;
	j["replay_identical"] = i.replay_identical ? json(*i.replay_identical) : json(nullptr);
	if (i.bound && i.bound->fg) {
		j["bound_fg"] = render(*i.bound->fg);
		j["bound_gf"] = render(*i.bound->gf);
		j["product_verdict"] = product_verdict(i);
	}
	if (!i.error.empty()) j["error"] = i.error;
	j["passed"] = i.passed();
	return j;
}

inline json report_to_json(const Report& r) {
	json runs = json::array();
	for (const InstanceReport& i : r.instances) runs.push_back(instance_to_json(r.reduction, i));
	return {{"reduction", r.reduction}, {"bound_form", r.bound_form}, {"passed", r.passed()}, {"runs", runs}};
}

} // namespace ordred
