#pragma once

// The reduction catalog as machine programs, a harness that checks outputs
// against references and ledgers against query bounds, and composition of
// reductions (each outer call expanded into a run of the inner program).

#include <algorithm>
#include <functional>
#include <future>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ordred/effectivizer.hpp"
#include "ordred/formula.hpp"
#include "ordred/machine.hpp"
#include "ordred/program.hpp"

namespace ordred {

// --- query bounds --------------------------------------------------------------

struct BoundValue {
	Ordinal value;
	bool strict = false; // the ledger must stay strictly below `value`
	// composed bounds: f.g and g.f, where f bounds the outer calls and g each
	// inner run; `value` is the larger of the two
	std::optional<Ordinal> fg, gf;

	bool admits(const Ordinal& total) const { return strict ? total < value : total <= value; }
	std::string text() const { return (strict ? "< " : "") + render(value); }
};

/// A bound f on the ledger order type, as a function of the input.
struct Bound {
	std::string form;
	std::function<BoundValue(const Value& input, const OracleEnv&)> eval;

	static Bound constant(std::uint64_t c) {
		return {std::to_string(c), [c](const Value&, const OracleEnv&) { return BoundValue{Ordinal(c)}; }};
	}
	static Bound successor_of_input() {
		return {"a+1", [](const Value& in, const OracleEnv&) { return BoundValue{successor(as_ordinal(in, "input"))}; }};
	}
	/// card(a)^+ + 1
	static Bound successor_cardinal_plus_one() {
		return {"card(a)^+ + 1", [](const Value& in, const OracleEnv& env) {
			        const CardinalStructure& cs = need_structure(env);
			        return BoundValue{successor(cs.next_card_of(cs.card_of(as_ordinal(in, "input"))))};
		        }};
	}
	static Bound finite() {
		return {"finite", [](const Value&, const OracleEnv&) { return BoundValue{Ordinal::omega(), true}; }};
	}
	/// Number of members of the input set (Sep queries and plain codes).
	static Bound set_size() {
		return {"|S|", [](const Value& in, const OracleEnv&) {
			        const SetCode& s = std::holds_alternative<SepQuery>(in) ? std::get<SepQuery>(in).set : as_code(in, "input");
			        return BoundValue{Ordinal(static_cast<std::uint64_t>(decode_members(s).size()))};
		        }};
	}
	/// leftsub(a, l) for the least limit of cardinals l > a: the flag trick's
	/// exact call count.
	static Bound gap_to_next_limit() {
		return {"leftsub(a, next limit)", [](const Value& in, const OracleEnv& env) {
			        const Ordinal& a = as_ordinal(in, "input");
			        return BoundValue{left_sub(a, need_structure(env).next_limit_of_cardinals_above(a))};
		        }};
	}

	static const CardinalStructure& need_structure(const OracleEnv& env) {
		if (!env.structure) throw ContractError("bound needs a cardinal structure");
		return *env.structure;
	}
};

// --- reduction specs -------------------------------------------------------------

struct ReductionSpec {
	std::string name;
	std::string source_type; // what the program computes
	std::string oracle_type; // what it calls
	Bound bound;
	std::function<Program(const OracleEnv&)> build;
	/// Binds the program's slots; by default each slot gets the effectivizer
	/// named by its type.
	std::function<Bindings(const OracleEnv&)> bind;
	/// The value the program must output; by default the source effectivizer's
	/// answer.
	std::function<Value(const Value& input, const OracleEnv&)> reference;
	bool composed = false;

	Program program(const OracleEnv& env) const { return build(env); }

	Bindings bindings(const OracleEnv& env) const {
		if (bind) return bind(env);
		Bindings b;
		for (const auto& [slot, type] : build(env).slots) b.emplace(slot, make_effectivizer(type, env));
		return b;
	}

	Value expected(const Value& input, const OracleEnv& env) const {
		if (reference) return reference(input, env);
		return make_effectivizer(source_type, env).answer(input);
	}
};

// --- approximators -------------------------------------------------------------------

/// Guesses a, then the non-cardinal truncations of a's normal form above
/// card(a), then card(a).  Satisfies the approximator contract for `cs`.
inline Approximator truncation_approximator(const CardinalStructure& cs) {
	return Approximator::from_list("truncations", [cs](const Value& in) {
		const Ordinal& a = as_ordinal(in, "input");
		const Ordinal c = cs.card_of(a);
		std::vector<Ordinal> out{a};
		std::vector<Term> t = a.terms();
		while (!t.empty()) {
			t.pop_back();
			Ordinal b = Ordinal::from_terms(t);
			if (b <= c) break;
			if (!cs.is_cardinal(b)) out.push_back(b);
		}
		if (out.back() != c) out.push_back(c);
		return out;
	});
}

// --- programs ----------------------------------------------------------------------

inline Program program_nextcard_via_deccard() {
	return {"nextcard_via_deccard", {}, {{"dec", "DecCard"}},
	        {ScanFirstHit{"dec", from_register("input"), false, "next"}, Halt{from_register("next")}}};
}

inline bool input_is_finite(const Registers& r) { return reg_ordinal(r, "input").is_finite(); }

/// Naive: query 0 .. a and keep the last cardinal.  Improved: finite inputs
/// are their own cardinality; otherwise query a itself, then everything below
/// it (order type 1 + a = a).
inline Program program_ordcard_scan(bool improved) {
	if (!improved)
		return {"ordcard_scan_naive", {}, {{"dec", "DecCard"}},
		        {ScanLastHitAtMost{"dec", from_register("input"), true, "card"}, Halt{from_register("card")}}};
	return {"ordcard_scan_improved", {}, {{"dec", "DecCard"}},
	        {If{input_is_finite, {Halt{from_register("input")}}, {}},
	         OracleCall{"dec", from_register("input"), "is_card"},
	         If{[](const Registers& r) { return reg(r, "is_card") == Value(Ordinal(1)); }, {Halt{from_register("input")}}, {}},
	         ScanLastHitAtMost{"dec", from_register("input"), false, "card"}, Halt{from_register("card")}}};
}

inline Program program_ordcard_guesscheck(Approximator a) {
	return {"ordcard_guesscheck", {}, {{"dec", "DecCard"}},
	        {GuessCheckLoop{"dec", std::move(a), from_register("input"), "card"}, Halt{from_register("card")}}};
}

/// Two flags, one starting at 0 and one at 1, toggled on every cardinal: they
/// agree again first at the least limit of cardinals above the start.
inline Program program_flagtrick() {
	return {"flagtrick", {}, {{"dec", "DecCard"}},
	        {ScanFlagToggleUntil{"dec", from_register("input"),
	                             {{"zero", false, LimitRule::lim_inf}, {"one", true, LimitRule::lim_inf}}, "halt"},
	         Halt{from_register("halt")}}};
}

enum class PotSearch { full, count_only, automatic };

inline constexpr std::size_t kFullSearchCap = 2;
inline constexpr std::size_t kCountOnlyCap = 4;

/// Kuratowski pair {{a}, {a, b}}.
inline HFSet hf_pair(const HFSet& a, const HFSet& b) { return HFSet::of({HFSet::of({a}), HFSet::of({a, b})}); }

inline std::optional<std::pair<HFSet, HFSet>> hf_unpair(const HFSet& p) {
	const auto& m = p.members();
	if (m.size() == 1 && m[0].size() == 1) return std::pair{m[0].members()[0], m[0].members()[0]};
	if (m.size() != 2) return std::nullopt;
	const HFSet& single = m[0].size() == 1 ? m[0] : m[1];
	const HFSet& both = m[0].size() == 1 ? m[1] : m[0];
	if (single.size() != 1 || both.size() != 2 || !both.contains(single.members()[0])) return std::nullopt;
	const HFSet& a = single.members()[0];
	return std::pair{a, both.members()[0] == a ? both.members()[1] : both.members()[0]};
}

/// The order type of `r` when it is a strict well-ordering of `field`.
inline std::optional<std::size_t> well_order_length(const HFSet& r, const std::vector<HFSet>& field) {
	const std::size_t n = field.size();
	std::vector<std::vector<bool>> less(n, std::vector<bool>(n, false));
	auto index = [&](const HFSet& x) -> std::optional<std::size_t> {
		auto it = std::lower_bound(field.begin(), field.end(), x);
		if (it == field.end() || *it != x) return std::nullopt;
		return static_cast<std::size_t>(it - field.begin());
	};
	for (const HFSet& p : r.members()) {
		auto ab = hf_unpair(p);
		if (!ab) return std::nullopt;
		auto i = index(ab->first), j = index(ab->second);
		if (!i || !j || *i == *j) return std::nullopt;
		less[*i][*j] = true;
	}
	for (std::size_t i = 0; i < n; ++i)
		for (std::size_t j = 0; j < n; ++j) {
			if (i != j && less[i][j] == less[j][i]) return std::nullopt; // total, antisymmetric
			for (std::size_t k = 0; k < n; ++k)
				if (less[i][j] && less[j][k] && !less[i][k]) return std::nullopt;
		}
	// a finite strict linear order is a well-ordering of length n
	return n;
}

/// PowerCard with two Pot calls: P = Pot(S); then Pot(P x P), whose members are
/// the binary relations on P; the least length of a well-ordering among them
/// is 2^|S|.  Count-only mode spends the second call on Pot(P) and reads the
/// answer off |P| instead of searching.
inline Program program_powercard_via_pot(PotSearch mode = PotSearch::automatic) {
	auto full = [mode](const Registers& r) {
		const std::size_t n = decode_set(as_code(reg(r, "input"), "input")).size();
		if (mode == PotSearch::full || (mode == PotSearch::automatic && n <= kFullSearchCap)) {
			if (n > kFullSearchCap) throw DomainError("full relation search is capped at |S| <= 2");
			return true;
		}
		if (n > kCountOnlyCap) throw DomainError("count-only mode is capped at |S| <= 4");
		return false;
	};
	return {"powercard_via_pot", {}, {{"pot", "Pot"}},
	        {ComputableSubroutine{"mode", [full](Registers& r) { r["full"] = Ordinal(full(r) ? 1 : 0); }},
	         OracleCall{"pot", from_register("input"), "P"},
	         ComputableSubroutine{"square", [](Registers& r) {
		                              const HFSet p = decode_set(as_code(reg(r, "P")));
		                              if (reg(r, "full") != Value(Ordinal(1))) {
			                              r["target"] = reg(r, "P");
			                              return;
		                              }
		                              std::vector<HFSet> pairs;
		                              for (const HFSet& a : p.members())
			                              for (const HFSet& b : p.members()) pairs.push_back(hf_pair(a, b));
		                              r["target"] = encode_hf(HFSet::of(std::move(pairs)));
	                              }},
	         OracleCall{"pot", from_register("target"), "R"},
	         ComputableSubroutine{"search", [](Registers& r) {
		                              const HFSet p = decode_set(as_code(reg(r, "P")));
		                              if (reg(r, "full") != Value(Ordinal(1))) {
			                              r["length"] = Ordinal(static_cast<std::uint64_t>(hf_card(p)));
			                              return;
		                              }
		                              std::optional<std::size_t> least;
		                              std::uint64_t count = 0;
		                              for (const HFSet& rel : decode_members(as_code(reg(r, "R")))) {
			                              if (auto n = well_order_length(rel, p.members())) {
				                              ++count;
				                              least = least ? std::min(*least, *n) : *n;
			                              }
		                              }
		                              if (!least) throw ContractError("no well-ordering among the relations");
		                              r["length"] = Ordinal(static_cast<std::uint64_t>(*least));
		                              r["well_orders"] = Ordinal(count);
	                              }},
	         Halt{from_register("length")}}};
}

/// Separation from truth: one truth query per member of S, in the code's
/// member order.  Inputs outside the truth level or with the wrong number of
/// parameters give the empty set without any query.
inline Program program_sep_via_truth(unsigned n) {
	const std::string truth = "TruthSigma" + std::to_string(n);
	auto applicable = [n](const Registers& r) {
		const auto& q = std::get<SepQuery>(reg(r, "input"));
		const Formula f = formula_from_index(q.index);
		return classify_level(f) <= n && f.param_count() == q.params.size() + 1;
	};
	auto members = [](const Registers& r) {
		std::vector<Value> out;
		for (const HFSet& x : decode_members(std::get<SepQuery>(reg(r, "input")).set)) out.emplace_back(encode_hf(x));
		return out;
	};
	auto query = [](const Registers& r) -> Value {
		const auto& q = std::get<SepQuery>(reg(r, "input"));
		std::vector<SetCode> params{as_code(reg(r, "x"))};
		params.insert(params.end(), q.params.begin(), q.params.end());
		return TruthQuery{q.index, std::move(params)};
	};
	auto keep = [](Registers& r) {
		std::vector<HFSet> kept = decode_set(as_code(reg(r, "kept"))).members();
		kept.push_back(decode_set(as_code(reg(r, "x"))));
		r["kept"] = encode_hf(HFSet::of(std::move(kept)));
	};
	return {"sep_via_truth", Ordinal(n), {{"truth", truth}},
	        {Assign{"kept", constant(encode_hf(HFSet{}))},
	         If{applicable,
	            {ForEach{"x", members,
	                     {OracleCall{"truth", query, "t"},
	                      If{[](const Registers& r) { return reg(r, "t") == Value(Ordinal(1)); },
	                         {ComputableSubroutine{"keep", keep}}, {}}}}},
	            {}},
	         Halt{from_register("kept")}}};
}

// --- auxiliary programs for composition ----------------------------------------------

/// Answers a truth query by forwarding it: one call.
inline Program program_truth_relay(unsigned n) {
	const std::string truth = "TruthSigma" + std::to_string(n);
	return {"truth_relay", Ordinal(n), {{"truth", truth}},
	        {OracleCall{"truth", from_register("input"), "t"}, Halt{from_register("t")}}};
}

/// Asks PowerCard three times and checks the answers agree.
inline Program program_powercard_triple() {
	Block body;
	for (const char* t : {"a", "b", "c"}) body.push_back(OracleCall{"card", from_register("input"), t});
	body.push_back(If{[](const Registers& r) { return reg(r, "a") != reg(r, "b") || reg(r, "b") != reg(r, "c"); },
	                  {ComputableSubroutine{"disagree", [](Registers&) { throw OracleError("PowerCard answers disagree"); }}},
	                  {}});
	body.push_back(Halt{from_register("a")});
	return {"powercard_triple", {}, {{"card", "PowerCard"}}, std::move(body)};
}

/// The second cardinal above the input, by two NextCard calls.
inline Program program_nextcard_twice() {
	return {"nextcard_twice", {}, {{"next", "NextCard"}},
	        {OracleCall{"next", from_register("input"), "a"}, OracleCall{"next", from_register("a"), "b"},
	         Halt{from_register("b")}}};
}

// --- catalog -----------------------------------------------------------------------

struct CatalogOptions {
	unsigned truth_level = 2;
	PotSearch pot_search = PotSearch::automatic;
	/// Approximator for ordcard_guesscheck; defaults to truncation_approximator.
	std::optional<Approximator> approximator;
};

inline const std::vector<std::string>& reduction_names() {
	static const std::vector<std::string> names{"nextcard_via_deccard", "ordcard_scan_naive", "ordcard_scan_improved",
	                                            "ordcard_guesscheck",   "flagtrick",          "powercard_via_pot",
	                                            "sep_via_truth"};
	return names;
}

inline const std::vector<std::string>& auxiliary_reduction_names() {
	static const std::vector<std::string> names{"truth_relay", "powercard_triple", "nextcard_twice"};
	return names;
}

inline ReductionSpec make_reduction(const std::string& name, const CatalogOptions& opt = {}) {
	auto fixed = [](Program p) { return [p](const OracleEnv&) { return p; }; };
	const std::string truth = "TruthSigma" + std::to_string(opt.truth_level);
	if (name == "nextcard_via_deccard")
		return {name, "NextCard", "DecCard", Bound::successor_cardinal_plus_one(), fixed(program_nextcard_via_deccard())};
	if (name == "ordcard_scan_naive")
		return {name, "OrdCard", "DecCard", Bound::successor_of_input(), fixed(program_ordcard_scan(false))};
	if (name == "ordcard_scan_improved")
		return {name, "OrdCard", "DecCard", Bound::successor_of_input(), fixed(program_ordcard_scan(true))};
	if (name == "ordcard_guesscheck")
		return {name, "OrdCard", "DecCard", Bound::finite(), [a = opt.approximator](const OracleEnv& env) {
			        return program_ordcard_guesscheck(a ? *a : truncation_approximator(Bound::need_structure(env)));
		        }};
	if (name == "flagtrick") {
		ReductionSpec s{name, "LimitOfCardinals", "DecCard", Bound::gap_to_next_limit(), fixed(program_flagtrick())};
		s.reference = [](const Value& in, const OracleEnv& env) -> Value {
			return Bound::need_structure(env).next_limit_of_cardinals_above(as_ordinal(in, "input"));
		};
		return s;
	}
	if (name == "powercard_via_pot")
		return {name, "PowerCard", "Pot", Bound::constant(2), fixed(program_powercard_via_pot(opt.pot_search))};
	if (name == "sep_via_truth")
		return {name, "SepSigma" + std::to_string(opt.truth_level), truth, Bound::set_size(),
		        fixed(program_sep_via_truth(opt.truth_level))};
	if (name == "truth_relay") return {name, truth, truth, Bound::constant(1), fixed(program_truth_relay(opt.truth_level))};
	if (name == "powercard_triple")
		return {name, "PowerCard", "PowerCard", Bound::constant(3), fixed(program_powercard_triple())};
	if (name == "nextcard_twice") {
		ReductionSpec s{name, "NextCardTwice", "NextCard", Bound::constant(2), fixed(program_nextcard_twice())};
		s.reference = [](const Value& in, const OracleEnv& env) -> Value {
			const CardinalStructure& cs = Bound::need_structure(env);
			return cs.next_card_of(cs.next_card_of(as_ordinal(in, "input")));
		};
		return s;
	}
	throw ContractError("unknown reduction '" + name + "'");
}

// --- composition -------------------------------------------------------------------

/// outer: Phi via Psi, inner: Psi via Gamma  =>  Phi via Gamma.  Every call the
/// outer program makes is answered by a run of the inner program.  The bound
/// reports both f.g and g.f, where f is the outer bound at the input and g is
/// the largest inner bound at any of the outer's queries.
inline ReductionSpec compose(const ReductionSpec& outer, const ReductionSpec& inner) {
	if (outer.oracle_type != inner.source_type)
		throw ContractError("cannot compose " + outer.name + " (calls " + outer.oracle_type + ") with " + inner.name +
		                    " (computes " + inner.source_type + ")");
	ReductionSpec s;
	s.name = outer.name + "." + inner.name;
	s.source_type = outer.source_type;
	s.oracle_type = inner.oracle_type;
	s.composed = true;
	s.build = outer.build;
	s.reference = [outer](const Value& in, const OracleEnv& env) { return outer.expected(in, env); };
	s.bind = [outer, inner](const OracleEnv& env) {
		auto sub = std::make_shared<const SubReduction>(SubReduction{inner.program(env), inner.bindings(env)});
		Bindings b;
		for (const auto& [slot, type] : outer.program(env).slots) b.emplace(slot, sub);
		return b;
	};
	s.bound = {"(" + outer.bound.form + ") x (" + inner.bound.form + ")",
	           [outer, inner](const Value& in, const OracleEnv& env) {
		           const Ordinal f = outer.bound.eval(in, env).value;
		           // the outer's queries, from a run against the real middle oracle
		           Bindings direct;
		           for (const auto& [slot, type] : outer.program(env).slots)
			           direct.emplace(slot, make_effectivizer(inner.source_type, env));
		           const RunResult r = run(outer.program(env), in, direct);
		           Ordinal g;
		           for (const LedgerEntry& e : r.ledger.entries()) {
			           if (e.kind != LedgerEntry::Kind::single)
				           throw ContractError("composition bound needs single outer calls");
			           g = std::max(g, inner.bound.eval(e.query_value, env).value);
		           }
		           BoundValue v{std::max(mul(f, g), mul(g, f))};
		           v.fg = mul(f, g);
		           v.gf = mul(g, f);
		           return v;
	           }};
	return s;
}

// --- verification ------------------------------------------------------------------

struct InstanceReport {
	Value input;
	RunStatus status = RunStatus::halted;
	std::optional<Value> output;
	std::optional<Value> expected;
	bool correct = false;
	Ordinal ledger_order_type;
	std::size_t ledger_entries = 0;
	std::optional<BoundValue> bound;
	bool within_bound = false;
	std::optional<bool> replay_identical; // not checked for composed specs
	std::string error;
	RunResult result;

	bool passed() const { return correct && within_bound && replay_identical.value_or(true) && error.empty(); }
};

struct Report {
	std::string reduction;
	std::string bound_form;
	std::vector<InstanceReport> instances;

	bool passed() const {
		return std::all_of(instances.begin(), instances.end(), [](const InstanceReport& i) { return i.passed(); });
	}
};

inline InstanceReport verify_instance(const ReductionSpec& spec, const OracleEnv& env, const Value& input,
                                      std::uint64_t budget = kDefaultBudget) {
	InstanceReport ir{input};
	try {
		const Program p = spec.program(env);
		ir.result = run(p, input, spec.bindings(env), budget);
		ir.status = ir.result.status;
		ir.output = ir.result.output;
		ir.ledger_order_type = ir.result.ledger.total_order_type();
		ir.ledger_entries = ir.result.ledger.size();
		if (!ir.result.halted()) return ir; // references need not exist
		ir.expected = spec.expected(input, env);
		ir.correct = ir.result.halted() && ir.output == ir.expected;
		ir.bound = spec.bound.eval(input, env);
		ir.within_bound = ir.bound->admits(ir.ledger_order_type);
		if (!spec.composed) ir.replay_identical = run_scripted(p, input, ir.result.responses(), budget) == ir.result;
	} catch (const std::exception& e) {
		ir.error = e.what();
	}
	return ir;
}

/// Runs every instance (concurrently when `parallel`) and collects a report in
/// instance order.
inline Report verify(const ReductionSpec& spec, const OracleEnv& env, const std::vector<Value>& instances,
                     std::uint64_t budget = kDefaultBudget, bool parallel = true) {
	Report rep{spec.name, spec.bound.form, {}};
	if (!parallel) {
		for (const Value& v : instances) rep.instances.push_back(verify_instance(spec, env, v, budget));
		return rep;
	}
	std::vector<std::future<InstanceReport>> jobs;
	for (const Value& v : instances)
		jobs.push_back(std::async(std::launch::async, [&spec, &env, v, budget] { return verify_instance(spec, env, v, budget); }));
	for (auto& j : jobs) rep.instances.push_back(j.get());
	return rep;
}

/// Which product bounds a composed run: "f.g", "g.f", "both" or "neither".
inline std::string product_verdict(const InstanceReport& ir) {
	if (!ir.bound || !ir.bound->fg) return "n/a";
	const bool fg = ir.ledger_order_type <= *ir.bound->fg;
	const bool gf = ir.ledger_order_type <= *ir.bound->gf;
	return fg && gf ? "both" : fg ? "f.g" : gf ? "g.f" : "neither";
}

inline std::string render_report(const Report& r) {
	std::string out = "reduction " + r.reduction + "  bound " + r.bound_form + "\n";
	out += "input | output | expected | ledger | bound | ok\n";
	for (const InstanceReport& i : r.instances) {
		out += summarize(i.input) + " | " + (i.output ? summarize(*i.output) : to_string(i.status)) + " | " +
		       (i.expected ? summarize(*i.expected) : "-") + " | " + render(i.ledger_order_type) + " | " +
		       (i.bound ? i.bound->text() : "-") + " | " + (i.passed() ? "pass" : "FAIL");
		if (i.bound && i.bound->fg) out += " (" + product_verdict(i) + ")";
		if (!i.error.empty()) out += " [" + i.error + "]";
		out += "\n";
	}
	out += r.passed() ? "all pass\n" : "FAILURES\n";
	return out;
}

} // namespace ordred
