#pragma once

// The machine: runs a Program against oracle bindings, keeping an ordinal
// clock and the query ledger.
//
// Costs: an oracle call takes one time step, a scan takes the order type of
// the queries it makes, everything else is free.  Every statement and every
// scan event also uses one unit of the event budget.
//
// Scans over a ranked oracle are evaluated through its RankedSet, seen from
// the first query of the scan (query coordinates for DecCard, call
// coordinates for a script).  A scan that would run past every point below
// the structure's bound diverges; over a script it exhausts the script.

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>

#include "ordred/effectivizer.hpp"
#include "ordred/ledger.hpp"
#include "ordred/program.hpp"

namespace ordred {

struct SubReduction;

/// A slot is answered by an oracle or by running another program.
using Binding = std::variant<Effectivizer, std::shared_ptr<const SubReduction>>;
using Bindings = std::map<std::string, Binding>;

struct SubReduction {
	Program program;
	Bindings bindings;
};

enum class RunStatus { halted, diverged, budget_exceeded, script_exhausted };

inline std::string to_string(RunStatus s) {
	switch (s) {
	case RunStatus::halted: return "halted";
	case RunStatus::diverged: return "diverged";
	case RunStatus::budget_exceeded: return "budget-exceeded";
	case RunStatus::script_exhausted: return "script-exhausted";
	}
	return "?";
}

struct RunResult {
	RunStatus status = RunStatus::halted;
	std::optional<Value> output;     // present iff halted
	std::optional<Ordinal> halt_time; // present iff halted
	QueryLedger ledger;
	std::uint64_t events = 0;
	std::string note; // why a run stopped without halting

	bool halted() const { return status == RunStatus::halted; }
	/// The answers the oracles gave, replayable with run_scripted.
	Script responses() const { return ledger.responses(); }
	std::string halt_time_text() const { return halt_time ? render(*halt_time) : to_string(status); }

	friend bool operator==(const RunResult& a, const RunResult& b) {
		return a.status == b.status && a.output == b.output && a.halt_time == b.halt_time && a.ledger == b.ledger;
	}
};

inline constexpr std::uint64_t kDefaultBudget = 1'000'000;

namespace detail {

struct HaltSignal {
	Value output;
};

struct StopSignal {
	RunStatus status;
	std::string note;
};

class Machine {
public:
	Machine(const Program& p, const Bindings& b, std::uint64_t budget) : p_(p), b_(b), budget_(budget) {
		if (budget == 0) throw ContractError("budget must be positive");
		for (const auto& [slot, type] : p_.slots) {
			auto it = b_.find(slot);
			if (it == b_.end()) throw ContractError("oracle slot '" + slot + "' of " + p_.name + " is not bound");
			if (auto* e = std::get_if<Effectivizer>(&it->second))
				if (e->kind() != OracleKind::scripted && e->name() != type)
					throw ContractError("slot '" + slot + "' expects " + type + ", bound to " + e->name());
		}
	}

	RunResult run(const Value& input) {
		RunResult r;
		regs_[p_.input_register] = input;
		try {
			exec(p_.body);
			throw ContractError("program " + p_.name + " ended without halting");
		} catch (const HaltSignal& h) {
			r.status = RunStatus::halted;
			r.output = h.output;
			r.halt_time = clock_;
		} catch (const StopSignal& s) {
			r.status = s.status;
			r.note = s.note;
		}
		r.ledger = std::move(ledger_);
		r.events = events_;
		return r;
	}

private:
	void tick() {
		if (++events_ > budget_) throw StopSignal{RunStatus::budget_exceeded, "event budget of " + std::to_string(budget_) + " used up"};
	}

	void exec(const Block& block) {
		for (const Stmt& s : block) std::visit([this](const auto& x) { step(x); }, s.v);
	}

	const Binding& binding(const std::string& slot) const {
		auto it = b_.find(slot);
		if (it == b_.end()) throw ContractError("oracle slot '" + slot + "' is not bound");
		return it->second;
	}

	const Effectivizer& ranked(const std::string& slot) const {
		const auto* e = std::get_if<Effectivizer>(&binding(slot));
		if (!e) throw ContractError("scan over slot '" + slot + "' needs a ranked oracle, not a sub-reduction");
		if (!e->ranked()) throw OracleError("scan over " + e->name() + ", which is not a ranked (0/1) oracle");
		return *e;
	}

	// The hits of a scan starting at query q0, in scan-local coordinates.
	struct View {
		RankedSet hits;
		std::optional<Ordinal> remaining; // calls left in a script
		std::string oracle;
	};

	View view(const std::string& slot, const Ordinal& q0) const {
		const Effectivizer& e = ranked(slot);
		if (e.indexed_by_call()) {
			const Ordinal c = ledger_.total_order_type();
			const Ordinal& len = e.script_length();
			return {RankedSet::window(e.hits(), c), c < len ? left_sub(c, len) : Ordinal{}, e.name()};
		}
		return {RankedSet::window(e.hits(), q0), std::nullopt, e.name()};
	}

	[[noreturn]] static void no_hit(const View& v, const std::string& what) {
		if (v.remaining) throw StopSignal{RunStatus::script_exhausted, "script exhausted during " + what};
		throw StopSignal{RunStatus::diverged, what + " finds no satisfying point below the bound"};
	}

	void record_run(const View& v, const Ordinal& q0, const Ordinal& length) {
		if (length.is_zero()) return;
		ledger_.add_run(clock_, v.oracle, q0, add(q0, length), v.hits);
		clock_ = add(clock_, length);
	}

	Value call(const std::string& slot, const Value& q) {
		const Binding& b = binding(slot);
		if (const auto* e = std::get_if<Effectivizer>(&b)) {
			Value resp;
			try {
				resp = e->answer(q, ledger_.total_order_type());
			} catch (const ScriptExhausted& x) {
				throw StopSignal{RunStatus::script_exhausted, x.what()};
			}
			ledger_.add_single(clock_, e->name(), q, resp);
			clock_ = successor(clock_);
			return resp;
		}
		// a sub-reduction: run it and splice its calls into this ledger
		const SubReduction& sub = *std::get<std::shared_ptr<const SubReduction>>(b);
		Machine inner(sub.program, sub.bindings, budget_ - std::min(budget_, events_));
		RunResult r = inner.run(q);
		events_ += r.events;
		ledger_.append_shifted(r.ledger, clock_);
		if (!r.halted()) throw StopSignal{r.status, sub.program.name + ": " + r.note};
		clock_ = add(clock_, *r.halt_time);
		return *r.output;
	}

	void step(const Assign& s) {
		tick();
		regs_[s.target] = s.value(regs_);
	}

	void step(const OracleCall& s) {
		tick();
		regs_[s.target] = call(s.slot, s.query(regs_));
	}

	void step(const ScanFirstHit& s) {
		tick();
		const Ordinal start = as_ordinal(s.start(regs_), "scan start");
		const Ordinal q0 = s.inclusive ? start : successor(start);
		const View v = view(s.slot, q0);
		auto h = v.hits.least_at_or_above(Ordinal{});
		if (!h) no_hit(v, "first-hit scan from " + render(q0));
		record_run(v, q0, successor(*h));
		regs_[s.target] = add(q0, *h);
	}

	void step(const ScanLastHitAtMost& s) {
		tick();
		const Ordinal bound = as_ordinal(s.bound(regs_), "scan bound");
		const Ordinal length = s.inclusive ? successor(bound) : bound;
		const View v = view(s.slot, Ordinal{});
		if (v.remaining && length > *v.remaining) no_hit(v, "last-hit scan up to " + render(bound));
		Below g = v.hits.greatest_below(length);
		if (g.kind == Below::Kind::unbounded)
			throw ContractError("last-hit register is undetermined: hits are cofinal below " + render(length));
		record_run(v, Ordinal{}, length);
		// the last-hit register starts at 0
		regs_[s.target] = g.kind == Below::Kind::found ? g.value : Ordinal{};
	}

	void step(const ScanFlagToggleUntil& s) {
		tick();
		const Ordinal start = as_ordinal(s.start(regs_), "scan start");
		bool any0 = false;
		bool any1 = false;
		for (const Flag& f : s.flags) (f.initial ? any1 : any0) = true;
		if (!any1) { // every flag already reads 0
			regs_[s.target] = start;
			return;
		}
		const View v = view(s.slot, start);
		Ordinal exit;
		if (!any0) {
			// all flags read 1 until the first hit turns them all to 0
			auto h = v.hits.least_at_or_above(Ordinal{});
			if (!h) no_hit(v, "flag scan from " + render(start));
			tick();
			exit = successor(*h);
		} else {
			// flags disagree at every successor stage; they agree (on 0) first at
			// the least limit of hits
			for (const Flag& f : s.flags)
				if (f.rule != LimitRule::lim_inf)
					throw ContractError("flag '" + f.name + "' is read at a limit but declares no limit rule");
			auto l = v.hits.next_limit_above(Ordinal{});
			if (!l) no_hit(v, "flag scan from " + render(start));
			tick();
			tick();
			exit = *l;
		}
		record_run(v, start, exit);
		regs_[s.target] = add(start, exit);
	}

	void step(const GuessCheckLoop& s) {
		tick();
		auto stream = s.approximator.start(s.input(regs_));
		std::optional<Ordinal> prev;
		for (;;) {
			tick();
			auto g = stream();
			if (!g) throw StopSignal{RunStatus::diverged, "approximator " + s.approximator.name + " ran out of guesses"};
			if (prev && *g == *prev) continue;
			if (prev && *g > *prev)
				throw ContractError("approximator " + s.approximator.name + " is not decreasing: " + render(*prev) +
				                    " then " + render(*g));
			prev = g;
			if (call(s.slot, *g) == Value(Ordinal(1))) {
				regs_[s.target] = *g;
				return;
			}
		}
	}

	void step(const ComputableSubroutine& s) {
		tick();
		s.body(regs_);
	}

	void step(const If& s) {
		tick();
		exec(s.condition(regs_) ? s.then_block : s.else_block);
	}

	void step(const ForEach& s) {
		tick();
		for (Value& item : s.items(regs_)) {
			tick();
			regs_[s.var] = std::move(item);
			exec(s.body);
		}
	}

	void step(const Halt& s) {
		tick();
		throw HaltSignal{s.output(regs_)};
	}

	const Program& p_;
	const Bindings& b_;
	std::uint64_t budget_;
	std::uint64_t events_ = 0;
	Registers regs_;
	Ordinal clock_;
	QueryLedger ledger_;
};

} // namespace detail

inline RunResult run(const Program& p, const Value& input, const Bindings& bindings,
                     std::uint64_t budget = kDefaultBudget) {
	return detail::Machine(p, bindings, budget).run(input);
}

/// Runs `p` with every slot answered from `script`, in call order.
inline RunResult run_scripted(const Program& p, const Value& input, const Script& script,
                              std::uint64_t budget = kDefaultBudget) {
	Bindings b;
	for (const auto& [slot, type] : p.slots) b.emplace(slot, Effectivizer::scripted(script, type));
	return run(p, input, b, budget);
}

} // namespace ordred
