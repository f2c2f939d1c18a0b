#pragma once

// Structured programs for the transfinite abstract machine.  A program is a
// block of statements over named registers; oracle access goes through named
// slots.  Besides plain oracle calls there are four scan patterns whose
// transfinite runs the machine evaluates in closed form:
//
//   P1 ScanFirstHit        query start, start+1, ... until the first 1
//   P2 ScanLastHitAtMost   query 0, 1, ..., bound and keep the last 1
//   P3 ScanFlagToggle      query from start, toggling every flag at each 1,
//                          until all flags read 0 (lim-inf at limits)
//   P4 GuessCheckLoop      query each distinct guess of an approximator
//                          until one is answered 1
//
// Expressions are host functions of the registers; they cost nothing.

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ordred/errors.hpp"
#include "ordred/ordinal.hpp"
#include "ordred/value.hpp"

namespace ordred {

using Registers = std::map<std::string, Value>;
using ValueFn = std::function<Value(const Registers&)>;
using CondFn = std::function<bool(const Registers&)>;

inline const Value& reg(const Registers& r, const std::string& name) {
	auto it = r.find(name);
	if (it == r.end()) throw ContractError("register '" + name + "' read before assignment");
	return it->second;
}

inline const Ordinal& reg_ordinal(const Registers& r, const std::string& name) {
	return as_ordinal(reg(r, name), ("register " + name).c_str());
}

inline ValueFn from_register(std::string name) {
	return [name = std::move(name)](const Registers& r) { return reg(r, name); };
}

inline ValueFn constant(Value v) {
	return [v = std::move(v)](const Registers&) { return v; };
}

enum class LimitRule { lim_inf, unspecified };

struct Flag {
	std::string name;
	bool initial = false;
	LimitRule rule = LimitRule::lim_inf;
};

/// A source of guesses for an input; nullopt ends the stream.
struct Approximator {
	using Stream = std::function<std::optional<Ordinal>()>;
	std::string name;
	std::function<Stream(const Value& input)> start;

	static Approximator from_list(std::string name, std::function<std::vector<Ordinal>(const Value&)> list) {
		return {std::move(name), [list = std::move(list)](const Value& input) -> Stream {
			        auto items = std::make_shared<std::vector<Ordinal>>(list(input));
			        auto pos = std::make_shared<std::size_t>(0);
			        return [items, pos]() -> std::optional<Ordinal> {
				        if (*pos >= items->size()) return std::nullopt;
				        return (*items)[(*pos)++];
			        };
		        }};
	}
};

struct Stmt;
using Block = std::vector<Stmt>;

struct Assign {
	std::string target;
	ValueFn value;
};

struct OracleCall {
	std::string slot;
	ValueFn query;
	std::string target;
};

struct ScanFirstHit {
	std::string slot;
	ValueFn start;
	bool inclusive = true; // first query is start (true) or start+1
	std::string target;
};

struct ScanLastHitAtMost {
	std::string slot;
	ValueFn bound;
	bool inclusive = true; // queries [0, bound] or [0, bound)
	std::string target;
};

struct ScanFlagToggleUntil {
	std::string slot;
	ValueFn start;
	std::vector<Flag> flags;
	std::string target; // receives the exit point
};

struct GuessCheckLoop {
	std::string slot;
	Approximator approximator;
	ValueFn input;
	std::string target;
};

struct ComputableSubroutine {
	std::string name;
	std::function<void(Registers&)> body;
};

struct If {
	CondFn condition;
	Block then_block;
	Block else_block;
};

/// Runs `body` once per item, with the item in register `var`.
struct ForEach {
	std::string var;
	std::function<std::vector<Value>(const Registers&)> items;
	Block body;
};

struct Halt {
	ValueFn output;
};

struct Stmt {
	std::variant<Assign, OracleCall, ScanFirstHit, ScanLastHitAtMost, ScanFlagToggleUntil, GuessCheckLoop,
	             ComputableSubroutine, If, ForEach, Halt>
		v;

	template <class T>
	Stmt(T s) : v(std::move(s)) {}
};

struct Program {
	std::string name;
	Ordinal parameter;
	/// slot name -> oracle type it expects (an effectivizer name)
	std::map<std::string, std::string> slots;
	Block body;
	/// register that receives the input
	std::string input_register = "input";
};

} // namespace ordred
