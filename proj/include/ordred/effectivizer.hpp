#pragma once

// Effectivizers: deterministic oracles for the class functions the
// reductions call, plus scripted oracles that answer the ι-th call with the
// ι-th entry of a fixed response sequence.
//
// DecCard and Scripted are ranked: their 1-answers form a RankedSet, so the
// machine can evaluate scans over them in closed form.  DecCard's set lives
// in query coordinates (the queried ordinal), a script's in call coordinates
// (the number of calls made before).

#include <cctype>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ordred/cardinal_structure.hpp"
#include "ordred/errors.hpp"
#include "ordred/formula.hpp"
#include "ordred/hfset.hpp"
#include "ordred/ranked_set.hpp"
#include "ordred/set_code.hpp"
#include "ordred/value.hpp"

namespace ordred {

enum class OracleKind { dec_card, next_card, ord_card, pot, power_card, truth, sep, scripted };

/// A block of 0/1 answers of the given length; `hits` (block-local) are the 1s.
struct BitRun {
	Ordinal length;
	RankedSet hits;
};

/// One entry of a response script: a single answer or a block of bits.
using ScriptSegment = std::variant<Value, BitRun>;
using Script = std::vector<ScriptSegment>;

inline Script bit_script(const std::vector<int>& bits) {
	Script s;
	for (int b : bits) s.push_back(Value(Ordinal(static_cast<std::uint64_t>(b != 0))));
	return s;
}

class Effectivizer {
public:
	static Effectivizer dec_card(CardinalStructure cs) { return with_structure(OracleKind::dec_card, std::move(cs)); }
	static Effectivizer next_card(CardinalStructure cs) { return with_structure(OracleKind::next_card, std::move(cs)); }
	static Effectivizer ord_card(CardinalStructure cs) { return with_structure(OracleKind::ord_card, std::move(cs)); }
	static Effectivizer pot() { return Effectivizer(OracleKind::pot); }
	static Effectivizer power_card() { return Effectivizer(OracleKind::power_card); }

	/// Σn-Truth over V_rank.
	static Effectivizer truth(unsigned level, unsigned rank) { return with_universe(OracleKind::truth, level, rank); }
	/// Σn-Separation over V_rank.
	static Effectivizer sep(unsigned level, unsigned rank) { return with_universe(OracleKind::sep, level, rank); }

	/// Answers the ι-th call with the ι-th script entry.  `impersonates` is the
	/// name written to ledgers, so a replay of a recorded run logs the same
	/// oracle as the original.
	static Effectivizer scripted(Script script, std::string impersonates = "Scripted") {
		Effectivizer e(OracleKind::scripted);
		std::vector<RankedSet::Piece> pieces;
		Ordinal pos;
		for (const ScriptSegment& seg : script) {
			if (auto* v = std::get_if<Value>(&seg)) {
				const auto* a = std::get_if<Ordinal>(v);
				const bool hit = a && *a == Ordinal(1);
				pieces.push_back({Ordinal(1), RankedSet::finite(hit ? std::vector<Ordinal>{Ordinal{}} : std::vector<Ordinal>{})});
				e.singles_.push_back({pos, *v});
				pos = successor(pos);
			} else {
				const BitRun& run = std::get<BitRun>(seg);
				pieces.push_back({run.length, run.hits});
				pos = add(pos, run.length);
			}
		}
		e.script_hits_ = RankedSet::piecewise(std::move(pieces));
		e.script_length_ = pos;
		e.name_ = std::move(impersonates);
		return e;
	}

	OracleKind kind() const noexcept { return kind_; }

	std::string name() const {
		switch (kind_) {
		case OracleKind::dec_card: return "DecCard";
		case OracleKind::next_card: return "NextCard";
		case OracleKind::ord_card: return "OrdCard";
		case OracleKind::pot: return "Pot";
		case OracleKind::power_card: return "PowerCard";
		case OracleKind::truth: return "TruthSigma" + std::to_string(level_);
		case OracleKind::sep: return "SepSigma" + std::to_string(level_);
		case OracleKind::scripted: return name_;
		}
		return "?";
	}

	const std::optional<CardinalStructure>& structure() const noexcept { return cs_; }
	unsigned level() const noexcept { return level_; }
	unsigned rank() const noexcept { return rank_; }
	/// Number of calls a script can answer.
	const Ordinal& script_length() const noexcept { return script_length_; }

	bool ranked() const noexcept { return kind_ == OracleKind::dec_card || kind_ == OracleKind::scripted; }
	/// True when hits are indexed by call count rather than by query.
	bool indexed_by_call() const noexcept { return kind_ == OracleKind::scripted; }

	/// The set of 1-answers (see the header comment for coordinates).
	RankedSet hits() const {
		if (kind_ == OracleKind::dec_card) return RankedSet::cardinals(*cs_);
		if (kind_ == OracleKind::scripted) return script_hits_;
		throw OracleError(name() + " is not a ranked (0/1) oracle");
	}

	/// Answer to `q`; `call_index` is the number of calls made so far in the
	/// run and matters only for scripts.
	Value answer(const Value& q, const Ordinal& call_index = Ordinal{}) const {
		switch (kind_) {
		case OracleKind::dec_card: return Ordinal(cs_->is_cardinal(as_ordinal(q, "DecCard query")) ? 1 : 0);
		case OracleKind::next_card: return cs_->next_card_of(as_ordinal(q, "NextCard query"));
		case OracleKind::ord_card: return cs_->card_of(as_ordinal(q, "OrdCard query"));
		case OracleKind::pot: return encode_hf(hf_powerset(decode_set(as_code(q, "Pot query"))));
		case OracleKind::power_card: {
			const HFSet s = decode_set(as_code(q, "PowerCard query"));
			return Ordinal(Natural(1) << static_cast<unsigned>(s.size()));
		}
		case OracleKind::truth: return Ordinal(answer_truth(q) ? 1 : 0);
		case OracleKind::sep: return answer_sep(q);
		case OracleKind::scripted: return answer_script(call_index);
		}
		throw OracleError("unknown oracle");
	}

private:
	explicit Effectivizer(OracleKind k) : kind_(k) {}

	static Effectivizer with_structure(OracleKind k, CardinalStructure cs) {
		Effectivizer e(k);
		e.cs_ = std::move(cs);
		return e;
	}

	static Effectivizer with_universe(OracleKind k, unsigned level, unsigned rank) {
		universe_size(rank); // validates the rank cap
		Effectivizer e(k);
		e.level_ = level;
		e.rank_ = rank;
		return e;
	}

	std::vector<HFSet> decode_params(const std::vector<SetCode>& codes) const {
		std::vector<HFSet> out;
		for (const SetCode& c : codes) out.push_back(decode_set(c));
		return out;
	}

	bool answer_truth(const Value& q) const {
		const auto* tq = std::get_if<TruthQuery>(&q);
		if (!tq) throw OracleError(name() + " expects a (formula index, parameters) query");
		const Formula f = formula_from_index(tq->index);
		if (classify_level(f) > level_ || f.param_count() != tq->params.size()) return false;
		return eval_formula(f, TruthEnv{rank_, decode_params(tq->params)});
	}

	SetCode answer_sep(const Value& q) const {
		const auto* sq = std::get_if<SepQuery>(&q);
		if (!sq) throw OracleError(name() + " expects a (set, formula index, parameters) query");
		const Formula f = formula_from_index(sq->index);
		if (classify_level(f) > level_ || f.param_count() != sq->params.size() + 1) return encode_hf(HFSet{});
		std::vector<HFSet> env = decode_params(sq->params);
		env.insert(env.begin(), HFSet{});
		std::vector<HFSet> kept;
		for (const HFSet& x : decode_members(sq->set)) {
			env[0] = x;
			if (eval_formula(f, TruthEnv{rank_, env})) kept.push_back(x);
		}
		return encode_hf(HFSet::of(std::move(kept)));
	}

	Value answer_script(const Ordinal& call) const {
		if (call >= script_length_)
			throw ScriptExhausted("script exhausted: call " + render(call) + " but only " + render(script_length_) +
			                      " responses");
		for (const auto& [pos, v] : singles_)
			if (pos == call) return v;
		return Ordinal(script_hits_.contains(call) ? 1 : 0);
	}

	OracleKind kind_;
	std::optional<CardinalStructure> cs_;
	unsigned level_ = 0;
	unsigned rank_ = 0;
	std::string name_;
	RankedSet script_hits_;
	Ordinal script_length_;
	std::vector<std::pair<Ordinal, Value>> singles_;
};

/// Oracle environment for make_effectivizer.
struct OracleEnv {
	std::optional<CardinalStructure> structure;
	std::optional<unsigned> rank;
	std::optional<Script> script;
};

/// By name: DecCard, NextCard, OrdCard, Pot, PowerCard, TruthSigma<n>,
/// SepSigma<n>, Scripted.
inline Effectivizer make_effectivizer(const std::string& name, const OracleEnv& env) {
	auto need_structure = [&]() -> const CardinalStructure& {
		if (!env.structure) throw OracleError(name + " needs a cardinal structure");
		return *env.structure;
	};
	auto level_of = [&](const std::string& prefix) -> std::optional<unsigned> {
		if (name.rfind(prefix, 0) != 0 || name.size() == prefix.size() || name.size() > prefix.size() + 2) return std::nullopt;
		for (std::size_t i = prefix.size(); i < name.size(); ++i)
			if (!std::isdigit(static_cast<unsigned char>(name[i]))) return std::nullopt;
		return static_cast<unsigned>(std::stoul(name.substr(prefix.size())));
	};
	if (name == "DecCard") return Effectivizer::dec_card(need_structure());
	if (name == "NextCard") return Effectivizer::next_card(need_structure());
	if (name == "OrdCard") return Effectivizer::ord_card(need_structure());
	if (name == "Pot") return Effectivizer::pot();
	if (name == "PowerCard") return Effectivizer::power_card();
	if (name == "Scripted") {
		if (!env.script) throw OracleError("Scripted needs a response script");
		return Effectivizer::scripted(*env.script);
	}
	for (const char* prefix : {"TruthSigma", "SepSigma"}) {
		if (auto n = level_of(prefix)) {
			if (!env.rank) throw OracleError(name + " needs a universe rank");
			return std::string(prefix) == "TruthSigma" ? Effectivizer::truth(*n, *env.rank) : Effectivizer::sep(*n, *env.rank);
		}
	}
	throw OracleError("unknown oracle '" + name + "'");
}

// --- ranked-predicate contract (interpreter machinery, never ledgered) -----

inline std::optional<Ordinal> least_satisfying_above(const Effectivizer& e, const Ordinal& a) {
	return e.hits().least_above(a);
}

inline std::optional<Ordinal> greatest_satisfying_at_most(const Effectivizer& e, const Ordinal& a) {
	Below b = e.hits().greatest_at_most(a);
	if (b.kind == Below::Kind::found) return b.value;
	return std::nullopt;
}

inline std::optional<Ordinal> next_limit_of_satisfying_above(const Effectivizer& e, const Ordinal& a) {
	return e.hits().next_limit_above(a);
}

} // namespace ordred
