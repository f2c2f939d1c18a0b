#include <functional>
#include <random>

#include <gtest/gtest.h>

#include "ordred/effectivizer.hpp"
#include "ordred/ledger.hpp"
#include "ordred/ranked_set.hpp"
#include "ordred/testing/tuple_model.hpp"

using namespace ordred;
namespace ref = ordred::reference;
using ref::Triple;

namespace {

const Ordinal w = Ordinal::omega();
const Ordinal w2 = Ordinal::omega_power(Ordinal(2));

Ordinal T(std::int64_t a, std::int64_t b, std::int64_t c) { return ref::to_ordinal(Triple{a, b, c}); }

CardinalStructure powers() { return CardinalStructure::omega_powers(parse_ordinal("w^(w^(w))")); }
CardinalStructure multiples() { return CardinalStructure::multiples_of_omega(parse_ordinal("w^(w)")); }

struct Case {
	std::string name;
	RankedSet set;
	std::function<bool(const Triple&)> member; // independent description below w^3
};

std::vector<Case> cases() {
	std::vector<Case> out;
	out.push_back({"cardinals/omega-powers", RankedSet::cardinals(powers()), ref::tm_is_cardinal_omega_powers});
	out.push_back({"cardinals/multiples", RankedSet::cardinals(multiples()), ref::tm_is_cardinal_multiples});
	out.push_back({"multiples of w", RankedSet::multiples(w),
	               [](const Triple& t) { return t.w2 == 0 && t.w1 >= 1 && t.w0 == 0; }});
	out.push_back({"multiples of w*2+1", RankedSet::multiples(T(0, 2, 1)),
	               [](const Triple& t) { return t.w2 == 0 && t.w0 == 1 && t.w1 >= 2 && t.w1 % 2 == 0; }});
	out.push_back({"multiples of 3", RankedSet::multiples(Ordinal(3)),
	               [](const Triple& t) { return t.w2 == 0 && t.w1 == 0 && t.w0 >= 3 && t.w0 % 3 == 0; }});
	out.push_back({"finite", RankedSet::finite({T(0, 1, 2), Ordinal(4), T(1, 0, 0)}),
	               [](const Triple& t) { return t == Triple{0, 1, 2} || t == Triple{0, 0, 4} || t == Triple{1, 0, 0}; }});
	// (w+1) + j is a limit iff j is a limit
	out.push_back({"window of limits from w+1", RankedSet::window(RankedSet::cardinals(multiples()), T(0, 1, 1)),
	               [](const Triple& t) { return (t.w2 > 0 || t.w1 > 0) && t.w0 == 0; }});
	out.push_back({"w^2 + multiples of w", RankedSet::shifted(RankedSet::multiples(w), w2),
	               [](const Triple& t) { return t.w2 == 1 && t.w1 >= 1 && t.w0 == 0; }});
	// pieces [0,w): {3,5}; [w,w+1): {w}; [w+1, w^2): w+1 + w*n = w*(n+1)
	out.push_back({"piecewise",
	               RankedSet::piecewise({{w, RankedSet::finite({Ordinal(3), Ordinal(5)})},
	                                     {Ordinal(1), RankedSet::finite({Ordinal{}})},
	                                     {w2, RankedSet::multiples(w)}}),
	               [](const Triple& t) {
		               return t == Triple{0, 0, 3} || t == Triple{0, 0, 5} || t == Triple{0, 1, 0} ||
		                      (t.w2 == 0 && t.w1 >= 2 && t.w0 == 0);
	               }});
	return out;
}

// Greatest member below x among triples with coefficients <= c.
std::optional<Triple> brute_max_below(const Case& c, const Triple& x, std::int64_t coeff) {
	std::optional<Triple> best;
	for (const Triple& y : ref::all_triples(coeff))
		if (y < x && c.member(y) && (!best || y > *best)) best = y;
	return best;
}

} // namespace

TEST(RankedSet, AgreesWithBruteForceBelowOmegaCubed) {
	const auto box = ref::all_triples(3);
	const auto wide = ref::all_triples(6);
	for (const Case& c : cases()) {
		for (const Triple& x : box) {
			const Ordinal a = ref::to_ordinal(x);
			EXPECT_EQ(c.set.contains(a), c.member(x)) << c.name << " " << render(a);

			std::optional<Triple> least;
			for (const Triple& y : wide)
				if (y >= x && c.member(y) && (!least || y < *least)) least = y;
			auto r = c.set.least_at_or_above(a);
			if (least) {
				ASSERT_TRUE(r) << c.name << " " << render(a);
				EXPECT_EQ(*r, ref::to_ordinal(*least)) << c.name << " " << render(a);
			} else if (r) {
				EXPECT_GE(*r, opow(w, Ordinal(3))) << c.name << " " << render(a);
			}

			// found / none / unbounded, judged by whether the maximum grows with the box
			const auto m6 = brute_max_below(c, x, 6);
			const auto m9 = brute_max_below(c, x, 9);
			Below b = c.set.greatest_below(a);
			if (!m6) {
				EXPECT_EQ(b.kind, Below::Kind::none) << c.name << " " << render(a);
			} else if (*m6 == *m9) {
				ASSERT_EQ(b.kind, Below::Kind::found) << c.name << " " << render(a);
				EXPECT_EQ(b.value, ref::to_ordinal(*m6)) << c.name << " " << render(a);
			} else {
				EXPECT_EQ(b.kind, Below::Kind::unbounded) << c.name << " " << render(a);
			}
		}
	}
}

TEST(RankedSet, NextLimitAgreesWithBruteForce) {
	const auto box = ref::all_triples(3);
	const auto candidates = ref::all_triples(4);
	for (const Case& c : cases()) {
		std::vector<Triple> members;
		for (const Triple& y : ref::all_triples(9))
			if (c.member(y)) members.push_back(y);
		// every smaller g in the small box has a member in (g, l), and the
		// members below l have no maximum (it grows with the box)
		auto is_limit_point = [&](const Triple& l) {
			if (!l.is_limit()) return false;
			auto m6 = brute_max_below(c, l, 6);
			auto m9 = brute_max_below(c, l, 9);
			if (!m6 || *m6 == *m9) return false;
			for (const Triple& g : box) {
				if (!(g < l)) continue;
				if (std::none_of(members.begin(), members.end(), [&](const Triple& m) { return g < m && m < l; })) return false;
			}
			return true;
		};
		for (const Triple& x : box) {
			std::optional<Triple> least;
			for (const Triple& l : candidates)
				if (l > x && (!least || l < *least) && is_limit_point(l)) least = l;
			auto r = c.set.next_limit_above(ref::to_ordinal(x));
			if (least) {
				ASSERT_TRUE(r) << c.name << " " << ref::to_string(x);
				EXPECT_EQ(*r, ref::to_ordinal(*least)) << c.name << " " << ref::to_string(x);
			} else if (r) {
				EXPECT_GT(*r, T(4, 4, 4)) << c.name << " " << ref::to_string(x);
			}
		}
	}
}

TEST(FlagValue, Examples) {
	EXPECT_FALSE(flag_value_after(true, RankedSet::multiples(w), w2));
	EXPECT_FALSE(flag_value_after(false, RankedSet::finite({Ordinal(10), Ordinal(20)}), Ordinal(30)));
	EXPECT_FALSE(flag_value_after(false, RankedSet{}, w));
	EXPECT_TRUE(flag_value_after(true, RankedSet{}, w));
	EXPECT_TRUE(flag_value_after(false, RankedSet::finite({Ordinal(10), Ordinal(20)}), Ordinal(15)));
	// after the limit w^2 the flag restarts from 0: one more toggle at w^2 gives 1
	EXPECT_TRUE(flag_value_after(true, RankedSet::piecewise({{w2, RankedSet::multiples(w)}, {Ordinal(1), RankedSet::finite({Ordinal{}})}}),
	                             w2 + Ordinal(1)));
}

// Truncating the toggles {w*n} to n <= N gives parity N at w^2; the lim-inf of
// those values is 0, which is the flag's value when all toggles are present.
TEST(FlagValue, FiniteTruncations) {
	int zeros = 0;
	for (std::uint64_t n = 1; n <= 40; ++n) {
		std::vector<Ordinal> pts;
		for (std::uint64_t k = 1; k <= n; ++k) pts.push_back(mul(w, Ordinal(k)));
		const bool v = flag_value_after(true, RankedSet::finite(pts), w2);
		EXPECT_EQ(v, n % 2 == 0);
		zeros += !v;
	}
	EXPECT_GT(zeros, 0);
	EXPECT_FALSE(flag_value_after(true, RankedSet::multiples(w), w2));
}

TEST(FlagValue, MatchesStepwiseSimulationOnFiniteSets) {
	std::mt19937_64 rng(8);
	for (int i = 0; i < 200; ++i) {
		std::vector<Ordinal> pts;
		std::vector<bool> is_toggle(60, false);
		for (int k = 0; k < 8; ++k) {
			const auto p = std::uniform_int_distribution<int>(0, 59)(rng);
			pts.push_back(Ordinal(static_cast<std::uint64_t>(p)));
			is_toggle[static_cast<std::size_t>(p)] = true;
		}
		const bool init = rng() & 1;
		const RankedSet set = RankedSet::finite(pts);
		bool flag = init;
		for (std::uint64_t pos = 0; pos < 60; ++pos) {
			EXPECT_EQ(flag_value_after(init, set, Ordinal(pos)), flag);
			if (is_toggle[pos]) flag = !flag;
		}
	}
}

TEST(Effectivizer, Examples) {
	EXPECT_EQ(Effectivizer::dec_card(powers()).answer(opow(w, Ordinal(3))), Value(Ordinal(1)));
	EXPECT_EQ(Effectivizer::dec_card(powers()).answer(w + Ordinal(1)), Value(Ordinal(0)));
	EXPECT_EQ(Effectivizer::next_card(powers()).answer(T(0, 2, 1)), Value(w2));
	EXPECT_EQ(Effectivizer::ord_card(multiples()).answer(T(0, 2, 1)), Value(T(0, 2, 0)));

	const SetCode empty = encode_hf(HFSet{});
	EXPECT_EQ(Effectivizer::pot().answer(empty), Value(encode_hf(HFSet::of({HFSet{}}))));
	EXPECT_EQ(Effectivizer::power_card().answer(encode_hf(hf_natural(3))), Value(Ordinal(8)));

	EXPECT_THROW(Effectivizer::dec_card(powers()).answer(empty), OracleError);
	EXPECT_THROW(Effectivizer::pot().answer(w), OracleError);
	EXPECT_THROW(Effectivizer::power_card().hits(), OracleError);
}

TEST(Effectivizer, SeparationExamples) {
	const HFSet e;
	const HFSet one = HFSet::of({e});
	const SetCode s = encode_hf(HFSet::of({e, one}));
	// "x has no members" is a single universal block, hence Σ2
	const Natural no_members = formula_index(parse_formula("A y (!(y in #0))"));
	EXPECT_EQ(Effectivizer::sep(2, 3).answer(SepQuery{s, no_members, {}}), Value(encode_hf(HFSet::of({e}))));
	// quantifier-free with the empty set as a parameter
	const Natural equals_p = formula_index(parse_formula("#0 = #1"));
	EXPECT_EQ(Effectivizer::sep(0, 3).answer(SepQuery{s, equals_p, {encode_hf(e)}}), Value(encode_hf(HFSet::of({e}))));
	// level too low or arity mismatch: empty set
	EXPECT_EQ(Effectivizer::sep(1, 3).answer(SepQuery{s, no_members, {}}), Value(encode_hf(e)));
	EXPECT_EQ(Effectivizer::sep(0, 3).answer(SepQuery{s, equals_p, {}}), Value(encode_hf(e)));
}

TEST(Effectivizer, TruthExamples) {
	const Natural k = formula_index(parse_formula("E x (A y (!(y in x)))"));
	EXPECT_EQ(Effectivizer::truth(2, 3).answer(TruthQuery{k, {}}), Value(Ordinal(1)));
	EXPECT_EQ(Effectivizer::truth(1, 3).answer(TruthQuery{k, {}}), Value(Ordinal(0)));
	EXPECT_EQ(Effectivizer::truth(2, 3).answer(TruthQuery{k, {encode_hf(HFSet{})}}), Value(Ordinal(0)));
	EXPECT_THROW(Effectivizer::truth(0, 6), DomainError);
}

TEST(Effectivizer, Scripted) {
	const Effectivizer s = Effectivizer::scripted(bit_script({1, 0}));
	EXPECT_EQ(s.answer(Ordinal(0), Ordinal(0)), Value(Ordinal(1)));
	EXPECT_EQ(s.answer(Ordinal(7), Ordinal(1)), Value(Ordinal(0)));
	EXPECT_THROW(s.answer(Ordinal(0), Ordinal(2)), ScriptExhausted);
	EXPECT_THROW(Effectivizer::scripted({}).answer(Ordinal(0), Ordinal(0)), ScriptExhausted);

	// a transfinite block: w zeros, then a one
	const Effectivizer t = Effectivizer::scripted({BitRun{w, RankedSet{}}, Value(Ordinal(1))}, "DecCard");
	EXPECT_EQ(t.name(), "DecCard");
	EXPECT_EQ(t.answer(Ordinal(0), Ordinal(41)), Value(Ordinal(0)));
	EXPECT_EQ(t.answer(Ordinal(0), w), Value(Ordinal(1)));
	EXPECT_EQ(t.script_length(), w + Ordinal(1));
	EXPECT_EQ(least_satisfying_above(t, Ordinal(3)), w);
}

TEST(Effectivizer, RankedContractExamples) {
	const Effectivizer dp = Effectivizer::dec_card(powers());
	EXPECT_EQ(least_satisfying_above(dp, T(0, 2, 1)), w2);
	EXPECT_EQ(greatest_satisfying_at_most(dp, T(0, 2, 1)), w);
	EXPECT_EQ(next_limit_of_satisfying_above(Effectivizer::dec_card(multiples()), w), w2);
	EXPECT_EQ(next_limit_of_satisfying_above(dp, w), opow(w, w));
}

TEST(Effectivizer, RankedAgreesWithPointwiseAnswers) {
	for (const auto& cs : {powers(), multiples()}) {
		const Effectivizer d = Effectivizer::dec_card(cs);
		for (const Triple& t : ref::all_triples(3)) {
			const Ordinal a = ref::to_ordinal(t);
			// scan pointwise through the box for the next hit
			std::optional<Ordinal> next;
			for (const Triple& u : ref::all_triples(5)) {
				const Ordinal b = ref::to_ordinal(u);
				if (b > a && d.answer(b) == Value(Ordinal(1)) && (!next || b < *next)) next = b;
			}
			if (next) EXPECT_EQ(least_satisfying_above(d, a), next);
			auto g = greatest_satisfying_at_most(d, a);
			ASSERT_TRUE(g);
			EXPECT_EQ(d.answer(*g), Value(Ordinal(1)));
			EXPECT_LE(*g, a);
		}
	}
}

TEST(Effectivizer, PotCoherence) {
	const Effectivizer pot = Effectivizer::pot();
	const Effectivizer pc = Effectivizer::power_card();
	int checked = 0;
	for (std::uint64_t c = 0; c < 4096; ++c) {
		const HFSet s = from_ackermann(c);
		if (s.size() > 4) continue;
		const SetCode code = encode_hf(s);
		const HFSet p = decode_set(std::get<SetCode>(pot.answer(code)));
		EXPECT_EQ(p, hf_powerset(s));
		EXPECT_EQ(pc.answer(code), Value(Ordinal(hf_card(p))));
		++checked;
	}
	EXPECT_GT(checked, 700);
}

TEST(Effectivizer, MakeByName) {
	OracleEnv env{powers(), 3, bit_script({1})};
	EXPECT_EQ(make_effectivizer("DecCard", env).name(), "DecCard");
	EXPECT_EQ(make_effectivizer("TruthSigma2", env).level(), 2u);
	EXPECT_EQ(make_effectivizer("SepSigma0", env).name(), "SepSigma0");
	EXPECT_EQ(make_effectivizer("Scripted", env).script_length(), Ordinal(1));
	EXPECT_THROW(make_effectivizer("DecCard", OracleEnv{}), OracleError);
	EXPECT_THROW(make_effectivizer("TruthSigma1", OracleEnv{}), OracleError);
	EXPECT_THROW(make_effectivizer("Oracle", env), OracleError);
	EXPECT_THROW(make_effectivizer("TruthSigmaX", env), OracleError);
}

TEST(Ledger, TotalOrderType) {
	QueryLedger empty;
	EXPECT_EQ(empty.total_order_type(), Ordinal{});

	QueryLedger a;
	a.add_run(Ordinal{}, "DecCard", Ordinal{}, w, RankedSet{});
	a.add_single(w, "DecCard", w, Ordinal(1));
	EXPECT_EQ(a.total_order_type(), w + Ordinal(1));

	QueryLedger b;
	b.add_single(Ordinal{}, "DecCard", Ordinal(5), Ordinal(0));
	b.add_run(Ordinal(1), "DecCard", Ordinal(6), w, RankedSet{});
	EXPECT_EQ(b.total_order_type(), w);
}

TEST(Ledger, RechunkingKeepsTotal) {
	QueryLedger one;
	one.add_run(Ordinal{}, "DecCard", w, T(1, 0, 3), RankedSet{});
	QueryLedger two;
	two.add_run(Ordinal{}, "DecCard", w, T(0, 5, 0), RankedSet{});
	two.add_run(left_sub(w, T(0, 5, 0)), "DecCard", T(0, 5, 0), T(1, 0, 3), RankedSet{});
	EXPECT_EQ(one.total_order_type(), two.total_order_type());
	EXPECT_EQ(one.total_order_type(), T(1, 0, 3));
}

TEST(Ledger, EntriesAndPatterns) {
	QueryLedger l;
	l.add_run(Ordinal{}, "DecCard", Ordinal(6), Ordinal(7), RankedSet::finite({Ordinal{}}));
	EXPECT_EQ(l.entries()[0].response, "all-0-then-final-1");
	EXPECT_EQ(l.entries()[0].order_type, Ordinal(1));
	l.add_run(Ordinal(1), "DecCard", Ordinal(0), w, RankedSet{});
	EXPECT_EQ(l.entries()[1].response, "all-0");
	l.add_run(w, "DecCard", Ordinal(0), w2, RankedSet::multiples(w));
	EXPECT_EQ(l.entries()[2].response, "mixed");
	EXPECT_THROW(l.add_single(Ordinal(5), "DecCard", Ordinal(0), Ordinal(0)), ContractError);
	EXPECT_THROW(l.add_run(w2, "DecCard", w, w, RankedSet{}), ContractError);
	l.add_single(w2, "Pot", encode_hf(HFSet{}), encode_hf(HFSet::of({HFSet{}})));
	EXPECT_EQ(l.entries()[3].query, "{}");
	EXPECT_EQ(l.entries()[3].response, "{{}}");
	EXPECT_EQ(l.end_time(), w2 + Ordinal(1));
}

TEST(Ledger, ResponsesReplay) {
	QueryLedger l;
	l.add_single(Ordinal{}, "DecCard", w, Ordinal(0));
	l.add_run(Ordinal(1), "DecCard", w + Ordinal(1), w2 + Ordinal(1), RankedSet::finite({w2}));
	const Effectivizer replay = Effectivizer::scripted(l.responses(), "DecCard");
	EXPECT_EQ(replay.script_length(), l.total_order_type());
	EXPECT_EQ(replay.answer(Ordinal{}, Ordinal{}), Value(Ordinal(0)));
	EXPECT_EQ(replay.answer(Ordinal{}, Ordinal(1) + w2), Value(Ordinal(1)));
	EXPECT_EQ(replay.answer(Ordinal{}, Ordinal(7)), Value(Ordinal(0)));
}
