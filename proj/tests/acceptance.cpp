// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fail.
// References come from the tuple model and from direct set semantics, never
// from the closed forms under test.

#include <chrono>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include "ordred/reductions.hpp"
#include "ordred/testing/tuple_model.hpp"

using namespace ordred;
namespace ref = ordred::reference;
using ref::Triple;

namespace {

const Ordinal w = Ordinal::omega();
const Ordinal w2 = Ordinal::omega_power(Ordinal(2));
const Ordinal w3 = Ordinal::omega_power(Ordinal(3));

CardinalStructure powers() { return CardinalStructure::omega_powers(parse_ordinal("w^(w^(w))")); }
CardinalStructure multiples() { return CardinalStructure::multiples_of_omega(parse_ordinal("w^(w)")); }
OracleEnv env_of(const CardinalStructure& cs) { return {cs, std::nullopt, std::nullopt}; }

Ordinal tm_next_card(const Triple& t, bool op) {
	if (t.is_finite()) return Ordinal(static_cast<std::uint64_t>(t.w0 + 1));
	if (op) return t.w2 == 0 ? w2 : w3;
	return ref::to_ordinal(Triple{t.w2, t.w1 + 1, 0});
}

Triple tm_card(const Triple& t, bool op) {
	if (t.is_finite()) return t;
	if (op) return t.w2 == 0 ? Triple{0, 1, 0} : Triple{1, 0, 0};
	return Triple{t.w2, t.w1, 0};
}

bool tm_is_card(const Triple& t, bool op) {
	return op ? ref::tm_is_cardinal_omega_powers(t) : ref::tm_is_cardinal_multiples(t);
}

// left_sub through the tuple model when b is inside it
Ordinal tm_gap(const Triple& a, const Ordinal& b) {
	if (b < w3) return ref::to_ordinal(*ref::tm_left_sub(a, ref::from_ordinal(b)));
	return b; // a < w^3 <= b and b is a power of w: a + b = b
}

// Every run made by criteria 1-6, for the replay criterion.
struct Recorded {
	Program program;
	Value input;
	RunResult result;
};
std::vector<Recorded> recorded;

void record(const ReductionSpec& s, const OracleEnv& env, const InstanceReport& i) {
	recorded.push_back({s.program(env), i.input, i.result});
}

struct Outcome {
	bool pass = true;
	std::ostringstream note;
	void fail(const std::string& why) {
		if (pass) note << why;
		pass = false;
	}
};

using Clock = std::chrono::steady_clock;

int failures = 0;

void criterion(int n, const std::string& title, double limit_s, const std::function<void(Outcome&)>& body) {
	Outcome o;
	const auto t0 = Clock::now();
	try {
		body(o);
	} catch (const std::exception& e) {
		o.fail(std::string("exception: ") + e.what());
	}
	const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
	if (secs >= limit_s) o.fail("took " + std::to_string(secs) + " s, limit " + std::to_string(limit_s) + " s");
	if (!o.pass) ++failures;
	std::ostringstream time;
	time.precision(3);
	time << std::fixed << secs;
	std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << n << " " << title << " (" << time.str() << " s)"
	          << (o.note.str().empty() ? "" : ": " + o.note.str()) << std::endl;
}

// --- 1 ---------------------------------------------------------------------------

void nextcard_bound(Outcome& o) {
	const ReductionSpec s = make_reduction("nextcard_via_deccard");
	std::size_t n = 0, unequal = 0;
	std::string first_unequal;
	for (bool op : {true, false}) {
		const OracleEnv env = env_of(op ? powers() : multiples());
		for (const Triple& t : ref::all_triples(2)) {
			const Ordinal a = ref::to_ordinal(t);
			const InstanceReport i = verify_instance(s, env, a);
			record(s, env, i);
			++n;
			const Ordinal next = tm_next_card(t, op);
			if (!i.output || *i.output != Value(next)) o.fail("wrong output at " + render(a));
			const Ordinal f = successor(tm_next_card(tm_card(t, op), op));
			if (!(i.ledger_order_type <= f)) o.fail("ledger above card(a)^+ + 1 at " + render(a));
			if (i.ledger_order_type != tm_gap(t, next)) {
				if (!unequal++)
					first_unequal = render(a) + ": ledger " + render(i.ledger_order_type) + " vs leftsub " + render(tm_gap(t, next));
			}
		}
	}
	if (n < 20) o.fail("too few instances");
	if (unequal) o.fail("ledger != leftsub(a, a^+) on " + std::to_string(unequal) + "/" + std::to_string(n) +
	                    " instances, e.g. " + first_unequal);
	else o.note << n << " instances";
}

// --- 2 ---------------------------------------------------------------------------

void powercard(Outcome& o) {
	for (unsigned k : {0u, 1u, 2u, 3u}) {
		CatalogOptions opt;
		opt.pot_search = k < 3 ? PotSearch::full : PotSearch::count_only;
		const ReductionSpec s = make_reduction("powercard_via_pot", opt);
		const InstanceReport i = verify_instance(s, {}, encode_hf(hf_natural(k)));
		record(s, {}, i);
		if (!i.output || *i.output != Value(Ordinal(std::uint64_t{1} << k))) o.fail("|S|=" + std::to_string(k) + " wrong output");
		if (i.ledger_entries != 2) o.fail("|S|=" + std::to_string(k) + " made " + std::to_string(i.ledger_entries) + " calls");
		for (const LedgerEntry& e : i.result.ledger.entries())
			if (e.oracle != "Pot") o.fail("non-Pot call");
	}
	if (o.pass) o.note << "|S| = 0,1,2 full search, 3 count-only; 2 Pot calls each";
}

// --- 3 ---------------------------------------------------------------------------

void flagtrick(Outcome& o) {
	const ReductionSpec s = make_reduction("flagtrick");
	struct Case {
		bool op;
		Ordinal start, halt;
	};
	for (const Case& c : {Case{true, Ordinal(3), w}, Case{false, Ordinal(3), w}, Case{false, w, w2}, Case{true, w, opow(w, w)}}) {
		const OracleEnv env = env_of(c.op ? powers() : multiples());
		const InstanceReport i = verify_instance(s, env, c.start);
		record(s, env, i);
		if (!i.output || *i.output != Value(c.halt)) o.fail("start " + render(c.start) + " halts elsewhere");
		if (i.ledger_order_type != left_sub(c.start, c.halt)) o.fail("ledger not exact at start " + render(c.start));
	}
	if (o.pass) o.note << "3->w (both), w->w^2 (multiples), w->w^(w) (powers), exact";
}

// --- 4 ---------------------------------------------------------------------------

void ordcard(Outcome& o) {
	const ReductionSpec naive = make_reduction("ordcard_scan_naive");
	const ReductionSpec improved = make_reduction("ordcard_scan_improved");
	std::size_t n = 0;
	for (bool op : {true, false}) {
		const OracleEnv env = env_of(op ? powers() : multiples());
		for (const Triple& t : ref::all_triples(2)) {
			const Ordinal a = ref::to_ordinal(t);
			const Value expect = ref::to_ordinal(tm_card(t, op));
			const InstanceReport x = verify_instance(naive, env, a);
			const InstanceReport y = verify_instance(improved, env, a);
			record(naive, env, x);
			record(improved, env, y);
			++n;
			if (!x.output || *x.output != expect || !y.output || *y.output != expect) o.fail("wrong card at " + render(a));
			if (x.ledger_order_type != successor(a)) o.fail("naive ledger != a+1 at " + render(a));
			if (t.is_finite() && y.ledger_entries != 0) o.fail("improved calls on finite " + render(a));
		}
	}
	if (o.pass) o.note << n << " instances";
}

// --- 5 ---------------------------------------------------------------------------

void guesscheck(Outcome& o) {
	struct Chain {
		bool op;
		Triple input;
		std::vector<Triple> guesses;
	};
	// decreasing chains whose only cardinal is card(input)
	const std::vector<Chain> chains{
		{true, {0, 1, 0}, {{0, 1, 0}}},
		{true, {0, 2, 3}, {{0, 2, 3}, {0, 1, 0}}},
		{true, {1, 2, 5}, {{1, 2, 5}, {1, 2, 0}, {1, 0, 0}}},
		{true, {2, 1, 1}, {{2, 1, 1}, {2, 0, 3}, {1, 3, 3}, {1, 0, 0}}},
		{false, {0, 3, 4}, {{0, 3, 4}, {0, 3, 2}, {0, 3, 1}, {0, 3, 0}}},
		{false, {1, 1, 7}, {{1, 1, 7}, {1, 1, 6}, {1, 1, 5}, {1, 1, 4}, {1, 1, 0}}},
		{true, {2, 2, 2}, {{2, 2, 2}, {2, 2, 1}, {2, 1, 0}, {2, 0, 1}, {1, 1, 1}, {1, 0, 0}}},
		{false, {2, 0, 6}, {{2, 0, 6}, {2, 0, 6}, {2, 0, 3}, {2, 0, 0}}},
		{true, {0, 0, 5}, {{0, 0, 5}}},
		{false, {0, 1, 3}, {{0, 1, 3}, {0, 1, 2}, {0, 1, 1}, {0, 1, 0}}},
	};
	for (const Chain& c : chains) {
		std::vector<Ordinal> g;
		for (const Triple& t : c.guesses) g.push_back(ref::to_ordinal(t));
		// expected calls: distinct guesses up to the first cardinal
		std::size_t position = 0;
		std::optional<Triple> prev;
		for (const Triple& t : c.guesses) {
			if (prev && *prev == t) continue;
			prev = t;
			++position;
			if (tm_is_card(t, c.op)) break;
		}
		CatalogOptions opt;
		opt.approximator = Approximator::from_list("chain", [g](const Value&) { return g; });
		const ReductionSpec s = make_reduction("ordcard_guesscheck", opt);
		const OracleEnv env = env_of(c.op ? powers() : multiples());
		const InstanceReport i = verify_instance(s, env, ref::to_ordinal(c.input));
		record(s, env, i);
		if (!i.correct) o.fail("wrong card for " + ref::to_string(c.input));
		if (i.ledger_order_type != Ordinal(position) || !(i.ledger_order_type < w))
			o.fail("calls " + render(i.ledger_order_type) + " != position " + std::to_string(position));
	}
	CatalogOptions bad;
	bad.approximator = Approximator::from_list("rising", [](const Value&) { return std::vector<Ordinal>{w + Ordinal(1), w + Ordinal(2)}; });
	try {
		run(make_reduction("ordcard_guesscheck", bad).program(env_of(powers())), w + Ordinal(3), {{"dec", Effectivizer::dec_card(powers())}});
		o.fail("increasing approximator accepted");
	} catch (const ContractError&) {
	}
	if (o.pass) o.note << chains.size() << " chains of length 1-6, violation rejected";
}

// --- 6 ---------------------------------------------------------------------------

void sep(Outcome& o) {
	const std::vector<HFSet> v3{HFSet{}, hf_natural(1), HFSet::of({hf_natural(1)}), hf_natural(2)};
	struct Phi {
		std::string text;
		std::function<bool(const HFSet&, const std::vector<HFSet>&)> holds;
		std::vector<HFSet> params;
	};
	const std::vector<Phi> phis{
		{"A y (!(y in #0))", [](const HFSet& x, const auto&) { return x.empty(); }, {}},
		{"E y (y in #0)", [](const HFSet& x, const auto&) { return !x.empty(); }, {}},
		{"#0 = #0", [](const HFSet&, const auto&) { return true; }, {}},
		{"#0 in #1", [](const HFSet& x, const auto& p) { return p[0].contains(x); }, {hf_natural(2)}},
		{"#1 in #0", [](const HFSet& x, const auto& p) { return x.contains(p[0]); }, {HFSet{}}},
		{"#0 = #1 | #1 in #0", [](const HFSet& x, const auto& p) { return x == p[0] || x.contains(p[0]); }, {hf_natural(1)}},
		{"A y (y in #0 | !(y in #1))",
		 [](const HFSet& x, const auto& p) {
			 for (const HFSet& y : p[0].members())
				 if (!x.contains(y)) return false;
			 return true;
		 },
		 {hf_natural(1)}},
		{"E y (E z (y in #0 & z in y))",
		 [](const HFSet& x, const auto&) {
			 for (const HFSet& y : x.members())
				 if (!y.empty()) return true;
			 return false;
		 },
		 {}},
		{"!(#0 = #1)", [](const HFSet& x, const auto& p) { return x != p[0]; }, {HFSet::of({hf_natural(1)})}},
		{"#0 in #0", [](const HFSet&, const auto&) { return false; }, {}},
	};
	const ReductionSpec s = make_reduction("sep_via_truth");
	const OracleEnv env{std::nullopt, 4u, std::nullopt};
	auto input = [](const HFSet& set, const std::string& f, const std::vector<HFSet>& ps) {
		std::vector<SetCode> codes;
		for (const HFSet& p : ps) codes.push_back(encode_hf(p));
		return SepQuery{encode_hf(set), formula_index(parse_formula(f)), codes};
	};
	for (std::size_t k = 0; k < phis.size(); ++k) {
		std::vector<HFSet> m; // a different subset of V_3 per triple
		for (std::size_t b = 0; b < 4; ++b)
			if (((k * 7 + 5) >> b) & 1) m.push_back(v3[b]);
		const HFSet set = HFSet::of(m);
		std::vector<HFSet> kept;
		for (const HFSet& x : set.members())
			if (phis[k].holds(x, phis[k].params)) kept.push_back(x);
		const InstanceReport i = verify_instance(s, env, input(set, phis[k].text, phis[k].params));
		record(s, env, i);
		if (!i.output || *i.output != Value(encode_hf(HFSet::of(kept)))) o.fail("wrong subset for " + phis[k].text);
		if (i.ledger_entries != set.size()) o.fail("call count != |S| for " + phis[k].text);
	}
	for (const auto& [f, ps] : {std::pair{std::string("#0 in #1"), std::vector<HFSet>{}},
	                            std::pair{std::string("#0 = #0"), std::vector<HFSet>{HFSet{}}}}) {
		const InstanceReport i = verify_instance(s, env, input(hf_natural(3), f, ps));
		record(s, env, i);
		if (!i.output || *i.output != Value(encode_hf(HFSet{})) || i.ledger_entries != 0) o.fail("arity mismatch not empty/0 calls");
	}
	if (o.pass) o.note << phis.size() << " triples over V_3, 2 arity mismatches";
}

// --- 7 ---------------------------------------------------------------------------

void replay(Outcome& o) {
	for (const Recorded& r : recorded)
		if (run_scripted(r.program, r.input, r.result.responses()) != r.result) o.fail("replay differs for " + r.program.name);
	if (o.pass) o.note << recorded.size() << " runs replayed identically";
}

// --- 8 ---------------------------------------------------------------------------

void composition(Outcome& o) {
	struct Pipeline {
		std::string outer, inner;
		OracleEnv env;
		Value input;
		Ordinal expected_total;
	};
	const std::vector<Pipeline> ps{
		{"sep_via_truth", "truth_relay", {std::nullopt, 4u, std::nullopt},
		 SepQuery{encode_hf(hf_natural(3)), formula_index(parse_formula("E y (y in #0)")), {}}, Ordinal(3)},
		{"powercard_triple", "powercard_via_pot", {}, encode_hf(hf_natural(1)), Ordinal(6)},
		{"nextcard_twice", "nextcard_via_deccard", env_of(powers()), Value(Ordinal(5)), Ordinal(2)},
	};
	for (const Pipeline& p : ps) {
		const ReductionSpec c = compose(make_reduction(p.outer), make_reduction(p.inner));
		const InstanceReport i = verify_instance(c, p.env, p.input);
		if (!i.correct) o.fail(c.name + " wrong output");
		if (i.ledger_order_type != p.expected_total) o.fail(c.name + " total " + render(i.ledger_order_type));
		if (!i.within_bound) o.fail(c.name + " exceeds max(f.g, g.f)");
		o.note << c.name << " " << render(i.ledger_order_type) << " <= f.g=" << render(*i.bound->fg)
		       << ", g.f=" << render(*i.bound->gf) << " [" << product_verdict(i) << "]; ";
	}
}

// --- 9 ---------------------------------------------------------------------------

void arithmetic(Outcome& o) {
	const std::vector<Triple> all = ref::all_triples(3);
	std::vector<Ordinal> ords;
	for (const Triple& t : all) ords.push_back(ref::to_ordinal(t));
	std::size_t checks = 0;
	for (std::size_t i = 0; i < all.size(); ++i)
		for (std::size_t j = 0; j < all.size(); ++j) {
			const Triple &a = all[i], &b = all[j];
			const Ordinal &x = ords[i], &y = ords[j];
			checks += 3;
			if ((x <=> y) != (a <=> b)) o.fail("compare " + ref::to_string(a) + " " + ref::to_string(b));
			if (add(x, y) != ref::to_ordinal(ref::tm_add(a, b))) o.fail("add " + ref::to_string(a) + " " + ref::to_string(b));
			if (auto m = ref::tm_mul(a, b)) {
				++checks;
				if (mul(x, y) != ref::to_ordinal(*m)) o.fail("mul " + ref::to_string(a) + " " + ref::to_string(b));
			}
			if (auto d = ref::tm_left_sub(a, b)) {
				if (left_sub(x, y) != ref::to_ordinal(*d)) o.fail("left_sub " + ref::to_string(a) + " " + ref::to_string(b));
			} else if (a <= b) {
				o.fail("tuple model has no left_sub for " + ref::to_string(a) + " " + ref::to_string(b));
			}
		}
	for (std::size_t i = 0; i < all.size(); ++i)
		for (std::int64_t n = 0; n <= 3; ++n)
			if (auto p = ref::tm_pow(all[i], n)) {
				++checks;
				if (opow(ords[i], Ordinal(static_cast<std::uint64_t>(n))) != ref::to_ordinal(*p)) o.fail("pow " + ref::to_string(all[i]));
			}
	// sampled triples: associativity and left distributivity through the model
	std::mt19937_64 rng(2024);
	std::uniform_int_distribution<std::size_t> pick(0, all.size() - 1);
	for (int k = 0; k < 100000; ++k) {
		const std::size_t i = pick(rng), j = pick(rng), l = pick(rng);
		const Triple ab = ref::tm_add(all[i], all[j]);
		++checks;
		if (add(add(ords[i], ords[j]), ords[l]) != ref::to_ordinal(ref::tm_add(ab, all[l]))) o.fail("add triple");
		if (auto m1 = ref::tm_mul(all[i], ref::tm_add(all[j], all[l]))) {
			++checks;
			if (mul(ords[i], add(ords[j], ords[l])) != ref::to_ordinal(*m1)) o.fail("mul over add");
		}
	}
	if (o.pass) o.note << all.size() << " ordinals, " << checks << " checks";
}

} // namespace

int main() {
	criterion(1, "NextCard via DecCard: output, bound, leftsub equality", 1.0, nextcard_bound);
	criterion(2, "PowerCard via two Pot calls", 10.0, powercard);
	criterion(3, "flag trick exactness", 1.0, flagtrick);
	criterion(4, "OrdCard naive/improved scans", 1.0, ordcard);
	criterion(5, "guess-and-check", 1.0, guesscheck);
	criterion(6, "Sep via Truth", 5.0, sep);
	criterion(7, "scripted replay", 5.0, replay);
	criterion(8, "composition bound", 1.0, composition);
	criterion(9, "arithmetic vs tuple model", 30.0, arithmetic);
	return failures ? 1 : 0;
}
