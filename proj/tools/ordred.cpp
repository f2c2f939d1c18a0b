// ordred: ordinal calculator, reduction runner, scenario runner, self-test.
//
// Exit status: 0 ok, 1 failed check or error, 2 usage/validation error,
// 3 diverged, 4 budget exceeded, 5 script exhausted.

#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ordred/ledger_json.hpp"
#include "ordred/ordinal_expr.hpp"
#include "ordred/scenario.hpp"
#include "ordred/testing/selftest.hpp"

using namespace ordred;

namespace {

enum Exit { ok = 0, failed = 1, usage = 2, diverged = 3, budget = 4, exhausted = 5 };

int exit_for(RunStatus s) {
	switch (s) {
	case RunStatus::halted: return ok;
	case RunStatus::diverged: return diverged;
	case RunStatus::budget_exceeded: return budget;
	case RunStatus::script_exhausted: return exhausted;
	}
	return failed;
}

std::string text_of(const json& j) { return j.is_string() ? j.get<std::string>() : j.dump(); }

struct ReduceArgs {
	std::string name;
	std::string input;
	std::string structure = "omega-powers";
	std::string bound;
	std::vector<std::string> list;
	std::string ledger;
	std::uint64_t budget = kDefaultBudget;
	std::string formula;
	std::vector<std::string> params;
	unsigned level = 2;
	unsigned rank = 4;
	std::string pot_search = "auto";
	std::string bound_form;
};

int cmd_calc(const std::string& expr) {
	std::cout << render(eval_ordinal_expr(expr)) << "\n";
	return ok;
}

// The reduce flags are assembled into a one-instance scenario so that both
// commands share validation.
int cmd_reduce(const ReduceArgs& a) {
	json sc{{"reduction", a.name}, {"budget", a.budget}, {"truth_level", a.level}, {"rank", a.rank}, {"pot_search", a.pot_search}};
	sc["structure"] = {{"kind", a.structure}};
	if (!a.bound.empty()) sc["structure"]["bound"] = a.bound;
	if (!a.list.empty()) sc["structure"]["list"] = a.list;
	if (!a.bound_form.empty()) sc["bound"] = a.bound_form;
	switch (input_kind(a.name)) {
	case InputKind::ordinal:
	case InputKind::set: sc["instances"] = json::array({a.input}); break;
	case InputKind::truth: sc["instances"] = json::array({{{"formula", a.formula}, {"params", a.params}}}); break;
	case InputKind::sep:
		sc["instances"] = json::array({{{"set", a.input}, {"formula", a.formula}, {"params", a.params}}});
		break;
	}
	const Scenario s = parse_scenario(sc.dump(2));
	const ReductionSpec spec = s.spec();
	const InstanceReport r = verify_instance(spec, s.env(), s.instances.front(), s.budget);
	if (!r.error.empty()) {
		std::cerr << "error: " << r.error << "\n";
		return failed;
	}
	const json run = instance_to_json(spec.name, r);
	if (!a.ledger.empty()) write_atomically(a.ledger, run.dump(2) + "\n");
	std::cout << "status: " << to_string(r.status) << "\n";
	if (r.output) std::cout << "output: " << text_of(value_to_json(*r.output)) << "\n";
	std::cout << "total: " << render(r.ledger_order_type) << "\n";
	std::cout << "halt_time: " << r.result.halt_time_text() << "\n";
	std::cout << "entries: " << r.ledger_entries << "\n";
	if (r.result.halted()) {
		std::cout << "expected: " << text_of(value_to_json(*r.expected)) << (r.correct ? " (correct)" : " (WRONG)") << "\n";
		std::cout << "bound " << spec.bound.form << ": " << r.bound->text() << (r.within_bound ? " (within)" : " (EXCEEDED)")
		          << "\n";
	}
	if (!r.result.halted()) return exit_for(r.status);
	return r.passed() ? ok : failed;
}

int cmd_run(const std::string& path, const std::string& output_override) {
	const Scenario s = load_scenario(path);
	const ReductionSpec spec = s.spec();
	const Report rep = verify(spec, s.env(), s.instances, s.budget);
	const json j = report_to_json(rep);
	std::cout << render_report(rep) << j.dump(2) << "\n";
	const std::string out = !output_override.empty() ? output_override : s.output.value_or("");
	if (!out.empty()) write_atomically(out, j.dump(2) + "\n");
	return rep.passed() ? ok : failed;
}

int cmd_selftest() {
	bool all = true;
	for (const selftest::Check& c : selftest::run_selftest()) {
		std::cout << (c.passed ? "PASS " : "FAIL ") << c.suite << ": " << c.name << (c.detail.empty() ? "" : " [" + c.detail + "]")
		          << "\n";
		all = all && c.passed;
	}
	std::cout << (all ? "selftest passed\n" : "selftest FAILED\n");
	return all ? ok : failed;
}

} // namespace

int main(int argc, char** argv) {
	CLI::App app{"ordinal reductions: calculator, reduction runner and query ledgers"};
	app.require_subcommand(1);

	std::string expr;
	auto* calc = app.add_subcommand("calc", "evaluate an ordinal expression (+, *, ^, leftsub(a,b))");
	calc->add_option("expr", expr, "expression")->required();

	ReduceArgs ra;
	auto* reduce = app.add_subcommand("reduce", "run one reduction on one input and emit its ledger");
	reduce->add_option("name", ra.name, "reduction name")->required();
	reduce->add_option("--input", ra.input, "ordinal, or HF-set literal for set inputs");
	reduce->add_option("--structure", ra.structure, "omega-powers, multiples-of-omega or explicit-list");
	reduce->add_option("--bound", ra.bound, "structure bound (default per kind)");
	reduce->add_option("--list", ra.list, "explicit-list cardinals")->delimiter(',');
	reduce->add_option("--ledger", ra.ledger, "write the ledger JSON here");
	reduce->add_option("--budget", ra.budget, "event budget");
	reduce->add_option("--formula", ra.formula, "formula for sep/truth inputs");
	reduce->add_option("--param", ra.params, "formula parameter (HF-set literal), repeatable");
	reduce->add_option("--level", ra.level, "truth level n");
	reduce->add_option("--rank", ra.rank, "universe rank for truth evaluation");
	reduce->add_option("--pot-search", ra.pot_search, "full, count-only or auto");
	reduce->add_option("--bound-form", ra.bound_form, "override the query bound");

	std::string scenario, output;
	auto* run = app.add_subcommand("run", "verify a scenario file");
	run->add_option("scenario", scenario, "scenario JSON")->required()->check(CLI::ExistingFile);
	run->add_option("--output", output, "write the report JSON here");

	auto* self = app.add_subcommand("selftest", "run the invariant suites");

	try {
		app.parse(argc, argv);
	} catch (const CLI::ParseError& e) {
		const int code = app.exit(e);
		return code == 0 ? ok : usage;
	}

	try {
		if (*calc) return cmd_calc(expr);
		if (*reduce) {
			const auto& names = reduction_names();
			const auto& aux = auxiliary_reduction_names();
			if (std::find(names.begin(), names.end(), ra.name) == names.end() &&
			    std::find(aux.begin(), aux.end(), ra.name) == aux.end()) {
				std::cerr << "unknown reduction '" << ra.name << "'; known:";
				for (const auto& n : names) std::cerr << " " << n;
				std::cerr << "\n";
				return usage;
			}
			if (ra.input.empty() && input_kind(ra.name) != InputKind::truth) {
				std::cerr << "--input is required\n";
				return usage;
			}
			return cmd_reduce(ra);
		}
		if (*run) return cmd_run(scenario, output);
		if (*self) return cmd_selftest();
	} catch (const ScenarioError& e) {
		std::cerr << "invalid scenario: " << e.what() << "\n";
		return usage;
	} catch (const std::exception& e) {
		std::cerr << "error: " << e.what() << "\n";
		return failed;
	}
	return usage;
}
