#pragma once

// Scenario files: a structure, a reduction and a list of instances to verify.
//
//   {
//     "structure": {"kind": "omega-powers", "bound": "w^(w^(w))", "list": [...]},
//     "reduction": "nextcard_via_deccard",
//     "instances": ["5", "w*2+1", ...],
//     "budget": 1000000,          optional
//     "bound": "a+1",             optional override of the reduction's bound
//     "truth_level": 2, "rank": 4, "pot_search": "auto",   optional
//     "output": "ledger.json"     optional
//   }
//
// Ordinal instances are ordinal strings, set instances HF literals, and
// sep/truth instances objects {"set", "formula", "params"}.

#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ordred/formula.hpp"
#include "ordred/hfset.hpp"
#include "ordred/reductions.hpp"

namespace ordred {

/// A scenario that does not parse or does not validate.
class ScenarioError : public Error {
public:
	using Error::Error;
};

struct Scenario {
	StructureKind kind = StructureKind::omega_powers;
	Ordinal bound;
	std::vector<Ordinal> list;
	std::string reduction;
	std::vector<Value> instances;
	std::uint64_t budget = kDefaultBudget;
	std::optional<std::string> bound_override;
	unsigned truth_level = 2;
	unsigned rank = 4;
	PotSearch pot_search = PotSearch::automatic;
	std::optional<std::string> output;

	CardinalStructure structure() const {
		switch (kind) {
		case StructureKind::omega_powers: return CardinalStructure::omega_powers(bound);
		case StructureKind::multiples_of_omega: return CardinalStructure::multiples_of_omega(bound);
		case StructureKind::explicit_list: return CardinalStructure::explicit_list(bound, list);
		}
		throw ScenarioError("unknown structure kind");
	}

	OracleEnv env() const { return {structure(), rank, std::nullopt}; }

	CatalogOptions options() const {
		CatalogOptions o;
		o.truth_level = truth_level;
		o.pot_search = pot_search;
		return o;
	}

	ReductionSpec spec() const;
};

/// What a reduction takes as input.
enum class InputKind { ordinal, set, truth, sep };

inline InputKind input_kind(const std::string& reduction) {
	if (reduction == "powercard_via_pot" || reduction == "powercard_triple") return InputKind::set;
	if (reduction == "sep_via_truth") return InputKind::sep;
	if (reduction == "truth_relay") return InputKind::truth;
	return InputKind::ordinal;
}

inline std::vector<SetCode> param_codes(const std::vector<std::string>& params) {
	std::vector<SetCode> out;
	for (const std::string& p : params) out.push_back(encode_hf(parse_hfset(p)));
	return out;
}

inline SepQuery make_sep_input(const std::string& set, const std::string& formula, const std::vector<std::string>& params) {
	return {encode_hf(parse_hfset(set)), formula_index(parse_formula(formula)), param_codes(params)};
}

inline TruthQuery make_truth_input(const std::string& formula, const std::vector<std::string>& params) {
	return {formula_index(parse_formula(formula)), param_codes(params)};
}

/// Bound forms by name: "a+1", "card(a)^+ + 1", "finite", "|S|",
/// "leftsub(a, next limit)", or a natural constant.
inline Bound bound_from_form(const std::string& form) {
	if (form == "a+1") return Bound::successor_of_input();
	if (form == "card(a)^+ + 1") return Bound::successor_cardinal_plus_one();
	if (form == "finite") return Bound::finite();
	if (form == "|S|") return Bound::set_size();
	if (form == "leftsub(a, next limit)") return Bound::gap_to_next_limit();
	if (!form.empty() && form.size() < 19 && std::all_of(form.begin(), form.end(), ::isdigit))
		return Bound::constant(std::stoull(form));
	throw ScenarioError("unknown bound form '" + form + "'");
}

inline ReductionSpec Scenario::spec() const {
	ReductionSpec s = make_reduction(reduction, options());
	if (bound_override) s.bound = bound_from_form(*bound_override);
	return s;
}

namespace detail {

inline std::size_t line_of_offset(const std::string& text, std::size_t offset) {
	offset = std::min(offset, text.size());
	return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(offset), '\n'));
}

// JSON carries no positions after parsing, so a bad value is located by the
// first line that mentions it.
inline std::string locate(const std::string& text, const std::string& needle) {
	if (needle.empty()) return "";
	auto at = text.find(needle);
	if (at == std::string::npos) return "";
	return " (line " + std::to_string(line_of_offset(text, at)) + ")";
}

} // namespace detail

inline Scenario parse_scenario(const std::string& text) {
	using nlohmann::json;
	json j;
	try {
		j = json::parse(text);
	} catch (const json::parse_error& e) {
		throw ScenarioError("scenario is not valid JSON at line " + std::to_string(detail::line_of_offset(text, e.byte)) +
		                    ": " + e.what());
	}
	auto fail = [&](const std::string& where, const std::string& msg, const std::string& needle = "") -> ScenarioError {
		std::string loc = detail::locate(text, needle.empty() ? "" : needle);
		if (loc.empty()) loc = detail::locate(text, "\"" + where.substr(where.find_last_of('/') + 1) + "\"");
		return ScenarioError(where + ": " + msg + loc);
	};
	auto str = [&](const json& v, const std::string& where) {
		if (!v.is_string()) throw fail(where, "expected a string");
		return v.get<std::string>();
	};
	auto nat = [&](const json& v, const std::string& where) {
		if (!v.is_number_unsigned()) throw fail(where, "expected a non-negative integer");
		return v.get<std::uint64_t>();
	};
	if (!j.is_object()) throw ScenarioError("scenario must be a JSON object");
	for (auto it = j.begin(); it != j.end(); ++it) {
		static const std::vector<std::string> known{"structure", "reduction", "instances", "budget", "bound",
		                                            "truth_level", "rank", "pot_search", "output", "name"};
		if (std::find(known.begin(), known.end(), it.key()) == known.end()) throw fail("/" + it.key(), "unknown field");
	}

	Scenario s;
	if (!j.contains("structure") || !j["structure"].is_object()) throw fail("/structure", "missing structure object");
	const json& st = j["structure"];
	try {
		s.kind = parse_structure_kind(str(st.value("kind", json("omega-powers")), "/structure/kind"));
		s.bound = st.contains("bound") ? parse_ordinal(str(st["bound"], "/structure/bound"))
		                               : CardinalStructure::default_bound(s.kind);
		if (st.contains("list")) {
			if (!st["list"].is_array()) throw fail("/structure/list", "expected an array");
			for (std::size_t i = 0; i < st["list"].size(); ++i)
				s.list.push_back(parse_ordinal(str(st["list"][i], "/structure/list/" + std::to_string(i))));
		}
		(void)s.structure();
	} catch (const ScenarioError&) {
		throw;
	} catch (const Error& e) {
		throw fail("/structure", e.what());
	}

	if (!j.contains("reduction")) throw fail("/reduction", "missing reduction name");
	s.reduction = str(j["reduction"], "/reduction");
	const auto& names = reduction_names();
	const auto& aux = auxiliary_reduction_names();
	if (std::find(names.begin(), names.end(), s.reduction) == names.end() &&
	    std::find(aux.begin(), aux.end(), s.reduction) == aux.end())
		throw fail("/reduction", "unknown reduction '" + s.reduction + "'", s.reduction);

	if (j.contains("budget")) s.budget = nat(j["budget"], "/budget");
	if (s.budget == 0) throw fail("/budget", "budget must be positive");
	if (j.contains("bound")) {
		s.bound_override = str(j["bound"], "/bound");
		try {
			bound_from_form(*s.bound_override);
		} catch (const ScenarioError& e) {
			throw fail("/bound", e.what());
		}
	}
	if (j.contains("truth_level")) s.truth_level = static_cast<unsigned>(nat(j["truth_level"], "/truth_level"));
	if (j.contains("rank")) {
		s.rank = static_cast<unsigned>(nat(j["rank"], "/rank"));
		if (s.rank > kMaxTruthRank) throw fail("/rank", "rank is capped at " + std::to_string(kMaxTruthRank));
	}
	if (j.contains("pot_search")) {
		const std::string m = str(j["pot_search"], "/pot_search");
		if (m == "full") s.pot_search = PotSearch::full;
		else if (m == "count-only") s.pot_search = PotSearch::count_only;
		else if (m == "auto") s.pot_search = PotSearch::automatic;
		else throw fail("/pot_search", "expected full, count-only or auto");
	}
	if (j.contains("output")) s.output = str(j["output"], "/output");

	if (!j.contains("instances") || !j["instances"].is_array()) throw fail("/instances", "missing instance array");
	const InputKind kind = input_kind(s.reduction);
	for (std::size_t i = 0; i < j["instances"].size(); ++i) {
		const json& v = j["instances"][i];
		const std::string where = "/instances/" + std::to_string(i);
		const std::string needle = v.is_string() ? v.get<std::string>() : "";
		try {
			switch (kind) {
			case InputKind::ordinal: {
				Ordinal a = parse_ordinal(str(v, where));
				if (a >= s.bound) throw fail(where, "instance " + render(a) + " is not below the bound " + render(s.bound), needle);
				s.instances.emplace_back(std::move(a));
				break;
			}
			case InputKind::set: s.instances.emplace_back(encode_hf(parse_hfset(str(v, where)))); break;
			case InputKind::truth:
			case InputKind::sep: {
				if (!v.is_object()) throw fail(where, "expected an object with formula and params");
				std::vector<std::string> params;
				for (const json& p : v.value("params", json::array())) params.push_back(str(p, where + "/params"));
				const std::string formula = str(v.value("formula", json()), where + "/formula");
				if (kind == InputKind::truth) s.instances.emplace_back(make_truth_input(formula, params));
				else s.instances.emplace_back(make_sep_input(str(v.value("set", json()), where + "/set"), formula, params));
				break;
			}
			}
		} catch (const ScenarioError&) {
			throw;
		} catch (const Error& e) {
			throw fail(where, e.what(), needle);
		}
	}
	if (s.instances.empty()) throw fail("/instances", "no instances");
	return s;
}

inline Scenario load_scenario(const std::filesystem::path& path) {
	std::ifstream in(path);
	if (!in) throw ScenarioError("cannot read scenario " + path.string());
	std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
	return parse_scenario(text);
}

/// Writes via a temporary file in the same directory and a rename, so readers
/// never see a partial file.
inline void write_atomically(const std::filesystem::path& path, const std::string& contents) {
	std::filesystem::path tmp = path;
	tmp += ".tmp";
	{
		std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
		if (!out) throw Error("cannot write " + tmp.string());
		out << contents;
		out.close();
		if (!out) throw Error("cannot write " + tmp.string());
	}
	std::filesystem::rename(tmp, path);
}

} // namespace ordred
