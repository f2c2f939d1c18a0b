#pragma once

// Toy cardinal structures: a designated class of ordinals below a bound that
// plays the role of the cardinals.  Every structure contains all finite
// ordinals and w; the infinite part is one of
//
//   omega-powers        { w^b : b >= 1 }
//   multiples-of-omega  { w*g : g >= 1 }   (every limit ordinal)
//   explicit-list       a finite list of infinite ordinals, always including w
//
// restricted to ordinals below the bound.  All classes are closed under
// suprema of increasing sequences below the bound.

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "ordred/errors.hpp"
#include "ordred/ordinal.hpp"

namespace ordred {

enum class StructureKind { omega_powers, multiples_of_omega, explicit_list };

inline std::string to_string(StructureKind k) {
	switch (k) {
	case StructureKind::omega_powers: return "omega-powers";
	case StructureKind::multiples_of_omega: return "multiples-of-omega";
	case StructureKind::explicit_list: return "explicit-list";
	}
	return "?";
}

inline StructureKind parse_structure_kind(const std::string& s) {
	if (s == "omega-powers") return StructureKind::omega_powers;
	if (s == "multiples-of-omega") return StructureKind::multiples_of_omega;
	if (s == "explicit-list") return StructureKind::explicit_list;
	throw DomainError("unknown structure kind '" + s + "'");
}

class CardinalStructure {
public:
	static CardinalStructure omega_powers(Ordinal bound) {
		return CardinalStructure(StructureKind::omega_powers, std::move(bound), {});
	}

	static CardinalStructure multiples_of_omega(Ordinal bound) {
		return CardinalStructure(StructureKind::multiples_of_omega, std::move(bound), {});
	}

	/// Sorts and deduplicates `infinite_cardinals` and adds w.  Entries must
	/// be infinite and below the bound.
	static CardinalStructure explicit_list(Ordinal bound, std::vector<Ordinal> infinite_cardinals) {
		for (const Ordinal& a : infinite_cardinals) {
			if (a.is_finite()) throw DomainError("explicit-list entries must be infinite, got " + render(a));
			if (a >= bound) throw DomainError("explicit-list entry " + render(a) + " is not below the bound");
		}
		infinite_cardinals.push_back(Ordinal::omega());
		std::sort(infinite_cardinals.begin(), infinite_cardinals.end());
		infinite_cardinals.erase(std::unique(infinite_cardinals.begin(), infinite_cardinals.end()),
		                         infinite_cardinals.end());
		return CardinalStructure(StructureKind::explicit_list, std::move(bound), std::move(infinite_cardinals));
	}

	/// Default bounds used by the CLI: w^(w^(w)) for omega-powers and w^(w)
	/// for multiples-of-omega.
	static Ordinal default_bound(StructureKind k) {
		return k == StructureKind::multiples_of_omega ? parse_ordinal("w^(w)") : parse_ordinal("w^(w^(w))");
	}

	StructureKind kind() const noexcept { return kind_; }
	const Ordinal& bound() const noexcept { return bound_; }
	/// Infinite cardinals of an explicit-list structure, ascending.
	const std::vector<Ordinal>& list() const noexcept { return list_; }

	std::string describe() const {
		std::string s = to_string(kind_) + " below " + render(bound_);
		if (kind_ == StructureKind::explicit_list) {
			s += " {";
			for (std::size_t i = 0; i < list_.size(); ++i) s += (i ? ", " : "") + render(list_[i]);
			s += "}";
		}
		return s;
	}

	/// For explicit lists: every limit point of the class below the bound is
	/// in the class.  A finite list has w as its only possible limit point.
	bool closure_holds() const {
		if (kind_ != StructureKind::explicit_list) return true;
		return std::binary_search(list_.begin(), list_.end(), Ordinal::omega());
	}

	void check_in_range(const Ordinal& a) const {
		if (a >= bound_) throw DomainError("ordinal " + render(a) + " is outside the structure (bound " + render(bound_) + ")");
	}

	bool is_cardinal(const Ordinal& a) const {
		check_in_range(a);
		return contains(a);
	}

	/// Greatest cardinal <= a.
	Ordinal card_of(const Ordinal& a) const {
		check_in_range(a);
		return *greatest_at_most(a);
	}

	/// Least cardinal > a; DomainError when there is none below the bound.
	Ordinal next_card_of(const Ordinal& a) const {
		check_in_range(a);
		auto r = least_above(a);
		if (!r) throw DomainError("no cardinal above " + render(a) + " below " + render(bound_));
		return *r;
	}

	/// Least l > a that is a limit of cardinals.
	Ordinal next_limit_of_cardinals_above(const Ordinal& a) const {
		check_in_range(a);
		auto r = least_limit_above(a);
		if (!r) throw DomainError("no limit of cardinals above " + render(a) + " below " + render(bound_));
		return *r;
	}

	// --- ranked queries; nullopt means "none below the bound" ---------------

	bool contains(const Ordinal& a) const {
		if (a >= bound_) return false;
		if (a.is_finite()) return true;
		switch (kind_) {
		case StructureKind::omega_powers: return a.terms().size() == 1 && a.terms()[0].coefficient == 1;
		case StructureKind::multiples_of_omega: return a.is_limit();
		case StructureKind::explicit_list: return std::binary_search(list_.begin(), list_.end(), a);
		}
		return false;
	}

	std::optional<Ordinal> least_above(const Ordinal& a) const {
		std::optional<Ordinal> r;
		if (a.is_finite()) {
			r = successor(a);
		} else {
			switch (kind_) {
			case StructureKind::omega_powers: r = Ordinal::omega_power(successor(leading_exponent(a))); break;
			case StructureKind::multiples_of_omega: r = add(limit_part(a), Ordinal::omega()); break;
			case StructureKind::explicit_list: {
				auto it = std::upper_bound(list_.begin(), list_.end(), a);
				if (it != list_.end()) r = *it;
				break;
			}
			}
		}
		return below_bound(std::move(r));
	}

	std::optional<Ordinal> greatest_at_most(const Ordinal& a) const {
		if (a >= bound_) return greatest_below(bound_);
		if (a.is_finite()) return a;
		switch (kind_) {
		case StructureKind::omega_powers: return Ordinal::omega_power(leading_exponent(a));
		case StructureKind::multiples_of_omega: return limit_part(a);
		case StructureKind::explicit_list: return *std::prev(std::upper_bound(list_.begin(), list_.end(), a));
		}
		return std::nullopt;
	}

	/// Greatest cardinal < a; nullopt when a is 0 or cardinals are cofinal in a.
	std::optional<Ordinal> greatest_below(const Ordinal& a) const {
		if (a.is_zero()) return std::nullopt;
		if (a.is_successor()) return greatest_at_most(predecessor(a));
		if (a > bound_) return greatest_at_most(bound_);
		// a is a limit <= bound
		switch (kind_) {
		case StructureKind::omega_powers: {
			const Term& lead = a.terms().front();
			if (a.terms().size() > 1 || lead.coefficient > 1) return Ordinal::omega_power(lead.exponent);
			if (lead.exponent.is_limit() || lead.exponent == Ordinal(1)) return std::nullopt;
			return Ordinal::omega_power(predecessor(lead.exponent));
		}
		case StructureKind::multiples_of_omega: {
			const Term& last = a.terms().back();
			if (last.exponent != Ordinal(1)) return std::nullopt;
			std::vector<Term> t = a.terms();
			if (--t.back().coefficient == 0) t.pop_back();
			Ordinal prev = Ordinal::from_terms(std::move(t));
			if (prev.is_zero()) return std::nullopt;
			return prev;
		}
		case StructureKind::explicit_list: {
			if (a == Ordinal::omega()) return std::nullopt;
			auto it = std::lower_bound(list_.begin(), list_.end(), a);
			return *std::prev(it);
		}
		}
		return std::nullopt;
	}

	/// Least l > a such that cardinals are cofinal in l.
	std::optional<Ordinal> least_limit_above(const Ordinal& a) const {
		std::optional<Ordinal> r;
		if (a.is_finite()) {
			r = Ordinal::omega();
		} else {
			switch (kind_) {
			case StructureKind::omega_powers: {
				// w^l is a limit of powers of w iff l is a limit ordinal
				Ordinal l = add(limit_part(leading_exponent(a)), Ordinal::omega());
				r = Ordinal::omega_power(std::move(l));
				break;
			}
			case StructureKind::multiples_of_omega:
				r = add(truncate_below(a, Ordinal(2)), Ordinal::omega_power(Ordinal(2)));
				break;
			case StructureKind::explicit_list: break;
			}
		}
		return below_bound(std::move(r));
	}

private:
	CardinalStructure(StructureKind kind, Ordinal bound, std::vector<Ordinal> list)
		: kind_(kind), bound_(std::move(bound)), list_(std::move(list)) {
		if (bound_ <= Ordinal::omega()) throw DomainError("structure bound must exceed w");
	}

	std::optional<Ordinal> below_bound(std::optional<Ordinal> r) const {
		if (r && *r >= bound_) return std::nullopt;
		return r;
	}

	static Ordinal predecessor(const Ordinal& a) {
		std::vector<Term> t = a.terms();
		if (--t.back().coefficient == 0) t.pop_back();
		return Ordinal::from_terms(std::move(t));
	}

	StructureKind kind_;
	Ordinal bound_;
	std::vector<Ordinal> list_;
};

} // namespace ordred
