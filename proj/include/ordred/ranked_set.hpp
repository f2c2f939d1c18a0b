#pragma once

// Ranked sets of ordinals: predicates that answer "next point at or above",
// "last point below" and "next limit point above" in closed form.  The
// machine evaluates transfinite scans through these queries instead of
// visiting every ordinal.
//
// Variants:
//   finite      an explicit finite set
//   cardinals   the cardinals of a structure (everything below its bound)
//   multiples   {u*n : n >= 1}
//   shifted     {offset + x : x in base}
//   window      {j : offset + j in base}      (base seen from offset on)
//   piecewise   consecutive pieces [start, start+length), each with its own
//               hits given in piece-local coordinates

#include <algorithm>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ordred/cardinal_structure.hpp"
#include "ordred/ordinal.hpp"

namespace ordred {

/// Result of a "greatest point below a" query.
struct Below {
	enum class Kind {
		none,     // no point below a
		found,    // `value` is the greatest point below a
		unbounded // points below a exist but have no maximum
	} kind = Kind::none;
	Ordinal value;

	static Below none() { return {}; }
	static Below found(Ordinal v) { return {Kind::found, std::move(v)}; }
	static Below unbounded() { return {Kind::unbounded, {}}; }
};

struct RankedPiece;

class RankedSet {
public:
	using Piece = RankedPiece;

	RankedSet() : RankedSet(Finite{}) {}

	static RankedSet finite(std::vector<Ordinal> points) {
		std::sort(points.begin(), points.end());
		points.erase(std::unique(points.begin(), points.end()), points.end());
		return RankedSet(Finite{std::move(points)});
	}
	static RankedSet cardinals(CardinalStructure cs) { return RankedSet(Cardinals{std::move(cs)}); }
	static RankedSet multiples(Ordinal unit) {
		if (unit.is_zero()) throw DomainError("multiples of 0");
		return RankedSet(Multiples{std::move(unit)});
	}
	static RankedSet shifted(RankedSet base, Ordinal offset) {
		return RankedSet(Shifted{std::make_shared<RankedSet>(std::move(base)), std::move(offset)});
	}
	static RankedSet window(RankedSet base, Ordinal offset) {
		return RankedSet(Window{std::make_shared<RankedSet>(std::move(base)), std::move(offset)});
	}
	static RankedSet piecewise(std::vector<Piece> pieces);

	/// Total length of a piecewise set (points at or beyond it do not exist).
	std::optional<Ordinal> horizon() const {
		if (auto* p = std::get_if<Piecewise>(&v_)) return p->total;
		return std::nullopt;
	}

	std::string describe() const {
		return std::visit([](const auto& x) { return x.describe(); }, v_);
	}

	bool contains(const Ordinal& a) const {
		return std::visit([&](const auto& x) { return x.contains(a); }, v_);
	}

	std::optional<Ordinal> least_at_or_above(const Ordinal& a) const {
		return std::visit([&](const auto& x) { return x.least_at_or_above(a); }, v_);
	}

	std::optional<Ordinal> least_above(const Ordinal& a) const { return least_at_or_above(successor(a)); }

	Below greatest_below(const Ordinal& a) const {
		return std::visit([&](const auto& x) { return x.greatest_below(a); }, v_);
	}

	Below greatest_at_most(const Ordinal& a) const {
		if (contains(a)) return Below::found(a);
		return greatest_below(a);
	}

	/// Least limit point l > a of the set (sup of the points below l = l).
	std::optional<Ordinal> next_limit_above(const Ordinal& a) const {
		return std::visit([&](const auto& x) { return x.next_limit_above(a); }, v_);
	}

private:
	struct Finite {
		std::vector<Ordinal> points;

		std::string describe() const {
			std::string s = "{";
			for (std::size_t i = 0; i < points.size(); ++i) s += (i ? ", " : "") + render(points[i]);
			return s + "}";
		}
		bool contains(const Ordinal& a) const { return std::binary_search(points.begin(), points.end(), a); }
		std::optional<Ordinal> least_at_or_above(const Ordinal& a) const {
			auto it = std::lower_bound(points.begin(), points.end(), a);
			if (it == points.end()) return std::nullopt;
			return *it;
		}
		Below greatest_below(const Ordinal& a) const {
			auto it = std::lower_bound(points.begin(), points.end(), a);
			if (it == points.begin()) return Below::none();
			return Below::found(*std::prev(it));
		}
		std::optional<Ordinal> next_limit_above(const Ordinal&) const { return std::nullopt; }
	};

	struct Cardinals {
		CardinalStructure cs;

		std::string describe() const { return "cardinals of " + cs.describe(); }
		bool contains(const Ordinal& a) const { return cs.contains(a); }
		std::optional<Ordinal> least_at_or_above(const Ordinal& a) const {
			if (cs.contains(a)) return a;
			return cs.least_above(a);
		}
		Below greatest_below(const Ordinal& a) const {
			if (a.is_zero()) return Below::none();
			// every nonzero ordinal has a finite cardinal below it, so an empty
			// answer means the cardinals below a have no maximum
			if (auto r = cs.greatest_below(a)) return Below::found(*r);
			return Below::unbounded();
		}
		std::optional<Ordinal> next_limit_above(const Ordinal& a) const { return cs.least_limit_above(a); }
	};

	// {u*n : n >= 1}; with u = w^e*c + rest, u*n = w^e*(c*n) + rest and the
	// only limit point is u*w = w^(e+1).
	struct Multiples {
		Ordinal unit;

		std::string describe() const { return "{" + render(unit) + "*n : n >= 1}"; }
		Ordinal times(const Natural& n) const { return mul(unit, Ordinal(n)); }
		Ordinal sup() const { return mul(unit, Ordinal::omega()); }
		const Ordinal& lead_exp() const { return unit.terms().front().exponent; }
		const Natural& lead_coeff() const { return unit.terms().front().coefficient; }

		// coefficient of a at the unit's leading exponent (a must be in [unit, sup))
		Natural quotient(const Ordinal& a) const {
			return a.terms().front().coefficient / lead_coeff();
		}

		bool contains(const Ordinal& a) const {
			if (a < unit || a >= sup()) return false;
			const Natural n = quotient(a);
			return n >= 1 && times(n) == a;
		}
		std::optional<Ordinal> least_at_or_above(const Ordinal& a) const {
			if (a <= unit) return unit;
			if (a >= sup()) return std::nullopt;
			Natural n = std::max(Natural(1), quotient(a));
			if (times(n) >= a) return times(n);
			return times(n + 1);
		}
		Below greatest_below(const Ordinal& a) const {
			if (a <= unit) return Below::none();
			if (a > sup() || a == sup()) return Below::unbounded();
			Natural n = quotient(a) + 1;
			while (n >= 1 && times(n) >= a) --n;
			if (n == 0) return Below::none();
			return Below::found(times(n));
		}
		std::optional<Ordinal> next_limit_above(const Ordinal& a) const {
			if (a < sup()) return sup();
			return std::nullopt;
		}
	};

	struct Shifted {
		std::shared_ptr<const RankedSet> base;
		Ordinal offset;

		std::string describe() const { return render(offset) + " + " + base->describe(); }
		bool contains(const Ordinal& a) const { return a >= offset && base->contains(left_sub(offset, a)); }
		std::optional<Ordinal> least_at_or_above(const Ordinal& a) const {
			auto r = base->least_at_or_above(a <= offset ? Ordinal{} : left_sub(offset, a));
			if (!r) return std::nullopt;
			return add(offset, *r);
		}
		Below greatest_below(const Ordinal& a) const {
			if (a <= offset) return Below::none();
			Below r = base->greatest_below(left_sub(offset, a));
			if (r.kind == Below::Kind::found) r.value = add(offset, r.value);
			return r;
		}
		std::optional<Ordinal> next_limit_above(const Ordinal& a) const {
			auto r = base->next_limit_above(a < offset ? Ordinal{} : left_sub(offset, a));
			if (!r) return std::nullopt;
			return add(offset, *r);
		}
	};

	struct Window {
		std::shared_ptr<const RankedSet> base;
		Ordinal offset;

		std::string describe() const { return base->describe() + " from " + render(offset); }
		bool contains(const Ordinal& j) const { return base->contains(add(offset, j)); }
		std::optional<Ordinal> least_at_or_above(const Ordinal& j) const {
			auto r = base->least_at_or_above(add(offset, j));
			if (!r) return std::nullopt;
			return left_sub(offset, *r);
		}
		Below greatest_below(const Ordinal& j) const {
			const Ordinal a = add(offset, j);
			auto first = base->least_at_or_above(offset);
			if (!first || *first >= a) return Below::none();
			Below r = base->greatest_below(a);
			if (r.kind == Below::Kind::found) r.value = left_sub(offset, r.value);
			return r;
		}
		std::optional<Ordinal> next_limit_above(const Ordinal& j) const {
			auto r = base->next_limit_above(add(offset, j));
			if (!r) return std::nullopt;
			return left_sub(offset, *r);
		}
	};

	struct Stored {
		Ordinal length;
		std::shared_ptr<const RankedSet> hits;
	};

	struct Piecewise {
		std::vector<Stored> pieces;
		std::vector<Ordinal> starts;
		Ordinal total;

		std::string describe() const {
			std::string s = "[";
			for (std::size_t i = 0; i < pieces.size(); ++i)
				s += (i ? "; " : "") + render(pieces[i].length) + ": " + pieces[i].hits->describe();
			return s + "]";
		}

		// index of the piece containing a (a < total)
		std::size_t locate(const Ordinal& a) const {
			auto it = std::upper_bound(starts.begin(), starts.end(), a);
			return static_cast<std::size_t>(it - starts.begin()) - 1;
		}

		bool contains(const Ordinal& a) const {
			if (a >= total) return false;
			const std::size_t i = locate(a);
			return pieces[i].hits->contains(left_sub(starts[i], a));
		}

		std::optional<Ordinal> least_at_or_above(const Ordinal& a) const {
			if (a >= total) return std::nullopt;
			std::size_t i = locate(a);
			Ordinal local = left_sub(starts[i], a);
			for (; i < pieces.size(); ++i, local = Ordinal{}) {
				auto r = pieces[i].hits->least_at_or_above(local);
				if (r && *r < pieces[i].length) return add(starts[i], *r);
			}
			return std::nullopt;
		}

		Below greatest_below(const Ordinal& a) const {
			if (pieces.empty()) return Below::none();
			std::size_t i;
			Ordinal local;
			if (a >= total) {
				i = pieces.size() - 1;
				local = pieces[i].length;
			} else {
				i = locate(a);
				local = left_sub(starts[i], a);
			}
			for (;;) {
				Below r = pieces[i].hits->greatest_below(local);
				if (r.kind == Below::Kind::found) return Below::found(add(starts[i], r.value));
				if (r.kind == Below::Kind::unbounded) return r;
				if (i == 0) return Below::none();
				--i;
				local = pieces[i].length;
			}
		}

		std::optional<Ordinal> next_limit_above(const Ordinal& a) const {
			if (a >= total) return std::nullopt;
			std::size_t i = locate(a);
			Ordinal local = left_sub(starts[i], a);
			for (; i < pieces.size(); ++i, local = Ordinal{}) {
				// a limit point at the very end of a piece still counts
				auto r = pieces[i].hits->next_limit_above(local);
				if (r && *r <= pieces[i].length) return add(starts[i], *r);
			}
			return std::nullopt;
		}
	};

	using Variant = std::variant<Finite, Cardinals, Multiples, Shifted, Window, Piecewise>;
	explicit RankedSet(Variant v) : v_(std::move(v)) {}

	Variant v_;
};

struct RankedPiece {
	Ordinal length;
	RankedSet hits; // piece-local; points >= length are ignored
};

inline RankedSet RankedSet::piecewise(std::vector<Piece> pieces) {
	Piecewise p;
	Ordinal start;
	for (Piece& piece : pieces) {
		if (piece.length.is_zero()) continue;
		p.starts.push_back(start);
		start = add(start, piece.length);
		p.pieces.push_back({piece.length, std::make_shared<RankedSet>(std::move(piece.hits))});
	}
	p.total = start;
	return RankedSet(std::move(p));
}

/// Flag value just before `position`, starting from `initial` and toggling
/// at every point of `toggles`; at a limit of toggles the flag reads 0.
inline bool flag_value_after(bool initial, const RankedSet& toggles, const Ordinal& position) {
	bool parity = false;
	Ordinal pos = position;
	for (;;) {
		Below b = toggles.greatest_below(pos);
		switch (b.kind) {
		case Below::Kind::none: return initial != parity;
		case Below::Kind::unbounded: return parity;
		case Below::Kind::found:
			parity = !parity;
			pos = b.value;
			break;
		}
	}
}

} // namespace ordred
