#pragma once

// Pairing functions.
//
// On naturals, cantor_pair(x, y) = (x+y)(x+y+1)/2 + y.
//
// On ordinals, pairs are well-ordered by (natural sum a#b, then b) and
// godel_pair(a, b) is the order type of the pairs below (a, b).  Every
// natural sum has finitely many decompositions, so the ordering has type On
// and the map is a bijection; on finite arguments it is the Cantor polynomial.
// With s = a#b = L + k (L a limit or 0, k finite) and d the number of
// decompositions of L:
//
//   godel_pair(a, b) = L + d*k*(k+1)/2 + rank of b among decompositions of s
//
// where decompositions are ranked by their second component in mixed radix
// over the coefficients of s.

#include <cstdint>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "ordred/ordinal.hpp"

namespace ordred {

inline Natural cantor_pair(const Natural& x, const Natural& y) {
	const Natural s = x + y;
	return s * (s + 1) / 2 + y;
}

/// Largest k with k*(k+1)/2 <= z.
inline Natural triangular_root(const Natural& z) {
	Natural k = (boost::multiprecision::sqrt(Natural(8 * z + 1)) - 1) / 2;
	while (k * (k + 1) / 2 > z) --k;
	while ((k + 1) * (k + 2) / 2 <= z) ++k;
	return k;
}

inline std::pair<Natural, Natural> cantor_unpair(const Natural& z) {
	const Natural s = triangular_root(z);
	const Natural y = z - s * (s + 1) / 2;
	return {s - y, y};
}

inline std::uint64_t cantor_pair_u64(std::uint64_t x, std::uint64_t y) {
	const std::uint64_t s = x + y;
	return s * (s + 1) / 2 + y;
}

inline std::pair<std::uint64_t, std::uint64_t> cantor_unpair_u64(std::uint64_t z) {
	auto [x, y] = cantor_unpair(Natural(z));
	return {x.convert_to<std::uint64_t>(), y.convert_to<std::uint64_t>()};
}

namespace detail {

// Coefficients of a and b aligned on the exponents of a#b.
struct Aligned {
	std::vector<Ordinal> exponents; // infinite exponents of the natural sum, descending
	std::vector<Natural> a_coeff;
	std::vector<Natural> b_coeff;
	Natural a_fin = 0;
	Natural b_fin = 0;
};

inline Aligned align(const Ordinal& a, const Ordinal& b) {
	Aligned out;
	auto i = a.terms().begin();
	auto j = b.terms().begin();
	auto push = [&](const Ordinal& e, const Natural& x, const Natural& y) {
		if (e.is_zero()) {
			out.a_fin = x;
			out.b_fin = y;
		} else {
			out.exponents.push_back(e);
			out.a_coeff.push_back(x);
			out.b_coeff.push_back(y);
		}
	};
	while (i != a.terms().end() || j != b.terms().end()) {
		if (j == b.terms().end() || (i != a.terms().end() && i->exponent > j->exponent)) {
			push(i->exponent, i->coefficient, 0);
			++i;
		} else if (i == a.terms().end() || j->exponent > i->exponent) {
			push(j->exponent, 0, j->coefficient);
			++j;
		} else {
			push(i->exponent, i->coefficient, j->coefficient);
			++i;
			++j;
		}
	}
	return out;
}

} // namespace detail

inline Ordinal godel_pair(const Ordinal& a, const Ordinal& b) {
	const detail::Aligned al = detail::align(a, b);
	std::vector<Term> limit_terms;
	Natural d = 1;
	Natural rank = 0;
	for (std::size_t i = 0; i < al.exponents.size(); ++i) {
		const Natural c = al.a_coeff[i] + al.b_coeff[i];
		limit_terms.push_back(Term{al.exponents[i], c});
		d *= c + 1;
		rank = rank * (c + 1) + al.b_coeff[i];
	}
	const Natural k = al.a_fin + al.b_fin;
	rank = rank * (k + 1) + al.b_fin;
	const Natural finite = d * k * (k + 1) / 2 + rank;
	return add(Ordinal::from_terms(std::move(limit_terms)), Ordinal(finite));
}

inline std::pair<Ordinal, Ordinal> godel_unpair(const Ordinal& g) {
	const Ordinal lim = limit_part(g);
	const Natural f = finite_part(g);
	Natural d = 1;
	for (const Term& t : lim.terms()) d *= t.coefficient + 1;
	const Natural k = triangular_root(f / d);
	Natural r = f - d * k * (k + 1) / 2;
	const Natural b_fin = r % (k + 1);
	r /= k + 1;
	const auto& terms = lim.terms();
	std::vector<Natural> b_coeff(terms.size());
	for (std::size_t i = terms.size(); i-- > 0;) {
		b_coeff[i] = r % (terms[i].coefficient + 1);
		r /= terms[i].coefficient + 1;
	}
	std::vector<Term> at;
	std::vector<Term> bt;
	for (std::size_t i = 0; i < terms.size(); ++i) {
		const Natural ac = terms[i].coefficient - b_coeff[i];
		if (ac != 0) at.push_back(Term{terms[i].exponent, ac});
		if (b_coeff[i] != 0) bt.push_back(Term{terms[i].exponent, b_coeff[i]});
	}
	if (k - b_fin != 0) at.push_back(Term{Ordinal{}, k - b_fin});
	if (b_fin != 0) bt.push_back(Term{Ordinal{}, b_fin});
	return {Ordinal::from_terms(std::move(at)), Ordinal::from_terms(std::move(bt))};
}

} // namespace ordred
