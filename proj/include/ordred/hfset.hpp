#pragma once

// Hereditarily finite sets as immutable shared nodes.  Members are kept
// sorted in Ackermann order (x < y iff the largest element of the symmetric
// difference lies in y), which is also the order of the Ackermann codes
// sum 2^code(m).  Sets of rank < r are exactly the codes below |V_r|.

#include <algorithm>
#include <compare>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ordred/errors.hpp"

namespace ordred {

class HFSet {
public:
	HFSet() = default; // the empty set

	/// Set with the given members; duplicates collapse.
	static HFSet of(std::vector<HFSet> members) {
		std::sort(members.begin(), members.end());
		members.erase(std::unique(members.begin(), members.end()), members.end());
		return of_sorted(std::move(members));
	}

	/// Members must already be strictly increasing.
	static HFSet of_sorted(std::vector<HFSet> members) {
		if (members.empty()) return HFSet{};
		auto node = std::make_shared<Node>();
		std::size_t h = 0x9e3779b97f4a7c15ull;
		unsigned rank = 0;
		for (const HFSet& m : members) {
			h = h * 1000003u ^ m.hash();
			rank = std::max(rank, m.rank() + 1);
		}
		node->hash = h;
		node->rank = rank;
		node->members = std::move(members);
		return HFSet(std::move(node));
	}

	const std::vector<HFSet>& members() const {
		static const std::vector<HFSet> empty;
		return node_ ? node_->members : empty;
	}

	std::size_t size() const { return node_ ? node_->members.size() : 0; }
	bool empty() const { return !node_; }
	unsigned rank() const { return node_ ? node_->rank : 0; }
	std::size_t hash() const { return node_ ? node_->hash : 0x51ed27u; }

	bool contains(const HFSet& x) const {
		const auto& m = members();
		return std::binary_search(m.begin(), m.end(), x);
	}

	friend std::strong_ordering operator<=>(const HFSet& a, const HFSet& b) {
		if (a.node_ == b.node_) return std::strong_ordering::equal;
		if (a.rank() != b.rank()) return a.rank() <=> b.rank();
		const auto& x = a.members();
		const auto& y = b.members();
		auto i = x.rbegin();
		auto j = y.rbegin();
		for (; i != x.rend() && j != y.rend(); ++i, ++j)
			if (auto c = *i <=> *j; c != 0) return c;
		if (i != x.rend()) return std::strong_ordering::greater;
		if (j != y.rend()) return std::strong_ordering::less;
		return std::strong_ordering::equal;
	}

	friend bool operator==(const HFSet& a, const HFSet& b) {
		if (a.node_ == b.node_) return true;
		if (a.hash() != b.hash()) return false;
		return (a <=> b) == 0;
	}

private:
	struct Node {
		std::vector<HFSet> members;
		std::size_t hash = 0;
		unsigned rank = 0;
	};

	explicit HFSet(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

	std::shared_ptr<const Node> node_;
};

/// von Neumann natural n = {0, ..., n-1}.
inline HFSet hf_natural(std::uint64_t n) {
	std::vector<HFSet> members;
	members.reserve(n);
	HFSet current;
	for (std::uint64_t i = 0; i < n; ++i) {
		members.push_back(current);
		current = HFSet::of_sorted(members);
	}
	return current;
}

/// n when s is the von Neumann natural n.
inline std::optional<std::uint64_t> as_natural(const HFSet& s) {
	const auto& m = s.members();
	for (std::size_t i = 0; i < m.size(); ++i) {
		const auto& inner = m[i].members();
		if (inner.size() != i) return std::nullopt;
		for (std::size_t j = 0; j < i; ++j)
			if (!(inner[j] == m[j])) return std::nullopt;
	}
	return m.size();
}

/// Ackermann code sum 2^code(m) when it fits in 64 bits (always for rank <= 5).
inline std::optional<std::uint64_t> ackermann_code(const HFSet& s) {
	std::uint64_t code = 0;
	for (const HFSet& m : s.members()) {
		auto c = ackermann_code(m);
		if (!c || *c >= 64) return std::nullopt;
		code |= std::uint64_t{1} << *c;
	}
	return code;
}

inline HFSet from_ackermann(std::uint64_t code) {
	std::vector<HFSet> members;
	for (unsigned bit = 0; bit < 64; ++bit)
		if ((code >> bit) & 1u) members.push_back(from_ackermann(bit));
	return HFSet::of_sorted(std::move(members));
}

inline constexpr std::size_t kPowersetCap = 16;

inline HFSet hf_powerset(const HFSet& s) {
	const auto& m = s.members();
	if (m.size() > kPowersetCap)
		throw DomainError("powerset of a set with " + std::to_string(m.size()) + " members exceeds the cap of " +
		                  std::to_string(kPowersetCap));
	const std::size_t n = m.size();
	std::vector<HFSet> subsets;
	subsets.reserve(std::size_t{1} << n);
	for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
		std::vector<HFSet> sub;
		for (std::size_t i = 0; i < n; ++i)
			if (mask & (std::size_t{1} << i)) sub.push_back(m[i]);
		subsets.push_back(HFSet::of_sorted(std::move(sub)));
	}
	return HFSet::of(std::move(subsets));
}

inline std::size_t hf_card(const HFSet& s) { return s.size(); }

// --- text: "{}", "{{}, {{}}}" ------------------------------------------------

inline std::string render(const HFSet& s) {
	std::string out = "{";
	bool first = true;
	for (const HFSet& m : s.members()) {
		if (!first) out += ",";
		first = false;
		out += render(m);
	}
	return out + "}";
}

inline HFSet parse_hfset(std::string_view text) {
	std::size_t pos = 0;
	auto skip = [&] {
		while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t' || text[pos] == '\n')) ++pos;
	};
	std::function<HFSet()> parse_set = [&]() -> HFSet {
		skip();
		if (pos >= text.size() || text[pos] != '{') throw ParseError("expected '{'", pos);
		++pos;
		std::vector<HFSet> members;
		skip();
		if (pos < text.size() && text[pos] == '}') {
			++pos;
			return HFSet{};
		}
		for (;;) {
			members.push_back(parse_set());
			skip();
			if (pos < text.size() && text[pos] == ',') {
				++pos;
				continue;
			}
			if (pos < text.size() && text[pos] == '}') {
				++pos;
				break;
			}
			throw ParseError("expected ',' or '}'", pos);
		}
		return HFSet::of(std::move(members));
	};
	HFSet s = parse_set();
	skip();
	if (pos != text.size()) throw ParseError("trailing characters after set literal", pos);
	return s;
}

} // namespace ordred
