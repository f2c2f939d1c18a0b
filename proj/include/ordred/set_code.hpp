#pragma once

// Set codes: a hereditarily finite set written as a membership graph on the
// nodes 0 .. domain-1.  Each edge is the Cantor pair code of (x, y) meaning
// "node x is a member of node y".
//
// encode_hf() numbers the transitive closure of {s} in Ackermann order, so
// the code of a set is unique: node ids increase with the sets they denote
// and the empty set (when present) is node 0.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ordred/errors.hpp"
#include "ordred/hfset.hpp"
#include "ordred/pairing.hpp"

namespace ordred {

struct SetCode {
	std::uint64_t domain = 0;
	std::vector<std::uint64_t> edges; // sorted, unique pair codes
	std::uint64_t root = 0;

	friend bool operator==(const SetCode&, const SetCode&) = default;
	friend auto operator<=>(const SetCode&, const SetCode&) = default;

	std::vector<std::pair<std::uint64_t, std::uint64_t>> edge_pairs() const {
		std::vector<std::pair<std::uint64_t, std::uint64_t>> out;
		out.reserve(edges.size());
		for (std::uint64_t e : edges) out.push_back(cantor_unpair_u64(e));
		return out;
	}
};

inline std::string summarize(const SetCode& c) {
	return "code(domain=" + std::to_string(c.domain) + ",edges=" + std::to_string(c.edges.size()) +
	       ",root=" + std::to_string(c.root) + ")";
}

inline SetCode encode_hf(const HFSet& s) {
	std::set<HFSet> closure;
	std::vector<HFSet> stack{s};
	while (!stack.empty()) {
		HFSet x = stack.back();
		stack.pop_back();
		if (!closure.insert(x).second) continue;
		for (const HFSet& m : x.members()) stack.push_back(m);
	}
	std::vector<HFSet> nodes(closure.begin(), closure.end());
	auto id = [&](const HFSet& x) {
		return static_cast<std::uint64_t>(std::lower_bound(nodes.begin(), nodes.end(), x) - nodes.begin());
	};
	SetCode code;
	code.domain = nodes.size();
	code.root = id(s);
	for (std::uint64_t y = 0; y < nodes.size(); ++y)
		for (const HFSet& m : nodes[y].members()) code.edges.push_back(cantor_pair_u64(id(m), y));
	std::sort(code.edges.begin(), code.edges.end());
	return code;
}

namespace detail {

// Decodes every node.  Returns an error message when the code is not a valid
// extensional, well-founded membership graph reachable from its root.
inline std::optional<std::string> decode_nodes(const SetCode& c, std::vector<HFSet>& out) {
	if (c.domain == 0) return "empty domain";
	if (c.root >= c.domain) return "root outside the domain";
	if (!std::is_sorted(c.edges.begin(), c.edges.end()) ||
	    std::adjacent_find(c.edges.begin(), c.edges.end()) != c.edges.end())
		return "edge list must be sorted and duplicate-free";
	std::vector<std::vector<std::uint64_t>> children(c.domain);
	for (const auto& [x, y] : c.edge_pairs()) {
		if (x >= c.domain || y >= c.domain) return "edge endpoint outside the domain";
		children[y].push_back(x);
	}
	// iterative DFS post-order; colour 1 = on stack, 2 = done
	std::vector<int> colour(c.domain, 0);
	out.assign(c.domain, HFSet{});
	for (std::uint64_t start = 0; start < c.domain; ++start) {
		if (colour[start] != 0) continue;
		std::vector<std::pair<std::uint64_t, std::size_t>> stack{{start, 0}};
		colour[start] = 1;
		while (!stack.empty()) {
			auto& [node, next] = stack.back();
			if (next < children[node].size()) {
				const std::uint64_t child = children[node][next++];
				if (colour[child] == 1) return "membership cycle (ill-founded)";
				if (colour[child] == 0) {
					colour[child] = 1;
					stack.push_back({child, 0});
				}
				continue;
			}
			std::vector<HFSet> members;
			members.reserve(children[node].size());
			for (std::uint64_t ch : children[node]) members.push_back(out[ch]);
			out[node] = HFSet::of(std::move(members));
			colour[node] = 2;
			stack.pop_back();
		}
	}
	std::vector<HFSet> sorted = out;
	std::sort(sorted.begin(), sorted.end());
	if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) return "two nodes with the same members (not extensional)";
	// every node must lie in the transitive closure of the root
	std::vector<bool> seen(c.domain, false);
	std::vector<std::uint64_t> todo{c.root};
	seen[c.root] = true;
	std::uint64_t reached = 1;
	while (!todo.empty()) {
		std::uint64_t n = todo.back();
		todo.pop_back();
		for (std::uint64_t ch : children[n])
			if (!seen[ch]) {
				seen[ch] = true;
				++reached;
				todo.push_back(ch);
			}
	}
	if (reached != c.domain) return "node not reachable from the root";
	return std::nullopt;
}

} // namespace detail

inline std::optional<std::string> code_error(const SetCode& c) {
	std::vector<HFSet> nodes;
	return detail::decode_nodes(c, nodes);
}

inline bool validate_code(const SetCode& c) { return !code_error(c).has_value(); }

inline HFSet decode_set(const SetCode& c) {
	std::vector<HFSet> nodes;
	if (auto err = detail::decode_nodes(c, nodes)) throw DomainError("invalid set code: " + *err);
	return nodes[c.root];
}

/// Members of the coded set in the code's enumeration order (ascending node id).
inline std::vector<HFSet> decode_members(const SetCode& c) {
	std::vector<HFSet> nodes;
	if (auto err = detail::decode_nodes(c, nodes)) throw DomainError("invalid set code: " + *err);
	std::vector<std::uint64_t> ids;
	for (const auto& [x, y] : c.edge_pairs())
		if (y == c.root) ids.push_back(x);
	std::sort(ids.begin(), ids.end());
	std::vector<HFSet> out;
	for (auto id : ids) out.push_back(nodes[id]);
	return out;
}

} // namespace ordred
