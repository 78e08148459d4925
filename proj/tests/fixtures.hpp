#pragma once

#include <algorithm>
#include <functional>
#include <vector>

#include "detsched/graph.hpp"

namespace fixtures {

using namespace detsched;

// Every simple path src -> dst whose inner nodes are routers, found by
// unbounded recursion and sorted by (length, node sequence).
inline std::vector<std::vector<NodeId>> all_simple_paths(const OperationalGraph& g, NodeId src,
                                                         NodeId dst, Slot max_hops)
{
	std::vector<std::vector<NodeId>> out;
	std::vector<NodeId> path{src};
	std::function<void(NodeId)> walk = [&](NodeId u) {
		if (u == dst) {
			if (hop_count(path) <= max_hops)
				out.push_back(path);
			return;
		}
		if (u != src && !g.node(u).is_router())
			return;
		for (const auto& [key, link] : g.links()) {
			if (key.first != u || std::find(path.begin(), path.end(), key.second) != path.end())
				continue;
			path.push_back(key.second);
			walk(key.second);
			path.pop_back();
		}
	};
	walk(src);
	std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
		if (a.size() != b.size())
			return a.size() < b.size();
		return a < b;
	});
	return out;
}

inline TaskSpec task(TaskId id, NodeId device, Slot release, Slot period, Slot compute,
                     Slot gamma_fwd = 1, Slot gamma_ret = 1, Slot deadline = -1)
{
	return {id,        device,
	        release,   period,
	        deadline < 0 ? period : deadline,
	        gamma_fwd * 1'000'000, gamma_ret * 1'000'000,
	        compute};
}

} // namespace fixtures
