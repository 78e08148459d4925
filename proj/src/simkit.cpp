#include "detsched/simkit.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <random>
#include <set>

#include "detsched/rng.hpp"

namespace detsched {

std::string_view to_string(Topology t)
{
	return t == Topology::Random ? "random" : "fixed";
}

Topology topology_from_string(std::string_view s)
{
	if (s == "random")
		return Topology::Random;
	if (s == "fixed")
		return Topology::Fixed;
	throw ContractViolation("unknown topology: " + std::string(s));
}

std::vector<std::pair<NodeId, NodeId>> fixed_router_pairs()
{
	// Island A: a six-router ring with one chord. Island B: a four-router
	// ring with one chord. No link joins the islands.
	return {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 0}, {1, 4},
	        {6, 7}, {7, 8}, {8, 9}, {9, 6}, {6, 8}};
}

Instance generate_instance(const InstanceConfig& cfg)
{
	require(cfg.n_tasks >= 0, "generate_instance: negative task count");
	require(cfg.n_routers > 0, "generate_instance: need routers");
	require(cfg.bytes_per_slot > 0, "generate_instance: bytes_per_slot must be positive");
	std::mt19937_64 rng(splitmix64(cfg.seed));
	Instance inst{OperationalGraph(cfg.bytes_per_slot), {}};
	auto& g = inst.graph;

	for (int i = 0; i < cfg.n_routers; ++i)
		g.add_node(NodeKind::Router);
	if (cfg.topology == Topology::Random) {
		std::vector<std::pair<NodeId, NodeId>> pairs;
		for (NodeId u = 0; u < cfg.n_routers; ++u)
			for (NodeId v = u + 1; v < cfg.n_routers; ++v)
				pairs.emplace_back(u, v);
		require(cfg.n_router_links >= 0 &&
		            static_cast<std::size_t>(cfg.n_router_links) <= pairs.size(),
		        "generate_instance: more router links than router pairs");
		shuffle_in_place(pairs, rng);
		pairs.resize(static_cast<std::size_t>(cfg.n_router_links));
		std::sort(pairs.begin(), pairs.end());
		for (auto [u, v] : pairs)
			g.add_connection(u, v);
	} else {
		require(cfg.n_routers == 10, "generate_instance: fixed topology has 10 routers");
		for (auto [u, v] : fixed_router_pairs())
			g.add_connection(u, v);
	}

	auto random_router = [&] {
		return static_cast<NodeId>(uniform_below(rng, static_cast<std::uint64_t>(cfg.n_routers)));
	};
	std::vector<NodeId> devices;
	for (int i = 0; i < cfg.n_tasks; ++i) {
		NodeId d = g.add_node(NodeKind::Device);
		g.add_connection(d, random_router());
		devices.push_back(d);
	}
	const int servers = cfg.server_rule == ServerRule::EqualTasks ? cfg.n_tasks
	                                                              : (cfg.n_tasks + 4) / 5;
	for (int i = 0; i < servers; ++i) {
		NodeId s = g.add_node(NodeKind::Server);
		g.add_connection(s, random_router());
	}

	static const Slot periods[] = {3000, 5000, 10000};
	static const std::int64_t payloads_mb[] = {1, 2, 5, 10};
	static const Slot computes[] = {500, 1000, 1500, 2000};
	constexpr std::int64_t mb = 1'000'000;
	for (int i = 0; i < cfg.n_tasks; ++i) {
		TaskSpec t;
		t.id = i;
		t.source_device = devices[static_cast<std::size_t>(i)];
		t.period = periods[uniform_below(rng, 3)];
		t.deadline = t.period;
		t.release = uniform_between(rng, 0, 100);
		t.payload_fwd = payloads_mb[uniform_below(rng, 4)] * mb;
		t.payload_ret = mb;
		t.compute_len = computes[uniform_below(rng, 4)];
		inst.tasks.push_back(t);
	}
	return inst;
}

namespace {

struct Window {
	TaskId owner;
	Slot start; // absolute, may exceed the period
	Slot len;
	Slot period;
};

void check_path(const OperationalGraph& g, const std::vector<NodeId>& path, TaskId task,
                const char* leg, VerificationReport& out)
{
	auto bad = [&](std::string detail) {
		out.push_back({"path", "task:" + std::to_string(task), -1, {task},
		               std::string(leg) + ": " + std::move(detail)});
	};
	if (path.size() < 2) {
		bad("needs at least one link");
		return;
	}
	std::set<NodeId> seen;
	for (std::size_t i = 0; i < path.size(); ++i) {
		if (!g.has_node(path[i])) {
			bad("unknown node " + std::to_string(path[i]));
			return;
		}
		if (!seen.insert(path[i]).second)
			bad("revisits node " + std::to_string(path[i]));
		if (i > 0 && i + 1 < path.size() && !g.node(path[i]).is_router())
			bad("relays through non-router " + std::to_string(path[i]));
		if (i > 0 && !g.has_link(path[i - 1], path[i]))
			bad("missing link " + std::to_string(path[i - 1]) + "->" + std::to_string(path[i]));
	}
}

} // namespace

VerificationReport verify_schedule(const OperationalGraph& g, std::span<const TaskSpec> tasks,
                                   std::span<const ScheduleDecision> decisions)
{
	VerificationReport out;
	std::map<TaskId, const TaskSpec*> by_id;
	for (const auto& t : tasks)
		by_id[t.id] = &t;

	// Resource key: (a, b) with b == kNoNode for servers.
	std::map<std::pair<NodeId, NodeId>, std::vector<Window>> windows;
	std::vector<Slot> periods;
	std::set<TaskId> decided;

	for (const auto& d : decisions) {
		const std::string who = "task:" + std::to_string(d.task);
		auto it = by_id.find(d.task);
		if (it == by_id.end()) {
			out.push_back({"reference", who, -1, {d.task}, "decision for unknown task"});
			continue;
		}
		if (!decided.insert(d.task).second) {
			out.push_back({"reference", who, -1, {d.task}, "task decided twice"});
			continue;
		}
		const TaskSpec& t = *it->second;
		if (!g.has_node(d.server) || !g.node(d.server).is_server()) {
			out.push_back({"reference", who, -1, {d.task}, "server is not a server node"});
			continue;
		}
		for (TimingRule rule : timing_violations(d, t, g.bytes_per_slot())) {
			const char* kind = rule == TimingRule::ReturnBeforeDeadline ? "deadline"
			                   : rule == TimingRule::PathEndpoints      ? "path"
			                                                            : "timing";
			out.push_back({kind, who, -1, {d.task}, std::string(to_string(rule))});
		}
		check_path(g, d.path_fwd, d.task, "forward", out);
		check_path(g, d.path_ret, d.task, "return", out);

		periods.push_back(t.period);
		windows[{d.server, kNoNode}].push_back({t.id, d.compute_start, t.compute_len, t.period});
		auto lay = [&](const std::vector<NodeId>& path, Slot depart, Slot gamma) {
			for (std::size_t w = 0; w + 1 < path.size(); ++w)
				windows[{path[w], path[w + 1]}].push_back(
					{t.id, depart + static_cast<Slot>(w) * gamma, gamma, t.period});
		};
		lay(d.path_fwd, d.depart_fwd, gamma_fwd(t, g.bytes_per_slot()));
		lay(d.path_ret, d.depart_ret, gamma_ret(t, g.bytes_per_slot()));
	}

	if (!periods.empty()) {
		const Slot hp = hyperperiod(periods);
		require(hp <= 100'000'000, "verify_schedule: hyperperiod too large to expand");
		std::vector<TaskId> owner;
		for (const auto& [key, ws] : windows) {
			if (ws.size() < 2)
				continue;
			owner.assign(static_cast<std::size_t>(hp), -1);
			std::set<std::pair<TaskId, TaskId>> reported;
			for (const auto& w : ws) {
				for (Slot k = 0; k < hp / w.period; ++k) {
					for (Slot i = 0; i < w.len; ++i) {
						const Slot slot = (w.start + k * w.period + i) % hp;
						TaskId& cell = owner[static_cast<std::size_t>(slot)];
						if (cell < 0) {
							cell = w.owner;
							continue;
						}
						auto pair = std::minmax(cell, w.owner);
						if (!reported.insert(pair).second)
							continue;
						std::string res = key.second == kNoNode
						                      ? "server:" + std::to_string(key.first)
						                      : "link:" + std::to_string(key.first) + "->" +
						                            std::to_string(key.second);
						out.push_back({"overlap", std::move(res), slot, {pair.first, pair.second},
						               "slot used twice"});
					}
				}
			}
		}
	}
	std::sort(out.begin(), out.end());
	return out;
}

VerificationReport structural_violations(const OperationalGraph& g)
{
	VerificationReport out;
	auto node_finding = [&](NodeId n, std::string detail) {
		out.push_back({"structure", "node:" + std::to_string(n), -1, {}, std::move(detail)});
	};
	for (const Node& n : g.nodes()) {
		if (n.is_router())
			continue;
		if (n.is_server() && n.server_state == ServerState::Virtual)
			node_finding(n.id, "virtual server remains");
		int routers = 0;
		for (NodeId v : g.successors(n.id)) {
			if (g.node(v).is_router())
				++routers;
			else
				node_finding(n.id, "linked to non-router " + std::to_string(v));
		}
		if (routers != 1)
			node_finding(n.id, "attached to " + std::to_string(routers) + " routers");
	}
	for (const auto& [key, link] : g.links()) {
		const std::string res = "link:" + std::to_string(key.first) + "->" + std::to_string(key.second);
		if (key.first == key.second)
			out.push_back({"structure", res, -1, {}, "self link"});
		if (!g.has_link(key.second, key.first))
			out.push_back({"structure", res, -1, {}, "no reverse link"});
		if (link.state == LinkState::Virtual)
			out.push_back({"structure", res, -1, {}, "virtual link remains"});
	}
	std::sort(out.begin(), out.end());
	return out;
}

} // namespace detsched
