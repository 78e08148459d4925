#include "detsched/deployer.hpp"

#include <algorithm>
#include <chrono>
#include <set>
#include <string>
#include <tuple>

namespace detsched {

std::string_view to_string(Planner p)
{
	switch (p) {
	case Planner::Combined: return "Combined";
	case Planner::NcostFS: return "NcostFS";
	case Planner::ScostFS: return "ScostFS";
	case Planner::ONetFS: return "ONetFS";
	case Planner::LCFU: return "LCFU";
	case Planner::SCFU: return "SCFU";
	}
	return "?";
}

Planner planner_from_string(std::string_view s)
{
	for (auto p : {Planner::Combined, Planner::NcostFS, Planner::ScostFS, Planner::ONetFS,
	               Planner::LCFU, Planner::SCFU})
		if (to_string(p) == s)
			return p;
	throw ContractViolation("unknown planner: " + std::string(s));
}

namespace {

IdealGraph ideal_with_spares(const OperationalGraph& g0, int spares, UpgradeMode mode,
                             CostParams params)
{
	require(params.c_s >= 0 && params.c_l >= 0, "ideal graph: negative cost");
	IdealGraph ig{g0, {mode, params, {}, {}}};
	auto& g = ig.graph;
	const auto routers = g0.routers();
	for (int i = 0; i < spares; ++i) {
		NodeId s = g.add_node(NodeKind::Server, ServerState::Virtual);
		for (NodeId r : routers)
			g.add_connection(s, r, LinkState::Virtual);
	}
	if (mode == UpgradeMode::SCFU)
		for (NodeId u : routers)
			for (NodeId v : routers)
				if (u != v && !g.has_link(u, v))
					g.add_link(u, v, LinkState::Virtual);

	for (NodeId s : g.servers()) {
		switch (g.node(s).server_state) {
		case ServerState::Virtual: ig.costs.server_cost[s] = params.c_s; break;
		case ServerState::RealUnused: ig.costs.server_cost[s] = 1.0; break;
		case ServerState::RealUsed: ig.costs.server_cost[s] = 0.0; break;
		}
	}
	for (const auto& [key, link] : g.links()) {
		double c = 0.0;
		if (link.state == LinkState::Virtual) {
			const bool attachment = g.node(key.first).is_server() || g.node(key.second).is_server();
			c = attachment ? 1.0 : params.c_l;
		}
		ig.costs.link_cost[key] = c;
	}
	return ig;
}

std::vector<const Candidate*> preference_order(const std::vector<Candidate>& pool, UpgradeMode mode)
{
	auto key = [mode](const Candidate* c) {
		return mode == UpgradeMode::LCFU ? std::tuple(c->link_cost, c->server_cost, c->rank)
		                                 : std::tuple(c->server_cost, c->link_cost, c->rank);
	};
	std::vector<const Candidate*> out;
	for (const auto& c : pool)
		out.push_back(&c);
	std::sort(out.begin(), out.end(), [&](const Candidate* a, const Candidate* b) { return key(a) < key(b); });
	return out;
}

std::set<LinkKey> used_links(const ScheduleDecision& d)
{
	std::set<LinkKey> out;
	for (const auto* path : {&d.path_fwd, &d.path_ret})
		for (std::size_t w = 0; w + 1 < path->size(); ++w)
			out.insert({(*path)[w], (*path)[w + 1]});
	return out;
}

std::pair<double, double> cost_parts(const ScheduleDecision& d, const CostMatrix& costs)
{
	auto s = costs.server_cost.find(d.server);
	require(s != costs.server_cost.end(), "decision_cost: server not in cost matrix");
	double links = 0.0;
	for (const auto& key : used_links(d)) {
		auto l = costs.link_cost.find(key);
		require(l != costs.link_cost.end(), "decision_cost: link not in cost matrix");
		links += l->second;
	}
	return {s->second, links};
}

std::map<TaskId, const TaskSpec*> index_tasks(const std::vector<TaskSpec>& tasks)
{
	std::map<TaskId, const TaskSpec*> out;
	for (const auto& t : tasks)
		require(out.emplace(t.id, &t).second, "deploy: duplicate task id");
	return out;
}

void finish(DeployPlan& plan, CostParams params,
            std::chrono::steady_clock::time_point t0)
{
	std::sort(plan.added_links.begin(), plan.added_links.end());
	plan.asnum = static_cast<int>(plan.added_servers.size());
	plan.alnum = static_cast<int>(plan.added_links.size());
	plan.tcost = upgrade_cost(plan.graph, plan.added_servers, plan.added_links, params);
	plan.feasible = plan.infeasible.empty();
	plan.runtime_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Copies the used part of an ideal graph onto g0 and replays the commitments.
DeployPlan crop(const OperationalGraph& g0, const OperationalGraph& ideal,
                const std::vector<ScheduleDecision>& decisions,
                const std::map<TaskId, const TaskSpec*>& tasks)
{
	DeployPlan plan{g0, true, {}, {}, 0, 0, 0.0, {}, {}, 0.0};
	auto& g = plan.graph;
	std::vector<NodeId> remap(ideal.node_count(), kNoNode);
	for (NodeId id = 0; id < static_cast<NodeId>(g0.node_count()); ++id)
		remap[static_cast<std::size_t>(id)] = id;
	for (NodeId id = static_cast<NodeId>(g0.node_count());
	     id < static_cast<NodeId>(ideal.node_count()); ++id) {
		if (ideal.node(id).server_state == ServerState::Virtual)
			continue;
		remap[static_cast<std::size_t>(id)] = g.add_node(NodeKind::Server);
	}
	std::set<LinkKey> pairs;
	for (const auto& [key, link] : ideal.links()) {
		NodeId u = remap[static_cast<std::size_t>(key.first)];
		NodeId v = remap[static_cast<std::size_t>(key.second)];
		if (link.state != LinkState::Real || u == kNoNode || v == kNoNode || g.has_link(u, v))
			continue;
		g.add_link(u, v);
		pairs.insert(std::minmax(u, v));
	}
	for (NodeId id = static_cast<NodeId>(g0.node_count()); id < static_cast<NodeId>(g.node_count());
	     ++id) {
		auto succ = g.successors(id);
		plan.added_servers.push_back({id, succ.empty() ? kNoNode : succ.front()});
	}
	plan.added_links.assign(pairs.begin(), pairs.end());

	auto map_path = [&](std::vector<NodeId> path) {
		for (auto& n : path)
			n = remap[static_cast<std::size_t>(n)];
		return path;
	};
	for (const auto& d : decisions) {
		ScheduleDecision m = d;
		m.server = remap[static_cast<std::size_t>(d.server)];
		m.path_fwd = map_path(d.path_fwd);
		m.path_ret = map_path(d.path_ret);
		commit(g, *tasks.at(d.task), m);
		plan.decisions.push_back(std::move(m));
	}
	return plan;
}

DeployPlan single_ideal_run(const OperationalGraph& g0, const std::vector<TaskSpec>& tasks,
                            const DeployConfig& cfg, UpgradeMode mode)
{
	const auto t0 = std::chrono::steady_clock::now();
	const auto by_id = index_tasks(tasks);
	const int real_servers = static_cast<int>(g0.servers().size());
	auto ig = ideal_with_spares(g0, std::max(0, static_cast<int>(tasks.size()) - real_servers), mode,
	                            cfg.costs);
	std::vector<ScheduleDecision> decisions;
	std::vector<TaskId> failed;
	for (const auto& t : order_tasks(tasks, cfg.ordering, cfg.seed)) {
		auto pool = candidate_pool(ig.graph, ig.costs, t, cfg.broker);
		const Candidate* c = select_candidate(pool, mode);
		if (!c) {
			failed.push_back(t.id);
			continue;
		}
		materialize(ig.graph, ig.costs, t, c->decision);
		decisions.push_back(c->decision);
	}
	DeployPlan plan = crop(g0, ig.graph, decisions, by_id);
	plan.infeasible = std::move(failed);
	finish(plan, cfg.costs, t0);
	return plan;
}

// Adds whatever `d` needs that `g` lacks, then commits it. A server id past
// the end of `g` stands for a new server.
void adopt(DeployPlan& plan, std::set<LinkKey>& pairs, const TaskSpec& t, const ScheduleDecision& d)
{
	auto& g = plan.graph;
	if (d.server >= static_cast<NodeId>(g.node_count())) {
		require(d.server == static_cast<NodeId>(g.node_count()) && d.path_fwd.size() >= 2,
		        "deploy: unexpected new server id");
		const NodeId router = d.path_fwd[d.path_fwd.size() - 2];
		const NodeId s = g.add_node(NodeKind::Server);
		g.add_connection(s, router);
		plan.added_servers.push_back({s, router});
		pairs.insert(std::minmax(s, router));
	}
	for (const auto& [u, v] : used_links(d)) {
		if (g.has_link(u, v))
			continue;
		g.add_connection(u, v);
		pairs.insert(std::minmax(u, v));
	}
	commit(g, t, d);
	plan.decisions.push_back(d);
}

std::vector<Candidate> pool_on(const OperationalGraph& g, UpgradeMode mode, const TaskSpec& t,
                               const DeployConfig& cfg)
{
	auto ig = ideal_with_spares(g, 1, mode, cfg.costs);
	auto pool = candidate_pool(ig.graph, ig.costs, t, cfg.broker);
	for (auto& c : pool)
		c.mode = mode;
	return pool;
}

DeployPlan per_task_run(const OperationalGraph& g0, const std::vector<TaskSpec>& tasks,
                        const DeployConfig& cfg, Planner planner)
{
	const auto t0 = std::chrono::steady_clock::now();
	index_tasks(tasks);
	DeployPlan plan{g0, true, {}, {}, 0, 0, 0.0, {}, {}, 0.0};
	std::set<LinkKey> pairs;
	for (const auto& t : order_tasks(tasks, cfg.ordering, cfg.seed)) {
		std::optional<ScheduleDecision> chosen;
		auto take = [&](const std::vector<Candidate>& pool, UpgradeMode mode) {
			if (const Candidate* c = select_candidate(pool, mode))
				chosen = c->decision;
		};
		switch (planner) {
		case Planner::Combined: {
			auto lcfu = pool_on(plan.graph, UpgradeMode::LCFU, t, cfg);
			auto scfu = pool_on(plan.graph, UpgradeMode::SCFU, t, cfg);
			// Cheapest in total; LCFU first, and each pool in its own preference order.
			const Candidate* best = nullptr;
			for (const auto* c : preference_order(lcfu, UpgradeMode::LCFU))
				if (!best || c->total() < best->total())
					best = c;
			for (const auto* c : preference_order(scfu, UpgradeMode::SCFU))
				if (!best || c->total() < best->total())
					best = c;
			if (best)
				chosen = best->decision;
			break;
		}
		case Planner::NcostFS:
			take(pool_on(plan.graph, UpgradeMode::LCFU, t, cfg), UpgradeMode::LCFU);
			if (!chosen)
				take(pool_on(plan.graph, UpgradeMode::SCFU, t, cfg), UpgradeMode::SCFU);
			break;
		case Planner::ScostFS:
			take(pool_on(plan.graph, UpgradeMode::SCFU, t, cfg), UpgradeMode::SCFU);
			break;
		case Planner::ONetFS:
			chosen = schedule_task(plan.graph, t, RankingStrategy::Broker, cfg.seed, cfg.broker);
			if (!chosen)
				take(pool_on(plan.graph, UpgradeMode::SCFU, t, cfg), UpgradeMode::SCFU);
			break;
		default:
			throw ContractViolation("per-task deployment: unsupported planner");
		}
		if (chosen)
			adopt(plan, pairs, t, *chosen);
		else
			plan.infeasible.push_back(t.id);
	}
	plan.added_links.assign(pairs.begin(), pairs.end());
	finish(plan, cfg.costs, t0);
	return plan;
}

} // namespace

IdealGraph build_ideal_graph(const OperationalGraph& g0, int n_tasks, UpgradeMode mode,
                             CostParams params)
{
	const int real_servers = static_cast<int>(g0.servers().size());
	return ideal_with_spares(g0, std::max(0, n_tasks - real_servers), mode, params);
}

double decision_cost(const ScheduleDecision& d, const CostMatrix& costs)
{
	auto [s, l] = cost_parts(d, costs);
	return s + l;
}

void materialize(OperationalGraph& g, CostMatrix& costs, const TaskSpec& t,
                 const ScheduleDecision& d)
{
	const auto used = used_links(d);
	commit(g, t, d);

	for (const auto& [u, v] : used) {
		for (const auto& key : {LinkKey{u, v}, LinkKey{v, u}}) {
			if (!g.has_link(key.first, key.second))
				continue;
			g.set_link_state(key.first, key.second, LinkState::Real);
			costs.link_cost[key] = 0.0;
		}
	}
	if (g.node(d.server).server_state == ServerState::Virtual) {
		g.set_server_state(d.server, ServerState::RealUsed);
		std::vector<LinkKey> spare;
		for (const auto& [key, link] : g.links())
			if ((key.first == d.server || key.second == d.server) && link.state == LinkState::Virtual)
				spare.push_back(key);
		for (const auto& key : spare) {
			g.remove_link(key.first, key.second);
			costs.link_cost.erase(key);
		}
	}
	costs.server_cost[d.server] = 0.0;
}

std::vector<Candidate> candidate_pool(OperationalGraph& ideal, const CostMatrix& costs,
                                      const TaskSpec& t, const BrokerConfig& cfg)
{
	auto opts = compute_level_schedule(ideal, t, cfg);
	rank_options(opts, RankingStrategy::Broker, 0);
	NodeId spare = kNoNode;
	for (NodeId s : ideal.servers())
		if (ideal.node(s).server_state == ServerState::Virtual) {
			spare = s;
			break;
		}

	std::vector<Candidate> pool;
	std::set<NodeId> placed;
	for (std::size_t i = 0; i < opts.size(); ++i) {
		const auto& opt = opts[i];
		if (placed.contains(opt.server))
			continue;
		if (ideal.node(opt.server).server_state == ServerState::Virtual && opt.server != spare)
			continue;
		auto d = try_compute_option(ideal, t, opt, cfg);
		if (!d)
			continue;
		placed.insert(opt.server);
		auto [s, l] = cost_parts(*d, costs);
		pool.push_back({std::move(*d), s, l, i, costs.mode});
	}
	return pool;
}

const Candidate* select_candidate(const std::vector<Candidate>& pool, UpgradeMode mode)
{
	auto order = preference_order(pool, mode);
	return order.empty() ? nullptr : order.front();
}

double upgrade_cost(const OperationalGraph& upgraded, const std::vector<AddedServer>& servers,
                    const std::vector<LinkKey>& links, CostParams params)
{
	double total = params.c_s * static_cast<double>(servers.size());
	for (const auto& [u, v] : links) {
		const bool routers = upgraded.node(u).is_router() && upgraded.node(v).is_router();
		total += routers ? params.c_l : 1.0;
	}
	return total;
}

DeployPlan lcfu_run(const OperationalGraph& g0, const std::vector<TaskSpec>& tasks,
                    const DeployConfig& cfg)
{
	return single_ideal_run(g0, tasks, cfg, UpgradeMode::LCFU);
}

DeployPlan scfu_run(const OperationalGraph& g0, const std::vector<TaskSpec>& tasks,
                    const DeployConfig& cfg)
{
	return single_ideal_run(g0, tasks, cfg, UpgradeMode::SCFU);
}

DeployPlan combined_run(const OperationalGraph& g0, const std::vector<TaskSpec>& tasks,
                        const DeployConfig& cfg)
{
	return per_task_run(g0, tasks, cfg, Planner::Combined);
}

DeployPlan baseline_deploy(const OperationalGraph& g0, const std::vector<TaskSpec>& tasks,
                           const DeployConfig& cfg, Planner variant)
{
	require(variant == Planner::NcostFS || variant == Planner::ScostFS || variant == Planner::ONetFS,
	        "baseline_deploy: not a baseline planner");
	return per_task_run(g0, tasks, cfg, variant);
}

DeployPlan deploy(const OperationalGraph& g0, const std::vector<TaskSpec>& tasks, Planner planner,
                  const DeployConfig& cfg)
{
	switch (planner) {
	case Planner::LCFU: return lcfu_run(g0, tasks, cfg);
	case Planner::SCFU: return scfu_run(g0, tasks, cfg);
	case Planner::Combined: return combined_run(g0, tasks, cfg);
	default: return baseline_deploy(g0, tasks, cfg, planner);
	}
}

} // namespace detsched
