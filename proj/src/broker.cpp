#include "detsched/broker.hpp"

#include <algorithm>
#include <chrono>
#include <deque>
#include <random>
#include <set>
#include <string>
#include <tuple>

#include "detsched/conflict.hpp"
#include "detsched/rng.hpp"

namespace detsched {

std::string_view to_string(RankingStrategy s)
{
	switch (s) {
	case RankingStrategy::Broker: return "Broker";
	case RankingStrategy::DelayFS: return "DelayFS";
	case RankingStrategy::NearestFS: return "NearestFS";
	case RankingStrategy::DFNS: return "DFNS";
	case RankingStrategy::RandomS: return "RandomS";
	}
	return "?";
}

std::string_view to_string(TaskOrdering o)
{
	switch (o) {
	case TaskOrdering::Period: return "Period";
	case TaskOrdering::Base: return "Base";
	case TaskOrdering::Random: return "Random";
	case TaskOrdering::CTimeA: return "CTimeA";
	case TaskOrdering::CTimeB: return "CTimeB";
	}
	return "?";
}

RankingStrategy ranking_from_string(std::string_view s)
{
	for (auto r : {RankingStrategy::Broker, RankingStrategy::DelayFS, RankingStrategy::NearestFS,
	               RankingStrategy::DFNS, RankingStrategy::RandomS})
		if (to_string(r) == s)
			return r;
	throw ContractViolation("unknown ranking strategy: " + std::string(s));
}

TaskOrdering ordering_from_string(std::string_view s)
{
	for (auto o : {TaskOrdering::Period, TaskOrdering::Base, TaskOrdering::Random,
	               TaskOrdering::CTimeA, TaskOrdering::CTimeB})
		if (to_string(o) == s)
			return o;
	throw ContractViolation("unknown task ordering: " + std::string(s));
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt)
{
	return splitmix64(seed ^ splitmix64(salt + 0x9e3779b97f4a7c15ULL));
}

namespace {

// BFS where only `src` and routers forward. `succ(u)` yields neighbours.
template <class Succ>
std::vector<int> relay_bfs(const OperationalGraph& g, NodeId src, Succ succ)
{
	std::vector<int> dist(g.node_count(), -1);
	std::deque<NodeId> queue{src};
	dist[static_cast<std::size_t>(src)] = 0;
	while (!queue.empty()) {
		NodeId u = queue.front();
		queue.pop_front();
		if (u != src && !g.node(u).is_router())
			continue;
		for (NodeId v : succ(u)) {
			auto& dv = dist[static_cast<std::size_t>(v)];
			if (dv < 0) {
				dv = dist[static_cast<std::size_t>(u)] + 1;
				queue.push_back(v);
			}
		}
	}
	return dist;
}

std::vector<std::vector<NodeId>> predecessor_lists(const OperationalGraph& g)
{
	std::vector<std::vector<NodeId>> pred(g.node_count());
	for (const auto& [key, link] : g.links())
		pred[static_cast<std::size_t>(key.second)].push_back(key.first);
	return pred;
}

struct PathSearch {
	const OperationalGraph& g;
	NodeId dst;
	std::size_t max_paths;
	std::vector<std::vector<NodeId>>& out;
	std::vector<NodeId> path;
	std::vector<char> on_path;
	std::vector<int> scratch;
	std::vector<NodeId> frontier;

	// Hops from router `v` to dst through routers not yet on the path;
	// -1 when dst cannot be reached that way.
	int finishing_distance(NodeId v)
	{
		scratch.assign(g.node_count(), -1);
		frontier.assign(1, v);
		scratch[static_cast<std::size_t>(v)] = 0;
		for (std::size_t head = 0; head < frontier.size(); ++head) {
			NodeId u = frontier[head];
			for (NodeId w : g.successors(u)) {
				if (w == dst)
					return scratch[static_cast<std::size_t>(u)] + 1;
				auto wi = static_cast<std::size_t>(w);
				if (on_path[wi] || scratch[wi] >= 0 || !g.node(w).is_router())
					continue;
				scratch[wi] = scratch[static_cast<std::size_t>(u)] + 1;
				frontier.push_back(w);
			}
		}
		return -1;
	}

	void run(NodeId u, Slot remaining)
	{
		if (remaining == 0) {
			if (u == dst)
				out.push_back(path);
			return;
		}
		for (NodeId v : g.successors(u)) {
			auto vi = static_cast<std::size_t>(v);
			if (on_path[vi])
				continue;
			if (v == dst) {
				if (remaining != 1)
					continue;
			} else {
				if (!g.node(v).is_router() || remaining < 2)
					continue;
				on_path[vi] = 1;
				int left = finishing_distance(v);
				on_path[vi] = 0;
				if (left < 0 || left > remaining - 1)
					continue;
			}
			path.push_back(v);
			on_path[vi] = 1;
			run(v, remaining - 1);
			on_path[vi] = 0;
			path.pop_back();
			if (out.size() >= max_paths)
				return;
		}
	}
};

// Holds reservations appended to the graph and removes them on destruction.
class TentativeReservations {
public:
	explicit TentativeReservations(OperationalGraph& g) : g_(g) {}
	TentativeReservations(const TentativeReservations&) = delete;
	TentativeReservations& operator=(const TentativeReservations&) = delete;
	~TentativeReservations()
	{
		for (auto it = held_.rbegin(); it != held_.rend(); ++it) {
			if (it->second == kNoNode)
				g_.unreserve_server_last(it->first);
			else
				g_.unreserve_link_last(it->first, it->second);
		}
	}

	void server(NodeId s, const PeriodicReservation& r)
	{
		g_.reserve_server(s, r);
		held_.emplace_back(s, kNoNode);
	}
	void link(NodeId u, NodeId v, const PeriodicReservation& r)
	{
		g_.reserve_link(u, v, r);
		held_.emplace_back(u, v);
	}

private:
	OperationalGraph& g_;
	std::vector<std::pair<NodeId, NodeId>> held_;
};

struct Resource {
	NodeId a;
	NodeId b; // kNoNode for a server
	auto operator<=>(const Resource&) const = default;
};

std::vector<std::pair<Resource, PeriodicReservation>> reservations_of(const ScheduleDecision& d,
                                                                      const TaskSpec& t,
                                                                      std::int64_t bytes_per_slot)
{
	std::vector<std::pair<Resource, PeriodicReservation>> out;
	const Slot p = t.period;
	out.push_back({{d.server, kNoNode}, {t.id, floor_mod(d.compute_start, p), t.compute_len, p}});
	auto add_path = [&](const std::vector<NodeId>& path, Slot depart, Slot gamma) {
		for (std::size_t w = 0; w + 1 < path.size(); ++w) {
			Slot s = depart + static_cast<Slot>(w) * gamma;
			out.push_back({{path[w], path[w + 1]}, {t.id, floor_mod(s, p), gamma, p}});
		}
	};
	add_path(d.path_fwd, d.depart_fwd, gamma_fwd(t, bytes_per_slot));
	add_path(d.path_ret, d.depart_ret, gamma_ret(t, bytes_per_slot));
	return out;
}

std::string resource_name(const Resource& r)
{
	if (r.b == kNoNode)
		return "server:" + std::to_string(r.a);
	return "link:" + std::to_string(r.a) + "->" + std::to_string(r.b);
}

} // namespace

std::vector<int> hop_distances_from(const OperationalGraph& g, NodeId from)
{
	require(g.has_node(from), "hop_distances_from: unknown node");
	return relay_bfs(g, from, [&](NodeId u) { return g.successors(u); });
}

std::optional<int> shortest_hop_distance(const OperationalGraph& g, NodeId from, NodeId to)
{
	require(g.has_node(to), "shortest_hop_distance: unknown node");
	int d = hop_distances_from(g, from)[static_cast<std::size_t>(to)];
	if (d < 0)
		return std::nullopt;
	return d;
}

std::vector<ComputeOption> compute_options_for_server(const OperationalGraph& g, const TaskSpec& t,
                                                      NodeId server, int distance,
                                                      const BrokerConfig& cfg)
{
	require(g.has_node(server) && g.node(server).is_server(), "compute options: not a server");
	require(distance >= 0, "compute options: negative distance");
	const Slot g1 = gamma_fwd(t, g.bytes_per_slot());
	const Slot g2 = gamma_ret(t, g.bytes_per_slot());
	const Slot lo = t.release + distance * g1;
	const Slot hi = t.deadline - distance * g2 - t.compute_len;
	if (hi <= lo)
		return {};

	const auto& ledger = g.server_ledger(server);
	auto candidates = ModularIntervalSet::range(t.period, lo, hi)
	                      .subtract(infeasible_compute_starts(ledger, t.period, t.compute_len))
	                      .subtract(blocked_starts(ledger, t.period, t.compute_len));

	std::vector<ComputeOption> out;
	const int cost = ledger.empty() ? 1 : 0;
	for (Slot o : candidates.first_slots(cfg.starts_per_server))
		out.push_back({server, o, cost, o + t.compute_len + distance * g2, distance});
	return out;
}

std::vector<ComputeOption> compute_level_schedule(const OperationalGraph& g, const TaskSpec& t,
                                                  const BrokerConfig& cfg)
{
	validate(t, g.bytes_per_slot());
	require(g.has_node(t.source_device) && g.node(t.source_device).kind == NodeKind::Device,
	        "compute level: task source is not a device");
	auto dist = hop_distances_from(g, t.source_device);
	std::vector<ComputeOption> out;
	for (NodeId s : g.servers()) {
		int d = dist[static_cast<std::size_t>(s)];
		if (d < 0)
			continue;
		auto opts = compute_options_for_server(g, t, s, d, cfg);
		out.insert(out.end(), opts.begin(), opts.end());
	}
	return out;
}

void rank_options(std::vector<ComputeOption>& opts, RankingStrategy strategy, std::uint64_t seed)
{
	auto by = [&](auto key) {
		std::sort(opts.begin(), opts.end(), [&](const ComputeOption& a, const ComputeOption& b) {
			return std::tuple_cat(key(a), std::tuple(a.server, a.compute_start)) <
			       std::tuple_cat(key(b), std::tuple(b.server, b.compute_start));
		});
	};
	switch (strategy) {
	case RankingStrategy::Broker:
		by([](const ComputeOption& o) { return std::tuple(o.cost, o.predicted_delay); });
		break;
	case RankingStrategy::DelayFS:
		by([](const ComputeOption& o) { return std::tuple(o.predicted_delay, o.cost); });
		break;
	case RankingStrategy::NearestFS:
		by([](const ComputeOption& o) { return std::tuple(o.distance, o.cost); });
		break;
	case RankingStrategy::DFNS:
		by([](const ComputeOption& o) { return std::tuple(o.predicted_delay, o.distance); });
		break;
	case RankingStrategy::RandomS: {
		by([](const ComputeOption&) { return std::tuple<>(); });
		std::mt19937_64 rng(seed);
		shuffle_in_place(opts, rng);
		break;
	}
	}
}

std::vector<std::vector<NodeId>> enumerate_paths(const OperationalGraph& g, NodeId src, NodeId dst,
                                                 Slot max_hops, std::size_t max_paths)
{
	require(g.has_node(src) && g.has_node(dst), "enumerate_paths: unknown node");
	std::vector<std::vector<NodeId>> out;
	if (max_paths == 0)
		return out;
	if (src == dst) {
		out.push_back({src});
		return out;
	}
	auto pred = predecessor_lists(g);
	auto dist_to_dst = relay_bfs(g, dst, [&](NodeId u) -> const std::vector<NodeId>& {
		return pred[static_cast<std::size_t>(u)];
	});
	int shortest = dist_to_dst[static_cast<std::size_t>(src)];
	if (shortest < 0)
		return out;
	// Every inner node is a distinct router.
	const Slot longest = std::min<Slot>(max_hops, static_cast<Slot>(g.routers().size()) + 1);
	PathSearch search{g, dst, max_paths, out, {src}, std::vector<char>(g.node_count(), 0), {}, {}};
	search.on_path[static_cast<std::size_t>(src)] = 1;
	for (Slot len = shortest; len <= longest && out.size() < max_paths; ++len)
		search.run(src, len);
	return out;
}

std::optional<Route> network_level_schedule(const OperationalGraph& g, Direction dir,
                                            const TaskSpec& t, const ComputeOption& opt,
                                            const BrokerConfig& cfg,
                                            std::optional<NodeId> first_relay)
{
	const bool fwd = dir == Direction::Forward;
	const Slot gamma = fwd ? gamma_fwd(t, g.bytes_per_slot()) : gamma_ret(t, g.bytes_per_slot());
	const Slot release = fwd ? t.release : opt.compute_start + t.compute_len;
	// Inclusive latest arrival: data may land exactly at the compute start,
	// but the result must be back strictly before the deadline.
	const Slot latest_arrival = fwd ? opt.compute_start : t.deadline - 1;
	const NodeId src = fwd ? t.source_device : opt.server;
	const NodeId dst = fwd ? opt.server : t.source_device;
	if (latest_arrival - release < gamma)
		return std::nullopt;
	const Slot max_hops = (latest_arrival - release) / gamma;

	for (const auto& path : enumerate_paths(g, src, dst, max_hops, cfg.max_paths)) {
		if (path.size() < 2)
			continue;
		if (first_relay && path[1] != *first_relay)
			continue;
		const Slot hops = hop_count(path);
		const Slot lo = release;
		const Slot hi = latest_arrival - hops * gamma + 1;
		if (hi <= lo)
			continue;
		std::vector<std::span<const PeriodicReservation>> ledgers;
		ledgers.reserve(path.size() - 1);
		for (std::size_t w = 0; w + 1 < path.size(); ++w)
			ledgers.emplace_back(g.link_ledger(path[w], path[w + 1]));
		auto omega = ModularIntervalSet::range(t.period, lo, hi)
		                 .subtract(infeasible_departures(ledgers, t.period, gamma));
		for (const Interval& iv : omega.intervals())
			for (Slot b = iv.lo; b < iv.hi; ++b)
				if (window_free(ledgers.front(), b, gamma, t.period))
					return Route{path, b};
	}
	return std::nullopt;
}

std::optional<ScheduleDecision> try_compute_option(OperationalGraph& g, const TaskSpec& t,
                                                   const ComputeOption& opt,
                                                   const BrokerConfig& cfg)
{
	auto fwd = network_level_schedule(g, Direction::Forward, t, opt, cfg);
	if (!fwd)
		return std::nullopt;

	std::optional<Route> ret;
	{
		TentativeReservations hold(g);
		const Slot p = t.period;
		const Slot g1 = gamma_fwd(t, g.bytes_per_slot());
		hold.server(opt.server, {t.id, floor_mod(opt.compute_start, p), t.compute_len, p});
		for (std::size_t w = 0; w + 1 < fwd->path.size(); ++w)
			hold.link(fwd->path[w], fwd->path[w + 1],
			          {t.id, floor_mod(fwd->departure + static_cast<Slot>(w) * g1, p), g1, p});
		// A virtual server is wired to every router; the result must leave
		// through the router the request came in from.
		std::optional<NodeId> pin;
		if (g.node(opt.server).server_state == ServerState::Virtual)
			pin = fwd->path[fwd->path.size() - 2];
		ret = network_level_schedule(g, Direction::Return, t, opt, cfg, pin);
	}
	if (!ret)
		return std::nullopt;
	return ScheduleDecision{t.id,      opt.server,     opt.compute_start, std::move(fwd->path),
	                        fwd->departure, std::move(ret->path), ret->departure};
}

std::optional<ScheduleDecision> schedule_task(OperationalGraph& g, const TaskSpec& t,
                                              RankingStrategy strategy, std::uint64_t seed,
                                              const BrokerConfig& cfg)
{
	require(!g.is_committed(t.id), "schedule_task: task already committed");
	auto opts = compute_level_schedule(g, t, cfg);
	rank_options(opts, strategy, seed);
	for (const auto& opt : opts)
		if (auto d = try_compute_option(g, t, opt, cfg))
			return d;
	return std::nullopt;
}

void commit(OperationalGraph& g, const TaskSpec& t, const ScheduleDecision& d)
{
	validate(t, g.bytes_per_slot());
	require(d.task == t.id, "commit: decision belongs to another task");
	require(!g.is_committed(t.id), "commit: task already committed");
	require(g.has_node(d.server) && g.node(d.server).is_server(), "commit: not a server");
	require(timing_violations(d, t, g.bytes_per_slot()).empty(), "commit: inconsistent timing");
	for (const auto* path : {&d.path_fwd, &d.path_ret})
		for (std::size_t w = 0; w + 1 < path->size(); ++w)
			require(g.has_link((*path)[w], (*path)[w + 1]), "commit: path uses a missing link");

	auto fresh = reservations_of(d, t, g.bytes_per_slot());
	for (std::size_t i = 0; i < fresh.size(); ++i) {
		const auto& [res, r] = fresh[i];
		const auto& ledger = res.b == kNoNode ? g.server_ledger(res.a) : g.link_ledger(res.a, res.b);
		for (const auto& held : ledger)
			if (reservations_conflict(held, r).conflicting)
				throw CommitRejected("task " + std::to_string(t.id) + " conflicts with task " +
				                     std::to_string(held.owner) + " on " + resource_name(res));
		for (std::size_t j = 0; j < i; ++j)
			if (fresh[j].first == res && reservations_conflict(fresh[j].second, r).conflicting)
				throw CommitRejected("task " + std::to_string(t.id) + " overlaps itself on " +
				                     resource_name(res));
	}

	for (const auto& [res, r] : fresh) {
		if (res.b == kNoNode)
			g.reserve_server(res.a, r);
		else
			g.reserve_link(res.a, res.b, r);
	}
	if (g.node(d.server).server_state == ServerState::RealUnused)
		g.set_server_state(d.server, ServerState::RealUsed);
	g.mark_committed(t.id);
}

std::vector<TaskSpec> order_tasks(std::vector<TaskSpec> tasks, TaskOrdering ordering,
                                  std::uint64_t seed)
{
	auto by = [&](auto key) {
		std::sort(tasks.begin(), tasks.end(), [&](const TaskSpec& a, const TaskSpec& b) {
			return std::tuple(key(a), a.id) < std::tuple(key(b), b.id);
		});
	};
	switch (ordering) {
	case TaskOrdering::Period: by([](const TaskSpec& t) { return t.period; }); break;
	case TaskOrdering::Base: by([](const TaskSpec& t) { return t.release; }); break;
	case TaskOrdering::CTimeA: by([](const TaskSpec& t) { return t.compute_len; }); break;
	case TaskOrdering::CTimeB: by([](const TaskSpec& t) { return -t.compute_len; }); break;
	case TaskOrdering::Random: {
		by([](const TaskSpec&) { return 0; });
		std::mt19937_64 rng(mix_seed(seed, 0x6f72646572ULL));
		shuffle_in_place(tasks, rng);
		break;
	}
	}
	return tasks;
}

ScheduleOutcome schedule_all(OperationalGraph& g, const std::vector<TaskSpec>& tasks,
                             TaskOrdering ordering, RankingStrategy strategy, std::uint64_t seed,
                             const BrokerConfig& cfg)
{
	std::set<TaskId> ids;
	std::set<NodeId> sources;
	for (const auto& t : tasks) {
		validate(t, g.bytes_per_slot());
		require(ids.insert(t.id).second, "schedule_all: duplicate task id");
		require(sources.insert(t.source_device).second, "schedule_all: devices must be distinct");
	}

	const auto t0 = std::chrono::steady_clock::now();
	ScheduleOutcome out;
	for (const auto& t : order_tasks(tasks, ordering, seed)) {
		auto d = schedule_task(g, t, strategy, mix_seed(seed, static_cast<std::uint64_t>(t.id)), cfg);
		if (d) {
			commit(g, t, *d);
			out.decisions.push_back(std::move(*d));
		} else {
			out.failures.push_back(t.id);
		}
	}
	const double elapsed =
		std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
	out.metrics = compute_metrics(g, tasks, out.decisions, elapsed);
	out.metrics.failures = static_cast<int>(out.failures.size());
	return out;
}

} // namespace detsched
