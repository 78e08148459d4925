#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "detsched/graph.hpp"
#include "detsched/metrics.hpp"

namespace detsched {

// One computation-level candidate: run the task on `server` from `compute_start`.
struct ComputeOption {
	NodeId server = kNoNode;
	Slot compute_start = 0;
	int cost = 0;              // 0 when the server already hosts tasks, 1 for a fresh server
	Slot predicted_delay = 0;  // compute_start + compute_len + distance * gamma_ret
	int distance = 0;          // shortest hop distance device <-> server

	friend bool operator==(const ComputeOption&, const ComputeOption&) = default;
};

enum class RankingStrategy { Broker, DelayFS, NearestFS, DFNS, RandomS };
enum class TaskOrdering { Period, Base, Random, CTimeA, CTimeB };
enum class Direction { Forward, Return };

std::string_view to_string(RankingStrategy s);
std::string_view to_string(TaskOrdering o);
RankingStrategy ranking_from_string(std::string_view s);
TaskOrdering ordering_from_string(std::string_view s);

struct BrokerConfig {
	// Earliest feasible compute starts kept per server.
	std::size_t starts_per_server = 32;
	// Routes considered per (source, destination) pair.
	std::size_t max_paths = 64;
};

struct Route {
	std::vector<NodeId> path;
	Slot departure = 0;
};

// Hop distances from `from` to every node; -1 marks unreachable. Only the
// source and routers forward traffic, so devices and servers are never relays.
std::vector<int> hop_distances_from(const OperationalGraph& g, NodeId from);

// Minimum hop count from `from` to `to`, nullopt when unreachable.
std::optional<int> shortest_hop_distance(const OperationalGraph& g, NodeId from, NodeId to);

// Candidate compute starts on one server, given its hop distance from the
// task source. Returns at most cfg.starts_per_server options, earliest first.
std::vector<ComputeOption> compute_options_for_server(const OperationalGraph& g, const TaskSpec& t,
                                                      NodeId server, int distance,
                                                      const BrokerConfig& cfg = {});

// Computation-level scheduling over every reachable server, in server id order.
std::vector<ComputeOption> compute_level_schedule(const OperationalGraph& g, const TaskSpec& t,
                                                  const BrokerConfig& cfg = {});

// Orders options per strategy. Ties fall back to server id, then start.
void rank_options(std::vector<ComputeOption>& opts, RankingStrategy strategy, std::uint64_t seed);

// Simple directed paths src -> dst with at most `max_hops` links, shortest
// first, equal lengths in lexicographic node order, truncated to `max_paths`.
std::vector<std::vector<NodeId>> enumerate_paths(const OperationalGraph& g, NodeId src, NodeId dst,
                                                 Slot max_hops, std::size_t max_paths = 64);

// Network-level scheduling of one direction for a chosen compute option.
// `first_relay`, when set, forces the second node of the path.
std::optional<Route> network_level_schedule(const OperationalGraph& g, Direction dir,
                                            const TaskSpec& t, const ComputeOption& opt,
                                            const BrokerConfig& cfg = {},
                                            std::optional<NodeId> first_relay = std::nullopt);

// Both directions for one compute option. The forward reservations are held
// tentatively while the return route is searched and rolled back afterwards,
// so `g` is unchanged on return.
std::optional<ScheduleDecision> try_compute_option(OperationalGraph& g, const TaskSpec& t,
                                                   const ComputeOption& opt,
                                                   const BrokerConfig& cfg = {});

// First ranked option whose forward and return routes both succeed.
std::optional<ScheduleDecision> schedule_task(OperationalGraph& g, const TaskSpec& t,
                                              RankingStrategy strategy, std::uint64_t seed,
                                              const BrokerConfig& cfg = {});

// Writes the decision's server and per-hop link reservations into `g`.
// Throws CommitRejected (leaving g untouched) if any would conflict.
void commit(OperationalGraph& g, const TaskSpec& t, const ScheduleDecision& d);

// Tasks sorted per `ordering`; ties by id.
std::vector<TaskSpec> order_tasks(std::vector<TaskSpec> tasks, TaskOrdering ordering,
                                  std::uint64_t seed);

struct ScheduleOutcome {
	std::vector<ScheduleDecision> decisions;
	std::vector<TaskId> failures;
	MetricsReport metrics;
};

// Greedy whole-set scheduling with commit after every success.
ScheduleOutcome schedule_all(OperationalGraph& g, const std::vector<TaskSpec>& tasks,
                             TaskOrdering ordering, RankingStrategy strategy, std::uint64_t seed,
                             const BrokerConfig& cfg = {});

// Deterministic 64-bit mixing used to derive per-task seeds.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt);

} // namespace detsched
