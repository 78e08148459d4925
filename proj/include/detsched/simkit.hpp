#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "detsched/graph.hpp"

namespace detsched {

enum class Topology { Random, Fixed };
enum class ServerRule { EqualTasks, CeilFifth };

std::string_view to_string(Topology t);
Topology topology_from_string(std::string_view s);

struct InstanceConfig {
	int n_tasks = 10;
	int n_routers = 10;
	int n_router_links = 45;   // bidirectional, Random topology only
	Topology topology = Topology::Random;
	ServerRule server_rule = ServerRule::EqualTasks;
	std::int64_t bytes_per_slot = 1'000'000;
	std::uint64_t seed = 0;
};

struct Instance {
	OperationalGraph graph;
	std::vector<TaskSpec> tasks;
};

// Node ids: routers first, then one device per task, then servers.
// Random topology picks n_router_links distinct router pairs; Fixed is a
// two-island layout (routers 0-5 and 6-9, see README) and needs 10 routers.
Instance generate_instance(const InstanceConfig& cfg);

// Router pairs of the Fixed layout.
std::vector<std::pair<NodeId, NodeId>> fixed_router_pairs();

struct Finding {
	std::string kind;      // overlap | timing | deadline | path | structure | reference
	std::string resource;  // "server:12", "link:3->5", "node:4", "task:7"
	Slot slot = -1;        // first doubly-occupied slot for overlaps
	std::vector<TaskId> tasks;
	std::string detail;

	friend auto operator<=>(const Finding&, const Finding&) = default;
};

using VerificationReport = std::vector<Finding>;

// Independent check of a schedule: every decision's server window and every
// per-hop link window is laid out slot by slot over the hyperperiod of all
// scheduled tasks, and timing, deadline and path rules are checked from the
// decision fields. Reservation ledgers in `g` are not consulted. Sorted.
VerificationReport verify_schedule(const OperationalGraph& g, std::span<const TaskSpec> tasks,
                                   std::span<const ScheduleDecision> decisions);

// Network layout rules of a finalized graph: a device attaches to exactly one
// router, a server to exactly one router, devices and servers are never
// linked directly, every link has its reverse, no self links, and nothing
// virtual remains. Sorted.
VerificationReport structural_violations(const OperationalGraph& g);

} // namespace detsched
