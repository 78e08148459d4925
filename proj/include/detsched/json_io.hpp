#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "detsched/deployer.hpp"
#include "detsched/simkit.hpp"

namespace detsched {

// Every document carries "format": 1. Readers reject other versions and
// throw ContractViolation on malformed input. Reservation ledgers are not
// serialized; an instance always reads back as an empty network.

// {"format", "bytes_per_slot", "graph": {"nodes": [{id, kind, state?}],
//  "links": [{u, v, virtual?}]}, "tasks": [{id, source, release, period,
//  deadline, payload_fwd, payload_ret, compute}]}
std::string instance_to_json(const OperationalGraph& g, std::span<const TaskSpec> tasks);
Instance instance_from_json(std::string_view text);

struct ScheduleDocument {
	std::vector<ScheduleDecision> decisions;
	std::vector<TaskId> failures;
};

// {"format", "decisions": [{task, server, compute_start, path_fwd,
//  depart_fwd, path_ret, depart_ret}], "failures": [...]}
std::string schedule_to_json(std::span<const ScheduleDecision> decisions,
                             std::span<const TaskId> failures = {});
ScheduleDocument schedule_from_json(std::string_view text);

// A deployment plan as a delta on the original network:
// {"format", "feasible", "added_servers": [{id, router}], "added_links":
//  [{u, v}], "tcost", "asnum", "alnum", "decisions": [...], "infeasible": [...]}
std::string plan_to_json(const DeployPlan& plan);

struct PlanDocument {
	bool feasible = true;
	std::vector<AddedServer> added_servers;
	std::vector<LinkKey> added_links;
	double tcost = 0.0;
	std::vector<ScheduleDecision> decisions;
	std::vector<TaskId> infeasible;
};

PlanDocument plan_from_json(std::string_view text);

// True when the document has "added_servers", i.e. reads as a plan.
bool looks_like_plan(std::string_view text);

// Rebuilds the upgraded network from the original one and a plan delta:
// added servers in id order, each attached to its router, then the links.
OperationalGraph apply_plan(const OperationalGraph& g0, const PlanDocument& plan);

// [{"kind", "resource", "slot", "tasks", "detail"}]
std::string report_to_json(const VerificationReport& report);

} // namespace detsched
