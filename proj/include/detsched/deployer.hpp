#pragma once

#include <cstdint>
#include <map>
#include <string_view>
#include <vector>

#include "detsched/broker.hpp"

namespace detsched {

// LCFU only adds servers; SCFU may also add router-router links.
enum class UpgradeMode { LCFU, SCFU };

enum class Planner { Combined, NcostFS, ScostFS, ONetFS, LCFU, SCFU };

std::string_view to_string(Planner p);
Planner planner_from_string(std::string_view s);

struct CostParams {
	double c_s = 100.0; // adding a server
	double c_l = 1.0;   // adding a router-router connection
};

// Usage costs that steer candidate selection on an ideal graph.
struct CostMatrix {
	UpgradeMode mode = UpgradeMode::LCFU;
	CostParams params;
	std::map<NodeId, double> server_cost;
	std::map<LinkKey, double> link_cost;
};

struct IdealGraph {
	OperationalGraph graph;
	CostMatrix costs;
};

// Adds max(0, n_tasks - servers in g0) virtual servers, each virtually
// connected to every router. SCFU also adds a virtual link for every ordered
// router pair without a real one.
IdealGraph build_ideal_graph(const OperationalGraph& g0, int n_tasks, UpgradeMode mode,
                             CostParams params = {});

// Server cost plus the cost of every distinct directed link on both paths.
double decision_cost(const ScheduleDecision& d, const CostMatrix& costs);

// Turns the virtual resources used by `d` into real ones, drops the other
// attachments of a newly used server, zeroes the cost of everything used,
// then commits `d`.
void materialize(OperationalGraph& g, CostMatrix& costs, const TaskSpec& t,
                 const ScheduleDecision& d);

// A scheduled option on an ideal graph together with what it would cost.
struct Candidate {
	ScheduleDecision decision;
	double server_cost = 0.0;
	double link_cost = 0.0;
	std::size_t rank = 0; // position among broker-ranked compute options
	UpgradeMode mode = UpgradeMode::LCFU;

	double total() const { return server_cost + link_cost; }
};

// One candidate per server: the first broker-ranked option on that server
// that schedules in both directions. Of the untouched virtual servers only
// the lowest id is tried since they are interchangeable.
std::vector<Candidate> candidate_pool(OperationalGraph& ideal, const CostMatrix& costs,
                                      const TaskSpec& t, const BrokerConfig& cfg = {});

// LCFU picks by (link cost, server cost, rank), SCFU by (server cost, link cost, rank).
const Candidate* select_candidate(const std::vector<Candidate>& pool, UpgradeMode mode);

struct AddedServer {
	NodeId id = kNoNode;
	NodeId router = kNoNode;
	friend bool operator==(const AddedServer&, const AddedServer&) = default;
};

struct DeployPlan {
	OperationalGraph graph;                 // upgraded network with all commitments
	bool feasible = true;
	std::vector<AddedServer> added_servers;
	std::vector<LinkKey> added_links;       // physical connections, u < v
	int asnum = 0;
	int alnum = 0;
	double tcost = 0.0;
	std::vector<ScheduleDecision> decisions;
	std::vector<TaskId> infeasible;
	double runtime_s = 0.0;
};

struct DeployConfig {
	CostParams costs;
	TaskOrdering ordering = TaskOrdering::Period;
	std::uint64_t seed = 0;
	BrokerConfig broker;
};

// Upgrade cost of a plan: c_s per added server, c_l per added router-router
// connection and 1 per added router-server connection.
double upgrade_cost(const OperationalGraph& upgraded, const std::vector<AddedServer>& servers,
                    const std::vector<LinkKey>& links, CostParams params);

// Single ideal graph for the whole task set, cropped at the end.
DeployPlan lcfu_run(const OperationalGraph& g0, const std::vector<TaskSpec>& tasks,
                    const DeployConfig& cfg);
DeployPlan scfu_run(const OperationalGraph& g0, const std::vector<TaskSpec>& tasks,
                    const DeployConfig& cfg);

// Per task, LCFU and SCFU candidates on the current network; the cheapest
// wins (LCFU on ties) and its servers and links are added.
DeployPlan combined_run(const OperationalGraph& g0, const std::vector<TaskSpec>& tasks,
                        const DeployConfig& cfg);

// NcostFS: LCFU, SCFU only when LCFU fails. ScostFS: SCFU only.
// ONetFS: the current network first, SCFU when that fails.
DeployPlan baseline_deploy(const OperationalGraph& g0, const std::vector<TaskSpec>& tasks,
                           const DeployConfig& cfg, Planner variant);

DeployPlan deploy(const OperationalGraph& g0, const std::vector<TaskSpec>& tasks, Planner planner,
                  const DeployConfig& cfg);

} // namespace detsched
