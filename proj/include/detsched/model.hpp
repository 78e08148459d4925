#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "detsched/types.hpp"

namespace detsched {

// One periodic time-critical computing task. All times are slots relative
// to the start of the task's period.
struct TaskSpec {
	TaskId id = 0;
	NodeId source_device = kNoNode;
	Slot release = 0;
	Slot period = 0;
	Slot deadline = 0;
	std::int64_t payload_fwd = 0; // bytes, device -> server
	std::int64_t payload_ret = 0; // bytes, server -> device
	Slot compute_len = 0;

	friend bool operator==(const TaskSpec&, const TaskSpec&) = default;
};

// Throws ContractViolation unless 0 <= release < period,
// compute_len > 0 and release + compute_len <= deadline <= period.
void validate(const TaskSpec& task, std::int64_t bytes_per_slot);

// Per-hop transmission time of a payload, ceil(bytes / bytes_per_slot), at least 1.
Slot hop_slots(std::int64_t payload_bytes, std::int64_t bytes_per_slot);

inline Slot gamma_fwd(const TaskSpec& t, std::int64_t bytes_per_slot)
{
	return hop_slots(t.payload_fwd, bytes_per_slot);
}
inline Slot gamma_ret(const TaskSpec& t, std::int64_t bytes_per_slot)
{
	return hop_slots(t.payload_ret, bytes_per_slot);
}

enum class NodeKind { Device, Router, Server };
enum class ServerState { RealUnused, RealUsed, Virtual };

std::string_view to_string(NodeKind kind);
std::string_view to_string(ServerState state);
NodeKind node_kind_from_string(std::string_view s);
ServerState server_state_from_string(std::string_view s);

struct Node {
	NodeId id = kNoNode;
	NodeKind kind = NodeKind::Router;
	ServerState server_state = ServerState::RealUnused; // meaningful for servers only

	bool is_server() const { return kind == NodeKind::Server; }
	bool is_router() const { return kind == NodeKind::Router; }
};

// Slots [start, start + len) claimed by `owner`, repeating every `period`.
struct PeriodicReservation {
	TaskId owner = 0;
	Slot start = 0;
	Slot len = 0;
	Slot period = 0;

	bool valid() const { return period > 0 && 0 <= start && start < period && 0 < len && len <= period; }
	friend bool operator==(const PeriodicReservation&, const PeriodicReservation&) = default;
};

// Least common multiple of all periods. Throws on an empty list, a
// non-positive period, or 64-bit overflow.
Slot hyperperiod(std::span<const Slot> periods);

// Number of links traversed by a node sequence.
inline Slot hop_count(std::span<const NodeId> path)
{
	return path.empty() ? 0 : static_cast<Slot>(path.size()) - 1;
}

// The full per-task scheduling decision: server, compute start and both
// routed transmissions. Per-hop departures follow from the source departure
// by adding one hop time per link (no in-router buffering).
struct ScheduleDecision {
	TaskId task = 0;
	NodeId server = kNoNode;
	Slot compute_start = 0;
	std::vector<NodeId> path_fwd;
	Slot depart_fwd = 0;
	std::vector<NodeId> path_ret;
	Slot depart_ret = 0;

	friend bool operator==(const ScheduleDecision&, const ScheduleDecision&) = default;
};

// Departure slot at every waypoint of a path, starting from `depart`.
std::vector<Slot> waypoint_departures(Slot depart, std::span<const NodeId> path, Slot gamma);

enum class TimingRule {
	ReleaseBeforeDeparture,  // release <= depart_fwd
	ArrivalBeforeCompute,    // depart_fwd + hops_fwd * gamma_fwd <= compute_start
	ComputeBeforeReturn,     // compute_start + compute_len <= depart_ret
	ReturnBeforeDeadline,    // depart_ret + hops_ret * gamma_ret < deadline
	PathEndpoints,           // fwd runs device -> server, ret runs server -> device
};

std::string_view to_string(TimingRule rule);

// Checks the decision against its task using only the decision fields.
// Returns every violated rule; empty means the timing is consistent.
std::vector<TimingRule> timing_violations(const ScheduleDecision& d, const TaskSpec& task,
                                          std::int64_t bytes_per_slot);

} // namespace detsched
