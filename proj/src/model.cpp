#include "detsched/model.hpp"

#include <numeric>

namespace detsched {

void validate(const TaskSpec& t, std::int64_t bytes_per_slot)
{
	require(bytes_per_slot > 0, "bytes_per_slot must be positive");
	require(t.period > 0, "task period must be positive");
	require(0 <= t.release && t.release < t.period, "task release must lie in [0, period)");
	require(t.compute_len > 0, "task compute length must be positive");
	require(t.release + t.compute_len <= t.deadline, "task deadline leaves no room to compute");
	require(t.deadline <= t.period, "task deadline exceeds its period");
	require(t.payload_fwd >= 0 && t.payload_ret >= 0, "payload sizes must be non-negative");
}

Slot hop_slots(std::int64_t payload_bytes, std::int64_t bytes_per_slot)
{
	require(bytes_per_slot > 0, "bytes_per_slot must be positive");
	const Slot g = (payload_bytes + bytes_per_slot - 1) / bytes_per_slot;
	return g < 1 ? 1 : g;
}

std::string_view to_string(NodeKind kind)
{
	switch (kind) {
	case NodeKind::Device: return "device";
	case NodeKind::Router: return "router";
	case NodeKind::Server: return "server";
	}
	return "?";
}

std::string_view to_string(ServerState state)
{
	switch (state) {
	case ServerState::RealUnused: return "real-unused";
	case ServerState::RealUsed: return "real-used";
	case ServerState::Virtual: return "virtual";
	}
	return "?";
}

NodeKind node_kind_from_string(std::string_view s)
{
	if (s == "device") return NodeKind::Device;
	if (s == "router") return NodeKind::Router;
	if (s == "server") return NodeKind::Server;
	throw ContractViolation("unknown node kind: " + std::string(s));
}

ServerState server_state_from_string(std::string_view s)
{
	if (s == "real-unused") return ServerState::RealUnused;
	if (s == "real-used") return ServerState::RealUsed;
	if (s == "virtual") return ServerState::Virtual;
	throw ContractViolation("unknown server state: " + std::string(s));
}

Slot hyperperiod(std::span<const Slot> periods)
{
	require(!periods.empty(), "hyperperiod of an empty period list");
	Slot acc = 1;
	for (Slot p : periods) {
		require(p > 0, "periods must be positive");
		const Slot step = p / std::gcd(acc, p);
		Slot next = 0;
		if (__builtin_mul_overflow(acc, step, &next))
			throw ContractViolation("hyperperiod overflows 64 bits");
		acc = next;
	}
	return acc;
}

std::vector<Slot> waypoint_departures(Slot depart, std::span<const NodeId> path, Slot gamma)
{
	std::vector<Slot> out;
	const Slot hops = hop_count(path);
	out.reserve(static_cast<std::size_t>(hops));
	for (Slot w = 0; w < hops; ++w)
		out.push_back(depart + w * gamma);
	return out;
}

std::string_view to_string(TimingRule rule)
{
	switch (rule) {
	case TimingRule::ReleaseBeforeDeparture: return "release-before-departure";
	case TimingRule::ArrivalBeforeCompute: return "arrival-before-compute";
	case TimingRule::ComputeBeforeReturn: return "compute-before-return";
	case TimingRule::ReturnBeforeDeadline: return "return-before-deadline";
	case TimingRule::PathEndpoints: return "path-endpoints";
	}
	return "?";
}

std::vector<TimingRule> timing_violations(const ScheduleDecision& d, const TaskSpec& t,
                                          std::int64_t bytes_per_slot)
{
	std::vector<TimingRule> out;
	const Slot g1 = gamma_fwd(t, bytes_per_slot);
	const Slot g2 = gamma_ret(t, bytes_per_slot);

	const bool fwd_ok = d.path_fwd.size() >= 2 && d.path_fwd.front() == t.source_device &&
	                    d.path_fwd.back() == d.server;
	const bool ret_ok = d.path_ret.size() >= 2 && d.path_ret.front() == d.server &&
	                    d.path_ret.back() == t.source_device;
	if (!fwd_ok || !ret_ok)
		out.push_back(TimingRule::PathEndpoints);

	if (t.release > d.depart_fwd)
		out.push_back(TimingRule::ReleaseBeforeDeparture);
	if (d.depart_fwd + hop_count(d.path_fwd) * g1 > d.compute_start)
		out.push_back(TimingRule::ArrivalBeforeCompute);
	if (d.compute_start + t.compute_len > d.depart_ret)
		out.push_back(TimingRule::ComputeBeforeReturn);
	if (d.depart_ret + hop_count(d.path_ret) * g2 >= t.deadline)
		out.push_back(TimingRule::ReturnBeforeDeadline);
	return out;
}

} // namespace detsched
