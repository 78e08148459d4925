#include "detsched/graph.hpp"

#include <algorithm>
#include <string>

namespace detsched {

OperationalGraph::OperationalGraph(std::int64_t bytes_per_slot) : bytes_per_slot_(bytes_per_slot)
{
	require(bytes_per_slot > 0, "bytes_per_slot must be positive");
}

void OperationalGraph::check_node(NodeId id) const
{
	if (!has_node(id))
		throw ContractViolation("unknown node id " + std::to_string(id));
}

NodeId OperationalGraph::add_node(NodeKind kind, ServerState state)
{
	const auto id = static_cast<NodeId>(nodes_.size());
	nodes_.push_back(Node{id, kind, kind == NodeKind::Server ? state : ServerState::RealUnused});
	succ_.emplace_back();
	server_ledgers_.emplace_back();
	return id;
}

void OperationalGraph::add_link(NodeId u, NodeId v, LinkState state)
{
	check_node(u);
	check_node(v);
	require(u != v, "self links are not allowed");
	auto [it, inserted] = links_.try_emplace({u, v});
	if (!inserted) {
		// Upgrading a virtual link to a real one keeps its ledger.
		if (state == LinkState::Real)
			it->second.state = LinkState::Real;
		return;
	}
	it->second.u = u;
	it->second.v = v;
	it->second.state = state;
	auto& s = succ_[static_cast<std::size_t>(u)];
	s.insert(std::upper_bound(s.begin(), s.end(), v), v);
}

void OperationalGraph::add_connection(NodeId a, NodeId b, LinkState state)
{
	add_link(a, b, state);
	add_link(b, a, state);
}

void OperationalGraph::remove_link(NodeId u, NodeId v)
{
	if (links_.erase({u, v}) == 0)
		return;
	auto& s = succ_[static_cast<std::size_t>(u)];
	s.erase(std::lower_bound(s.begin(), s.end(), v));
}

const Node& OperationalGraph::node(NodeId id) const
{
	check_node(id);
	return nodes_[static_cast<std::size_t>(id)];
}

void OperationalGraph::set_server_state(NodeId id, ServerState state)
{
	check_node(id);
	require(nodes_[static_cast<std::size_t>(id)].is_server(), "server state set on a non-server");
	nodes_[static_cast<std::size_t>(id)].server_state = state;
}

std::vector<NodeId> OperationalGraph::servers() const
{
	std::vector<NodeId> out;
	for (const auto& n : nodes_)
		if (n.is_server())
			out.push_back(n.id);
	return out;
}

std::vector<NodeId> OperationalGraph::routers() const
{
	std::vector<NodeId> out;
	for (const auto& n : nodes_)
		if (n.is_router())
			out.push_back(n.id);
	return out;
}

const Link& OperationalGraph::link(NodeId u, NodeId v) const
{
	auto it = links_.find({u, v});
	if (it == links_.end())
		throw ContractViolation("unknown link " + std::to_string(u) + "->" + std::to_string(v));
	return it->second;
}

Link& OperationalGraph::link_mut(NodeId u, NodeId v)
{
	auto it = links_.find({u, v});
	if (it == links_.end())
		throw ContractViolation("unknown link " + std::to_string(u) + "->" + std::to_string(v));
	return it->second;
}

void OperationalGraph::set_link_state(NodeId u, NodeId v, LinkState state)
{
	link_mut(u, v).state = state;
}

std::span<const NodeId> OperationalGraph::successors(NodeId u) const
{
	check_node(u);
	return succ_[static_cast<std::size_t>(u)];
}

const std::vector<PeriodicReservation>& OperationalGraph::server_ledger(NodeId server) const
{
	check_node(server);
	return server_ledgers_[static_cast<std::size_t>(server)];
}

const std::vector<PeriodicReservation>& OperationalGraph::link_ledger(NodeId u, NodeId v) const
{
	return link(u, v).ledger;
}

void OperationalGraph::reserve_server(NodeId server, const PeriodicReservation& r)
{
	require(node(server).is_server(), "server reservation on a non-server node");
	require(r.valid(), "invalid reservation");
	server_ledgers_[static_cast<std::size_t>(server)].push_back(r);
}

void OperationalGraph::reserve_link(NodeId u, NodeId v, const PeriodicReservation& r)
{
	require(r.valid(), "invalid reservation");
	link_mut(u, v).ledger.push_back(r);
}

void OperationalGraph::unreserve_server_last(NodeId server)
{
	check_node(server);
	auto& l = server_ledgers_[static_cast<std::size_t>(server)];
	require(!l.empty(), "rollback on an empty server ledger");
	l.pop_back();
}

void OperationalGraph::unreserve_link_last(NodeId u, NodeId v)
{
	auto& l = link_mut(u, v).ledger;
	require(!l.empty(), "rollback on an empty link ledger");
	l.pop_back();
}

} // namespace detsched
