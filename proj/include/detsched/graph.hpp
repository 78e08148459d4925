#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <utility>
#include <vector>

#include "detsched/model.hpp"

namespace detsched {

using LinkKey = std::pair<NodeId, NodeId>; // directed u -> v

enum class LinkState { Real, Virtual };

struct Link {
	NodeId u = kNoNode;
	NodeId v = kNoNode;
	LinkState state = LinkState::Real;
	std::vector<PeriodicReservation> ledger;

	friend bool operator==(const Link&, const Link&) = default;
};

// The network (devices, routers, servers, directed links) together with the
// periodic slot reservations held on every server and link.
//
// Node ids are dense: the n-th added node has id n. Mutation is single-writer.
class OperationalGraph {
public:
	explicit OperationalGraph(std::int64_t bytes_per_slot = 1'000'000);

	std::int64_t bytes_per_slot() const { return bytes_per_slot_; }

	NodeId add_node(NodeKind kind, ServerState state = ServerState::RealUnused);
	void add_link(NodeId u, NodeId v, LinkState state = LinkState::Real);
	// Adds u -> v and v -> u.
	void add_connection(NodeId a, NodeId b, LinkState state = LinkState::Real);
	// Removes u -> v and its ledger. No-op when absent.
	void remove_link(NodeId u, NodeId v);

	std::size_t node_count() const { return nodes_.size(); }
	bool has_node(NodeId id) const { return id >= 0 && static_cast<std::size_t>(id) < nodes_.size(); }
	const Node& node(NodeId id) const;
	void set_server_state(NodeId id, ServerState state);
	std::span<const Node> nodes() const { return nodes_; }
	std::vector<NodeId> servers() const;
	std::vector<NodeId> routers() const;

	bool has_link(NodeId u, NodeId v) const { return links_.contains({u, v}); }
	const Link& link(NodeId u, NodeId v) const;
	void set_link_state(NodeId u, NodeId v, LinkState state);
	const std::map<LinkKey, Link>& links() const { return links_; }
	// Sorted ascending.
	std::span<const NodeId> successors(NodeId u) const;

	const std::vector<PeriodicReservation>& server_ledger(NodeId server) const;
	const std::vector<PeriodicReservation>& link_ledger(NodeId u, NodeId v) const;

	// Raw ledger appends; no conflict checking (see broker commit).
	void reserve_server(NodeId server, const PeriodicReservation& r);
	void reserve_link(NodeId u, NodeId v, const PeriodicReservation& r);
	// Removes the most recent reservation on the resource; used for rollback.
	void unreserve_server_last(NodeId server);
	void unreserve_link_last(NodeId u, NodeId v);

	bool is_committed(TaskId task) const { return committed_.contains(task); }
	void mark_committed(TaskId task) { committed_.insert(task); }
	const std::set<TaskId>& committed_tasks() const { return committed_; }

private:
	void check_node(NodeId id) const;
	Link& link_mut(NodeId u, NodeId v);

	std::int64_t bytes_per_slot_;
	std::vector<Node> nodes_;
	std::vector<std::vector<NodeId>> succ_;
	std::vector<std::vector<PeriodicReservation>> server_ledgers_;
	std::map<LinkKey, Link> links_;
	std::set<TaskId> committed_;
};

} // namespace detsched
