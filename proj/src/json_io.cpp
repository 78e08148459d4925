#include "detsched/json_io.hpp"

#include <algorithm>

#include <json.hpp>

namespace detsched {

using nlohmann::json;

namespace {

constexpr int kFormat = 1;

json decision_json(const ScheduleDecision& d)
{
	return {{"task", d.task},           {"server", d.server},       {"compute_start", d.compute_start},
	        {"path_fwd", d.path_fwd},   {"depart_fwd", d.depart_fwd}, {"path_ret", d.path_ret},
	        {"depart_ret", d.depart_ret}};
}

json parse(std::string_view text)
{
	json doc;
	try {
		doc = json::parse(text);
	} catch (const json::parse_error& e) {
		throw ContractViolation(std::string("malformed JSON: ") + e.what());
	}
	if (!doc.is_object() || !doc.contains("format"))
		throw ContractViolation("document lacks a \"format\" field");
	if (doc.at("format") != kFormat)
		throw ContractViolation("unsupported format version " + doc.at("format").dump());
	return doc;
}

// Field access with a readable error instead of nlohmann's.
template <class T>
T get(const json& obj, const char* key)
{
	if (!obj.is_object() || !obj.contains(key))
		throw ContractViolation(std::string("missing field \"") + key + "\"");
	try {
		return obj.at(key).get<T>();
	} catch (const json::exception&) {
		throw ContractViolation(std::string("field \"") + key + "\" has the wrong type");
	}
}

ScheduleDecision read_decision(const json& j)
{
	return {get<TaskId>(j, "task"),
	        get<NodeId>(j, "server"),
	        get<Slot>(j, "compute_start"),
	        get<std::vector<NodeId>>(j, "path_fwd"),
	        get<Slot>(j, "depart_fwd"),
	        get<std::vector<NodeId>>(j, "path_ret"),
	        get<Slot>(j, "depart_ret")};
}

std::vector<ScheduleDecision> read_decisions(const json& doc)
{
	std::vector<ScheduleDecision> out;
	for (const auto& j : get<json>(doc, "decisions"))
		out.push_back(read_decision(j));
	return out;
}

} // namespace

std::string instance_to_json(const OperationalGraph& g, std::span<const TaskSpec> tasks)
{
	json nodes = json::array();
	for (const auto& n : g.nodes()) {
		json j{{"id", n.id}, {"kind", to_string(n.kind)}};
		if (n.is_server())
			j["state"] = to_string(n.server_state);
		nodes.push_back(std::move(j));
	}
	json links = json::array();
	for (const auto& [key, link] : g.links()) {
		json j{{"u", key.first}, {"v", key.second}};
		if (link.state == LinkState::Virtual)
			j["virtual"] = true;
		links.push_back(std::move(j));
	}
	json ts = json::array();
	for (const auto& t : tasks)
		ts.push_back({{"id", t.id},
		              {"source", t.source_device},
		              {"release", t.release},
		              {"period", t.period},
		              {"deadline", t.deadline},
		              {"payload_fwd", t.payload_fwd},
		              {"payload_ret", t.payload_ret},
		              {"compute", t.compute_len}});
	json doc{{"format", kFormat},
	         {"bytes_per_slot", g.bytes_per_slot()},
	         {"graph", {{"nodes", nodes}, {"links", links}}},
	         {"tasks", ts}};
	return doc.dump(1, '\t');
}

Instance instance_from_json(std::string_view text)
{
	const json doc = parse(text);
	const auto bps = get<std::int64_t>(doc, "bytes_per_slot");
	require(bps > 0, "bytes_per_slot must be positive");
	Instance inst{OperationalGraph(bps), {}};
	const json graph = get<json>(doc, "graph");
	NodeId expected = 0;
	for (const auto& n : get<json>(graph, "nodes")) {
		if (get<NodeId>(n, "id") != expected)
			throw ContractViolation("node ids must be 0, 1, 2, ... in order");
		const NodeKind kind = node_kind_from_string(get<std::string>(n, "kind"));
		ServerState state = ServerState::RealUnused;
		if (kind == NodeKind::Server && n.contains("state"))
			state = server_state_from_string(get<std::string>(n, "state"));
		inst.graph.add_node(kind, state);
		++expected;
	}
	for (const auto& l : get<json>(graph, "links")) {
		const NodeId u = get<NodeId>(l, "u"), v = get<NodeId>(l, "v");
		require(inst.graph.has_node(u) && inst.graph.has_node(v), "link endpoint is not a node");
		require(!inst.graph.has_link(u, v), "duplicate link");
		const bool virt = l.contains("virtual") && get<bool>(l, "virtual");
		inst.graph.add_link(u, v, virt ? LinkState::Virtual : LinkState::Real);
	}
	for (const auto& j : get<json>(doc, "tasks")) {
		TaskSpec t{get<TaskId>(j, "id"),          get<NodeId>(j, "source"),
		           get<Slot>(j, "release"),       get<Slot>(j, "period"),
		           get<Slot>(j, "deadline"),      get<std::int64_t>(j, "payload_fwd"),
		           get<std::int64_t>(j, "payload_ret"), get<Slot>(j, "compute")};
		validate(t, bps);
		require(inst.graph.has_node(t.source_device) &&
		                inst.graph.node(t.source_device).kind == NodeKind::Device,
		        "task source is not a device");
		inst.tasks.push_back(t);
	}
	return inst;
}

std::string schedule_to_json(std::span<const ScheduleDecision> decisions, std::span<const TaskId> failures)
{
	json ds = json::array();
	for (const auto& d : decisions)
		ds.push_back(decision_json(d));
	json doc{{"format", kFormat},
	         {"decisions", ds},
	         {"failures", std::vector<TaskId>(failures.begin(), failures.end())}};
	return doc.dump(1, '\t');
}

ScheduleDocument schedule_from_json(std::string_view text)
{
	const json doc = parse(text);
	ScheduleDocument out;
	out.decisions = read_decisions(doc);
	if (doc.contains("failures"))
		out.failures = get<std::vector<TaskId>>(doc, "failures");
	return out;
}

std::string plan_to_json(const DeployPlan& plan)
{
	json servers = json::array();
	for (const auto& s : plan.added_servers)
		servers.push_back({{"id", s.id}, {"router", s.router}});
	json links = json::array();
	for (const auto& [u, v] : plan.added_links)
		links.push_back({{"u", u}, {"v", v}});
	json ds = json::array();
	for (const auto& d : plan.decisions)
		ds.push_back(decision_json(d));
	json doc{{"format", kFormat},  {"feasible", plan.feasible}, {"added_servers", servers},
	         {"added_links", links}, {"tcost", plan.tcost},      {"asnum", plan.asnum},
	         {"alnum", plan.alnum},  {"decisions", ds},          {"infeasible", plan.infeasible}};
	return doc.dump(1, '\t');
}

PlanDocument plan_from_json(std::string_view text)
{
	const json doc = parse(text);
	PlanDocument out;
	out.feasible = get<bool>(doc, "feasible");
	for (const auto& s : get<json>(doc, "added_servers"))
		out.added_servers.push_back({get<NodeId>(s, "id"), get<NodeId>(s, "router")});
	for (const auto& l : get<json>(doc, "added_links"))
		out.added_links.push_back({get<NodeId>(l, "u"), get<NodeId>(l, "v")});
	out.tcost = get<double>(doc, "tcost");
	out.decisions = read_decisions(doc);
	if (doc.contains("infeasible"))
		out.infeasible = get<std::vector<TaskId>>(doc, "infeasible");
	return out;
}

bool looks_like_plan(std::string_view text)
{
	return parse(text).contains("added_servers");
}

OperationalGraph apply_plan(const OperationalGraph& g0, const PlanDocument& plan)
{
	OperationalGraph g(g0.bytes_per_slot());
	for (const auto& n : g0.nodes())
		g.add_node(n.kind, n.server_state);
	for (const auto& [key, link] : g0.links())
		g.add_link(key.first, key.second, link.state);

	auto servers = plan.added_servers;
	std::sort(servers.begin(), servers.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
	for (const auto& s : servers) {
		require(s.id == static_cast<NodeId>(g.node_count()), "added server ids must continue the node ids");
		require(g.has_node(s.router) && g.node(s.router).is_router(), "added server must attach to a router");
		g.add_node(NodeKind::Server);
	}
	for (const auto& [u, v] : plan.added_links) {
		require(g.has_node(u) && g.has_node(v) && u != v, "added link endpoint is not a node");
		if (!g.has_link(u, v))
			g.add_connection(u, v);
	}
	return g;
}

std::string report_to_json(const VerificationReport& report)
{
	json out = json::array();
	for (const auto& f : report)
		out.push_back({{"kind", f.kind}, {"resource", f.resource}, {"slot", f.slot}, {"tasks", f.tasks},
		               {"detail", f.detail}});
	return out.dump(1, '\t');
}

} // namespace detsched
