#include "detsched/detsched.h"

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include "detsched/json_io.hpp"

using namespace detsched;

struct detsched_instance {
	Instance inst;
};

struct detsched_schedule {
	ScheduleOutcome outcome;
};

struct detsched_plan {
	DeployPlan plan;
	MetricsReport metrics;
};

namespace {

thread_local std::string last_error;

detsched_status fail(detsched_status code, std::string msg)
{
	last_error = std::move(msg);
	return code;
}

// Runs `body`, mapping exceptions to status codes.
template <class F>
detsched_status guarded(F&& body)
{
	try {
		body();
		last_error.clear();
		return DETSCHED_OK;
	} catch (const ContractViolation& e) {
		return fail(DETSCHED_ERR_INPUT, e.what());
	} catch (const CommitRejected& e) {
		return fail(DETSCHED_ERR_INPUT, e.what());
	} catch (const std::bad_alloc&) {
		return fail(DETSCHED_ERR_INTERNAL, "out of memory");
	} catch (const std::exception& e) {
		return fail(DETSCHED_ERR_INTERNAL, e.what());
	} catch (...) {
		return fail(DETSCHED_ERR_INTERNAL, "unknown error");
	}
}

char* copy_string(const std::string& s)
{
	char* out = static_cast<char*>(std::malloc(s.size() + 1));
	if (!out)
		throw std::bad_alloc();
	std::memcpy(out, s.c_str(), s.size() + 1);
	return out;
}

void fill(detsched_metrics* out, const MetricsReport& m)
{
	out->snum = m.snum;
	out->utility = m.utility;
	out->has_delay = m.delay.has_value();
	out->delay = m.delay.value_or(0.0);
	out->runtime_s = m.runtime_s;
	out->asnum = m.asnum;
	out->alnum = m.alnum;
	out->has_tcost = m.tcost.has_value();
	out->tcost = m.tcost.value_or(0.0);
	out->failures = m.failures;
}

// Names are validated before any work so that a typo is an argument error.
template <class Parse>
bool known(Parse parse, const char* name)
{
	if (!name)
		return false;
	try {
		parse(name);
		return true;
	} catch (const ContractViolation&) {
		return false;
	}
}

} // namespace

extern "C" {

const char* detsched_version(void)
{
	return "1.0.0";
}

const char* detsched_last_error(void)
{
	return last_error.c_str();
}

void detsched_string_free(char* s)
{
	std::free(s);
}

void detsched_instance_config_default(detsched_instance_config* cfg)
{
	if (!cfg)
		return;
	InstanceConfig d;
	cfg->n_tasks = d.n_tasks;
	cfg->n_routers = d.n_routers;
	cfg->n_router_links = d.n_router_links;
	cfg->topology = DETSCHED_TOPOLOGY_RANDOM;
	cfg->server_rule = DETSCHED_SERVERS_EQUAL_TASKS;
	cfg->bytes_per_slot = d.bytes_per_slot;
	cfg->seed = d.seed;
}

detsched_status detsched_instance_generate(const detsched_instance_config* cfg, detsched_instance** out)
{
	if (!cfg || !out)
		return fail(DETSCHED_ERR_ARGUMENT, "null argument");
	if (cfg->topology != DETSCHED_TOPOLOGY_RANDOM && cfg->topology != DETSCHED_TOPOLOGY_FIXED)
		return fail(DETSCHED_ERR_ARGUMENT, "unknown topology");
	if (cfg->server_rule != DETSCHED_SERVERS_EQUAL_TASKS && cfg->server_rule != DETSCHED_SERVERS_CEIL_FIFTH)
		return fail(DETSCHED_ERR_ARGUMENT, "unknown server rule");
	return guarded([&] {
		InstanceConfig c;
		c.n_tasks = cfg->n_tasks;
		c.n_routers = cfg->n_routers;
		c.n_router_links = cfg->n_router_links;
		c.topology = cfg->topology == DETSCHED_TOPOLOGY_FIXED ? Topology::Fixed : Topology::Random;
		c.server_rule =
		        cfg->server_rule == DETSCHED_SERVERS_CEIL_FIFTH ? ServerRule::CeilFifth : ServerRule::EqualTasks;
		c.bytes_per_slot = cfg->bytes_per_slot;
		c.seed = cfg->seed;
		*out = new detsched_instance{generate_instance(c)};
	});
}

detsched_status detsched_instance_from_json(const char* json, detsched_instance** out)
{
	if (!json || !out)
		return fail(DETSCHED_ERR_ARGUMENT, "null argument");
	return guarded([&] { *out = new detsched_instance{instance_from_json(json)}; });
}

detsched_status detsched_instance_to_json(const detsched_instance* inst, char** out)
{
	if (!inst || !out)
		return fail(DETSCHED_ERR_ARGUMENT, "null argument");
	return guarded([&] { *out = copy_string(instance_to_json(inst->inst.graph, inst->inst.tasks)); });
}

detsched_status detsched_instance_task_count(const detsched_instance* inst, int* out)
{
	if (!inst || !out)
		return fail(DETSCHED_ERR_ARGUMENT, "null argument");
	*out = static_cast<int>(inst->inst.tasks.size());
	return DETSCHED_OK;
}

void detsched_instance_free(detsched_instance* inst)
{
	delete inst;
}

detsched_status detsched_schedule_run(const detsched_instance* inst, const char* strategy, const char* ordering,
                                      uint64_t seed, detsched_schedule** out)
{
	if (!inst || !out)
		return fail(DETSCHED_ERR_ARGUMENT, "null argument");
	if (!known(ranking_from_string, strategy))
		return fail(DETSCHED_ERR_ARGUMENT, std::string("unknown strategy: ") + (strategy ? strategy : "(null)"));
	if (!known(ordering_from_string, ordering))
		return fail(DETSCHED_ERR_ARGUMENT, std::string("unknown ordering: ") + (ordering ? ordering : "(null)"));
	return guarded([&] {
		OperationalGraph g = inst->inst.graph;
		auto outcome = schedule_all(g, inst->inst.tasks, ordering_from_string(ordering),
		                            ranking_from_string(strategy), seed);
		*out = new detsched_schedule{std::move(outcome)};
	});
}

detsched_status detsched_schedule_metrics(const detsched_schedule* s, detsched_metrics* out)
{
	if (!s || !out)
		return fail(DETSCHED_ERR_ARGUMENT, "null argument");
	fill(out, s->outcome.metrics);
	return DETSCHED_OK;
}

detsched_status detsched_schedule_to_json(const detsched_schedule* s, char** out)
{
	if (!s || !out)
		return fail(DETSCHED_ERR_ARGUMENT, "null argument");
	return guarded([&] { *out = copy_string(schedule_to_json(s->outcome.decisions, s->outcome.failures)); });
}

void detsched_schedule_free(detsched_schedule* s)
{
	delete s;
}

detsched_status detsched_plan_run(const detsched_instance* inst, const char* planner, double c_s, double c_l,
                                  const char* ordering, uint64_t seed, detsched_plan** out)
{
	if (!inst || !out)
		return fail(DETSCHED_ERR_ARGUMENT, "null argument");
	if (!known(planner_from_string, planner))
		return fail(DETSCHED_ERR_ARGUMENT, std::string("unknown planner: ") + (planner ? planner : "(null)"));
	if (!known(ordering_from_string, ordering))
		return fail(DETSCHED_ERR_ARGUMENT, std::string("unknown ordering: ") + (ordering ? ordering : "(null)"));
	if (!(c_s >= 0) || !(c_l >= 0))
		return fail(DETSCHED_ERR_ARGUMENT, "costs must be non-negative");
	return guarded([&] {
		DeployConfig cfg;
		cfg.costs = {c_s, c_l};
		cfg.ordering = ordering_from_string(ordering);
		cfg.seed = seed;
		auto plan = deploy(inst->inst.graph, inst->inst.tasks, planner_from_string(planner), cfg);
		auto m = compute_metrics(plan.graph, inst->inst.tasks, plan.decisions, plan.runtime_s);
		m.asnum = plan.asnum;
		m.alnum = plan.alnum;
		if (plan.feasible)
			m.tcost = plan.tcost;
		m.failures = static_cast<int>(plan.infeasible.size());
		*out = new detsched_plan{std::move(plan), m};
	});
}

detsched_status detsched_plan_feasible(const detsched_plan* p, int* out)
{
	if (!p || !out)
		return fail(DETSCHED_ERR_ARGUMENT, "null argument");
	*out = p->plan.feasible;
	return DETSCHED_OK;
}

detsched_status detsched_plan_metrics(const detsched_plan* p, detsched_metrics* out)
{
	if (!p || !out)
		return fail(DETSCHED_ERR_ARGUMENT, "null argument");
	fill(out, p->metrics);
	return DETSCHED_OK;
}

detsched_status detsched_plan_to_json(const detsched_plan* p, char** out)
{
	if (!p || !out)
		return fail(DETSCHED_ERR_ARGUMENT, "null argument");
	return guarded([&] { *out = copy_string(plan_to_json(p->plan)); });
}

void detsched_plan_free(detsched_plan* p)
{
	delete p;
}

detsched_status detsched_verify(const detsched_instance* inst, const char* document, size_t* n_findings,
                                char** report_json)
{
	if (!inst || !document || !n_findings || !report_json)
		return fail(DETSCHED_ERR_ARGUMENT, "null argument");
	return guarded([&] {
		VerificationReport report;
		if (looks_like_plan(document)) {
			auto plan = plan_from_json(document);
			auto g = apply_plan(inst->inst.graph, plan);
			report = verify_schedule(g, inst->inst.tasks, plan.decisions);
			auto layout = structural_violations(g);
			report.insert(report.end(), layout.begin(), layout.end());
			std::sort(report.begin(), report.end());
		} else {
			auto doc = schedule_from_json(document);
			report = verify_schedule(inst->inst.graph, inst->inst.tasks, doc.decisions);
		}
		*report_json = copy_string(report_to_json(report));
		*n_findings = report.size();
	});
}

} // extern "C"
