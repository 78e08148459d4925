#pragma once

#include <optional>
#include <span>

#include "detsched/graph.hpp"

namespace detsched {

struct MetricsReport {
	int snum = 0;                 // distinct servers in use
	double utility = 0.0;         // mean busy fraction of used servers
	std::optional<double> delay;  // mean response delay in slots, absent with no decisions
	double runtime_s = 0.0;
	int asnum = 0;                // servers added (deployment runs)
	int alnum = 0;                // physical connections added (deployment runs)
	std::optional<double> tcost;  // upgrade cost (deployment runs)
	int failures = 0;
};

// Snum, Utility and Delay over the given decisions. Utility of one server is
// sum(compute_len * hp / period) / hp over its hosted tasks, hp being the
// hyperperiod of those tasks.
MetricsReport compute_metrics(const OperationalGraph& g, std::span<const TaskSpec> tasks,
                              std::span<const ScheduleDecision> decisions, double wallclock_s);

} // namespace detsched
