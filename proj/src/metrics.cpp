#include "detsched/metrics.hpp"

#include <map>

namespace detsched {

MetricsReport compute_metrics(const OperationalGraph& g, std::span<const TaskSpec> tasks,
                              std::span<const ScheduleDecision> decisions, double wallclock_s)
{
	std::map<TaskId, const TaskSpec*> by_id;
	for (const auto& t : tasks)
		by_id[t.id] = &t;

	std::map<NodeId, std::vector<const TaskSpec*>> hosted;
	double delay_sum = 0.0;
	for (const auto& d : decisions) {
		auto it = by_id.find(d.task);
		require(it != by_id.end(), "compute_metrics: decision for unknown task");
		const TaskSpec& t = *it->second;
		hosted[d.server].push_back(&t);
		Slot arrival = d.depart_ret + hop_count(d.path_ret) * gamma_ret(t, g.bytes_per_slot());
		delay_sum += static_cast<double>(arrival - t.release);
	}

	MetricsReport m;
	m.runtime_s = wallclock_s;
	m.snum = static_cast<int>(hosted.size());
	if (!decisions.empty())
		m.delay = delay_sum / static_cast<double>(decisions.size());
	double util_sum = 0.0;
	for (const auto& [server, ts] : hosted) {
		std::vector<Slot> periods;
		for (const auto* t : ts)
			periods.push_back(t->period);
		const Slot hp = hyperperiod(periods);
		Slot busy = 0;
		for (const auto* t : ts)
			busy += t->compute_len * (hp / t->period);
		util_sum += static_cast<double>(busy) / static_cast<double>(hp);
	}
	if (!hosted.empty())
		m.utility = util_sum / static_cast<double>(hosted.size());
	return m;
}

} // namespace detsched
