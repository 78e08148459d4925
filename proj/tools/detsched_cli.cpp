// Experiment runner on top of the C interface.
//
//   detsched_cli --mode schedule --tnum 10 --seeds 5 --algorithm Broker NearestFS
//   detsched_cli --mode deploy --tnum 50 --algorithm Combined ScostFS --cl 1 1000
//   detsched_cli --mode sweep --out table.csv
//   detsched_cli --mode verify --instance inst.json --schedule sched.json

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "detsched/detsched.h"

namespace {

const std::vector<std::string> kStrategies{"Broker", "DelayFS", "NearestFS", "DFNS", "RandomS"};
const std::vector<std::string> kPlanners{"Combined", "NcostFS", "ScostFS", "ONetFS", "LCFU", "SCFU"};
const std::vector<std::string> kOrderings{"Period", "Base", "Random", "CTimeA", "CTimeB"};

bool is_one_of(const std::string& s, const std::vector<std::string>& names)
{
	return std::find(names.begin(), names.end(), s) != names.end();
}

struct Failure : std::runtime_error {
	using std::runtime_error::runtime_error;
};

void check(detsched_status st)
{
	if (st != DETSCHED_OK)
		throw Failure(detsched_last_error());
}

// Owning wrappers for the C handles.
struct InstanceFree {
	void operator()(detsched_instance* p) const { detsched_instance_free(p); }
};
struct ScheduleFree {
	void operator()(detsched_schedule* p) const { detsched_schedule_free(p); }
};
struct PlanFree {
	void operator()(detsched_plan* p) const { detsched_plan_free(p); }
};
using InstancePtr = std::unique_ptr<detsched_instance, InstanceFree>;
using SchedulePtr = std::unique_ptr<detsched_schedule, ScheduleFree>;
using PlanPtr = std::unique_ptr<detsched_plan, PlanFree>;

std::string take_string(char* s)
{
	std::string out(s);
	detsched_string_free(s);
	return out;
}

std::string read_file(const std::string& path)
{
	std::ifstream in(path, std::ios::binary);
	if (!in)
		throw Failure("cannot read " + path);
	std::ostringstream ss;
	ss << in.rdbuf();
	return ss.str();
}

void write_file(const std::string& path, const std::string& text)
{
	std::ofstream out(path, std::ios::binary);
	if (!out || !(out << text))
		throw Failure("cannot write " + path);
}

struct Options {
	std::string mode;
	std::vector<int> tnum;
	int seeds = 0;
	std::uint64_t seed_base = 0;
	std::vector<std::string> algorithms;
	std::string ordering = "Period";
	double cs = 100.0;
	std::vector<double> cl{1.0};
	std::string topology;
	std::string servers;
	std::string instance;
	std::string schedule;
	std::string instance_out;
	std::string schedule_out;
	std::string out;
	std::string summary;
	int jobs = 0;
	bool deterministic = false;
};

struct Row {
	std::uint64_t seed = 0;
	std::string algorithm;
	int tnum = 0;
	detsched_metrics m{};
	bool deploy = false;
	bool feasible = true;
};

struct Run {
	std::string algorithm; // strategy or planner
	double cl = 0.0;
	bool deploy = false;
};

std::string label(const Run& r)
{
	if (!r.deploy)
		return r.algorithm;
	std::ostringstream ss;
	ss << r.algorithm << "/cl=" << r.cl;
	return ss.str();
}

std::string num(double v)
{
	char buf[64];
	std::snprintf(buf, sizeof buf, "%.6g", v);
	return buf;
}

std::string csv(const std::vector<Row>& rows, bool deterministic)
{
	std::ostringstream ss;
	ss << "seed,algorithm,Tnum,Snum,Utility,Delay,Runtime,ASnum,ALnum,Tcost\n";
	for (const auto& r : rows) {
		ss << r.seed << ',' << r.algorithm << ',' << r.tnum << ',' << r.m.snum << ',' << num(r.m.utility) << ','
		   << (r.m.has_delay ? num(r.m.delay) : "NA") << ',' << num(deterministic ? 0.0 : r.m.runtime_s) << ','
		   << r.m.asnum << ',' << r.m.alnum << ',' << (r.m.has_tcost ? num(r.m.tcost) : "NA") << '\n';
	}
	return ss.str();
}

// Means per (algorithm, Tnum). Delay and Tcost average over the runs that have them.
std::string summary(const std::vector<Row>& rows, bool deterministic)
{
	struct Acc {
		int runs = 0, delay_runs = 0, tcost_runs = 0, failures = 0, infeasible = 0;
		double snum = 0, util = 0, delay = 0, runtime = 0, asnum = 0, alnum = 0, tcost = 0;
	};
	std::vector<std::pair<std::string, int>> order;
	std::map<std::pair<std::string, int>, Acc> acc;
	for (const auto& r : rows) {
		auto key = std::make_pair(r.algorithm, r.tnum);
		if (!acc.contains(key))
			order.push_back(key);
		auto& a = acc[key];
		++a.runs;
		a.snum += r.m.snum;
		a.util += r.m.utility;
		a.runtime += deterministic ? 0.0 : r.m.runtime_s;
		a.asnum += r.m.asnum;
		a.alnum += r.m.alnum;
		a.failures += r.m.failures;
		a.infeasible += r.deploy && !r.feasible;
		if (r.m.has_delay)
			++a.delay_runs, a.delay += r.m.delay;
		if (r.m.has_tcost)
			++a.tcost_runs, a.tcost += r.m.tcost;
	}
	nlohmann::json out = nlohmann::json::array();
	for (const auto& key : order) {
		const auto& a = acc.at(key);
		nlohmann::json j{{"algorithm", key.first}, {"Tnum", key.second},    {"runs", a.runs},
		                 {"Snum", a.snum / a.runs}, {"Utility", a.util / a.runs}, {"Runtime", a.runtime / a.runs},
		                 {"ASnum", a.asnum / a.runs}, {"ALnum", a.alnum / a.runs}, {"failures", a.failures}};
		j["Delay"] = a.delay_runs ? nlohmann::json(a.delay / a.delay_runs) : nlohmann::json(nullptr);
		j["Tcost"] = a.tcost_runs ? nlohmann::json(a.tcost / a.tcost_runs) : nlohmann::json(nullptr);
		j["infeasible_runs"] = a.infeasible;
		out.push_back(std::move(j));
	}
	return out.dump(1, '\t') + "\n";
}

InstancePtr make_instance(const Options& o, int tnum, std::uint64_t seed, bool deploy_defaults)
{
	detsched_instance* raw = nullptr;
	if (!o.instance.empty()) {
		check(detsched_instance_from_json(read_file(o.instance).c_str(), &raw));
		return InstancePtr(raw);
	}
	detsched_instance_config cfg;
	detsched_instance_config_default(&cfg);
	cfg.n_tasks = tnum;
	cfg.seed = seed;
	std::string topo = o.topology.empty() ? (deploy_defaults ? "fixed" : "random") : o.topology;
	std::string srv = o.servers.empty() ? (deploy_defaults ? "fifth" : "equal") : o.servers;
	cfg.topology = topo == "fixed" ? DETSCHED_TOPOLOGY_FIXED : DETSCHED_TOPOLOGY_RANDOM;
	cfg.server_rule = srv == "fifth" ? DETSCHED_SERVERS_CEIL_FIFTH : DETSCHED_SERVERS_EQUAL_TASKS;
	check(detsched_instance_generate(&cfg, &raw));
	return InstancePtr(raw);
}

struct Cell {
	int tnum;
	std::uint64_t seed;
};

struct CellResult {
	std::vector<Row> rows;
	std::string instance_json;
	std::string artifact_json; // schedule or plan of the only run
	std::string error;
};

CellResult run_cell(const Options& o, const Cell& c, const std::vector<Run>& runs, bool keep_artifacts)
{
	CellResult res;
	const bool any_deploy = std::any_of(runs.begin(), runs.end(), [](const Run& r) { return r.deploy; });
	const bool all_deploy = std::all_of(runs.begin(), runs.end(), [](const Run& r) { return r.deploy; });
	auto inst = make_instance(o, c.tnum, c.seed, any_deploy && all_deploy);
	int tasks = 0;
	check(detsched_instance_task_count(inst.get(), &tasks));
	if (keep_artifacts) {
		char* s = nullptr;
		check(detsched_instance_to_json(inst.get(), &s));
		res.instance_json = take_string(s);
	}
	for (const auto& r : runs) {
		Row row;
		row.seed = c.seed;
		row.algorithm = label(r);
		row.tnum = tasks;
		row.deploy = r.deploy;
		char* s = nullptr;
		if (r.deploy) {
			detsched_plan* raw = nullptr;
			check(detsched_plan_run(inst.get(), r.algorithm.c_str(), o.cs, r.cl, o.ordering.c_str(), c.seed, &raw));
			PlanPtr p(raw);
			check(detsched_plan_metrics(p.get(), &row.m));
			int feasible = 0;
			check(detsched_plan_feasible(p.get(), &feasible));
			row.feasible = feasible;
			if (keep_artifacts) {
				check(detsched_plan_to_json(p.get(), &s));
				res.artifact_json = take_string(s);
			}
		} else {
			detsched_schedule* raw = nullptr;
			check(detsched_schedule_run(inst.get(), r.algorithm.c_str(), o.ordering.c_str(), c.seed, &raw));
			SchedulePtr sp(raw);
			check(detsched_schedule_metrics(sp.get(), &row.m));
			if (keep_artifacts) {
				check(detsched_schedule_to_json(sp.get(), &s));
				res.artifact_json = take_string(s);
			}
		}
		res.rows.push_back(std::move(row));
	}
	return res;
}

// Cells run on worker threads; each worker owns its instances. Results are
// stored by cell index so the output order never depends on scheduling.
std::vector<CellResult> run_grid(const Options& o, const std::vector<Cell>& cells, const std::vector<Run>& runs,
                                 bool keep_artifacts)
{
	std::vector<CellResult> results(cells.size());
	std::atomic<std::size_t> next{0};
	auto worker = [&] {
		for (std::size_t i = next++; i < cells.size(); i = next++) {
			try {
				results[i] = run_cell(o, cells[i], runs, keep_artifacts);
			} catch (const std::exception& e) {
				results[i].error = e.what();
			}
		}
	};
	int jobs = o.jobs > 0 ? o.jobs : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
	jobs = std::min<int>(jobs, static_cast<int>(cells.size()));
	std::vector<std::thread> pool;
	for (int j = 1; j < jobs; ++j)
		pool.emplace_back(worker);
	worker();
	for (auto& t : pool)
		t.join();
	for (const auto& r : results)
		if (!r.error.empty())
			throw Failure(r.error);
	return results;
}

std::string summary_path(const Options& o)
{
	if (!o.summary.empty())
		return o.summary;
	if (o.out.empty() || o.out == "-")
		return {};
	auto dot = o.out.find_last_of('.');
	auto slash = o.out.find_last_of('/');
	std::string stem = (dot != std::string::npos && (slash == std::string::npos || dot > slash)) ? o.out.substr(0, dot)
	                                                                                             : o.out;
	return stem + ".summary.json";
}

int run_experiments(Options o)
{
	const bool sweep = o.mode == "sweep";
	if (o.tnum.empty())
		o.tnum = sweep ? std::vector<int>{10, 50, 100} : std::vector<int>{10};
	if (o.seeds == 0)
		o.seeds = sweep ? 50 : 1;
	if (o.algorithms.empty())
		o.algorithms = o.mode == "deploy" ? std::vector<std::string>{"Combined"}
		             : sweep             ? kStrategies
		                                 : std::vector<std::string>{"Broker"};

	std::vector<Run> runs;
	for (const auto& a : o.algorithms) {
		const bool planner = is_one_of(a, kPlanners);
		if (o.mode == "schedule" && planner)
			throw CLI::ValidationError("--algorithm", a + " is a planner; use --mode deploy");
		if (o.mode == "deploy" && !planner)
			throw CLI::ValidationError("--algorithm", a + " is not a planner");
		if (planner)
			for (double cl : o.cl)
				runs.push_back({a, cl, true});
		else
			runs.push_back({a, 0.0, false});
	}

	std::vector<Cell> cells;
	for (int t : o.tnum)
		for (int s = 0; s < o.seeds; ++s)
			cells.push_back({t, o.seed_base + static_cast<std::uint64_t>(s)});
	const bool single = cells.size() == 1 && runs.size() == 1;
	if ((!o.instance_out.empty() || !o.schedule_out.empty()) && !single)
		throw CLI::ValidationError("--instance-out/--schedule-out", "need exactly one seed, Tnum, algorithm and c_l");

	auto results = run_grid(o, cells, runs, single);
	std::vector<Row> rows;
	for (auto& r : results)
		rows.insert(rows.end(), r.rows.begin(), r.rows.end());

	if (!o.instance_out.empty())
		write_file(o.instance_out, results.front().instance_json);
	if (!o.schedule_out.empty())
		write_file(o.schedule_out, results.front().artifact_json);
	const std::string table = csv(rows, o.deterministic);
	if (o.out.empty() || o.out == "-")
		std::cout << table;
	else
		write_file(o.out, table);
	if (auto path = summary_path(o); !path.empty())
		write_file(path, summary(rows, o.deterministic));
	return 0;
}

int run_verify(const Options& o)
{
	if (o.instance.empty() || o.schedule.empty())
		throw CLI::ValidationError("--mode verify", "needs --instance and --schedule");
	detsched_instance* raw = nullptr;
	check(detsched_instance_from_json(read_file(o.instance).c_str(), &raw));
	InstancePtr inst(raw);
	std::size_t n = 0;
	char* report = nullptr;
	check(detsched_verify(inst.get(), read_file(o.schedule).c_str(), &n, &report));
	const std::string text = take_string(report) + "\n";
	if (o.out.empty() || o.out == "-")
		std::cout << text;
	else
		write_file(o.out, text);
	if (n > 0)
		std::cerr << n << " finding(s)\n";
	return n == 0 ? 0 : 1;
}

} // namespace

int main(int argc, char** argv)
{
	CLI::App app{"Deterministic slot scheduling and network upgrade planning"};
	Options o;
	app.add_option("--mode", o.mode, "schedule | deploy | verify | sweep")
	        ->required()
	        ->check(CLI::IsMember({"schedule", "deploy", "verify", "sweep"}));
	app.add_option("--tnum", o.tnum, "task counts (default 10; sweep: 10 50 100)")->check(CLI::PositiveNumber);
	app.add_option("--seeds", o.seeds, "number of seeds (default 1; sweep: 50)")->check(CLI::PositiveNumber);
	app.add_option("--seed-base", o.seed_base, "first seed");
	app.add_option("--algorithm", o.algorithms, "ranking strategies or planners")
	        ->check(CLI::IsMember([] {
		        auto all = kStrategies;
		        all.insert(all.end(), kPlanners.begin(), kPlanners.end());
		        return all;
	        }()));
	app.add_option("--ordering", o.ordering, "task ordering")->check(CLI::IsMember(kOrderings));
	app.add_option("--cs", o.cs, "cost of an added server")->check(CLI::NonNegativeNumber);
	app.add_option("--cl", o.cl, "cost of an added router link (list)")->check(CLI::NonNegativeNumber);
	app.add_option("--topology", o.topology, "random | fixed (default: random; deploy: fixed)")
	        ->check(CLI::IsMember({"random", "fixed"}));
	app.add_option("--servers", o.servers, "equal | fifth (default: equal; deploy: fifth)")
	        ->check(CLI::IsMember({"equal", "fifth"}));
	app.add_option("--instance", o.instance, "instance JSON to use instead of generating")->check(CLI::ExistingFile);
	app.add_option("--schedule", o.schedule, "schedule or plan JSON to verify")->check(CLI::ExistingFile);
	app.add_option("--instance-out", o.instance_out, "write the instance JSON (single run)");
	app.add_option("--schedule-out", o.schedule_out, "write the schedule or plan JSON (single run)");
	app.add_option("--out", o.out, "CSV output (verify: report output), default stdout");
	app.add_option("--summary", o.summary, "aggregate JSON (default: <out>.summary.json)");
	app.add_option("--jobs", o.jobs, "worker threads (default: hardware threads)")->check(CLI::PositiveNumber);
	app.add_flag("--deterministic", o.deterministic, "report Runtime as 0 so output is byte-stable");

	try {
		app.parse(argc, argv);
		return o.mode == "verify" ? run_verify(o) : run_experiments(o);
	} catch (const CLI::ParseError& e) {
		app.exit(e);
		return 2;
	} catch (const Failure& e) {
		std::cerr << "error: " << e.what() << "\n";
		return 3;
	}
}
