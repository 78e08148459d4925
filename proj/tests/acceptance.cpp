// Acceptance run: prints one PASS/FAIL line per criterion and exits nonzero
// when any fails. Tolerances are fixed here, not taken from the command line.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "detsched/conflict.hpp"
#include "detsched/deployer.hpp"
#include "detsched/simkit.hpp"

using namespace detsched;

namespace {

constexpr int kSeeds = 50;
constexpr int kSweepSeeds = 20;
constexpr double kAnchorTolerance = 0.20;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0)
{
	return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Verdict {
	bool pass = true;
	std::string detail;
};

std::string fmt(const char* f, auto... args)
{
	char buf[512];
	std::snprintf(buf, sizeof buf, f, args...);
	return buf;
}

// ---------------------------------------------------------------------------
// C1: conflict module against slot bitsets

Slot lcm(Slot a, Slot b)
{
	return a / std::gcd(a, b) * b;
}

constexpr Slot kMaxHyperperiod = 100'000;
const std::vector<Slot> kPeriods{2, 3, 4, 5, 6, 8, 10, 12, 15, 20, 24, 30, 60, 100, 120, 300, 1000, 3000, 5000, 10000};

PeriodicReservation random_reservation(std::mt19937_64& rng, TaskId owner, Slot period)
{
	std::uniform_int_distribution<Slot> start(0, period - 1);
	const Slot max_len = rng() % 4 == 0 ? period : std::min<Slot>(period, 25);
	std::uniform_int_distribution<Slot> len(1, max_len);
	return {owner, start(rng), len(rng), period};
}

// Periods for `count` reservations whose hyperperiod stays within bounds.
std::vector<Slot> random_periods(std::mt19937_64& rng, std::size_t count)
{
	for (;;) {
		std::vector<Slot> ps;
		Slot hp = 1;
		for (std::size_t i = 0; i < count; ++i) {
			ps.push_back(kPeriods[rng() % kPeriods.size()]);
			hp = lcm(hp, ps.back());
		}
		if (hp <= kMaxHyperperiod)
			return ps;
	}
}

// Union of occupied slots over [0, hp), occurrences wrapping cyclically.
std::vector<char> busy_bits(std::span<const PeriodicReservation> rs, Slot hp)
{
	std::vector<char> bits(static_cast<std::size_t>(hp), 0);
	for (const auto& r : rs)
		for (Slot k = 0; k < hp / r.period; ++k)
			for (Slot i = 0; i < r.len; ++i)
				bits[static_cast<std::size_t>((r.start + k * r.period + i) % hp)] = 1;
	return bits;
}

Slot hyperperiod_of(std::span<const PeriodicReservation> rs, Slot period)
{
	Slot hp = period;
	for (const auto& r : rs)
		hp = lcm(hp, r.period);
	return hp;
}

// Does the window (s, len, period) touch a busy slot in any occurrence?
bool window_hits(const std::vector<char>& busy, Slot hp, Slot s, Slot len, Slot period)
{
	for (Slot k = 0; k < hp / period; ++k)
		for (Slot i = 0; i < len; ++i)
			if (busy[static_cast<std::size_t>((s + k * period + i) % hp)])
				return true;
	return false;
}

std::vector<char> as_bits(const ModularIntervalSet& s)
{
	std::vector<char> out(static_cast<std::size_t>(s.modulus()), 0);
	for (auto iv : s.intervals())
		for (Slot t = iv.lo; t < iv.hi; ++t)
			out[static_cast<std::size_t>(t)] = 1;
	return out;
}

Verdict c1_oracle_equivalence()
{
	const auto t0 = Clock::now();
	std::mt19937_64 rng(20240601);
	long cases = 0, mismatches = 0;

	for (int i = 0; i < 10000; ++i, ++cases) {
		auto ps = random_periods(rng, 2);
		auto a = random_reservation(rng, 1, ps[0]);
		auto b = random_reservation(rng, 2, ps[1]);
		const Slot hp = lcm(a.period, b.period);
		auto ba = busy_bits(std::span(&a, 1), hp);
		bool brute = window_hits(ba, hp, b.start, b.len, b.period);
		auto v = reservations_conflict(a, b);
		bool witness_ok = true;
		if (v.witness) {
			const Slot s = v.witness->slot;
			witness_ok = floor_mod(s - a.start, a.period) < a.len && floor_mod(s - b.start, b.period) < b.len;
		}
		mismatches += v.conflicting != brute || v.witness.has_value() != brute || !witness_ok;
	}

	for (int i = 0; i < 10000; ++i, ++cases) {
		const std::size_t n = rng() % 4;
		auto ps = random_periods(rng, n + 1);
		std::vector<PeriodicReservation> existing;
		for (std::size_t k = 0; k < n; ++k)
			existing.push_back(random_reservation(rng, static_cast<TaskId>(k + 1), ps[k]));
		auto fresh = random_reservation(rng, 99, ps[n]);
		const Slot hp = hyperperiod_of(existing, fresh.period);
		auto busy = busy_bits(existing, hp);

		auto theta = as_bits(infeasible_compute_starts(existing, fresh.period, fresh.len));
		auto blocked = as_bits(blocked_starts(existing, fresh.period, fresh.len));
		for (Slot o = 0; o < fresh.period; ++o) {
			const auto idx = static_cast<std::size_t>(o);
			mismatches += theta[idx] != window_hits(busy, hp, o, 1, fresh.period);
			mismatches += blocked[idx] != window_hits(busy, hp, o, fresh.len, fresh.period);
		}
	}

	for (int i = 0; i < 10000; ++i, ++cases) {
		const std::size_t hops = 1 + rng() % 4;
		std::vector<std::vector<PeriodicReservation>> ledgers(hops);
		std::vector<std::size_t> counts(hops);
		std::size_t total = 0;
		for (auto& c : counts)
			total += (c = rng() % 3);
		auto ps = random_periods(rng, total + 1);
		std::size_t next = 0;
		for (std::size_t w = 0; w < hops; ++w)
			for (std::size_t k = 0; k < counts[w]; ++k)
				ledgers[w].push_back(random_reservation(rng, static_cast<TaskId>(k + 1), ps[next++]));
		const Slot period = ps[total];
		const Slot gamma = 1 + static_cast<Slot>(rng() % static_cast<std::uint64_t>(std::min<Slot>(period, 10)));

		std::vector<std::span<const PeriodicReservation>> views(ledgers.begin(), ledgers.end());
		auto theta = as_bits(infeasible_departures(views, period, gamma));
		std::vector<std::vector<char>> busy;
		std::vector<Slot> hps;
		for (const auto& l : ledgers) {
			hps.push_back(hyperperiod_of(l, period));
			busy.push_back(busy_bits(l, hps.back()));
		}
		for (Slot b = 0; b < period; ++b) {
			bool hit = false;
			for (std::size_t w = 0; w < hops && !hit; ++w)
				hit = window_hits(busy[w], hps[w], (b + static_cast<Slot>(w) * gamma) % period, gamma, period);
			mismatches += theta[static_cast<std::size_t>(b)] != hit;
		}
	}

	const double secs = seconds_since(t0);
	return {mismatches == 0 && secs < 60.0,
	        fmt("%ld cases (pairs, compute-start sets, departure sets), %ld mismatches, %.1f s (limit 60 s)",
	            cases, mismatches, secs)};
}

// ---------------------------------------------------------------------------
// Scheduling experiments shared by C2, C3, C4

const std::vector<RankingStrategy> kStrategies{RankingStrategy::Broker, RankingStrategy::NearestFS,
                                               RankingStrategy::RandomS, RankingStrategy::DelayFS,
                                               RankingStrategy::DFNS};

struct ScheduleStats {
	double snum = 0, utility = 0;
	long runs = 0, failures = 0, findings = 0, deadline_findings = 0;
};

// stats[(strategy, Tnum)]
using ScheduleTable = std::map<std::pair<RankingStrategy, int>, ScheduleStats>;

ScheduleTable schedule_experiments(const std::vector<int>& tnums, const std::vector<RankingStrategy>& strategies,
                                   double& seconds)
{
	const auto t0 = Clock::now();
	ScheduleTable table;
	for (int tnum : tnums)
		for (int seed = 0; seed < kSeeds; ++seed) {
			InstanceConfig cfg;
			cfg.n_tasks = tnum;
			cfg.seed = static_cast<std::uint64_t>(seed);
			const auto inst = generate_instance(cfg);
			for (auto s : strategies) {
				OperationalGraph g = inst.graph;
				auto out = schedule_all(g, inst.tasks, TaskOrdering::Period, s, cfg.seed);
				auto report = verify_schedule(inst.graph, inst.tasks, out.decisions);
				auto& st = table[{s, tnum}];
				++st.runs;
				st.snum += out.metrics.snum;
				st.utility += out.metrics.utility;
				st.failures += static_cast<long>(out.failures.size());
				st.findings += static_cast<long>(report.size());
				st.deadline_findings += std::count_if(report.begin(), report.end(),
				                                      [](const Finding& f) { return f.kind == "deadline"; });
			}
		}
	for (auto& [key, st] : table) {
		st.snum /= static_cast<double>(st.runs);
		st.utility /= static_cast<double>(st.runs);
	}
	seconds = seconds_since(t0);
	return table;
}

Verdict c2_schedule_validity(const ScheduleTable& t, double seconds)
{
	long runs = 0, findings = 0, deadline = 0, failures = 0;
	for (const auto& [key, st] : t) {
		runs += st.runs;
		findings += st.findings;
		deadline += st.deadline_findings;
		failures += st.failures;
	}
	return {findings == 0 && deadline == 0 && seconds < 600.0,
	        fmt("%ld schedules (50 seeds x Tnum {10,50} x 5 strategies), %ld findings, %ld deadline misses, "
	            "%ld unscheduled tasks, %.1f s (limit 600 s)",
	            runs, findings, deadline, failures, seconds)};
}

bool within(double value, double anchor, double tol)
{
	return std::abs(value - anchor) <= tol * anchor;
}

Verdict c3_table_ordering(const ScheduleTable& t)
{
	using R = RankingStrategy;
	Verdict v;
	std::ostringstream ss;
	for (int tnum : {10, 50}) {
		auto snum = [&](R s) { return t.at({s, tnum}).snum; };
		auto util = [&](R s) { return t.at({s, tnum}).utility; };
		const bool snum_order = snum(R::Broker) < snum(R::NearestFS) && snum(R::NearestFS) < snum(R::RandomS) &&
		                        snum(R::RandomS) < snum(R::DelayFS) && snum(R::DelayFS) == snum(R::DFNS);
		const bool util_order = util(R::Broker) > util(R::NearestFS) && util(R::NearestFS) > util(R::RandomS) &&
		                        util(R::RandomS) > util(R::DelayFS) && util(R::DelayFS) == util(R::DFNS);
		const bool delay_full = snum(R::DelayFS) >= 0.95 * tnum;
		v.pass = v.pass && snum_order && util_order && delay_full;
		ss << fmt("Tnum=%d Snum %.2f/%.2f/%.2f/%.2f/%.2f Util %.2f%%/%.2f%%/%.2f%%/%.2f%%/%.2f%% "
		          "(Broker/NearestFS/RandomS/DelayFS/DFNS; order %s/%s, DelayFS>=0.95Tnum %s); ",
		          tnum, snum(R::Broker), snum(R::NearestFS), snum(R::RandomS), snum(R::DelayFS), snum(R::DFNS),
		          100 * util(R::Broker), 100 * util(R::NearestFS), 100 * util(R::RandomS), 100 * util(R::DelayFS),
		          100 * util(R::DFNS), snum_order ? "ok" : "broken", util_order ? "ok" : "broken",
		          delay_full ? "ok" : "no");
	}
	const std::vector<std::pair<R, std::pair<double, double>>> anchors{
	        {R::Broker, {3.94, 0.6753}}, {R::NearestFS, {6.00, 0.4437}},
	        {R::RandomS, {7.36, 0.3554}}, {R::DelayFS, {9.92, 0.2627}}};
	int off = 0;
	for (const auto& [s, a] : anchors) {
		const auto& st = t.at({s, 10});
		off += !within(st.snum, a.first, kAnchorTolerance);
		off += !within(st.utility, a.second, kAnchorTolerance);
	}
	v.pass = v.pass && off == 0;
	ss << fmt("Tnum=10 anchors outside +-20%%: %d of 8", off);
	v.detail = ss.str();
	return v;
}

Verdict c4_delayfs_utility(const ScheduleTable& t)
{
	Verdict v;
	std::ostringstream ss;
	ss << "DelayFS mean Utility";
	for (int tnum : {10, 50, 100}) {
		const double u = t.at({RankingStrategy::DelayFS, tnum}).utility;
		v.pass = v.pass && u >= 0.22 && u <= 0.31;
		ss << fmt(" Tnum=%d %.2f%%", tnum, 100 * u);
	}
	ss << " (band [22%, 31%])";
	v.detail = ss.str();
	return v;
}

// ---------------------------------------------------------------------------
// Deployment experiments shared by C5 to C8

struct DeployStats {
	double tcost = 0, asnum = 0, alnum = 0;
	long runs = 0, infeasible = 0;
};

struct PlanAudit {
	long plans = 0, findings = 0, layout = 0, infeasible = 0;

	void check(const DeployPlan& plan, const std::vector<TaskSpec>& tasks)
	{
		++plans;
		findings += static_cast<long>(verify_schedule(plan.graph, tasks, plan.decisions).size());
		layout += static_cast<long>(structural_violations(plan.graph).size());
		infeasible += !plan.feasible;
	}
};

Instance deploy_instance(int tnum, int seed)
{
	InstanceConfig cfg;
	cfg.n_tasks = tnum;
	cfg.seed = static_cast<std::uint64_t>(seed);
	cfg.topology = Topology::Fixed;
	cfg.server_rule = ServerRule::CeilFifth;
	return generate_instance(cfg);
}

std::map<Planner, DeployStats> deploy_experiments(int tnum, int seeds, CostParams costs,
                                                  const std::vector<Planner>& planners, PlanAudit& audit)
{
	std::map<Planner, DeployStats> out;
	for (int seed = 0; seed < seeds; ++seed) {
		const auto inst = deploy_instance(tnum, seed);
		for (auto p : planners) {
			DeployConfig cfg;
			cfg.costs = costs;
			cfg.seed = static_cast<std::uint64_t>(seed);
			auto plan = deploy(inst.graph, inst.tasks, p, cfg);
			audit.check(plan, inst.tasks);
			auto& st = out[p];
			++st.runs;
			st.infeasible += !plan.feasible;
			st.tcost += plan.tcost;
			st.asnum += plan.asnum;
			st.alnum += plan.alnum;
		}
	}
	for (auto& [p, st] : out) {
		st.tcost /= static_cast<double>(st.runs);
		st.asnum /= static_cast<double>(st.runs);
		st.alnum /= static_cast<double>(st.runs);
	}
	return out;
}

const std::vector<Planner> kFour{Planner::Combined, Planner::NcostFS, Planner::ScostFS, Planner::ONetFS};

Verdict c5_cheap_links(PlanAudit& audit)
{
	Verdict v;
	std::ostringstream ss;
	for (int tnum : {10, 50}) {
		auto st = deploy_experiments(tnum, kSeeds, {100, 1}, kFour, audit);
		double best = st.at(Planner::Combined).tcost;
		for (auto p : kFour)
			best = std::min(best, st.at(p).tcost);
		const double comb = st.at(Planner::Combined).tcost;
		const bool not_worse = comb <= st.at(Planner::NcostFS).tcost;
		const bool near_best = comb <= 1.05 * best;
		const bool links = st.at(Planner::ScostFS).alnum >= 1.8 * st.at(Planner::NcostFS).alnum;
		long infeasible = 0;
		for (auto p : kFour)
			infeasible += st.at(p).infeasible;
		v.pass = v.pass && not_worse && near_best && links && infeasible == 0;
		ss << fmt("Tnum=%d Tcost %.2f/%.2f/%.2f/%.2f ALnum %.2f/%.2f/%.2f/%.2f "
		          "(Combined/NcostFS/ScostFS/ONetFS; Combined<=NcostFS %s, within 5%% of min %s, "
		          "ScostFS ALnum>=1.8xNcostFS %s, infeasible %ld)",
		          tnum, comb, st.at(Planner::NcostFS).tcost, st.at(Planner::ScostFS).tcost,
		          st.at(Planner::ONetFS).tcost, st.at(Planner::Combined).alnum, st.at(Planner::NcostFS).alnum,
		          st.at(Planner::ScostFS).alnum, st.at(Planner::ONetFS).alnum, not_worse ? "ok" : "no",
		          near_best ? "ok" : "no", links ? "ok" : "no", infeasible);
		if (tnum == 10) {
			const std::vector<std::pair<Planner, double>> anchors{{Planner::Combined, 210.94},
			                                                      {Planner::NcostFS, 293.92},
			                                                      {Planner::ScostFS, 214.14},
			                                                      {Planner::ONetFS, 214.96}};
			int off = 0;
			for (const auto& [p, a] : anchors)
				off += !within(st.at(p).tcost, a, kAnchorTolerance);
			v.pass = v.pass && off == 0;
			ss << fmt(", anchors outside +-20%%: %d of 4", off);
		}
		ss << "; ";
	}
	v.detail = ss.str();
	return v;
}

Verdict c6_dear_links(PlanAudit& audit)
{
	auto st = deploy_experiments(10, kSeeds, {100, 1000}, kFour, audit);
	const double comb = st.at(Planner::Combined).tcost, ncost = st.at(Planner::NcostFS).tcost;
	const double scost = st.at(Planner::ScostFS).tcost;
	const bool close = std::abs(comb - ncost) <= 0.02 * ncost;
	const bool dear = scost >= 5.0 * comb;
	return {close && dear,
	        fmt("Tnum=10 Tcost Combined %.2f NcostFS %.2f ScostFS %.2f ONetFS %.2f "
	            "(Combined within 2%% of NcostFS %s, ScostFS>=5xCombined %s)",
	            comb, ncost, scost, st.at(Planner::ONetFS).tcost, close ? "ok" : "no", dear ? "ok" : "no")};
}

Verdict c7_turning_point(PlanAudit& audit)
{
	std::vector<double> cls{2, 5, 7, 8, 10};
	for (double c = 20; c <= 200; c += 10)
		cls.push_back(c);
	std::vector<double> as, al, scost;
	for (double cl : cls) {
		auto st = deploy_experiments(50, kSweepSeeds, {100, cl}, {Planner::Combined, Planner::ScostFS}, audit);
		as.push_back(st.at(Planner::Combined).asnum);
		al.push_back(st.at(Planner::Combined).alnum);
		scost.push_back(st.at(Planner::ScostFS).tcost);
	}
	// Means on each side of c_l = 100.
	auto side_mean = [&](const std::vector<double>& xs, bool below) {
		double sum = 0;
		int n = 0;
		for (std::size_t i = 0; i < cls.size(); ++i)
			if (below ? cls[i] < 100 : cls[i] > 100)
				sum += xs[i], ++n;
		return sum / n;
	};
	bool as_mono = true, al_mono = true, sc_strict = true;
	for (std::size_t i = 1; i < cls.size(); ++i) {
		as_mono = as_mono && as[i] >= as[i - 1];
		al_mono = al_mono && al[i] <= al[i - 1];
		sc_strict = sc_strict && scost[i] > scost[i - 1];
	}
	std::ostringstream ss;
	ss << fmt("Tnum=50, %d seeds, %zu c_l values in [2, 200]; Combined ASnum %.2f -> %.2f, ALnum %.2f -> %.2f "
	          "(mean below vs above c_l=100: ASnum %.2f vs %.2f, ALnum %.2f vs %.2f); "
	          "ASnum non-decreasing %s, ALnum non-increasing %s, ScostFS Tcost strictly increasing %s (%.1f -> %.1f)",
	          kSweepSeeds, cls.size(), as.front(), as.back(), al.front(), al.back(), side_mean(as, true),
	          side_mean(as, false), side_mean(al, true), side_mean(al, false), as_mono ? "yes" : "no",
	          al_mono ? "yes" : "no", sc_strict ? "yes" : "no", scost.front(), scost.back());
	return {as_mono && al_mono && sc_strict, ss.str()};
}

Verdict c8_deployment_validity(const PlanAudit& audit)
{
	return {audit.plans > 0 && audit.findings == 0 && audit.layout == 0 && audit.infeasible == 0,
	        fmt("%ld plans from the C5-C7 runs: %ld schedule findings, %ld layout violations, %ld infeasible",
	            audit.plans, audit.findings, audit.layout, audit.infeasible)};
}

Verdict c9_runtime()
{
	InstanceConfig cfg;
	cfg.n_tasks = 200;
	cfg.seed = 0;
	auto inst = generate_instance(cfg);
	OperationalGraph g = inst.graph;
	const auto t0 = Clock::now();
	auto out = schedule_all(g, inst.tasks, TaskOrdering::Period, RankingStrategy::Broker, 0);
	const double secs = seconds_since(t0);
	const auto findings = verify_schedule(inst.graph, inst.tasks, out.decisions).size();
	return {secs < 60.0 && findings == 0 && out.failures.empty(),
	        fmt("Broker Tnum=200: %.2f s (limit 60 s), Snum %d, %zu unscheduled, %zu findings", secs,
	            out.metrics.snum, out.failures.size(), findings)};
}

} // namespace

int main()
{
	int failed = 0;
	auto report = [&](const char* id, const char* name, const Verdict& v) {
		std::printf("%s %s %s: %s\n", v.pass ? "PASS" : "FAIL", id, name, v.detail.c_str());
		std::fflush(stdout);
		failed += !v.pass;
	};

	report("C1", "oracle equivalence", c1_oracle_equivalence());

	double secs = 0;
	auto table = schedule_experiments({10, 50}, kStrategies, secs);
	report("C2", "schedule validity", c2_schedule_validity(table, secs));
	report("C3", "strategy ordering", c3_table_ordering(table));
	double more = 0;
	auto big = schedule_experiments({100}, {RankingStrategy::DelayFS}, more);
	table.insert(big.begin(), big.end());
	report("C4", "DelayFS utility", c4_delayfs_utility(table));

	PlanAudit audit;
	report("C5", "deployer cost at c_l=1", c5_cheap_links(audit));
	report("C6", "deployer cost at c_l=1000", c6_dear_links(audit));
	report("C7", "turning point", c7_turning_point(audit));
	report("C8", "deployment validity", c8_deployment_validity(audit));
	report("C9", "runtime", c9_runtime());

	std::printf("%d of 9 criteria failed\n", failed);
	return failed == 0 ? 0 : 1;
}
