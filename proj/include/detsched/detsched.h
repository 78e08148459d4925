/* C interface to the detsched library.
 *
 * All objects are opaque handles owned by the caller and released with the
 * matching *_free function. Functions return a detsched_status; on failure
 * detsched_last_error() describes the problem for the calling thread.
 * Strings returned through char** are released with detsched_string_free.
 */
#ifndef DETSCHED_H
#define DETSCHED_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define DETSCHED_API __declspec(dllexport)
#else
#define DETSCHED_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum detsched_status {
	DETSCHED_OK = 0,
	DETSCHED_ERR_ARGUMENT = 1, /* null pointer or unknown name */
	DETSCHED_ERR_INPUT = 2,    /* malformed or inconsistent document */
	DETSCHED_ERR_INTERNAL = 3
} detsched_status;

typedef struct detsched_instance detsched_instance;
typedef struct detsched_schedule detsched_schedule;
typedef struct detsched_plan detsched_plan;

typedef enum detsched_topology { DETSCHED_TOPOLOGY_RANDOM = 0, DETSCHED_TOPOLOGY_FIXED = 1 } detsched_topology;

typedef enum detsched_server_rule {
	DETSCHED_SERVERS_EQUAL_TASKS = 0, /* one server per task */
	DETSCHED_SERVERS_CEIL_FIFTH = 1   /* ceil(tasks / 5) servers */
} detsched_server_rule;

typedef struct detsched_instance_config {
	int n_tasks;
	int n_routers;
	int n_router_links; /* random topology only */
	detsched_topology topology;
	detsched_server_rule server_rule;
	int64_t bytes_per_slot;
	uint64_t seed;
} detsched_instance_config;

typedef struct detsched_metrics {
	int snum;
	double utility;
	int has_delay;
	double delay;
	double runtime_s;
	int asnum;
	int alnum;
	int has_tcost;
	double tcost;
	int failures;
} detsched_metrics;

DETSCHED_API const char* detsched_version(void);
DETSCHED_API const char* detsched_last_error(void);
DETSCHED_API void detsched_string_free(char* s);

/* Defaults: 10 tasks, 10 routers, 45 router links, random topology, one
 * server per task, 1e6 bytes per slot, seed 0. */
DETSCHED_API void detsched_instance_config_default(detsched_instance_config* cfg);

DETSCHED_API detsched_status detsched_instance_generate(const detsched_instance_config* cfg,
                                                        detsched_instance** out);
DETSCHED_API detsched_status detsched_instance_from_json(const char* json, detsched_instance** out);
DETSCHED_API detsched_status detsched_instance_to_json(const detsched_instance* inst, char** out);
DETSCHED_API detsched_status detsched_instance_task_count(const detsched_instance* inst, int* out);
DETSCHED_API void detsched_instance_free(detsched_instance* inst);

/* Greedy scheduling of all tasks on a fresh copy of the instance network.
 * strategy: Broker, DelayFS, NearestFS, DFNS, RandomS.
 * ordering: Period, Base, Random, CTimeA, CTimeB. */
DETSCHED_API detsched_status detsched_schedule_run(const detsched_instance* inst, const char* strategy,
                                                   const char* ordering, uint64_t seed,
                                                   detsched_schedule** out);
DETSCHED_API detsched_status detsched_schedule_metrics(const detsched_schedule* s, detsched_metrics* out);
DETSCHED_API detsched_status detsched_schedule_to_json(const detsched_schedule* s, char** out);
DETSCHED_API void detsched_schedule_free(detsched_schedule* s);

/* Network upgrade so that all tasks can be scheduled.
 * planner: Combined, NcostFS, ScostFS, ONetFS, LCFU, SCFU. */
DETSCHED_API detsched_status detsched_plan_run(const detsched_instance* inst, const char* planner,
                                               double c_s, double c_l, const char* ordering,
                                               uint64_t seed, detsched_plan** out);
DETSCHED_API detsched_status detsched_plan_feasible(const detsched_plan* p, int* out);
DETSCHED_API detsched_status detsched_plan_metrics(const detsched_plan* p, detsched_metrics* out);
DETSCHED_API detsched_status detsched_plan_to_json(const detsched_plan* p, char** out);
DETSCHED_API void detsched_plan_free(detsched_plan* p);

/* Checks a schedule or plan document against the instance. A plan is
 * checked on the upgraded network, including the layout rules. The report
 * is a JSON array of findings; *n_findings is its length. */
DETSCHED_API detsched_status detsched_verify(const detsched_instance* inst, const char* document,
                                             size_t* n_findings, char** report_json);

#ifdef __cplusplus
}
#endif

#endif
