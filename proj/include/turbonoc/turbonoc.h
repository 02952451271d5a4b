/* SPDX-License-Identifier: Apache-2.0 */
#ifndef TURBONOC_TURBONOC_H
#define TURBONOC_TURBONOC_H

#include <stddef.h>

#if defined(TNOC_BUILDING_LIBRARY)
#define TNOC_API __attribute__((visibility("default")))
#else
#define TNOC_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum tnoc_status {
  TNOC_OK = 0,
  TNOC_E_INVALID_ARGUMENT = 1,
  TNOC_E_INVALID_TOPOLOGY = 2,
  TNOC_E_PARSE = 3,
  TNOC_E_NOT_A_PERMUTATION = 4,
  TNOC_E_LIVELOCK = 5,
  TNOC_E_PRECONDITION = 6,
  TNOC_E_MODEL_INCONSISTENCY = 7,
  TNOC_E_CONFIG = 8,
  TNOC_E_IO = 9,
  TNOC_E_INTERNAL = 10
} tnoc_status;

typedef struct tnoc_config tnoc_config;
typedef struct tnoc_report tnoc_report;
typedef struct tnoc_topology tnoc_topology;

/* Message of the last failed call on this thread; "" if none. */
TNOC_API const char* tnoc_last_error(void);
TNOC_API const char* tnoc_status_string(tnoc_status status);
TNOC_API const char* tnoc_version(void);
/* Frees strings returned through `char**` out parameters. */
TNOC_API void tnoc_free(char* text);

/* Configuration: a key/value set validated on every change. */
TNOC_API tnoc_status tnoc_config_create(tnoc_config** out);
TNOC_API void tnoc_config_destroy(tnoc_config* cfg);
/* Merges a config file; keys in the file override earlier values. */
TNOC_API tnoc_status tnoc_config_load(tnoc_config* cfg, const char* path);
TNOC_API tnoc_status tnoc_config_set(tnoc_config* cfg, const char* key, const char* value);
/* *out is NULL when the key was never set. */
TNOC_API tnoc_status tnoc_config_get(const tnoc_config* cfg, const char* key, char** out);
/* Fully resolved `key = value` lines, defaults included. */
TNOC_API tnoc_status tnoc_config_echo(const tnoc_config* cfg, char** out);

/* Single experiment. */
TNOC_API tnoc_status tnoc_run(const tnoc_config* cfg, tnoc_report** out);
TNOC_API void tnoc_report_destroy(tnoc_report* report);
TNOC_API tnoc_status tnoc_report_json(const tnoc_report* report, char** out);
TNOC_API tnoc_status tnoc_report_csv(const tnoc_report* report, int with_header, char** out);
TNOC_API tnoc_status tnoc_report_cycles(const tnoc_report* report, long long* interleave, long long* deinterleave);
TNOC_API tnoc_status tnoc_report_throughput(const tnoc_report* report, double* bps, double* ideal_bps);
/* Writes the artifacts enabled by the emit_* keys into `dir`. */
TNOC_API tnoc_status tnoc_report_emit_artifacts(const tnoc_report* report, const char* dir, size_t* files_written);

/* Grid sweep over the list keys of `cfg`. `skipped` lists skipped points, one per line. */
TNOC_API tnoc_status tnoc_sweep(const tnoc_config* cfg, char** csv, char** skipped, int* failures);

/* Topologies. kind: ring, mesh, honeycomb, debruijn, kautz. For mesh and honeycomb
   node_count may be 0 (taken as rows*cols); otherwise it must equal rows*cols. */
TNOC_API tnoc_status tnoc_topology_build(const char* kind, int node_count, int degree, int rows, int cols,
                                         tnoc_topology** out);
TNOC_API tnoc_status tnoc_topology_load(const char* path, tnoc_topology** out);
TNOC_API void tnoc_topology_destroy(tnoc_topology* topo);
TNOC_API tnoc_status tnoc_topology_write(const tnoc_topology* topo, const char* path);
/* diameter is -1 when the graph is not strongly connected. */
TNOC_API tnoc_status tnoc_topology_info(const tnoc_topology* topo, int* node_count, int* degree, int* diameter);
TNOC_API tnoc_status tnoc_topology_validate(const tnoc_topology* topo, char** text);
/* Either path may be NULL. */
TNOC_API tnoc_status tnoc_topology_write_tables(const tnoc_topology* topo, const char* ssp_csv, const char* asp_csv);

/* ceil(iterations * cycles_per_bit * target_bps / f_clk_hz). Numbers are decimal or a/b strings. */
TNOC_API tnoc_status tnoc_min_parallelism(const char* target_bps, int iterations, const char* cycles_per_bit,
                                          const char* f_clk_hz, long long* out);

#ifdef __cplusplus
}
#endif

#endif
