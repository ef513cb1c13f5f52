/* Copyright (c) 2026 The skillstack Authors
 * Use of this source code is governed by the Apache-2.0 license, see LICENSE */
#ifndef SKILLSTACK_SKILLSTACK_H_
#define SKILLSTACK_SKILLSTACK_H_

#include <stddef.h>
#include <stdint.h>

#if defined(SKST_BUILDING_LIBRARY)
#define SKST_API __attribute__((visibility("default")))
#else
#define SKST_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum skst_status {
  SKST_OK = 0,
  SKST_ERR_INVALID_ARGUMENT = 1,
  SKST_ERR_CONFIG = 2,
  SKST_ERR_IO = 3,
  SKST_ERR_NET = 4,
  SKST_ERR_BAD_MAGIC = 5,
  SKST_ERR_FORMAT = 6,
  SKST_ERR_NOT_STARTED = 7,
  SKST_ERR_UNKNOWN_ROBOT = 8,
  SKST_ERR_SERVER = 9,
  SKST_ERR_REQUIRES_REAL_CLOCK = 10,
  SKST_ERR_INTERNAL = 11
} skst_status;

/* Message describing the last failure on the calling thread. Never NULL. */
SKST_API const char* skst_last_error(void);
SKST_API const char* skst_version(void);

/* ---- configuration ---- */

/* Validates a server config (with its arm files) or a standalone arm file.
 * On success writes a one-line summary into `summary` (may be NULL). */
SKST_API skst_status skst_validate_config(const char* path, char* summary, size_t summary_len);

/* ---- server ---- */

typedef struct skst_server skst_server;

/* `config_path` may be NULL to use SKILLSTACK_CONFIG. `clock` is NULL, "real"
 * or "sim"; `port` < 0 keeps the configured port. */
SKST_API skst_status skst_server_create(const char* config_path, const char* clock, int port, skst_server** out);
SKST_API skst_status skst_server_start(skst_server* server);
SKST_API int skst_server_port(const skst_server* server);
/* Graceful: preempts skills, delivers final status, writes logs. */
SKST_API skst_status skst_server_stop(skst_server* server);
SKST_API void skst_server_destroy(skst_server* server);

/* ---- loop benchmark ---- */

typedef struct skst_bench_report {
  uint64_t ticks;
  double mean_us;
  double median_us;
  double p99_us;
  double max_us;
  uint64_t missed;
} skst_bench_report;

/* `config_path` (server config, may be NULL for the default arm) selects the
 * arm of its first robot; a sim clock is rejected with
 * SKST_ERR_REQUIRES_REAL_CLOCK. `load` is "hold" or "impedance". */
SKST_API skst_status skst_bench_loop(const char* config_path, const char* clock, double duration_s, const char* load,
                                     skst_bench_report* out);
/* Writes the report text (including the BENCH line) into `buf`. */
SKST_API size_t skst_bench_format(const skst_bench_report* report, char* buf, size_t len);

/* ---- logs ---- */

typedef struct skst_log skst_log;

typedef struct skst_record {
  uint64_t tick;
  uint64_t wall_ns;
  double q[7];
  double dq[7];
  double tau_commanded[7];
  double tau_external[7];
  double position[3];
  double quaternion_wxyz[4];
  double wrench[6];
  double gripper_width;
  uint8_t gripper_moving;
  uint32_t skill_id;
  uint8_t phase;
} skst_record;

/* SKST_ERR_BAD_MAGIC for non-log files. A file cut mid-record opens fine;
 * check skst_log_trailing_bytes. */
SKST_API skst_status skst_log_open(const char* path, skst_log** out);
SKST_API uint64_t skst_log_record_count(const skst_log* log);
SKST_API uint16_t skst_log_robot_id(const skst_log* log);
SKST_API uint64_t skst_log_trailing_bytes(const skst_log* log);
SKST_API skst_status skst_log_record(const skst_log* log, uint64_t index, skst_record* out);
SKST_API void skst_log_close(skst_log* log);

/* ---- client ---- */

typedef struct skst_client skst_client;

SKST_API skst_status skst_client_connect(const char* host, uint16_t port, skst_client** out);
/* wrench = fx, fy, fz, tx, ty, tz. SKST_ERR_UNKNOWN_ROBOT or SKST_ERR_SERVER on
 * an Error reply. */
SKST_API skst_status skst_client_inject_wrench(skst_client* client, uint16_t robot_id, const double wrench[6],
                                               double duration_s);
SKST_API void skst_client_close(skst_client* client);

#ifdef __cplusplus
}
#endif

#endif /* SKILLSTACK_SKILLSTACK_H_ */
