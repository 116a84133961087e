/*
 * Copyright 2026 The ioracle Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef IORACLE_IORACLE_H
#define IORACLE_IORACLE_H

/*
 * C interface to libioracle. Objects are opaque handles created by *_load /
 * *_run / *_default functions and released with the matching *_free. Every
 * call that can fail returns an ior_status; on failure a message is kept per
 * thread and returned by ior_last_error(). Strings handed out through char**
 * are owned by the caller and released with ior_string_free().
 */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define IOR_API __declspec(dllexport)
#else
#define IOR_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ior_status
{
  IOR_OK                     = 0,
  IOR_ERR_INVALID_ARGUMENT   = 1,
  IOR_ERR_INVALID_ENCODING   = 2,
  IOR_ERR_DOMAIN             = 3,
  IOR_ERR_THRESHOLD          = 4,
  IOR_ERR_DUPLICATE_INDEX    = 5,
  IOR_ERR_NOT_PARTICIPANT    = 6,
  IOR_ERR_DUPLICATE_DEALER   = 7,
  IOR_ERR_SESSION_FAILED     = 8,
  IOR_ERR_SCENARIO           = 9,
  IOR_ERR_INFEASIBLE         = 10,
  IOR_ERR_UNKNOWN_MECHANISM  = 11,
  IOR_ERR_IO                 = 12,
  IOR_ERR_INTERNAL           = 13
} ior_status;

typedef enum ior_format
{
  IOR_FORMAT_JSON  = 0,
  IOR_FORMAT_TABLE = 1,
  IOR_FORMAT_CSV   = 2
} ior_format;

IOR_API const char *ior_version(void);
IOR_API const char *ior_status_name(ior_status status);
/* Message for the last failed call on this thread; "" if none. */
IOR_API const char *ior_last_error(void);
IOR_API void        ior_string_free(char *s);

/* ---- simulator ---------------------------------------------------------- */

typedef struct ior_scenario ior_scenario;
typedef struct ior_run      ior_run;

IOR_API ior_status ior_scenario_load(const char *path, ior_scenario **out);
IOR_API ior_status ior_scenario_parse(const char *yaml_text, const char *source_name, ior_scenario **out);
IOR_API ior_status ior_scenario_set_seed(ior_scenario *scenario, uint64_t seed);
IOR_API uint64_t   ior_scenario_seed(const ior_scenario *scenario);
IOR_API void       ior_scenario_free(ior_scenario *scenario);

IOR_API ior_status ior_sim_run(const ior_scenario *scenario, ior_run **out);
IOR_API ior_status ior_run_report(const ior_run *run, ior_format format, char **out);
/* Ledger, message and DKG transcripts as JSON lines. */
IOR_API ior_status ior_run_transcript(const ior_run *run, char **out);
IOR_API ior_status ior_run_fulfilled(const ior_run *run, uint64_t *fulfilled, uint64_t *requested);
IOR_API void       ior_run_free(ior_run *run);

/* ---- distributed key generation and threshold signing ------------------- */

typedef struct ior_dkg ior_dkg;

/* All n nodes honest, every message delivered. 1 <= t <= n <= 64. */
IOR_API ior_status ior_dkg_run(uint32_t n, uint32_t t, uint64_t seed, ior_dkg **out);
IOR_API uint32_t   ior_dkg_node_count(const ior_dkg *dkg);
IOR_API uint32_t   ior_dkg_threshold(const ior_dkg *dkg);
IOR_API ior_status ior_dkg_public_key(const ior_dkg *dkg, char **hex_out);
/* Share index of the node at position `pos` (0-based). */
IOR_API ior_status ior_dkg_share_index(const ior_dkg *dkg, uint32_t pos, uint64_t *index_out);
/* Signature shares from the listed positions are recovered into one
 * signature, which is then verified under the group key. */
IOR_API ior_status ior_dkg_threshold_sign(const ior_dkg *dkg, const uint8_t *msg, size_t len,
                                          const uint32_t *signers, size_t signer_count, char **signature_hex,
                                          int *verified);
/* Interpolates the group secret from the first t shares and compares
 * secret * G with the published key. */
IOR_API ior_status ior_dkg_check_secret(const ior_dkg *dkg, int *matches);
IOR_API ior_status ior_dkg_transcript(const ior_dkg *dkg, char **out);
IOR_API void       ior_dkg_free(ior_dkg *dkg);

/* ---- cost model --------------------------------------------------------- */

typedef struct ior_cost ior_cost;

IOR_API ior_status ior_cost_default(ior_cost **out);
IOR_API ior_status ior_cost_load(const char *path, ior_cost **out);
/* mechanism: "on-chain", "ecdsa", "bls", "relay". */
IOR_API ior_status ior_cost_gas(const ior_cost *cost, const char *mechanism, uint64_t n, int64_t *gas_out);
/* *never is set to 1 (and *n_out to 0) when a is never cheaper than b. */
IOR_API ior_status ior_cost_breakeven(const ior_cost *cost, const char *a, const char *b, uint64_t *n_out,
                                      int *never);
IOR_API ior_status ior_cost_table(const ior_cost *cost, uint64_t max_nodes, ior_format format, char **out);
IOR_API void       ior_cost_free(ior_cost *cost);

#ifdef __cplusplus
}
#endif

#endif /* IORACLE_IORACLE_H */
