// Copyright 2026 The QFI Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QFI_QFI_H
#define QFI_QFI_H

/*
 * C interface to the QFI core.
 *
 * Conventions:
 *  - Every fallible call returns a qfi_status; QFI_OK is zero. On failure a
 *    human-readable message is available from qfi_last_error() on the same
 *    thread until the next failing call.
 *  - Documents are returned as canonical JSON (sorted keys, no insignificant
 *    whitespace, UTF-8) in heap strings the caller releases with
 *    qfi_string_free().
 *  - Handles are opaque and owned by the caller; each has one destroy call.
 */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define QFI_API __declspec(dllexport)
#else
#define QFI_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum qfi_status {
    QFI_OK = 0,
    QFI_ERR_USAGE = 1,                /* bad arguments to the API itself */
    QFI_ERR_VALIDATION = 2,           /* input rejected by a domain rule */
    QFI_ERR_NOT_FOUND = 3,
    QFI_ERR_UNAVAILABLE = 4,
    QFI_ERR_CAPACITY = 5,
    QFI_ERR_INSUFFICIENT_ENTROPY = 6,
    QFI_ERR_KEY_EXHAUSTED = 7,
    QFI_ERR_VERIFICATION_FAILED = 8,
    QFI_ERR_CONFIG = 9,
    QFI_ERR_IO = 10,
    QFI_ERR_INTERNAL = 11
} qfi_status;

typedef struct qfi_context qfi_context; /* loaded config, device catalog and region table */
typedef struct qfi_server qfi_server;   /* gateway bound to a data directory */

/* Parameters shared by the offline pipeline calls. Zero means "configured
 * default" for n_qubits, shots and height. With has_seed set, every
 * identifier and timestamp in the output is derived from the inputs, so the
 * returned document is byte-identical across runs. */
typedef struct qfi_run_options {
    const char* device_id;
    uint32_t n_qubits;
    uint64_t shots;
    int has_seed;
    uint64_t seed;
    uint32_t height;
} qfi_run_options;

QFI_API const char* qfi_version(void);
QFI_API const char* qfi_status_name(qfi_status status);
QFI_API const char* qfi_last_error(void);
QFI_API void qfi_string_free(char* s);

/* Re-serialises a JSON document, indented when pretty != 0. */
QFI_API qfi_status qfi_document_format(const char* json_text, int pretty, char** out_json);

QFI_API qfi_status qfi_context_open(const char* config_path, qfi_context** out);
QFI_API void qfi_context_close(qfi_context* ctx);
QFI_API const char* qfi_context_data_dir(const qfi_context* ctx);

/* Catalog joined with impact estimates; region NULL selects the default. */
QFI_API qfi_status qfi_devices_list(qfi_context* ctx, const char* region, char** out_json);
/* H on every qubit (or the analog register for neutral-atom devices). */
QFI_API qfi_status qfi_execute(qfi_context* ctx, const qfi_run_options* opts, char** out_json);
/* Health report over the debiased bits of one execution. */
QFI_API qfi_status qfi_entropy_test(qfi_context* ctx, const qfi_run_options* opts, char** out_json);
/* Execute, extract, debias, condition, keygen and sign in one call. */
QFI_API qfi_status qfi_artifact_generate(qfi_context* ctx, const qfi_run_options* opts, char** out_json);
/* *out_valid is 1 iff the signature verifies; malformed documents fail with
 * QFI_ERR_VALIDATION. */
QFI_API qfi_status qfi_artifact_verify(const char* artifact_json, int* out_valid);
/* duration_s < 0 selects the device's emulated duration for default shots. */
QFI_API qfi_status qfi_impact_estimate(qfi_context* ctx, const char* device_id, double duration_s,
                                       const char* region, char** out_json);
QFI_API qfi_status qfi_vulnerability_index(char** out_json);
/* Fills *out_json in both outcomes; returns QFI_ERR_VERIFICATION_FAILED when
 * the chain is broken. */
QFI_API qfi_status qfi_ledger_verify(const char* data_dir, char** out_json);

/* data_dir NULL uses the context's configured directory. The context must
 * outlive the server. */
QFI_API qfi_status qfi_server_create(qfi_context* ctx, const char* data_dir, qfi_server** out);
/* addr NULL uses the configured address; port 0 picks a free port. */
QFI_API qfi_status qfi_server_bind(qfi_server* server, const char* addr, int* out_port);
/* Blocks until qfi_server_stop() is called from another thread. */
QFI_API qfi_status qfi_server_run(qfi_server* server);
QFI_API void qfi_server_stop(qfi_server* server);
QFI_API void qfi_server_destroy(qfi_server* server);

#ifdef __cplusplus
}
#endif

#endif /* QFI_QFI_H */
