// Copyright 2026 The WallForge Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef WALLFORGE_H
#define WALLFORGE_H

/* C interface to libwallforge.
 *
 * Every call returns a wf_status. On failure the message for the calling
 * thread is available from wf_last_error() until the next failing call.
 * Strings and buffers returned through out-parameters are owned by the
 * caller and released with wf_free(). JSON in and out is UTF-8 text. */

#include <stddef.h>

#if defined(WF_BUILDING_LIBRARY)
#define WF_API __attribute__((visibility("default")))
#else
#define WF_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Values match the library's error codes one to one. */
typedef enum wf_status {
  WF_OK = 0,
  WF_INVALID_ARGUMENT = 1,
  WF_IO_FAILURE = 2,
  WF_MALFORMED_DXF = 3,
  WF_UNSUPPORTED_VERSION = 4,
  WF_INVALID_LAYER_MAP = 5,
  WF_NO_OUTLINE = 6,
  WF_NON_ORTHOGONAL_WALL = 7,
  WF_PLAN_TOO_LARGE = 8,
  WF_NO_SHEAR_WALLS = 9,
  WF_INVALID_OVERRIDE = 10,
  WF_UNREACHABLE = 11,
  WF_MALFORMED_RESPONSE = 12,
  WF_API_ERROR = 13,
  WF_DECODE_FAILURE = 14,
  WF_GRID_TOO_LARGE = 15,
  WF_DEGENERATE_COMPONENT = 16,
  WF_INSUFFICIENT_LATERAL_SYSTEM = 17,
  WF_EIGEN_FAILURE = 18,
  WF_NON_POSITIVE_DEFINITE = 19,
  WF_UNSUPPORTED_FORMAT = 20,
  WF_DIMENSION_MISMATCH = 21,
  WF_DUPLICATE_NAME = 22,
  WF_DEPENDENCY_MISSING = 23,
  WF_OUT_OF_RANGE = 24,
  WF_UNKNOWN_LAYOUT = 25,
  WF_INVALID_GEOMETRY = 26,
  WF_BIND_FAILURE = 27,
  WF_NOT_FOUND = 28,
  WF_INJECTED_FAULT = 29,
  WF_INTERNAL = 100 /* unexpected exception; see wf_last_error() */
} wf_status;

WF_API const char* wf_version(void);
WF_API const char* wf_status_name(wf_status status);
WF_API const char* wf_last_error(void);
WF_API void wf_free(void* p);

/* ---- stateless ---------------------------------------------------------- */

/* DXF bytes + layer config text -> normalized plan JSON. */
WF_API wf_status wf_ingest(const char* dxf, size_t dxf_len, const char* layer_config, char** plan_json);
/* Semantic PNG -> layout graph JSON. The raster frame is the plan's frame on
 * the given canvas (pixels) and scale (mm per pixel). */
WF_API wf_status wf_vectorize_png(const char* png, size_t png_len, const char* plan_json, int canvas, int scale,
                                  const char* source, char** layout_json);
/* Layout graph + plan -> metric report JSON. */
WF_API wf_status wf_evaluate(const char* layout_json, const char* plan_json, char** report_json);
/* Metric report JSON -> fixed-width text table. */
WF_API wf_status wf_render_report(const char* report_json, char** text);
/* Pass/exceed flags for the three code-limited indicators, as JSON. */
WF_API wf_status wf_evaluate_limits(double drift_reciprocal, double r_torsion, double r_period, char** flags_json);

/* ---- projects ----------------------------------------------------------- */

typedef struct wf_project wf_project;

WF_API wf_status wf_project_create(const char* root, const char* name, const char* dxf_path,
                                   const char* layer_config_path, wf_project** out);
WF_API wf_status wf_project_open(const char* root, const char* name, wf_project** out);
WF_API void wf_project_close(wf_project* project);
/* JSON array of project names under root. */
WF_API wf_status wf_project_list(const char* root, char** names_json);

WF_API wf_status wf_project_state(wf_project* project, char** state_json);
/* kind: Ingest, Rasterize, BuildDataset, Generate, Vectorize, Evaluate,
 * Export. params_json may be NULL. */
WF_API wf_status wf_project_run_step(wf_project* project, const char* kind, const char* params_json,
                                     char** result_json);
WF_API wf_status wf_project_layout(wf_project* project, const char* layout_id, char** layout_json);
WF_API wf_status wf_project_report(wf_project* project, const char* layout_id, char** report_json);
/* Result: {"layout": id, "report": {...}}. */
WF_API wf_status wf_project_apply_edit(wf_project* project, const char* layout_id, const char* edit_json,
                                       char** result_json);
/* Result: {"layout", "by_critic", "mean"}. */
WF_API wf_status wf_project_record_score(wf_project* project, const char* layout_id, const char* critic,
                                         double score, char** result_json);
WF_API wf_status wf_project_set_preferred(wf_project* project, const char* set_id, int index);
/* parent_id may be NULL. */
WF_API wf_status wf_project_import_redblock(wf_project* project, const char* png, size_t png_len,
                                            const char* parent_id, char** layout_id);
/* format: s2k, json or png. */
WF_API wf_status wf_project_export(wf_project* project, const char* layout_id, const char* format, char** bytes,
                                   size_t* len);

/* ---- REST server -------------------------------------------------------- */

typedef struct wf_server wf_server;

/* port 0 picks a free port. */
WF_API wf_status wf_server_create(const char* root, const char* host, int port, wf_server** out);
/* Serves on a background thread. */
WF_API wf_status wf_server_start(wf_server* server);
/* Serves on the calling thread until wf_server_stop() is called elsewhere. */
WF_API wf_status wf_server_run(wf_server* server);
WF_API int wf_server_port(const wf_server* server);
WF_API void wf_server_stop(wf_server* server);
WF_API void wf_server_destroy(wf_server* server);

#ifdef __cplusplus
}
#endif

#endif
