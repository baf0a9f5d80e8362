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

/* Exercises libwallforge through its C header only. */

#include <stdio.h>
#include <stdlib.h>
#include <string.h>
#include <unistd.h>

#include "wallforge/wallforge.h"

static int failures = 0;

#define EXPECT(cond)                                              \
  do {                                                            \
    if (!(cond)) {                                                \
      fprintf(stderr, "%s:%d: FAILED: %s\n", __FILE__, __LINE__, #cond); \
      ++failures;                                                 \
    }                                                             \
  } while (0)

static char* slurp(const char* path, size_t* len) {
  FILE* f = fopen(path, "rb");
  if (!f) return NULL;
  fseek(f, 0, SEEK_END);
  long n = ftell(f);
  fseek(f, 0, SEEK_SET);
  char* buf = malloc((size_t)n + 1);
  if (fread(buf, 1, (size_t)n, f) != (size_t)n) n = 0;
  buf[n] = '\0';
  fclose(f);
  if (len) *len = (size_t)n;
  return buf;
}

int main(void) {
  char dxf_path[512], cfg_path[512];
  snprintf(dxf_path, sizeof dxf_path, "%s/plan_full.dxf", WF_FIXTURES);
  snprintf(cfg_path, sizeof cfg_path, "%s/layers.cfg", WF_FIXTURES);

  EXPECT(strcmp(wf_status_name(WF_OK), "Ok") == 0);
  EXPECT(strcmp(wf_status_name(WF_OUT_OF_RANGE), "OutOfRange") == 0);
  EXPECT(strcmp(wf_status_name(WF_INJECTED_FAULT), "InjectedFault") == 0);
  EXPECT(strcmp(wf_status_name((wf_status)77), "Unknown") == 0);

  /* stateless */
  size_t dxf_len = 0;
  char* dxf = slurp(dxf_path, &dxf_len);
  char* cfg = slurp(cfg_path, NULL);
  EXPECT(dxf && cfg);
  char* plan = NULL;
  EXPECT(wf_ingest(dxf, dxf_len, cfg, &plan) == WF_OK);
  EXPECT(plan && strstr(plan, "\"shear_walls\"") != NULL);
  char* junk = NULL;
  EXPECT(wf_ingest("0\nSECTION\n", 10, cfg, &junk) == WF_MALFORMED_DXF);
  EXPECT(junk == NULL);
  EXPECT(strlen(wf_last_error()) > 0);
  EXPECT(wf_ingest(NULL, 0, cfg, &junk) == WF_INVALID_ARGUMENT);

  char* flags = NULL;
  EXPECT(wf_evaluate_limits(3494, 1.3, 1.0, &flags) == WF_OK);
  EXPECT(strcmp(flags, "{\"drift\":\"Pass\",\"period\":\"Exceed\",\"torsion\":\"Pass\"}") == 0);
  wf_free(flags);
  EXPECT(wf_evaluate_limits(3034, 1.5, 0.6, &flags) == WF_OK);
  EXPECT(strcmp(flags, "{\"drift\":\"Pass\",\"period\":\"Pass\",\"torsion\":\"Exceed\"}") == 0);
  wf_free(flags);

  const char* layout =
      "{\"limbs\":[{\"start\":[0,0],\"end\":[3000,0],\"thickness\":200,\"component\":0},"
      "{\"start\":[0,0],\"end\":[0,3000],\"thickness\":200,\"component\":0}],"
      "\"junctions\":[],\"columns\":[],\"source\":\"c\",\"scale_mm_per_px\":100}";
  char* report = NULL;
  EXPECT(wf_evaluate(layout, plan, &report) == WF_OK);
  EXPECT(report && strstr(report, "\"l_wall\"") != NULL);
  char* table = NULL;
  EXPECT(wf_render_report(report, &table) == WF_OK);
  EXPECT(table && strlen(table) > 0);
  wf_free(table);
  wf_free(report);
  EXPECT(wf_evaluate("{not json", plan, &report) == WF_INVALID_ARGUMENT);

  /* projects */
  char root[] = "/tmp/wf-capi-XXXXXX";
  EXPECT(mkdtemp(root) != NULL);
  char* names = NULL;
  EXPECT(wf_project_list(root, &names) == WF_OK);
  EXPECT(strcmp(names, "[]") == 0);
  wf_free(names);

  wf_project* p = NULL;
  EXPECT(wf_project_create(root, "tower", dxf_path, cfg_path, &p) == WF_OK);
  wf_project* dup = NULL;
  EXPECT(wf_project_create(root, "tower", dxf_path, cfg_path, &dup) == WF_DUPLICATE_NAME);
  EXPECT(dup == NULL);
  char* result = NULL;
  EXPECT(wf_project_run_step(p, "Vectorize", NULL, &result) == WF_DEPENDENCY_MISSING);
  EXPECT(wf_project_run_step(p, "Rasterize", "{}", &result) == WF_OK);
  EXPECT(result && strstr(result, "condition-r2.png") != NULL);
  wf_free(result);
  EXPECT(wf_project_run_step(p, "Fly", NULL, &result) == WF_INVALID_ARGUMENT);

  /* Import the ground-truth walls as a layout, edit and score it. */
  char* png = NULL;
  size_t png_len = 0;
  char* state = NULL;
  EXPECT(wf_project_state(p, &state) == WF_OK);
  EXPECT(strstr(state, "\"revision\":2") != NULL);
  wf_free(state);
  {
    char target[1024];
    snprintf(target, sizeof target, "%s/tower/rasters/target-r2.png", root);
    png = slurp(target, &png_len);
  }
  EXPECT(png != NULL);
  char* id = NULL;
  EXPECT(wf_project_import_redblock(p, png, png_len, NULL, &id) == WF_OK);
  EXPECT(id && strcmp(id, "L0001") == 0);
  EXPECT(wf_project_report(p, "L0001", &report) == WF_OK);
  wf_free(report);
  EXPECT(wf_project_apply_edit(p, "L0001", "{\"type\":\"RemoveLimb\",\"limb\":0}", &result) == WF_OK);
  EXPECT(strstr(result, "\"layout\":\"L0002\"") != NULL);
  wf_free(result);
  EXPECT(wf_project_apply_edit(p, "L0001", "{\"type\":\"RemoveLimb\",\"limb\":99}", &result) ==
         WF_INVALID_GEOMETRY);
  EXPECT(wf_project_record_score(p, "L0002", "a", 11.0, &result) == WF_OUT_OF_RANGE);
  EXPECT(wf_project_record_score(p, "L0002", "a", 7.0, &result) == WF_OK);
  wf_free(result);
  EXPECT(wf_project_record_score(p, "L0002", "b", 8.0, &result) == WF_OK);
  wf_free(result);
  EXPECT(wf_project_record_score(p, "L0002", "c", 5.0, &result) == WF_OK);
  EXPECT(strstr(result, "\"mean\":6.67") != NULL);
  wf_free(result);
  EXPECT(wf_project_record_score(p, "L0404", "c", 5.0, &result) == WF_UNKNOWN_LAYOUT);

  char* bytes = NULL;
  size_t len = 0;
  EXPECT(wf_project_export(p, "L0002", "s2k", &bytes, &len) == WF_OK);
  EXPECT(len > 0 && strncmp(bytes, "File ", 5) == 0);
  wf_free(bytes);
  EXPECT(wf_project_export(p, "L0002", "png", &bytes, &len) == WF_OK);
  EXPECT(len > 8 && memcmp(bytes, "\x89PNG", 4) == 0);
  char* graph = NULL;
  EXPECT(wf_vectorize_png(bytes, len, plan, 512, 100, "x", &graph) == WF_OK);
  EXPECT(wf_vectorize_png(bytes, len, plan, 256, 100, "x", &graph) == WF_DIMENSION_MISMATCH);
  wf_free(bytes);
  wf_free(graph);
  EXPECT(wf_project_export(p, "L0002", "dwg", &bytes, &len) == WF_UNSUPPORTED_FORMAT);
  wf_project_close(p);

  wf_project* again = NULL;
  EXPECT(wf_project_open(root, "tower", &again) == WF_OK);
  EXPECT(wf_project_layout(again, "L0002", &graph) == WF_OK);
  wf_free(graph);
  wf_project_close(again);
  EXPECT(wf_project_open(root, "missing", &again) == WF_NOT_FOUND);

  /* server */
  wf_server* s = NULL;
  EXPECT(wf_server_create(root, "127.0.0.1", 0, &s) == WF_OK);
  EXPECT(wf_server_start(s) == WF_OK);
  EXPECT(wf_server_port(s) > 0);
  wf_server* clash = NULL;
  EXPECT(wf_server_create(root, "127.0.0.1", wf_server_port(s), &clash) == WF_OK);
  EXPECT(wf_server_start(clash) == WF_BIND_FAILURE);
  wf_server_destroy(clash);
  wf_server_stop(s);
  wf_server_destroy(s);

  char cmd[600];
  snprintf(cmd, sizeof cmd, "rm -rf '%s'", root);
  if (system(cmd) != 0) ++failures;
  wf_free(plan);
  free(dxf);
  free(cfg);
  free(png);
  if (failures) fprintf(stderr, "%d failure(s)\n", failures);
  else printf("test_capi: all checks passed\n");
  return failures ? 1 : 0;
}
