#include <doctest.h>

#include <cstdio>
#include <cstring>
#include <fstream>
#include <string>

#include "dlpkit.h"

namespace {

std::string take_text(char* text) {
  REQUIRE(text != nullptr);
  std::string out(text);
  dlpk_text_free(text);
  return out;
}

}  // namespace

TEST_CASE("chains handle lifecycle and error reporting") {
  dlpk_chains* chains = nullptr;
  REQUIRE(dlpk_chains_build(3, &chains) == DLPK_OK);
  CHECK(dlpk_chains_count(chains) == 3);
  CHECK(dlpk_chains_length(chains, 0) == 2);
  CHECK(dlpk_chains_length(chains, 2) == 4);
  CHECK(dlpk_chains_length(chains, 9) == -1);
  char* text = nullptr;
  REQUIRE(dlpk_chains_text(chains, &text) == DLPK_OK);
  std::string s = take_text(text);
  CHECK(s.find(" < ") != std::string::npos);
  dlpk_chains_free(chains);

  dlpk_chains* bad = nullptr;
  CHECK(dlpk_chains_build(0, &bad) == DLPK_ERR_INVALID_ARGUMENT);
  CHECK(bad == nullptr);
  CHECK(std::strlen(dlpk_last_error()) > 0);
}

TEST_CASE("shannon bound through the C surface") {
  long long bound = 0;
  REQUIRE(dlpk_shannon_bound(4, &bound) == DLPK_OK);
  CHECK(bound == 10);
  CHECK(dlpk_shannon_bound(99, &bound) == DLPK_ERR_INVALID_ARGUMENT);
}

TEST_CASE("restore through an expression oracle writes a trace") {
  const char* trace_path = "capi_restore_trace.jsonl";
  dlpk_restore* result = nullptr;
  REQUIRE(dlpk_restore_run(3, "expr:x1 AND (x2 OR x3)", nullptr, nullptr, trace_path,
                           &result) == DLPK_OK);
  CHECK(dlpk_restore_queries(result) <= 6);
  CHECK(dlpk_restore_bound(result) == 6);
  char* summary = nullptr;
  REQUIRE(dlpk_restore_summary(result, &summary) == DLPK_OK);
  std::string s = take_text(summary);
  CHECK(s.find("queries=") != std::string::npos);
  CHECK(s.find("lower_units=(x1 AND x3) OR (x1 AND x2)") != std::string::npos);
  dlpk_restore_free(result);

  std::ifstream trace(trace_path);
  REQUIRE(trace.good());
  std::string line;
  CHECK(std::getline(trace, line));
  CHECK(line.find("\"vector\"") != std::string::npos);
  std::remove(trace_path);
}

TEST_CASE("restore through a scripted callback") {
  auto oracle = [](const char* bits, void*) -> int {
    return bits[0] == '1' ? 1 : 0;  // monotone: first component set
  };
  dlpk_restore* result = nullptr;
  REQUIRE(dlpk_restore_run(4, "callback", oracle, nullptr, nullptr, &result) == DLPK_OK);
  char* summary = nullptr;
  REQUIRE(dlpk_restore_summary(result, &summary) == DLPK_OK);
  CHECK(take_text(summary).find("lower_units=x1\n") != std::string::npos);
  dlpk_restore_free(result);
}

TEST_CASE("aborting callback yields DLPK_ERR_ABORTED and a partial trace") {
  const char* trace_path = "capi_abort_trace.jsonl";
  struct State {
    int calls = 0;
  } state;
  auto oracle = [](const char*, void* user) -> int {
    State* s = static_cast<State*>(user);
    return ++s->calls >= 3 ? -1 : 0;
  };
  dlpk_restore* result = nullptr;
  CHECK(dlpk_restore_run(4, "callback", oracle, &state, trace_path, &result) ==
        DLPK_ERR_ABORTED);
  std::ifstream trace(trace_path);
  REQUIRE(trace.good());
  int lines = 0;
  std::string line;
  while (std::getline(trace, line)) ++lines;
  CHECK(lines >= 2);
  std::remove(trace_path);
}

TEST_CASE("bad oracle spec is rejected") {
  dlpk_restore* result = nullptr;
  CHECK(dlpk_restore_run(3, "sorcery:abc", nullptr, nullptr, nullptr, &result) ==
        DLPK_ERR_INVALID_ARGUMENT);
  CHECK(dlpk_restore_run(3, "expr:x9", nullptr, nullptr, nullptr, &result) == DLPK_ERR_PARSE);
}

TEST_CASE("models order report") {
  char* text = nullptr;
  REQUIRE(dlpk_models_order("x,y", "5x + by^2 = 0", "ax + cx^2 + by^2 = 0", &text) == DLPK_OK);
  std::string s = take_text(text);
  CHECK(s.find("NUC=1") != std::string::npos);
  CHECK(s.find("NUC=3") != std::string::npos);
  CHECK(s.find("order_mu(A,B): less") != std::string::npos);
  CHECK(s.find("order_mg(A,B): less") != std::string::npos);
  CHECK(s.find("order_ms(A,B): greater") != std::string::npos);
  CHECK(dlpk_models_order("x,y", "5x + + = 0", "x = 0", &text) == DLPK_ERR_PARSE);
}

TEST_CASE("scene generation, detection and scaling through the C surface") {
  const char* cloud_path = "capi_cloud.jsonl";
  char* summary = nullptr;
  REQUIRE(dlpk_scene_gen(64, 600, "circle:20,24,9", 3.0, 5, cloud_path, &summary) == DLPK_OK);
  CHECK(take_text(summary).find("wrote 600 points") != std::string::npos);

  dlpk_config cfg;
  dlpk_config_init(&cfg);
  char* report = nullptr;
  REQUIRE(dlpk_shapes_detect("brute", "circle", 64, cloud_path, &cfg, nullptr, &report) ==
          DLPK_OK);
  std::string brute = take_text(report);
  CHECK(brute.find("membership_tests=157286400") != std::string::npos);  // 64^3 * 600
  CHECK(brute.find("circle cx=20 cy=24 r=9") != std::string::npos);

  const char* trace_path = "capi_dlp_trace.jsonl";
  REQUIRE(dlpk_shapes_detect("dlp", "circle", 64, cloud_path, &cfg, trace_path, &report) ==
          DLPK_OK);
  std::string dlp = take_text(report);
  CHECK(dlp.find("detections: 1") != std::string::npos);

  char* viz_doc = nullptr;
  REQUIRE(dlpk_viz_render(trace_path, "text", "chronological", -1, &viz_doc) == DLPK_OK);
  CHECK(take_text(viz_doc).find("columns") != std::string::npos);
  REQUIRE(dlpk_viz_render(trace_path, "svg", "pareto", -1, &viz_doc) == DLPK_OK);
  CHECK(take_text(viz_doc).find("<svg") != std::string::npos);
  CHECK(dlpk_viz_render(trace_path, "png", "pareto", -1, &viz_doc) ==
        DLPK_ERR_INVALID_ARGUMENT);
  std::remove(trace_path);
  std::remove(cloud_path);

  char* scaling = nullptr;
  REQUIRE(dlpk_shapes_scaling("circle", "10:1,16:2", 0, 0, &scaling) == DLPK_OK);
  std::string table = take_text(scaling);
  CHECK(table.find("1000") != std::string::npos);
  CHECK(table.find("8192") != std::string::npos);  // 16^3 * 2
  CHECK(dlpk_shapes_scaling("lens", "100:10", 0, 0, &scaling) == DLPK_ERR_INVALID_ARGUMENT);
}

TEST_CASE("interval demo through the C surface") {
  dlpk_config cfg;
  dlpk_config_init(&cfg);
  cfg.seed = 3;
  char* report = nullptr;
  REQUIRE(dlpk_interval_demo(0.0, 4.0, 2000, 3.0, 0.1, &cfg, nullptr, &report) == DLPK_OK);
  std::string s = take_text(report);
  CHECK(s.find("estimate: c=2") != std::string::npos);
  CHECK(s.find("10.000") != std::string::npos);
  CHECK(s.find("7.000") != std::string::npos);
}

TEST_CASE("reasoner queries through the C surface") {
  const char* kb_path = "capi_kb.txt";
  {
    std::ofstream kb(kb_path);
    kb << "w(m1, e, m2)\nw(m2, e, m3)\n";
  }
  char* report = nullptr;
  REQUIRE(dlpk_reason(kb_path, "w(m1, e, m3)", 1, nullptr, &report) == DLPK_OK);
  std::string s = take_text(report);
  CHECK(s.find("TA") != std::string::npos);
  CHECK(s.find("derivable in 1 step") != std::string::npos);

  CHECK(dlpk_reason(kb_path, "w(m3, e, m1)", 1, nullptr, &report) == DLPK_ERR_NOT_FOUND);
  CHECK(take_text(report).find("not derivable") != std::string::npos);

  CHECK(dlpk_reason(kb_path, "w(m1, e, m3)", 1, "da,ia", &report) == DLPK_ERR_NOT_FOUND);
  dlpk_text_free(report);
  CHECK(dlpk_reason("missing_kb_file.txt", "w(a, e, b)", 1, nullptr, &report) == DLPK_ERR_IO);
  std::remove(kb_path);
}
