// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "turbonoc/turbonoc.h"

namespace fs = std::filesystem;

namespace {

std::string take(char* p) {
  std::string s = p ? p : "";
  tnoc_free(p);
  return s;
}

}  // namespace

TEST(CApi, RunProducesReport) {
  tnoc_config* cfg = nullptr;
  ASSERT_EQ(tnoc_config_create(&cfg), TNOC_OK);
  ASSERT_EQ(tnoc_config_set(cfg, "topology", "kautz"), TNOC_OK);
  ASSERT_EQ(tnoc_config_set(cfg, "P", "16"), TNOC_OK);
  ASSERT_EQ(tnoc_config_set(cfg, "degree", "4"), TNOC_OK);
  tnoc_report* rep = nullptr;
  ASSERT_EQ(tnoc_run(cfg, &rep), TNOC_OK) << tnoc_last_error();
  long long ci = 0, cd = 0;
  EXPECT_EQ(tnoc_report_cycles(rep, &ci, &cd), TNOC_OK);
  EXPECT_GE(ci, 150);
  double bps = 0, ideal = 0;
  EXPECT_EQ(tnoc_report_throughput(rep, &bps, &ideal), TNOC_OK);
  EXPECT_GT(bps, 0);
  EXPECT_LE(bps, ideal);
  char* json = nullptr;
  EXPECT_EQ(tnoc_report_json(rep, &json), TNOC_OK);
  EXPECT_NE(take(json).find("\"throughput_bps\""), std::string::npos);
  char* csv = nullptr;
  EXPECT_EQ(tnoc_report_csv(rep, 1, &csv), TNOC_OK);
  EXPECT_EQ(take(csv).rfind("topology,P,D,R,", 0), 0u);
  tnoc_report_destroy(rep);
  tnoc_config_destroy(cfg);
}

TEST(CApi, ConfigErrorsAreReported) {
  tnoc_config* cfg = nullptr;
  ASSERT_EQ(tnoc_config_create(&cfg), TNOC_OK);
  EXPECT_EQ(tnoc_config_set(cfg, "routing", "warp"), TNOC_E_CONFIG);
  EXPECT_NE(std::string(tnoc_last_error()).find("routing"), std::string::npos);
  EXPECT_EQ(tnoc_config_set(cfg, "P", "7"), TNOC_OK);
  tnoc_report* rep = nullptr;
  EXPECT_EQ(tnoc_run(cfg, &rep), TNOC_E_CONFIG);
  EXPECT_EQ(rep, nullptr);
  EXPECT_NE(std::string(tnoc_last_error()).find("P must divide N"), std::string::npos);
  char* v = nullptr;
  EXPECT_EQ(tnoc_config_get(cfg, "P", &v), TNOC_OK);
  EXPECT_EQ(take(v), "7");
  EXPECT_EQ(tnoc_config_get(cfg, "tau", &v), TNOC_OK);
  EXPECT_EQ(v, nullptr);
  tnoc_config_destroy(cfg);
  EXPECT_EQ(tnoc_config_create(nullptr), TNOC_E_INVALID_ARGUMENT);
}

TEST(CApi, LoadAndEcho) {
  const fs::path file = fs::temp_directory_path() / "turbonoc_capi.cfg";
  {
    std::ofstream out(file);
    out << "[topology]\ntopology = ring\nP = 8\n[timing]\ntau = 2\n";
  }
  tnoc_config* cfg = nullptr;
  ASSERT_EQ(tnoc_config_create(&cfg), TNOC_OK);
  ASSERT_EQ(tnoc_config_load(cfg, file.c_str()), TNOC_OK);
  char* echo = nullptr;
  ASSERT_EQ(tnoc_config_echo(cfg, &echo), TNOC_OK);
  const std::string text = take(echo);
  EXPECT_NE(text.find("theta = 2\n"), std::string::npos);
  EXPECT_NE(text.find("delta = 78\n"), std::string::npos);
  EXPECT_EQ(tnoc_config_load(cfg, "/nonexistent.cfg"), TNOC_E_IO);
  tnoc_config_destroy(cfg);
}

TEST(CApi, Topology) {
  tnoc_topology* t = nullptr;
  ASSERT_EQ(tnoc_topology_build("mesh", 16, 0, 4, 4, &t), TNOC_OK);
  int p = 0, d = 0, diam = 0;
  EXPECT_EQ(tnoc_topology_info(t, &p, &d, &diam), TNOC_OK);
  EXPECT_EQ(p, 16);
  EXPECT_EQ(d, 4);
  EXPECT_EQ(diam, 4);
  char* text = nullptr;
  EXPECT_EQ(tnoc_topology_validate(t, &text), TNOC_OK);
  EXPECT_NE(take(text).find("strongly_connected: yes"), std::string::npos);
  const fs::path out = fs::temp_directory_path() / "turbonoc_capi_topo.txt";
  EXPECT_EQ(tnoc_topology_write(t, out.c_str()), TNOC_OK);
  tnoc_topology* back = nullptr;
  EXPECT_EQ(tnoc_topology_load(out.c_str(), &back), TNOC_OK);
  tnoc_topology_destroy(back);
  tnoc_topology_destroy(t);
  EXPECT_EQ(tnoc_topology_build("ring", 2, 2, 0, 0, &t), TNOC_E_INVALID_ARGUMENT);
  EXPECT_EQ(tnoc_topology_build("hypercube", 8, 2, 0, 0, &t), TNOC_E_CONFIG);
}

TEST(CApi, MinParallelism) {
  long long p = 0;
  ASSERT_EQ(tnoc_min_parallelism("200000000", 5, "6.5", "335000000", &p), TNOC_OK);
  EXPECT_EQ(p, 20);
  EXPECT_EQ(tnoc_min_parallelism("x", 5, "6.5", "335000000", &p), TNOC_E_PARSE);
}

TEST(CApi, Sweep) {
  tnoc_config* cfg = nullptr;
  ASSERT_EQ(tnoc_config_create(&cfg), TNOC_OK);
  ASSERT_EQ(tnoc_config_set(cfg, "topologies", "ring,honeycomb"), TNOC_OK);
  ASSERT_EQ(tnoc_config_set(cfg, "P_list", "8,16"), TNOC_OK);
  ASSERT_EQ(tnoc_config_set(cfg, "tau_list", "1"), TNOC_OK);
  ASSERT_EQ(tnoc_config_set(cfg, "routings", "ssp_rr"), TNOC_OK);
  char* csv = nullptr;
  char* skipped = nullptr;
  int failures = -1;
  ASSERT_EQ(tnoc_sweep(cfg, &csv, &skipped, &failures), TNOC_OK);
  const std::string table = take(csv);
  EXPECT_EQ(std::count(table.begin(), table.end(), '\n'), 5);
  EXPECT_EQ(take(skipped), "");
  EXPECT_EQ(failures, 0);
  tnoc_config_destroy(cfg);
}

TEST(CApi, StatusStrings) {
  EXPECT_STREQ(tnoc_status_string(TNOC_OK), "ok");
  EXPECT_STREQ(tnoc_status_string(TNOC_E_LIVELOCK), "livelock");
  EXPECT_NE(std::string(tnoc_version()), "");
}
