#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "json.hpp"

#include "esl/cli.hpp"
#include "esl/errors.hpp"

using namespace esl;
using namespace esl::cli;
using json = nlohmann::json;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
  int status;
  std::string out;
  std::string err;
};

Outcome invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "esl");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int status = main_entry(static_cast<int>(argv.size()), argv.data(), out, err);
  return {status, out.str(), err.str()};
}

// The error stream carries exactly one JSON line.
json error_record(const Outcome& o) {
  EXPECT_EQ(std::count(o.err.begin(), o.err.end(), '\n'), 1) << o.err;
  return json::parse(o.err);
}

std::string strip_timestamp(const std::string& text) {
  std::istringstream in(text);
  std::string line, kept;
  while (std::getline(in, line)) {
    if (line.rfind("# generated_at:", 0) == 0) continue;
    kept += line + '\n';
  }
  return kept;
}

}  // namespace

TEST(cli, figure_presets) {
  const RunConfig f1 = figure_preset(1);
  EXPECT_EQ(f1.command, Command::photon_dist);
  ASSERT_EQ(f1.points.size(), 3u);
  for (const auto& p : f1.points) EXPECT_EQ(p.mag(), 4.0);
  EXPECT_NEAR(f1.points[1].phase_difference(), kPi / 4.0, 1e-15);

  const RunConfig f3 = figure_preset(3);
  EXPECT_EQ(f3.series_labels.size(), 6u);
  bool has_fifth = false;
  for (const auto& p : f3.points) has_fifth = has_fifth || std::abs(p.phase_difference() - kPi / 5.0) < 1e-15;
  EXPECT_TRUE(has_fifth);

  const RunConfig f4 = figure_preset(4);
  EXPECT_EQ(f4.command, Command::quadrature);
  EXPECT_EQ(f4.series_labels.size(), 12u);

  for (int id : {5, 6}) {
    const RunConfig f = figure_preset(id);
    ASSERT_TRUE(f.grid.has_value());
    EXPECT_EQ(f.grid->nx, 201);
    for (const auto& p : f.points) {
      EXPECT_EQ(p.alpha(), cplx(1.0, 0.0));  // beta real, = 1
    }
  }
  EXPECT_THROW(figure_preset(7), InvalidArgument);
  EXPECT_THROW(figure_preset(0), InvalidArgument);
}

TEST(cli, figure_one_csv_layout) {
  const Outcome o = invoke({"figure", "1"});
  ASSERT_EQ(o.status, 0) << o.err;
  EXPECT_NE(o.out.find("# figure: 1"), std::string::npos);
  EXPECT_NE(o.out.find("# gnuplot:"), std::string::npos);
  EXPECT_NE(o.out.find("n,P(dtheta=0pi),P(dtheta=0.25pi),P(dtheta=0.5pi)\n"), std::string::npos);
  EXPECT_EQ(invoke({"figure", "7"}).status, kExitConfig);
}

TEST(cli, wigner_minimum_on_default_grid) {
  const Outcome o = invoke({"wigner", "--beta", "1", "--dtheta", "0", "--format", "json"});
  ASSERT_EQ(o.status, 0) << o.err;
  const json j = json::parse(o.out);
  EXPECT_EQ(j["meta"]["grid"]["nx"], 201);
  const double min = j["data"][0]["label"]["min"].get<double>();
  EXPECT_NEAR(min, -2.0 / kPi, 1e-8);
  EXPECT_EQ(j["data"][0]["rows"].size(), 201u * 201u);
}

TEST(cli, numeric_grid_matches_closed_grid) {
  const std::vector<std::string> base{"husimi", "--mag", "1", "--dtheta", "0.3", "--grid",
                                      "-1,3,-2,2,9,9", "--format", "json"};
  auto numeric_args = base;
  numeric_args.push_back("--numeric");
  const json a = json::parse(invoke(base).out);
  const json b = json::parse(invoke(numeric_args).out);
  const auto& ra = a["data"][0]["rows"];
  const auto& rb = b["data"][0]["rows"];
  ASSERT_EQ(ra.size(), 81u);
  for (std::size_t k = 0; k < ra.size(); ++k) {
    EXPECT_NEAR(ra[k][2].get<double>(), rb[k][2].get<double>(), 1e-8);
  }
}

TEST(cli, angles_in_units_of_pi_or_radians) {
  const json a = json::parse(invoke({"stats", "--mag", "1", "--dtheta", "0.5", "--format", "json"}).out);
  const json b = json::parse(
      invoke({"stats", "--mag", "1", "--dtheta", std::to_string(kPi / 2.0), "--radians", "--format", "json"}).out);
  EXPECT_NEAR(a["data"][0]["rows"][0][3].get<double>(), kPi / 2.0, 1e-15);
  EXPECT_NEAR(b["data"][0]["rows"][0][3].get<double>(), kPi / 2.0, 1e-6);
  // emptiness at dtheta = pi/2, |alpha| = 1
  EXPECT_NEAR(a["data"][0]["rows"][0][9].get<double>(), 1.0, 1e-12);
}

TEST(cli, quadrature_requires_both_angles) {
  const Outcome o = invoke({"quadrature", "--mag", "1", "--dtheta", "0.5"});
  EXPECT_EQ(o.status, kExitConfig);
  EXPECT_EQ(error_record(o)["error"], "invalid-argument");

  const Outcome ok = invoke({"quadrature", "--mag", "1.7320508075688772", "--dtheta", "0.5",
                             "--source-phase", "0.5", "--format", "json"});
  ASSERT_EQ(ok.status, 0) << ok.err;
  const json row = json::parse(ok.out)["data"][0]["rows"][0];
  EXPECT_NEAR(row[6].get<double>(), 3.0 / 16.0, 1e-10);
  EXPECT_NEAR(row[7].get<double>(), 3.0 / 8.0, 1e-10);
  EXPECT_EQ(row[8].get<double>(), 1.0);

  const Outcome clash = invoke({"quadrature", "--mag", "1", "--theta", "0.1", "--dtheta", "0.5",
                                "--source-phase", "0.5"});
  EXPECT_EQ(clash.status, kExitConfig);
}

TEST(cli, exit_codes) {
  EXPECT_EQ(invoke({"stats", "--mag", "1", "--dtheta", "0"}).status, kExitOk);
  EXPECT_EQ(invoke({"--help"}).status, kExitOk);

  for (const std::vector<std::string>& args :
       {std::vector<std::string>{},
        {"bogus"},
        {"stats", "--dtheta", "0"},
        {"stats", "--mag", "1"},
        {"stats", "--mag", "-1", "--dtheta", "0"},
        {"husimi", "--mag", "1", "--dtheta", "0", "--grid", "1,0,0,1,5,5"},
        {"husimi", "--mag", "1", "--dtheta", "0", "--grid", "0,1,0,1,5000,5000"},
        {"husimi", "--mag", "1", "--dtheta", "0", "--grid", "0,1,0,1,x,5"},
        {"stats", "--mag", "0", "--dtheta", "0.5", "--format", "xml"},
        {"phase-dist", "--mag", "1", "--dtheta", "0", "--resolution", "8"},
        {"empty-fock", "--n", "1", "--m", "1"},
        {"figure", "9"}}) {
    const Outcome o = invoke(args);
    EXPECT_EQ(o.status, kExitConfig) << (args.empty() ? "" : args[0]);
    EXPECT_EQ(error_record(o)["exit"], kExitConfig);
  }

  const Outcome overflow = invoke({"photon-dist", "--mag", "6", "--dtheta", "0", "--trunc", "20"});
  EXPECT_EQ(overflow.status, kExitTruncation);
  const json rec = error_record(overflow);
  EXPECT_EQ(rec["error"], "truncation-overflow");
  EXPECT_GE(rec["required_n"].get<int>(), 21);

  // No admissible inner tolerance: every outer level fails the condition test.
  const Outcome diverge = invoke({"empty-fock", "--n", "0", "--m", "1", "--limit-tol", "1e-30"});
  EXPECT_EQ(diverge.status, kExitDivergence);
  EXPECT_EQ(error_record(diverge)["error"], "limit-divergence");

  const Outcome rejected = invoke({"build-empty", "--family", "norm-varying", "--mag", "1",
                                   "--source-phase", "0", "--format", "json"});
  EXPECT_EQ(rejected.status, kExitCondition);
  EXPECT_EQ(error_record(rejected)["error"], "condition-not-met");
  const json report = json::parse(rejected.out);
  EXPECT_FALSE(report["meta"]["builder"]["condition_met"].get<bool>());
  EXPECT_TRUE(report["data"].empty());
}

TEST(cli, build_empty_reports_fidelity) {
  for (const std::vector<std::string>& args :
       {std::vector<std::string>{"build-empty", "--mag", "1.5", "--theta", "0.1", "--source-phase", "0.6"},
        {"build-empty", "--family", "r-state", "--n", "0", "--m", "2", "--R", "1.5", "--R-im", "-0.5",
         "--source-phase", "0.3"}}) {
    auto a = args;
    a.insert(a.end(), {"--format", "json"});
    const Outcome o = invoke(a);
    ASSERT_EQ(o.status, 0) << o.err;
    const json j = json::parse(o.out);
    EXPECT_TRUE(j["meta"]["builder"]["condition_met"].get<bool>());
    EXPECT_GE(j["meta"]["builder"]["fidelity_with_closed_form"].get<double>(), 1.0 - 1e-8);
  }
}

TEST(cli, empty_fock_gives_phased_fock_state) {
  const Outcome o = invoke({"empty-fock", "--n", "2", "--m", "5", "--source-phase", "0.5", "--format", "json"});
  ASSERT_EQ(o.status, 0) << o.err;
  const json rows = json::parse(o.out)["data"][0]["rows"];
  EXPECT_NEAR(rows[5][1].get<double>(), 0.0, 1e-6);
  EXPECT_NEAR(rows[5][2].get<double>(), 1.0, 1e-6);
}

TEST(cli, json_round_trip_is_bit_exact) {
  RunConfig c;
  c.command = Command::stats;
  for (double dth : {0.0, 0.1, 1.0, kPi / 3.0}) c.points.push_back(ECParams::from_phase_difference(1.7, 0.2, dth));
  const Dataset d = compute(c);
  std::ostringstream text;
  write_json(d, text);
  const json parsed = json::parse(text.str());
  const auto& rows = parsed["data"][0]["rows"];
  ASSERT_EQ(rows.size(), d.blocks[0].rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t k = 0; k < rows[r].size(); ++k) {
      const double expected = std::get<double>(d.blocks[0].rows[r][k]);
      if (std::isinf(expected)) {
        EXPECT_EQ(rows[r][k], "inf");
      } else {
        EXPECT_EQ(rows[r][k].get<double>(), expected) << r << "," << k;
      }
    }
  }
}

TEST(cli, csv_round_trip_is_bit_exact) {
  const Dataset d = compute(figure_preset(1));
  std::ostringstream text;
  write_csv(d, text);
  std::istringstream in(text.str());
  std::string line;
  std::size_t r = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      header_seen = true;
      continue;
    }
    std::istringstream cells(line);
    std::string cell;
    for (std::size_t k = 0; std::getline(cells, cell, ','); ++k) {
      EXPECT_EQ(std::strtod(cell.c_str(), nullptr), std::get<double>(d.blocks[0].rows[r][k]));
    }
    ++r;
  }
  EXPECT_EQ(r, d.blocks[0].rows.size());
}

TEST(cli, output_is_deterministic) {
  for (const std::vector<std::string>& args :
       {std::vector<std::string>{"figure", "2"},
        {"wigner", "--beta", "1", "--dtheta", "0.25", "--grid", "-2,4,-3,3,41,41"},
        {"phase-dist", "--mag", "2", "--dtheta", "0,0.5"},
        {"build-empty", "--mag", "1", "--source-phase", "0.25"}}) {
    const Outcome a = invoke(args);
    const Outcome b = invoke(args);
    ASSERT_EQ(a.status, 0) << a.err;
    EXPECT_EQ(strip_timestamp(a.out), strip_timestamp(b.out)) << args[0];
    EXPECT_NE(a.out.find("# generated_at:"), std::string::npos);
  }
}

TEST(cli, grid_blocks_are_gnuplot_separated) {
  const Outcome o = invoke({"figure", "5", "--out", "-"});
  ASSERT_EQ(o.status, 0);
  // Three blocks, two double-blank separators, scan lines split by single blanks.
  std::size_t blocks = 0;
  for (std::size_t pos = 0; (pos = o.out.find("# block ", pos)) != std::string::npos; ++pos) ++blocks;
  EXPECT_EQ(blocks, 3u);
  EXPECT_NE(o.out.find("\n\n\n# block 1:"), std::string::npos);
}

TEST(cli, writes_output_file) {
  const auto path = std::filesystem::temp_directory_path() / "esl_cli_test_output.json";
  std::filesystem::remove(path);
  const Outcome o = invoke({"stats", "--mag", "2", "--dtheta", "0", "--format", "json", "--out", path.string()});
  ASSERT_EQ(o.status, 0) << o.err;
  EXPECT_TRUE(o.out.empty());
  std::ifstream in(path);
  const json j = json::parse(in);
  EXPECT_EQ(j["meta"]["command"], "stats");
  EXPECT_EQ(j["data"][0]["rows"][0][9], "inf");
  std::filesystem::remove(path);

  const Outcome bad = invoke({"stats", "--mag", "2", "--dtheta", "0", "--out", "/nonexistent-dir/x.csv"});
  EXPECT_EQ(bad.status, kExitConfig);
  EXPECT_EQ(error_record(bad)["error"], "io");
}

TEST(cli, truncation_override_from_environment) {
  ::setenv("ESL_DEFAULT_TRUNC", "50", 1);
  const Outcome env = invoke({"photon-dist", "--mag", "1", "--dtheta", "0", "--format", "json"});
  const Outcome flag = invoke({"photon-dist", "--mag", "1", "--dtheta", "0", "--trunc", "45", "--format", "json"});
  ::setenv("ESL_DEFAULT_TRUNC", "zero", 1);
  const Outcome bad = invoke({"photon-dist", "--mag", "1", "--dtheta", "0"});
  ::unsetenv("ESL_DEFAULT_TRUNC");
  EXPECT_EQ(json::parse(env.out)["meta"]["truncation"], 50);
  EXPECT_EQ(json::parse(flag.out)["meta"]["truncation"], 45);
  EXPECT_EQ(bad.status, kExitConfig);
  const Outcome dflt = invoke({"photon-dist", "--mag", "1", "--dtheta", "0", "--format", "json"});
  EXPECT_EQ(json::parse(dflt.out)["meta"]["truncation"], default_truncation(1.0));
}

TEST(cli, metadata_block) {
  const json j = json::parse(invoke({"phase-dist", "--mag", "4", "--dtheta", "0,0.5", "--format", "json"}).out);
  const json& meta = j["meta"];
  for (const char* key : {"tool", "version", "command", "quantity", "parameters", "tolerances",
                          "truncation", "generated_at"}) {
    EXPECT_TRUE(meta.contains(key)) << key;
  }
  EXPECT_EQ(meta["peak_counts"], json::array({2, 1}));
  EXPECT_EQ(j["data"][0]["rows"].size(), static_cast<std::size_t>(kDefaultPhaseResolution));
}

TEST(cli, validate_command_passes) {
  const Outcome o = invoke({"validate", "--format", "json"});
  EXPECT_EQ(o.status, 0) << o.err;
  const json rows = json::parse(o.out)["data"][0]["rows"];
  EXPECT_EQ(rows.size(), 12u);
  for (const auto& row : rows) EXPECT_EQ(row[2], "true") << row[1];
}
