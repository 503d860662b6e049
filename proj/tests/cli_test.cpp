#include "qorder/cli.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <sstream>

#include "test_support.hpp"

using namespace qorder;
using namespace qorder::cli;

namespace {

const std::string kData = QORDER_DATA_DIR;

std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("qorder_cli_test_" + name);
}

struct Run {
  int code;
  std::string out;
  std::string err;
};

template <class Options, class Cmd>
Run run(Cmd cmd, const Options& opt) {
  std::ostringstream out, err;
  const int code = cmd(opt, out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST(Check, comparator_exit_codes) {
  EXPECT_EQ(run(cmd_check, CheckOptions{kData + "/orthogonal_pair.json", "comparator"}).code, 0);
  const auto r = run(cmd_check, CheckOptions{kData + "/zero_plus.json", "comparator", std::nullopt, true});
  EXPECT_EQ(r.code, 1);
  const auto j = io::Json::parse(r.out);
  EXPECT_EQ(j["schema"], 1);
  EXPECT_EQ(j["report"]["verdict"], "Infeasible");
  EXPECT_EQ(j["report"]["violations"][0]["indices"], io::Json::array({1, 2}));
  EXPECT_NEAR(j["report"]["violations"][0]["residual"].get<double>(), 0.5, 1e-12);
}

TEST(Check, sorter_and_spec_modes) {
  const auto r = run(cmd_check, CheckOptions{kData + "/plus_zero_one.json", "sorter", std::nullopt, true});
  EXPECT_EQ(r.code, 1);
  EXPECT_EQ(io::Json::parse(r.out)["report"]["violations"][0]["indices"], io::Json::array({1, 2, 3}));
  EXPECT_EQ(run(cmd_check, CheckOptions{kData + "/zero_plus_one.json", "sorter"}).code, 2);
  EXPECT_EQ(run(cmd_check, CheckOptions{kData + "/qutrit_basis.json", "sorter"}).code, 0);
  EXPECT_EQ(run(cmd_check, CheckOptions{kData + "/cloning_spec.json", "spec"}).code, 1);
}

TEST(Check, usage_and_data_errors) {
  EXPECT_EQ(run(cmd_check, CheckOptions{kData + "/zero_plus.json", "teleport"}).code, 64);
  EXPECT_EQ(run(cmd_check, CheckOptions{kData + "/zero_plus.json", "comparator", -1.0}).code, 64);
  EXPECT_EQ(run(cmd_check, CheckOptions{kData + "/missing.json", "comparator"}).code, 65);
  // Two states cannot be checked as a sorter.
  EXPECT_EQ(run(cmd_check, CheckOptions{kData + "/zero_plus.json", "sorter"}).code, 65);

  const auto bad = temp_path("bad.json");
  {
    std::ofstream f(bad);
    f << "{\n  \"dim\": 2,\n  \"states\": [\n    {\"label\": \"x\", \"amplitudes\": [[1, 0]]}\n  ]\n}\n";
  }
  const auto r = run(cmd_check, CheckOptions{bad.string(), "comparator"});
  EXPECT_EQ(r.code, 65);
  EXPECT_NE(r.err.find(bad.string() + ":4:"), std::string::npos) << r.err;
}

TEST(Check, tolerance_resolution) {
  ::setenv(kToleranceEnv, "0.6", 1);
  EXPECT_EQ(resolve_tolerance(std::nullopt), 0.6);
  EXPECT_EQ(resolve_tolerance(1e-3), 1e-3);
  EXPECT_EQ(run(cmd_check, CheckOptions{kData + "/zero_plus.json", "comparator"}).code, 0);
  ::setenv(kToleranceEnv, "abc", 1);
  EXPECT_EQ(run(cmd_check, CheckOptions{kData + "/zero_plus.json", "comparator"}).code, 64);
  ::unsetenv(kToleranceEnv);
  EXPECT_EQ(resolve_tolerance(std::nullopt), 1e-9);
}

TEST(Synthesize, comparator_and_sorter_files) {
  const auto out = temp_path("cmp.json");
  EXPECT_EQ(run(cmd_synthesize, SynthesizeOptions{kData + "/orthogonal_pair.json", "comparator", {}, out.string()}).code, 0);
  const auto c = io::load_circuit(*cli::detail::read_file(out.string()), out.string());
  ASSERT_TRUE(c.comparator.has_value());
  EXPECT_EQ(c.comparator->unitary.dim(), 8u);

  const auto sorter = temp_path("sort.json");
  EXPECT_EQ(run(cmd_synthesize, SynthesizeOptions{kData + "/orthogonal_pair.json", "sorter", 3, sorter.string()}).code, 0);
  const auto s = io::load_circuit(*cli::detail::read_file(sorter.string()), sorter.string());
  ASSERT_TRUE(s.sorter.has_value());
  EXPECT_EQ(s.sorter->stages.size(), 3u);
}

TEST(Synthesize, errors) {
  const auto out = temp_path("err.json");
  const auto r = run(cmd_synthesize, SynthesizeOptions{kData + "/zero_plus.json", "comparator", {}, out.string()});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("qorder check"), std::string::npos);
  EXPECT_EQ(run(cmd_synthesize, SynthesizeOptions{kData + "/orthogonal_pair.json", "sorter", 9, out.string()}).code, 64);
  EXPECT_EQ(run(cmd_synthesize, SynthesizeOptions{kData + "/orthogonal_pair.json", "sorter", {}, out.string()}).code, 64);
  EXPECT_EQ(run(cmd_synthesize, SynthesizeOptions{kData + "/orthogonal_pair.json", "comparator", {}, ""}).code, 64);
}

TEST(Simulate, comparator_and_sorter) {
  const auto cmp = temp_path("sim_cmp.json");
  const auto sorter = temp_path("sim_sort.json");
  ASSERT_EQ(run(cmd_synthesize, SynthesizeOptions{kData + "/orthogonal_pair.json", "comparator", {}, cmp.string()}).code, 0);
  ASSERT_EQ(run(cmd_synthesize, SynthesizeOptions{kData + "/qutrit_basis.json", "sorter", 3, sorter.string()}).code, 0);

  auto r = run(cmd_simulate, SimulateOptions{cmp.string(), "1,2"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("flag: 1"), std::string::npos);
  r = run(cmd_simulate, SimulateOptions{cmp.string(), "2,1", true});
  EXPECT_EQ(io::Json::parse(r.out)["flag"], 0);

  r = run(cmd_simulate, SimulateOptions{sorter.string(), "3,2,1"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("output: 1,2,3"), std::string::npos) << r.out;
  r = run(cmd_simulate, SimulateOptions{sorter.string(), "2,2,1", true});
  EXPECT_EQ(io::Json::parse(r.out)["output"], io::Json::array({1, 2, 2}));

  EXPECT_EQ(run(cmd_simulate, SimulateOptions{sorter.string(), "3,x,1"}).code, 64);
  EXPECT_EQ(run(cmd_simulate, SimulateOptions{sorter.string(), "3,4,1"}).code, 64);
  EXPECT_EQ(run(cmd_simulate, SimulateOptions{sorter.string(), "3,1"}).code, 64);
  EXPECT_EQ(run(cmd_simulate, SimulateOptions{kData + "/zero_plus.json", "1,2"}).code, 65);
}

TEST(Simulate, decode_failure_exit_code) {
  // A stage unitary that is valid but not a compare-swap leaves registers
  // in superposition.
  const auto path = temp_path("broken.json");
  auto j = io::to_json(build_sorter(OrderedStateSet({qorder::testing::ket0(), qorder::testing::ket1()}), 2));
  const double h = qorder::testing::kInvSqrt2;
  ComplexMatrix m = ComplexMatrix::identity(8);
  m(0, 0) = h;
  m(0, 1) = h;
  m(1, 0) = h;
  m(1, 1) = -h;
  j["stages"][0]["unitary"] = io::to_json(UnitaryMatrix(m));
  {
    std::ofstream f(path);
    f << io::dump_circuit(j);
  }
  EXPECT_EQ(run(cmd_simulate, SimulateOptions{path.string(), "1,1"}).code, 3);
}

TEST(DemoNogo, default_and_loose_tolerance) {
  auto r = run(cmd_demo_nogo, DemoOptions{std::nullopt, true});
  EXPECT_EQ(r.code, 0);
  const auto j = io::Json::parse(r.out);
  ASSERT_EQ(j["certificates"].size(), 3u);
  for (const auto& c : j["certificates"]) EXPECT_EQ(c["report"]["verdict"], "Infeasible");
  EXPECT_EQ(run(cmd_demo_nogo, DemoOptions{0.6}).code, 4);
}
