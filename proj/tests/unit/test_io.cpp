#include <gtest/gtest.h>

#include <sstream>

#include "pweight/errors.hpp"
#include "pweight/io.hpp"

using namespace pweight;
using nlohmann::json;

TEST(Io, FormatNumber) {
  EXPECT_EQ(io::format_number(0.5), "0.5");
  EXPECT_EQ(io::format_number(1.0 / 3.0), "0.333333333333");
  EXPECT_EQ(io::format_number(-2e-20), "-2e-20");
}

TEST(Io, CurveCsvRoundTripsThroughDatasetReader) {
  CdfMapCurve c{{{0.1, 0.2}, {0.1 + 1e-15, 0.2}, {0.5, 0.45}, {0.9, 0.8}}, "a", "b"};
  std::stringstream ss;
  io::write_curve_csv(ss, c);
  EXPECT_EQ(ss.str(), "fp,fw\n0.1,0.2\n0.5,0.45\n0.9,0.8\n");
  const auto d = io::read_dataset_csv(ss, "curve");
  ASSERT_EQ(d.points.size(), 3u);
  EXPECT_EQ(d.points[1].fw, 0.45);
  EXPECT_EQ(d.label, "curve");
}

TEST(Io, DatasetReaderToleratesCrlfAndBlankLines) {
  std::istringstream is("fp,fw\r\n0.1,0.2\r\n\r\n 0.5 , 0.4\r\n");
  const auto d = io::read_dataset_csv(is, "x");
  ASSERT_EQ(d.points.size(), 2u);
  EXPECT_EQ(d.points[1].fp, 0.5);
}

TEST(Io, DatasetReaderNamesOffendingLine) {
  auto message = [](const std::string& text) {
    std::istringstream is(text);
    try {
      io::read_dataset_csv(is, "x");
    } catch (const InputError& e) {
      return std::string(e.what());
    }
    return std::string("no error");
  };
  EXPECT_NE(message("fp,fw\n0.1,0.2\n0.3,abc\n").find("line 3"), std::string::npos);
  EXPECT_NE(message("fp,fw\n0.1,0.2,0.3\n").find("line 2"), std::string::npos);
  EXPECT_NE(message("x,y\n0.1,0.2\n").find("line 1"), std::string::npos);
  EXPECT_NE(message("fp,fw\n0.1,1.5\n").find("line 2"), std::string::npos);
  EXPECT_NE(message("").find("line 1"), std::string::npos);
  EXPECT_THROW(io::read_dataset_file("/nonexistent/file.csv"), InputError);
}

TEST(Io, ParseSpec) {
  EXPECT_EQ(io::parse_spec("gaussian:0,2"), DistributionSpec::gaussian(0, 2));
  EXPECT_EQ(io::parse_spec("t:0.2,1,3"), DistributionSpec::student_t(0.2, 1, 3));
  EXPECT_EQ(io::format_spec(DistributionSpec::student_t(0.35, 1, 1)), "t:0.35,1,1");
  EXPECT_EQ(io::parse_spec(io::format_spec(DistributionSpec::gaussian(-1.5, 0.25))),
            DistributionSpec::gaussian(-1.5, 0.25));
  for (const char* bad : {"gaussian:0", "t:0,1", "gaussian:0,-1", "t:0,1,0", "cauchy:0,1", "0,1",
                          "gaussian:a,1"}) {
    EXPECT_ANY_THROW(io::parse_spec(bad)) << bad;
  }
  try {
    io::parse_spec("gaussian:0,-1");
    FAIL();
  } catch (const DomainError& e) {
    EXPECT_NE(std::string(e.what()).find("scale"), std::string::npos);
  }
}

TEST(Io, ParseModel) {
  const auto m = io::parse_model("lattimore:0.67,0.58");
  EXPECT_EQ(m.kind(), ModelKind::Lattimore);
  EXPECT_EQ(m.param(1), 0.58);
  EXPECT_EQ(io::parse_model("tk:0.65").param(0), 0.65);
  EXPECT_THROW(io::parse_model("tk"), DomainError);
  EXPECT_THROW(io::parse_model("tk:0.5,0.5"), DomainError);
  EXPECT_THROW(io::parse_model("gauss:0,0"), DomainError);
  EXPECT_THROW(io::parse_model("prelec:0.5"), DomainError);
}

TEST(Io, FitResultJson) {
  FitResult r{WeightingModel::gaussian_map(0.38, 1.6), std::vector<double>{0.06, 0.1}, 1e-3, 1.0, 7,
              true, {}, {}};
  const auto j = io::to_json(r);
  EXPECT_EQ(j["model"], "gauss");
  EXPECT_EQ(j["params"]["mu"], 0.38);
  EXPECT_EQ(j["std_errors"]["sigma"], 0.1);
  EXPECT_EQ(j["iterations"], 7);
  EXPECT_FALSE(j.contains("diagnostic"));
  r.std_errors.reset();
  r.diagnostic = "rank deficient";
  const auto k = io::to_json(r);
  EXPECT_TRUE(k["std_errors"].is_null());
  EXPECT_EQ(k["diagnostic"], "rank deficient");
}

TEST(Io, ConfigsRoundTripThroughJson) {
  SimConfig s;
  s.spec = DistributionSpec::student_t(0, 1, 1.5);
  s.lo = -10;
  s.hi = 10;
  s.seed = 4;
  const auto back = io::sim_config_from_json(io::to_json(s), SimConfig{});
  EXPECT_EQ(back.spec, s.spec);
  EXPECT_EQ(back.lo, -10);
  EXPECT_EQ(back.seed, 4u);

  GbmConfig g;
  g.volatility = 0.0;
  EXPECT_EQ(io::gbm_config_from_json(io::to_json(g), GbmConfig{}).volatility, 0.0);

  LmOptions o;
  o.max_iterations = 17;
  EXPECT_EQ(io::lm_options_from_json(io::to_json(o), LmOptions{}).max_iterations, 17);

  EXPECT_THROW(io::sim_config_from_json(json{{"bogus", 1}}, SimConfig{}), InputError);
  EXPECT_THROW(io::gbm_config_from_json(json{{"steps", "many"}}, GbmConfig{}), InputError);
  EXPECT_THROW(io::sim_config_from_json(json{{"range", {1}}}, SimConfig{}), InputError);
  const auto spec_obj = io::sim_config_from_json(
      json{{"spec", {{"family", "t"}, {"location", 0}, {"scale", 1}, {"shape", 3}}}}, SimConfig{});
  EXPECT_EQ(spec_obj.spec, DistributionSpec::student_t(0, 1, 3));
}

TEST(Io, ConfigHashIsDeterministic) {
  const json a = {{"x", 1}, {"y", "z"}};
  const json b = {{"y", "z"}, {"x", 1}};
  EXPECT_EQ(io::config_hash(a), io::config_hash(b));
  EXPECT_NE(io::config_hash(a), io::config_hash(json{{"x", 2}, {"y", "z"}}));
  const auto h = io::config_hash(a);
  EXPECT_EQ(h.rfind("fnv1a64:", 0), 0u);
  EXPECT_EQ(h.size(), 8u + 16u);
  // Independent FNV-1a 64 digest of the compact text {"x":1}.
  EXPECT_EQ(io::config_hash(json{{"x", 1}}), "fnv1a64:bdd3d53c3a0b3fd6");
}

TEST(Io, ManifestJson) {
  io::RunManifest m;
  m.command = "fit";
  m.config_hash = "fnv1a64:0000000000000000";
  m.seed = 3;
  m.output_files = {"a.csv"};
  const auto j = io::to_json(m);
  EXPECT_EQ(j["command"], "fit");
  EXPECT_EQ(j["seed"], 3);
  EXPECT_EQ(j["tool_version"], std::string(io::kToolVersion));
  EXPECT_EQ(j["output_files"][0], "a.csv");
}
