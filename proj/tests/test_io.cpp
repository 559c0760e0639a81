#include <gtest/gtest.h>

#include <algorithm>
#include <cstdlib>

#include "ldg/io.hpp"

using namespace ldg;

TEST(Io, FormatDoubleRoundTrips) {
  for (double x : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, 0.0}) EXPECT_EQ(std::strtod(format_double(x).c_str(), nullptr), x);
  EXPECT_EQ(format_double(0.5), "0.5");
}

TEST(Io, JsonNumbersUseSeventeenDigits) {
  Json j = Json::object();
  j["a"] = 0.1;
  j["b"] = 3;
  j["c"] = "x";
  j["d"] = Json::array({1.5, true});
  EXPECT_EQ(dump_json(j), "{\n  \"a\": 0.10000000000000001,\n  \"b\": 3,\n  \"c\": \"x\",\n  \"d\": [\n    1.5,\n    true\n  ]\n}\n");
}

TEST(Io, ConfigParsing) {
  const RunConfig c = RunConfig::parse("# comment\n t = 100\nR=50   # radius\n\nout_dir = out\n");
  EXPECT_EQ(c.real("t"), 100.0);
  EXPECT_EQ(c.real("R"), 50.0);
  EXPECT_EQ(c.text("out_dir"), "out");
  EXPECT_NO_THROW(c.validate());
  const ReducedParams rp = c.reduced_params();
  EXPECT_EQ(rp.t, 100.0);
  EXPECT_EQ(rp.R_t, 50.0);
}

TEST(Io, ConfigErrors) {
  EXPECT_THROW(RunConfig::parse("t 100"), ConfigError);
  EXPECT_THROW(RunConfig::parse("bogus = 1"), ConfigError);
  EXPECT_THROW(RunConfig::parse("t = abc\nR = 1").validate(), ConfigError);
  EXPECT_THROW(RunConfig::parse("t = inf\nR = 1").validate(), ConfigError);
  EXPECT_THROW(RunConfig::parse("R = 10").validate(), ConfigError);
  EXPECT_THROW(RunConfig::parse("").validate(), ConfigError);
  EXPECT_THROW(RunConfig::parse("t = 1\nR = 1\na2 = 1").validate(), ConfigError);
  EXPECT_THROW(RunConfig::parse("a2 = 1\nb2 = 1\nc2 = 1\nL = 1").validate(), ConfigError);
  EXPECT_THROW(RunConfig::parse("t = 100\nR = 10\ngrid_n = 3.5").integer("grid_n"), ConfigError);
}

TEST(Io, MaterialBlockAndOverrides) {
  RunConfig c = RunConfig::parse("a2 = 1\nb2 = 1\nc2 = 1\nL = 1\nR0 = 10\n");
  const ReducedParams rp = c.reduced_params();
  EXPECT_NEAR(rp.t, 27.0, 1e-14);
  EXPECT_NEAR(rp.R_t, 10.0, 1e-14);
  c.apply_override("R0=20");
  EXPECT_NEAR(c.reduced_params().R_t, 20.0, 1e-14);
  EXPECT_THROW(c.apply_override("R0"), ConfigError);
  const RunConfig d = c.with_defaults({{"grid_n", "65"}, {"R0", "1"}});
  EXPECT_EQ(d.integer("grid_n"), 65);
  EXPECT_EQ(d.real("R0"), 20.0);
  EXPECT_EQ(d.to_json()["grid_n"], 65.0);
}

TEST(Io, ProfileCsv) {
  const RadialProfile p = solve_profile(100.0, 20.0, 300);
  const std::string csv = profile_csv(p);
  EXPECT_EQ(csv.rfind("r,h,dh,residual\n", 0), 0u);
  EXPECT_EQ(static_cast<std::size_t>(std::count(csv.begin(), csv.end(), '\n')), p.size() + 1);
}

TEST(Io, FieldRoundTrip) {
  const RadialProfile p = solve_profile(1e4, 10.0, 400);
  const BallField f = sample_perturbed_hedgehog(17, p);
  const Json side = Json::parse(dump_json(field_sidecar(f)));
  const BallField g = read_field(field_csv(f), side);
  EXPECT_EQ(g.n, f.n);
  EXPECT_EQ(g.R, f.R);
  EXPECT_EQ(g.dx, f.dx);
  EXPECT_EQ(g.provenance, f.provenance);
  for (std::size_t i = 0; i < f.size(); ++i) {
    ASSERT_EQ(g.values[i], f.values[i]);
    ASSERT_EQ(g.mask[i], f.mask[i]);
  }
  EXPECT_THROW(read_field("x,y\n", side), ConfigError);
}
