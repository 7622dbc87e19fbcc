#include "doctest.h"

#include <sstream>

#include "json.hpp"

#include "gustrata/cli.hpp"
#include "gustrata/errors.hpp"

using namespace gustrata;
using nlohmann::json;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("module specs") {
  const auto ctx = witt::RingContext::make(3, 1, 20);
  CHECK(cli::parse_module_spec("M(4) + N", ctx).rank() == 10);
  CHECK(cli::parse_module_spec("N^3", ctx) == zoo::power_of_N(ctx, 3));
  CHECK(cli::parse_module_spec("ss(6)", ctx) == zoo::supersingular_module(ctx, 6));
  auto point = zoo::DeformationPoint::zero(ctx, 5);
  point.params[2] = witt::FieldElement::from_index(ctx, 2);
  CHECK(cli::parse_module_spec("def(5; s4=2)", ctx) == zoo::deformation_display(ctx, point));
  CHECK(cli::parse_module_spec("def(5)", ctx) == zoo::supersingular_module(ctx, 5));
  for (const char* bad : {"", "M(", "M(4", "X", "N+", "def(5; s1=1)", "def(5; s2=3)", "N^0", "M(4)N"}) {
    CAPTURE(bad);
    CHECK_THROWS_AS(cli::parse_module_spec(bad, ctx), InvalidArgument);
  }
}

TEST_CASE("catalog command") {
  const auto r = run({"catalog", "--n", "5"});
  REQUIRE(r.code == cli::kOk);
  const auto j = json::parse(r.out);
  CHECK(j.at("count") == 3);
  CHECK(j.at("strata")[1].at("label") == "xi_2");
  CHECK(j.at("strata")[1].at("charpoly_match") == true);
  CHECK(j.at("tool").at("version").is_string());
  CHECK(j.at("context").at("modulus") == json::array({0, 1}));
  const auto tsv = run({"catalog", "--n", "4", "--format", "tsv"});
  CHECK(tsv.out.find("xi_2\t1\t1/4") != std::string::npos);
}

TEST_CASE("slopes command") {
  const auto r = run({"slopes", "--module", "M(4)+N", "--p", "3"});
  REQUIRE(r.code == cli::kOk);
  const auto j = json::parse(r.out);
  CHECK(j.at("slopes").size() == 3);
  CHECK(j.at("signature") == json::array({1, 4}));
  CHECK(j.at("context").at("N") == 4 * 5 + 8);
  CHECK(run({"slopes", "--module", "M(4)", "--precision", "2"}).code == cli::kPrecisionFailure);
  CHECK(run({"slopes", "--module", "M(1)"}).code == cli::kUsageError);
  CHECK(run({"slopes", "--module", "N", "--p", "6"}).code == cli::kUsageError);
}

TEST_CASE("graph command") {
  const auto r = run({"graph", "--module", "def(3; s2=1)"});
  REQUIRE(r.code == cli::kOk);
  const auto j = json::parse(r.out);
  CHECK(j.at("cycles_through_u1").size() == 3);
  CHECK(j.at("min_cycle_slope") == "0");
  const auto dot = run({"graph", "--module", "M(3)", "--dot"});
  CHECK(dot.out.find("digraph Gamma {") != std::string::npos);
  CHECK(dot.out.find("modulus=[0,1]") != std::string::npos);
}

TEST_CASE("check command") {
  CHECK(run({"check", "--module", "def(5; s5=1)"}).code == cli::kOk);
  const auto printed = run({"check", "--module", "def(5; s5=1)", "--convention", "printed"});
  CHECK(printed.code == cli::kVerificationFailed);
  CHECK_FALSE(json::parse(printed.out).at("polarization_violations").empty());
}

TEST_CASE("verify command") {
  const auto r = run({"verify", "--n", "4", "--p", "3", "--exhaustive"});
  REQUIRE(r.code == cli::kOk);
  CHECK(json::parse(r.out).at("verified") == true);
  CHECK(run({"verify", "--n", "4", "--p", "3", "--exhaustive", "--convention", "printed"}).code ==
        cli::kVerificationFailed);
  CHECK(run({"verify", "--n", "4"}).code == cli::kUsageError);
  CHECK(run({"verify", "--n", "6", "--p", "3", "--exhaustive", "--budget", "10"}).code == cli::kUsageError);
  const auto random = run({"verify", "--n", "7", "--p", "3", "--random", "5", "--seed", "9", "--format", "tsv"});
  CHECK(random.code == cli::kOk);
  CHECK(random.out.find("total\t5\t5\t5") != std::string::npos);
}

TEST_CASE("usage errors") {
  CHECK(run({}).code == cli::kUsageError);
  CHECK(run({"frobnicate"}).code == cli::kUsageError);
  CHECK(run({"catalog"}).code == cli::kUsageError);
  CHECK(run({"catalog", "--n", "2"}).code == cli::kUsageError);
  CHECK(run({"catalog", "--n", "4", "--format", "xml"}).code == cli::kUsageError);
  CHECK(run({"--help"}).code == cli::kOk);
  CHECK(run({"calibrate", "--n", "5"}).code == cli::kUsageError);
}
