#include "doctest.h"

#include <fstream>
#include <sstream>

#include "gustrata/errors.hpp"
#include "gustrata/strata.hpp"

using namespace gustrata;
using namespace gustrata::strata;
using zoo::DeformationConvention;

namespace {

zoo::DeformationPoint point_with(const witt::ContextPtr& ctx, int n, std::initializer_list<int> nonzero) {
  auto point = zoo::DeformationPoint::zero(ctx, n);
  const auto indices = zoo::DeformationPoint::parameter_indices(n);
  for (int index : nonzero) {
    const auto it = std::find(indices.begin(), indices.end(), index);
    point.params[static_cast<std::size_t>(it - indices.begin())] = witt::FieldElement::from_index(ctx, 1);
  }
  return point;
}

}  // namespace

TEST_CASE("lambda_min") {
  CHECK(lambda_min(3, 1) == Rational(0));
  CHECK(lambda_min(4, 1) == Rational(1, 4));
  CHECK(lambda_min(4, 2) == Rational(0));
  CHECK(lambda_min(9, 1) == Rational(3, 8));
  CHECK(lambda_min(10, 3) == Rational(1, 3));
  CHECK_THROWS_AS(lambda_min(5, 0), InvalidArgument);
  CHECK_THROWS_AS(lambda_min(5, 3), InvalidArgument);
}

TEST_CASE("catalog") {
  const auto four = catalog(4);
  REQUIRE(four.size() == 3);
  CHECK(four[0].label == "sigma");
  CHECK(four[0].polygon.to_string() == "{1/2x8}");
  CHECK(four[1].label == "xi_2");
  CHECK(four[1].polygon.to_string() == "{1/4x4, 3/4x4}");
  CHECK(four[2].label == "xi_4");
  CHECK(four[2].polygon.to_string() == "{0x2, 1/2x4, 1x2}");
  for (int n = 3; n <= 10; ++n) {
    const auto entries = catalog(n);
    CHECK(entries.size() == static_cast<std::size_t>(1 + n / 2));
    for (std::size_t k = 0; k < entries.size(); ++k) {
      const auto& e = entries[k];
      CHECK(e.polygon.rank() == 2 * n);
      CHECK(e.polygon.is_symmetric());
      CHECK(e.polygon.has_integral_breakpoints());
      CHECK(e.polygon.slopes_in_unit_interval());
      CHECK(e.polygon.min_slope() == e.lambda_min);
      CHECK(classify(n, e.polygon) == e.label);
      CHECK(2 * e.m + 2 * e.r == 2 * n);
      if (k > 0) {
        CHECK(e.lambda_min < entries[k - 1].lambda_min);
        CHECK(e.label == "xi_" + std::to_string(2 * static_cast<int>(k)));
      }
    }
  }
}

TEST_CASE("classification of other polygons") {
  CHECK(classify(3, NewtonPolygon({{Rational(0), 3}, {Rational(1), 3}})) == "inadmissible");
  CHECK(classify(4, NewtonPolygon({{Rational(1, 3), 3}, {Rational(1, 2), 2}, {Rational(2, 3), 3}})) == "inadmissible");
  CHECK_THROWS_AS(classify(4, NewtonPolygon::isoclinic(Rational(1, 2), 6)), InvalidArgument);
}

TEST_CASE("predicted strata") {
  const auto ctx = witt::RingContext::make(3, 1, 8);
  CHECK(predicted_stratum(point_with(ctx, 5, {})) == "sigma");
  CHECK(predicted_stratum(point_with(ctx, 5, {3, 5})) == "sigma");
  CHECK(predicted_stratum(point_with(ctx, 5, {2, 5})) == "xi_2");
  CHECK(predicted_stratum(point_with(ctx, 5, {2, 4})) == "xi_4");
  CHECK(predicted_stratum(point_with(ctx, 4, {0})) == "xi_2");
  CHECK(predicted_stratum(point_with(ctx, 4, {2})) == "xi_4");
  CHECK(predicted_stratum(point_with(ctx, 4, {0}), DeformationConvention::AsPrinted) == "sigma");
  CHECK(predicted_stratum_even(point_with(ctx, 6, {2}), EvenRule::Literal) == "xi_2");
  CHECK(predicted_stratum_even(point_with(ctx, 6, {0}), EvenRule::S0AsTop) == "xi_6");
  CHECK(calibrated_even_rule(DeformationConvention::Polarized) == EvenRule::ShiftS0First);
  CHECK(calibrated_even_rule(DeformationConvention::AsPrinted) == EvenRule::ShiftIgnoreS0);
}

TEST_CASE("small sweeps verify") {
  for (auto [n, p] : {std::pair<int, std::int64_t>{3, 2}, {4, 3}, {5, 2}}) {
    VerifyConfig config;
    config.n = n;
    config.p = p;
    const auto report = verify_local_strata(config);
    CHECK(report.verified());
    CHECK(report.agreement_count() == static_cast<std::int64_t>(report.points.size()));
    CHECK(report.remark_violations().empty());
    std::int64_t total = 0;
    for (const auto& [label, count] : report.counts_by_stratum()) total += count;
    CHECK(total == static_cast<std::int64_t>(report.points.size()));
  }
}

TEST_CASE("s0 is inert under the printed relations") {
  VerifyConfig config;
  config.n = 4;
  config.p = 3;
  config.convention = DeformationConvention::AsPrinted;
  const auto printed = verify_local_strata(config);
  REQUIRE(printed.s0_changes_stratum().has_value());
  CHECK(*printed.s0_changes_stratum() == 0);
  CHECK_FALSE(printed.structural_violations().empty());
  config.convention = DeformationConvention::Polarized;
  CHECK(*verify_local_strata(config).s0_changes_stratum() > 0);
}

TEST_CASE("random sweeps are reproducible and budgeted") {
  VerifyConfig config;
  config.n = 7;
  config.p = 3;
  config.exhaustive = false;
  config.random_count = 20;
  config.seed = 42;
  const auto a = verify_local_strata(config);
  const auto b = verify_local_strata(config);
  REQUIRE(a.points.size() == 20);
  for (std::size_t i = 0; i < a.points.size(); ++i) CHECK(a.points[i].params == b.points[i].params);
  CHECK(a.verified());
  config.budget = 10;
  CHECK_THROWS_AS(verify_local_strata(config), BudgetExceeded);
  config.exhaustive = true;
  config.n = 6;
  config.budget = 100;
  CHECK_THROWS_AS(verify_local_strata(config), BudgetExceeded);
}

TEST_CASE("calibration table regenerates") {
  std::ifstream in(std::string(GUSTRATA_DATA_DIR) + "/even_rule_calibration.tsv");
  REQUIRE(in.good());
  std::stringstream stored;
  stored << in.rdbuf();
  std::vector<CalibrationRow> rows;
  for (auto convention : {DeformationConvention::Polarized, DeformationConvention::AsPrinted}) {
    for (auto [n, p] : {std::pair<int, std::int64_t>{4, 2}, {4, 3}, {6, 2}}) {
      const auto part = calibrate_even_rule(n, p, 1, convention);
      rows.insert(rows.end(), part.begin(), part.end());
      for (const auto& row : part) {
        if (row.rule == calibrated_even_rule(convention)) CHECK(row.agree == row.total);
      }
    }
  }
  CHECK(calibration_tsv(rows) == stored.str());
}

TEST_CASE("report formats") {
  VerifyConfig config;
  config.n = 3;
  config.p = 3;
  const auto report = verify_local_strata(config);
  const auto j = report.to_json();
  CHECK(j.at("verified").get<bool>());
  CHECK(j.at("context").at("N").get<int>() == zoo::default_precision(3, 1));
  CHECK(j.at("tool").at("name") == "gustrata");
  CHECK(report.to_tsv().find("modulus=[0,1]") != std::string::npos);
}
