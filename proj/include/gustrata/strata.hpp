#pragma once

// The admissible Newton polygons for signature (1, n-1), classification of
// computed polygons, and the sweep that checks the local stratum equations on
// field-valued points of the deformation space.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "gustrata/displayzoo.hpp"
#include "gustrata/newton.hpp"
#include "gustrata/rational.hpp"

namespace gustrata::strata {

struct StratumDescriptor {
  std::string label;  // "sigma" or "xi_<2j>"
  std::optional<int> j;
  Rational lambda_min;
  NewtonPolygon polygon;
  /// Codimension in the moduli space (catalog metadata).
  int codim = 0;
  /// Module decomposition M(m) + N^r.
  int m = 0;
  int r = 0;
};

/// 1/2 - 1/(2(floor(n/2) + 1 - j)) for 1 <= j <= floor(n/2).
Rational lambda_min(int n, int j);

/// Closed-form polygon of M(m): isoclinic 1/2 for odd m, and
/// {(h-1)/2h x 2h, (h+1)/2h x 2h} for m = 2h.
NewtonPolygon module_M_polygon(int m);

/// sigma first, then xi_2, xi_4, ..., xi_{2 floor(n/2)}: lambda_min strictly
/// decreasing along the list. 1 + floor(n/2) entries.
std::vector<StratumDescriptor> catalog(int n);

/// "sigma", "xi_<2j>" or "inadmissible". Throws InvalidArgument if the rank is
/// not 2n.
std::string classify(int n, const NewtonPolygon& polygon);

/// Ways of reading the even-n stratum from the vanishing pattern of the
/// coordinates s0, s2, ..., s_{n-1}. Each maps a nonzero even coordinate to a
/// stratum index; the predicted stratum is xi of the largest such index.
enum class EvenRule {
  Literal,        // s_2i -> 2i, s0 ignored
  ShiftS0First,   // s0 -> 2, s_2i -> 2i + 2
  ShiftIgnoreS0,  // s_2i -> 2i + 2, s0 ignored
  S0AsTop,        // s_2i -> 2i, s0 -> n
};
inline constexpr EvenRule kAllEvenRules[] = {EvenRule::Literal, EvenRule::ShiftS0First, EvenRule::ShiftIgnoreS0,
                                            EvenRule::S0AsTop};
std::string to_string(EvenRule rule);

/// Rule frozen from the calibration run shipped in data/even_rule_calibration.tsv.
EvenRule calibrated_even_rule(zoo::DeformationConvention convention);

/// Odd n: xi_{2i*} for 2i* the largest even index with s_{2i*} != 0, sigma if
/// there is none. Even n: as above through calibrated_even_rule.
std::string predicted_stratum(const zoo::DeformationPoint& point,
                              zoo::DeformationConvention convention = zoo::DeformationConvention::Polarized);
std::string predicted_stratum_even(const zoo::DeformationPoint& point, EvenRule rule);

struct VerifyConfig {
  int n = 3;
  std::int64_t p = 2;
  int d = 1;
  bool exhaustive = true;
  std::int64_t random_count = 0;
  std::uint64_t seed = 0;
  std::int64_t budget = 1'000'000;
  /// 0 selects zoo::default_precision(n, d).
  int precision = 0;
  zoo::DeformationConvention convention = zoo::DeformationConvention::Polarized;
  unsigned threads = 0;  // 0 = hardware concurrency
};

struct PointResult {
  std::int64_t index = 0;
  std::vector<std::int64_t> params;  // FieldElement indices in coordinate order
  NewtonPolygon polygon;
  std::string classified;
  std::string predicted;
  Rational min_cycle_slope;
  std::optional<Rational> global_min_cycle_mean;
  /// min_cycle_slope through u1 on Gamma plus the weight-0 edges only.
  std::optional<Rational> gray_only_min_cycle_slope;
  bool doubled_precision_agrees = true;
  bool reran_at_doubled_precision = false;
  bool precision_failure = false;
  std::string structural_failure;  // empty when validation, polarization and signature pass
};

struct VerifyReport {
  VerifyConfig config;
  int precision = 0;
  std::vector<PointResult> points;

  std::int64_t agreement_count() const;
  std::vector<const PointResult*> disagreements() const;
  /// Points where min Newton slope > min cycle slope through u1.
  std::vector<const PointResult*> lemma_violations() const;
  /// Points where min Newton slope != min cycle slope through u1.
  std::vector<const PointResult*> remark_violations() const;
  std::vector<const PointResult*> precision_failures() const;
  std::vector<const PointResult*> doubled_precision_mismatches() const;
  std::vector<const PointResult*> structural_violations() const;
  std::map<std::string, std::int64_t> counts_by_stratum() const;
  /// Even n, exhaustive only: points whose stratum changes when s0 is set to 0.
  std::optional<std::int64_t> s0_changes_stratum() const;

  /// No disagreement, no lemma violation, no precision mismatch, no
  /// structural violation.
  bool verified() const;

  nlohmann::json to_json() const;
  std::string to_tsv() const;
};

/// Throws BudgetExceeded when an exhaustive sweep has more than budget points.
VerifyReport verify_local_strata(const VerifyConfig& config);

/// Agreement of each EvenRule with the computed classification over an
/// exhaustive sweep; one row per (n, p, d, rule).
struct CalibrationRow {
  zoo::DeformationConvention convention = zoo::DeformationConvention::Polarized;
  int n = 0;
  std::int64_t p = 0;
  int d = 0;
  EvenRule rule = EvenRule::Literal;
  std::int64_t agree = 0;
  std::int64_t total = 0;
};
std::vector<CalibrationRow> calibrate_even_rule(int n, std::int64_t p, int d, zoo::DeformationConvention convention);
std::string calibration_tsv(const std::vector<CalibrationRow>& rows);

}  // namespace gustrata::strata
