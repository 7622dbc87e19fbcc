#include "gustrata/strata.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <exception>
#include <limits>
#include <mutex>
#include <random>
#include <set>
#include <sstream>
#include <thread>

#include "gustrata/errors.hpp"
#include "gustrata/serialize.hpp"
#include "gustrata/slopegraph.hpp"
#include "gustrata/version.hpp"

namespace gustrata::strata {

using zoo::DeformationConvention;
using zoo::DeformationPoint;

namespace {

std::string xi(int index) { return "xi_" + std::to_string(index); }

std::string label_from_max(int max_index) { return max_index == 0 ? "sigma" : xi(max_index); }

std::int64_t point_count(std::int64_t q, int n) {
  std::int64_t total = 1;
  for (int i = 0; i < n - 1; ++i) {
    if (total > std::numeric_limits<std::int64_t>::max() / q) return std::numeric_limits<std::int64_t>::max();
    total *= q;
  }
  return total;
}

}  // namespace

Rational lambda_min(int n, int j) {
  if (n < 3) throw InvalidArgument("n must be >= 3");
  if (j < 1 || j > n / 2) throw InvalidArgument("j = " + std::to_string(j) + " out of range 1.." + std::to_string(n / 2));
  return Rational(1, 2) - Rational(1, 2 * (n / 2 + 1 - j));
}

NewtonPolygon module_M_polygon(int m) {
  if (m < 2) throw InvalidArgument("M(m) needs m >= 2");
  if (m % 2 == 1) return NewtonPolygon::isoclinic(Rational(1, 2), 2 * m);
  const int h = m / 2;
  return NewtonPolygon({{Rational(h - 1, 2 * h), 2 * h}, {Rational(h + 1, 2 * h), 2 * h}});
}

std::vector<StratumDescriptor> catalog(int n) {
  if (n < 3) throw InvalidArgument("n must be >= 3");
  std::vector<StratumDescriptor> out;
  const int half = n / 2;
  out.push_back({"sigma", std::nullopt, Rational(1, 2), NewtonPolygon::isoclinic(Rational(1, 2), 2 * n), half,
                 n % 2 == 1 ? n : n - 1, n % 2 == 1 ? 0 : 1});
  for (int j = 1; j <= half; ++j) {
    const int h = half + 1 - j;
    const int r = n - 2 * h;
    NewtonPolygon polygon = module_M_polygon(2 * h);
    if (r > 0) polygon = polygon + NewtonPolygon::isoclinic(Rational(1, 2), 2 * r);
    out.push_back({xi(2 * j), j, lambda_min(n, j), std::move(polygon), half - j, 2 * h, r});
  }
  return out;
}

std::string classify(int n, const NewtonPolygon& polygon) {
  if (polygon.rank() != 2 * n) {
    throw InvalidArgument("polygon has rank " + std::to_string(polygon.rank()) + ", expected " + std::to_string(2 * n));
  }
  for (const auto& entry : catalog(n)) {
    if (entry.polygon == polygon) return entry.label;
  }
  return "inadmissible";
}

std::string to_string(EvenRule rule) {
  switch (rule) {
    case EvenRule::Literal:
      return "literal";
    case EvenRule::ShiftS0First:
      return "shift_s0_first";
    case EvenRule::ShiftIgnoreS0:
      return "shift_ignore_s0";
    case EvenRule::S0AsTop:
      return "s0_as_top";
  }
  return "unknown";
}

EvenRule calibrated_even_rule(DeformationConvention convention) {
  return convention == DeformationConvention::Polarized ? EvenRule::ShiftS0First : EvenRule::ShiftIgnoreS0;
}

std::string predicted_stratum_even(const DeformationPoint& point, EvenRule rule) {
  const int n = point.n;
  if (n % 2 != 0) throw InvalidArgument("predicted_stratum_even needs even n");
  int best = 0;
  if (!point.s(0).is_zero()) {
    if (rule == EvenRule::ShiftS0First) best = 2;
    if (rule == EvenRule::S0AsTop) best = n;
  }
  for (int i = 2; i <= n - 2; i += 2) {
    if (point.s(i).is_zero()) continue;
    const int index = (rule == EvenRule::ShiftS0First || rule == EvenRule::ShiftIgnoreS0) ? i + 2 : i;
    best = std::max(best, index);
  }
  return label_from_max(best);
}

std::string predicted_stratum(const DeformationPoint& point, DeformationConvention convention) {
  const int n = point.n;
  if (n % 2 == 0) return predicted_stratum_even(point, calibrated_even_rule(convention));
  int best = 0;
  for (int i = 2; i <= n - 1; i += 2) {
    if (!point.s(i).is_zero()) best = i;
  }
  return label_from_max(best);
}

// ---------------------------------------------------------------------------

namespace {

struct SweepSetup {
  VerifyConfig config;
  witt::ContextPtr ctx;
  witt::ContextPtr doubled;
  std::set<std::pair<std::size_t, std::size_t>> gamma_edges;
};

PointResult evaluate_point(const SweepSetup& setup, std::int64_t index, const std::vector<std::int64_t>& params) {
  const auto& cfg = setup.config;
  PointResult result;
  result.index = index;
  result.params = params;

  auto point_in = [&](const witt::ContextPtr& ctx) {
    DeformationPoint pt{cfg.n, {}};
    for (auto k : params) pt.params.push_back(witt::FieldElement::from_index(ctx, k));
    return pt;
  };
  auto slopes_in = [&](const witt::ContextPtr& ctx) {
    return newton_slopes(zoo::deformation_display(ctx, point_in(ctx), cfg.convention), false);
  };

  const DeformationPoint point = point_in(setup.ctx);
  const DieudonneDisplay display = zoo::deformation_display(setup.ctx, point, cfg.convention);
  try {
    try {
      result.polygon = newton_slopes(display, false);
      result.doubled_precision_agrees = slopes_in(setup.doubled) == result.polygon;
    } catch (const PrecisionError&) {
      result.reran_at_doubled_precision = true;
      result.polygon = slopes_in(setup.doubled);
      const auto quadrupled = setup.ctx->with_precision(4 * setup.ctx->precision());
      result.doubled_precision_agrees = slopes_in(quadrupled) == result.polygon;
    }
  } catch (const PrecisionError&) {
    result.precision_failure = true;
    return result;
  }

  result.classified = classify(cfg.n, result.polygon);
  result.predicted = predicted_stratum(point, cfg.convention);

  const graph::SlopeGraph g = graph::build_graph(display);
  const std::size_t u1 = g.index_of({Family::U, 1});
  result.min_cycle_slope = graph::min_cycle_slope(g, u1);
  result.global_min_cycle_mean = graph::min_cycle_mean(g);
  const auto gray = graph::filter_edges(
      g, [&](const graph::Edge& e) { return e.weight == 0 || setup.gamma_edges.count({e.from, e.to}) > 0; });
  const auto gray_cycles = graph::cycles_through(gray, u1);
  if (!gray_cycles.empty()) result.gray_only_min_cycle_slope = graph::min_cycle_slope(gray, u1);

  std::vector<std::string> problems;
  const auto report = validate_display(display);
  for (const auto& c : report.checks) {
    if (!c.passed) problems.push_back(c.name + ": " + c.detail);
  }
  if (report.ok()) {
    const auto violations = polarization_check(display);
    if (!violations.empty()) {
      const auto& v = violations.front();
      problems.push_back("polarization: " + std::to_string(violations.size()) + " pairs, first (" +
                         display.basis[v.i].name() + ", " + display.basis[v.j].name() + ")");
    }
    const auto sig = signature(display);
    if (sig != std::make_pair(1, cfg.n - 1)) {
      problems.push_back("signature (" + std::to_string(sig.first) + ", " + std::to_string(sig.second) + ")");
    }
  }
  for (std::size_t i = 0; i < problems.size(); ++i) result.structural_failure += (i ? "; " : "") + problems[i];
  return result;
}

}  // namespace

VerifyReport verify_local_strata(const VerifyConfig& config) {
  if (config.n < 3) throw InvalidArgument("n must be >= 3");
  VerifyReport report;
  report.config = config;
  report.precision = config.precision > 0 ? config.precision : zoo::default_precision(config.n, config.d);

  SweepSetup setup{config, witt::RingContext::make(config.p, config.d, report.precision), nullptr, {}};
  setup.doubled = setup.ctx->with_precision(2 * report.precision);
  const auto gamma = graph::build_graph(
      zoo::deformation_display(setup.ctx, DeformationPoint::zero(setup.ctx, config.n), config.convention));
  for (const auto& e : gamma.edges()) setup.gamma_edges.insert({e.from, e.to});

  const std::int64_t q = setup.ctx->residue_field_size();
  const std::size_t nparams = DeformationPoint::parameter_indices(config.n).size();
  std::vector<std::vector<std::int64_t>> params;
  if (config.exhaustive) {
    const std::int64_t total = point_count(q, config.n);
    if (total > config.budget) {
      throw BudgetExceeded("exhaustive sweep needs " + std::to_string(total) + " points; budget is " +
                           std::to_string(config.budget));
    }
    for (std::int64_t code = 0; code < total; ++code) {
      std::vector<std::int64_t> digits(nparams);
      std::int64_t rest = code;
      for (auto& x : digits) {
        x = rest % q;
        rest /= q;
      }
      params.push_back(std::move(digits));
    }
  } else {
    if (config.random_count < 0 || config.random_count > config.budget) {
      throw BudgetExceeded("random sweep of " + std::to_string(config.random_count) + " points exceeds budget " +
                           std::to_string(config.budget));
    }
    // Raw mt19937_64 output reduced mod q keeps the stream identical across
    // standard libraries.
    std::mt19937_64 rng(config.seed);
    for (std::int64_t k = 0; k < config.random_count; ++k) {
      std::vector<std::int64_t> digits(nparams);
      for (auto& x : digits) x = static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(q));
      params.push_back(std::move(digits));
    }
  }

  report.points.resize(params.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t k = next++; k < params.size(); k = next++) {
      try {
        report.points[k] = evaluate_point(setup, static_cast<std::int64_t>(k), params[k]);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  unsigned threads = config.threads > 0 ? config.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(1, params.size())));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
  return report;
}

// ---------------------------------------------------------------------------

namespace {

template <class Pred>
std::vector<const PointResult*> select(const std::vector<PointResult>& points, Pred pred) {
  std::vector<const PointResult*> out;
  for (const auto& p : points) {
    if (pred(p)) out.push_back(&p);
  }
  return out;
}

nlohmann::json point_summary(const PointResult& p) {
  nlohmann::json j = {{"index", p.index}, {"params", p.params}};
  if (!p.precision_failure) {
    j["polygon"] = io::polygon_to_json(p.polygon);
    j["classified"] = p.classified;
    j["predicted"] = p.predicted;
    j["min_newton_slope"] = gustrata::to_string(p.polygon.min_slope());
    j["min_cycle_slope"] = gustrata::to_string(p.min_cycle_slope);
  }
  return j;
}

}  // namespace

std::int64_t VerifyReport::agreement_count() const {
  return static_cast<std::int64_t>(
      select(points, [](const PointResult& p) { return !p.precision_failure && p.classified == p.predicted; }).size());
}

std::vector<const PointResult*> VerifyReport::disagreements() const {
  return select(points, [](const PointResult& p) { return !p.precision_failure && p.classified != p.predicted; });
}

std::vector<const PointResult*> VerifyReport::lemma_violations() const {
  return select(points,
                [](const PointResult& p) { return !p.precision_failure && p.polygon.min_slope() > p.min_cycle_slope; });
}

std::vector<const PointResult*> VerifyReport::remark_violations() const {
  return select(points,
                [](const PointResult& p) { return !p.precision_failure && p.polygon.min_slope() != p.min_cycle_slope; });
}

std::vector<const PointResult*> VerifyReport::precision_failures() const {
  return select(points, [](const PointResult& p) { return p.precision_failure; });
}

std::vector<const PointResult*> VerifyReport::doubled_precision_mismatches() const {
  return select(points, [](const PointResult& p) { return !p.precision_failure && !p.doubled_precision_agrees; });
}

std::vector<const PointResult*> VerifyReport::structural_violations() const {
  return select(points, [](const PointResult& p) { return !p.structural_failure.empty(); });
}

std::map<std::string, std::int64_t> VerifyReport::counts_by_stratum() const {
  std::map<std::string, std::int64_t> counts;
  for (const auto& p : points) {
    if (!p.precision_failure) ++counts[p.classified];
  }
  return counts;
}

std::optional<std::int64_t> VerifyReport::s0_changes_stratum() const {
  if (config.n % 2 != 0 || !config.exhaustive) return std::nullopt;
  std::int64_t q = 1;
  for (int i = 0; i < config.d; ++i) q *= config.p;
  std::int64_t changed = 0;
  for (const auto& p : points) {
    const auto& base = points[static_cast<std::size_t>(p.index - p.index % q)];
    if (!p.precision_failure && !base.precision_failure && p.classified != base.classified) ++changed;
  }
  return changed;
}

bool VerifyReport::verified() const {
  return disagreements().empty() && lemma_violations().empty() && precision_failures().empty() &&
         doubled_precision_mismatches().empty() && structural_violations().empty();
}

nlohmann::json VerifyReport::to_json() const {
  using nlohmann::json;
  json matrix = json::object();
  for (const auto& p : points) {
    if (p.precision_failure) continue;
    auto& cell = matrix[p.classified][p.predicted];
    cell = cell.is_null() ? 1 : cell.get<std::int64_t>() + 1;
  }
  json disagreeing = json::array();
  for (const auto* p : disagreements()) disagreeing.push_back(point_summary(*p));
  json lemma = json::array();
  for (const auto* p : lemma_violations()) lemma.push_back(point_summary(*p));
  json remark = json::array();
  for (const auto* p : remark_violations()) remark.push_back(point_summary(*p));
  json precision_json = json::array();
  for (const auto* p : precision_failures()) precision_json.push_back(point_summary(*p));
  json doubled = json::array();
  for (const auto* p : doubled_precision_mismatches()) doubled.push_back(point_summary(*p));
  json structural = json::array();
  for (const auto* p : structural_violations()) {
    auto j = point_summary(*p);
    j["failure"] = p->structural_failure;
    structural.push_back(j);
  }

  std::int64_t karp_differs = 0, gray_differs = 0, reruns = 0;
  for (const auto& p : points) {
    if (p.precision_failure) continue;
    if (p.global_min_cycle_mean != p.min_cycle_slope) ++karp_differs;
    if (p.gray_only_min_cycle_slope != p.min_cycle_slope) ++gray_differs;
    if (p.reran_at_doubled_precision) ++reruns;
  }

  const auto ctx = witt::RingContext::make(config.p, config.d, precision);
  json out = {
      {"tool", {{"name", kToolName}, {"version", kVersion}}},
      {"n", config.n},
      {"p", config.p},
      {"d", config.d},
      {"mode", config.exhaustive ? "exhaustive" : "random"},
      {"convention", config.convention == DeformationConvention::Polarized ? "polarized" : "as_printed"},
      {"points", static_cast<std::int64_t>(points.size())},
      {"agreement",
       {{"agree", agreement_count()},
        {"total", static_cast<std::int64_t>(points.size())},
        {"matrix", matrix},
        {"disagreements", disagreeing}}},
      {"lemma_violations", lemma},
      {"remark_violations", remark},
      {"counts_by_stratum", counts_by_stratum()},
      {"precision_failures", precision_json},
      {"doubled_precision_mismatches", doubled},
      {"precision_reruns", reruns},
      {"structural_violations", structural},
      {"global_min_cycle_mean_differs", karp_differs},
      {"extra_black_edges_change_min_cycle_slope", gray_differs},
      {"verified", verified()},
      {"context", io::context_to_json(*ctx)},
  };
  if (config.exhaustive) {
    out["budget"] = config.budget;
  } else {
    out["seed"] = config.seed;
    out["random_count"] = config.random_count;
  }
  if (const auto s0 = s0_changes_stratum()) out["s0_changes_stratum"] = *s0;
  return out;
}

std::string VerifyReport::to_tsv() const {
  std::map<std::string, std::array<std::int64_t, 3>> rows;  // classified, predicted, both
  for (const auto& p : points) {
    if (p.precision_failure) continue;
    ++rows[p.classified][0];
    ++rows[p.predicted][1];
    if (p.classified == p.predicted) ++rows[p.classified][2];
  }
  std::ostringstream out;
  out << "# " << kToolName << " " << kVersion << " n=" << config.n << " p=" << config.p << " d=" << config.d
      << " N=" << precision << " modulus=[";
  const auto modulus = witt::smallest_irreducible(config.p, config.d);
  for (std::size_t i = 0; i < modulus.size(); ++i) out << (i ? "," : "") << modulus[i];
  out << "]\n";
  out << "stratum\tclassified\tpredicted\tagree\n";
  for (const auto& [label, counts] : rows) {
    out << label << '\t' << counts[0] << '\t' << counts[1] << '\t' << counts[2] << '\n';
  }
  out << "total\t" << points.size() << '\t' << points.size() << '\t' << agreement_count() << '\n';
  return out.str();
}

std::vector<CalibrationRow> calibrate_even_rule(int n, std::int64_t p, int d, DeformationConvention convention) {
  if (n % 2 != 0) throw InvalidArgument("calibration is for even n");
  VerifyConfig cfg;
  cfg.n = n;
  cfg.p = p;
  cfg.d = d;
  cfg.convention = convention;
  const VerifyReport report = verify_local_strata(cfg);
  const auto ctx = witt::RingContext::make(p, d, report.precision);
  std::vector<CalibrationRow> rows;
  for (EvenRule rule : kAllEvenRules) {
    CalibrationRow row{convention, n, p, d, rule, 0, 0};
    for (const auto& pt : report.points) {
      if (pt.precision_failure) continue;
      ++row.total;
      const auto point = DeformationPoint::from_code(ctx, n, pt.index);
      if (predicted_stratum_even(point, rule) == pt.classified) ++row.agree;
    }
    rows.push_back(row);
  }
  return rows;
}

std::string calibration_tsv(const std::vector<CalibrationRow>& rows) {
  std::ostringstream out;
  out << "convention\tn\tp\td\trule\tagree\ttotal\n";
  for (const auto& r : rows) {
    out << (r.convention == DeformationConvention::Polarized ? "polarized" : "as_printed") << '\t' << r.n << '\t'
        << r.p << '\t' << r.d << '\t' << to_string(r.rule) << '\t' << r.agree << '\t' << r.total << '\n';
  }
  return out.str();
}

}  // namespace gustrata::strata
