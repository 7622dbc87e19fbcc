// Acceptance run: one PASS/FAIL line per criterion, exit status 0 iff every
// gating criterion passes.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "gustrata/displayzoo.hpp"
#include "gustrata/slopegraph.hpp"
#include "gustrata/strata.hpp"

using namespace gustrata;

namespace {

// Pinned limits.
constexpr double kCatalogSeconds = 1.0;
constexpr double kModuleMSeconds = 30.0;
constexpr double kExpectedModuleSeconds = 30.0;
constexpr double kSweepSeconds = 600.0;
constexpr double kRequiredAgreement = 1.0;
constexpr std::int64_t kRandomPoints = 1000;
constexpr std::uint64_t kRandomSeed = 20240917;
constexpr int kMaxM = 14;

struct Outcome {
  bool pass = false;
  std::string detail;
  bool gating = true;
};

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", x);
  return buf;
}

// Rank over F_q by Gaussian elimination.
int rank_mod_p(std::vector<std::vector<witt::FieldElement>> rows) {
  int rank = 0;
  const std::size_t cols = rows.empty() ? 0 : rows[0].size();
  for (std::size_t c = 0; c < cols && rank < static_cast<int>(rows.size()); ++c) {
    std::size_t pivot = static_cast<std::size_t>(rank);
    while (pivot < rows.size() && rows[pivot][c].is_zero()) ++pivot;
    if (pivot == rows.size()) continue;
    std::swap(rows[pivot], rows[static_cast<std::size_t>(rank)]);
    const auto inv = rows[static_cast<std::size_t>(rank)][c].inverse();
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (r == static_cast<std::size_t>(rank) || rows[r][c].is_zero()) continue;
      const auto factor = rows[r][c] * inv;
      for (std::size_t k = 0; k < cols; ++k) rows[r][k] -= factor * rows[static_cast<std::size_t>(rank)][k];
    }
    ++rank;
  }
  return rank;
}

// Stable rank of F^d mod p: the number of unit roots, i.e. the p-rank.
int stable_rank_of_frobenius(const DieudonneDisplay& display) {
  const auto pi = linearized_frobenius(display);
  const std::size_t n = pi.rows();
  auto power = pi;
  for (std::size_t k = 1; k < n; ++k) power = power * pi;
  std::vector<std::vector<witt::FieldElement>> rows(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) rows[i].push_back(power(i, j).reduce());
  }
  return rank_mod_p(rows);
}

struct SweepSet {
  std::vector<strata::VerifyReport> exhaustive;
  std::vector<strata::VerifyReport> random;
  double exhaustive_seconds = 0;
  double random_seconds = 0;
  std::string error;
};

SweepSet run_sweeps() {
  SweepSet s;
  const int grid[][3] = {{3, 2, 1}, {3, 3, 1}, {3, 2, 2}, {4, 2, 1}, {4, 3, 1}, {5, 2, 1}, {5, 3, 1}, {6, 2, 1}};
  try {
    auto start = std::chrono::steady_clock::now();
    for (const auto& g : grid) {
      strata::VerifyConfig config;
      config.n = g[0];
      config.p = g[1];
      config.d = g[2];
      s.exhaustive.push_back(strata::verify_local_strata(config));
    }
    s.exhaustive_seconds = seconds_since(start);
    start = std::chrono::steady_clock::now();
    for (int n : {7, 8}) {
      strata::VerifyConfig config;
      config.n = n;
      config.p = 3;
      config.exhaustive = false;
      config.random_count = kRandomPoints;
      config.seed = kRandomSeed;
      s.random.push_back(strata::verify_local_strata(config));
    }
    s.random_seconds = seconds_since(start);
  } catch (const std::exception& e) {
    s.error = e.what();
  }
  return s;
}

std::string where(const strata::VerifyReport& r) {
  return "(n=" + std::to_string(r.config.n) + ",p=" + std::to_string(r.config.p) + ",d=" + std::to_string(r.config.d) +
         ")";
}

Outcome criterion_catalog() {
  const auto start = std::chrono::steady_clock::now();
  int strata_count = 0;
  std::string problem;
  for (int n = 3; n <= 10; ++n) {
    const auto entries = strata::catalog(n);
    if (entries.size() != static_cast<std::size_t>(1 + n / 2)) problem = "wrong count at n=" + std::to_string(n);
    for (std::size_t k = 0; k < entries.size(); ++k) {
      const auto& e = entries[k];
      ++strata_count;
      const int h = e.j ? n / 2 + 1 - *e.j : 0;
      NewtonPolygon closed = e.j ? strata::module_M_polygon(2 * h) : NewtonPolygon::isoclinic(Rational(1, 2), 2 * n);
      if (e.j && n - 2 * h > 0) closed = closed + NewtonPolygon::isoclinic(Rational(1, 2), 2 * (n - 2 * h));
      const bool ok = e.polygon == closed && e.polygon.is_symmetric() && e.polygon.has_integral_breakpoints() &&
                      e.polygon.rank() == 2 * n && strata::classify(n, e.polygon) == e.label &&
                      (k == 0 || e.lambda_min < entries[k - 1].lambda_min);
      if (!ok) problem = e.label + " at n=" + std::to_string(n);
    }
  }
  const double t = seconds_since(start);
  Outcome o;
  o.pass = problem.empty() && t < kCatalogSeconds;
  o.detail = std::to_string(strata_count) + " strata for n=3..10 in " + fmt(t) + "s (limit " + fmt(kCatalogSeconds) +
             "s)" + (problem.empty() ? "" : "; mismatch: " + problem);
  return o;
}

Outcome criterion_module_m() {
  const auto start = std::chrono::steady_clock::now();
  int cases = 0;
  std::string problem;
  for (std::int64_t p : {2, 3, 5}) {
    for (int d : {1, 2}) {
      const auto ctx = witt::RingContext::make(p, d, zoo::default_precision(kMaxM, d));
      for (int m = 2; m <= kMaxM; ++m) {
        ++cases;
        const auto display = zoo::module_M(ctx, m);
        const auto by_charpoly = newton_slopes(display);
        const auto by_cycles = graph::cycle_decomposition_slopes(graph::build_graph(display));
        if (!by_cycles || *by_cycles != by_charpoly || by_charpoly != strata::module_M_polygon(m)) {
          problem = "M(" + std::to_string(m) + ") p=" + std::to_string(p) + " d=" + std::to_string(d);
        }
      }
    }
  }
  const double t = seconds_since(start);
  Outcome o;
  o.pass = problem.empty() && t < kModuleMSeconds;
  o.detail = std::to_string(cases) + " modules M(m), m<=" + std::to_string(kMaxM) +
             ", characteristic polynomial = cycle decomposition, in " + fmt(t) + "s (limit " + fmt(kModuleMSeconds) +
             "s)" + (problem.empty() ? "" : "; mismatch: " + problem);
  return o;
}

Outcome criterion_expected_modules() {
  const auto start = std::chrono::steady_clock::now();
  int cases = 0;
  std::string problem;
  for (std::int64_t p : {2, 3}) {
    for (int n = 3; n <= 10; ++n) {
      const auto ctx = witt::RingContext::make(p, 1, zoo::default_precision(n, 1));
      for (const auto& e : strata::catalog(n)) {
        ++cases;
        const auto display = e.j ? zoo::expected_module(ctx, n, *e.j) : zoo::supersingular_module(ctx, n);
        const auto polygon = newton_slopes(display);
        if (polygon != e.polygon || strata::classify(n, polygon) != e.label) {
          problem = e.label + " n=" + std::to_string(n) + " p=" + std::to_string(p);
        }
      }
    }
  }
  const double t = seconds_since(start);
  Outcome o;
  o.pass = problem.empty() && t < kExpectedModuleSeconds;
  o.detail = std::to_string(cases) + " modules M(2h)+N^r match their catalog polygon, in " + fmt(t) + "s (limit " +
             fmt(kExpectedModuleSeconds) + "s)" + (problem.empty() ? "" : "; mismatch: " + problem);
  return o;
}

Outcome criterion_sweeps(const SweepSet& s) {
  if (!s.error.empty()) return {false, "sweep aborted: " + s.error};
  std::int64_t agree = 0, total = 0;
  std::string worst;
  for (const auto& r : s.exhaustive) {
    agree += r.agreement_count();
    total += static_cast<std::int64_t>(r.points.size());
    if (r.agreement_count() != static_cast<std::int64_t>(r.points.size())) {
      worst += " " + where(r) + " " + std::to_string(r.agreement_count()) + "/" + std::to_string(r.points.size());
    }
  }
  const double rate = total ? static_cast<double>(agree) / static_cast<double>(total) : 0.0;
  Outcome o;
  o.pass = rate >= kRequiredAgreement && s.exhaustive_seconds < kSweepSeconds;
  o.detail = std::to_string(agree) + "/" + std::to_string(total) + " points agree over 8 exhaustive sweeps in " +
             fmt(s.exhaustive_seconds) + "s (limit " + fmt(kSweepSeconds) + "s)" +
             (worst.empty() ? "" : "; disagreements at" + worst);
  return o;
}

Outcome criterion_lemma(const SweepSet& s) {
  if (!s.error.empty()) return {false, "sweep aborted: " + s.error};
  std::int64_t violations = 0, points = 0;
  for (const auto* set : {&s.exhaustive, &s.random}) {
    for (const auto& r : *set) {
      violations += static_cast<std::int64_t>(r.lemma_violations().size());
      points += static_cast<std::int64_t>(r.points.size());
    }
  }
  Outcome o;
  o.pass = violations == 0;
  o.detail = std::to_string(violations) + " points with min Newton slope above the min cycle slope through u1, over " +
             std::to_string(points) + " points (" + std::to_string(kRandomPoints) + " random each for n=7,8, p=3, seed " +
             std::to_string(kRandomSeed) + ", " + fmt(s.random_seconds) + "s)";
  return o;
}

Outcome criterion_remark(const SweepSet& s) {
  if (!s.error.empty()) return {false, "sweep aborted: " + s.error, false};
  std::int64_t equal = 0, points = 0;
  for (const auto* set : {&s.exhaustive, &s.random}) {
    for (const auto& r : *set) {
      points += static_cast<std::int64_t>(r.points.size());
      equal += static_cast<std::int64_t>(r.points.size() - r.remark_violations().size());
    }
  }
  Outcome o;
  o.gating = false;
  o.pass = true;
  o.detail = "min Newton slope = min cycle slope at " + std::to_string(equal) + "/" + std::to_string(points) +
             " points" + (equal == points ? "" : " [FLAGGED: equality does not always hold]");
  return o;
}

Outcome criterion_structural(const SweepSet& s) {
  if (!s.error.empty()) return {false, "sweep aborted: " + s.error};
  std::string problem;
  std::int64_t structural = 0, points = 0, prank_checked = 0;
  for (const auto* set : {&s.exhaustive, &s.random}) {
    for (const auto& r : *set) {
      structural += static_cast<std::int64_t>(r.structural_violations().size());
      points += static_cast<std::int64_t>(r.points.size());
    }
  }
  const auto ctx = witt::RingContext::make(3, 1, 24);
  if (a_number(zoo::module_N(ctx)) != 1) problem += " a(N)!=1";
  if (a_number(zoo::module_M(ctx, 2)) != 0) problem += " a(M(2))!=0";
  for (int n = 3; n <= 8; ++n) {
    const auto big = witt::RingContext::make(3, 1, zoo::default_precision(n, 1));
    std::vector<DieudonneDisplay> displays{zoo::supersingular_module(big, n)};
    for (int j = 1; j <= n / 2; ++j) displays.push_back(zoo::expected_module(big, n, j));
    for (std::int64_t code : {1, 7, 20, 55}) {
      displays.push_back(zoo::deformation_display(big, zoo::DeformationPoint::from_code(big, n, code)));
    }
    for (const auto& d : displays) {
      ++prank_checked;
      const int by_slopes = p_rank(d);
      if (by_slopes != stable_rank_of_frobenius(d) || by_slopes > d.rank() / 2 - static_cast<std::size_t>(a_number(d))) {
        problem += " p-rank n=" + std::to_string(n);
      }
    }
  }
  Outcome o;
  o.pass = structural == 0 && problem.empty();
  o.detail = std::to_string(structural) + "/" + std::to_string(points) +
             " sweep points fail display axioms, polarization or signature (1,n-1); a(N)=1, a(M(2))=0; p-rank = "
             "stable rank of F mod p on " +
             std::to_string(prank_checked) + " displays" + (problem.empty() ? "" : ";" + problem);
  return o;
}

Outcome criterion_doubled(const SweepSet& s) {
  if (!s.error.empty()) return {false, "sweep aborted: " + s.error};
  std::int64_t mismatches = 0, failures = 0, reruns = 0, points = 0;
  for (const auto* set : {&s.exhaustive, &s.random}) {
    for (const auto& r : *set) {
      mismatches += static_cast<std::int64_t>(r.doubled_precision_mismatches().size());
      failures += static_cast<std::int64_t>(r.precision_failures().size());
      points += static_cast<std::int64_t>(r.points.size());
      for (const auto& p : r.points) reruns += p.reran_at_doubled_precision;
    }
  }
  std::int64_t modules = 0;
  for (int n = 3; n <= 10; ++n) {
    const auto ctx = witt::RingContext::make(2, 1, zoo::default_precision(n, 1));
    const auto twice = ctx->with_precision(2 * ctx->precision());
    for (int j = 1; j <= n / 2; ++j) {
      ++modules;
      const auto display = zoo::expected_module(ctx, n, j);
      if (newton_slopes(display, false) != newton_slopes(display.lifted_to(twice), false)) ++mismatches;
    }
  }
  Outcome o;
  o.pass = mismatches == 0 && failures == 0;
  o.detail = std::to_string(mismatches) + " polygons change between N and 2N over " + std::to_string(points) +
             " sweep points and " + std::to_string(modules) + " catalog modules; " + std::to_string(failures) +
             " precision failures, " + std::to_string(reruns) + " reruns";
  return o;
}

}  // namespace

int main() {
  std::vector<std::pair<std::string, std::function<Outcome()>>> early = {
      {"catalog of admissible polygons", criterion_catalog},
      {"M(m) slopes by two routes", criterion_module_m},
      {"per-stratum modules", criterion_expected_modules},
  };
  bool all = true;
  int index = 1;
  auto report = [&](const std::string& name, const Outcome& o) {
    const bool ok = o.pass || !o.gating;
    all = all && ok;
    std::cout << (ok ? "PASS" : "FAIL") << " criterion " << index++ << " (" << name
              << "): " << o.detail << std::endl;
  };
  for (const auto& [name, fn] : early) report(name, fn());
  const auto sweeps = run_sweeps();
  report("exhaustive stratum agreement", criterion_sweeps(sweeps));
  report("cycle bound on the smallest slope", criterion_lemma(sweeps));
  report("equality rate of the cycle bound", criterion_remark(sweeps));
  report("structural invariants", criterion_structural(sweeps));
  report("doubled precision", criterion_doubled(sweeps));
  std::cout << (all ? "ALL CRITERIA PASS" : "SOME CRITERIA FAIL") << std::endl;
  return all ? 0 : 1;
}
