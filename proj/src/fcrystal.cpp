#include "gustrata/fcrystal.hpp"

#include <algorithm>
#include <set>

#include "gustrata/charpoly.hpp"
#include "gustrata/errors.hpp"

namespace gustrata {

using witt::FieldElement;

namespace {

using FieldRows = std::vector<std::vector<FieldElement>>;

std::string entry_name(const DieudonneDisplay& d, std::size_t i, std::size_t j) {
  return "(" + d.basis[i].name() + ", " + d.basis[j].name() + ")";
}

// In-place reduced row echelon form; returns pivot columns.
std::vector<std::size_t> row_reduce(FieldRows& rows) {
  std::vector<std::size_t> pivots;
  if (rows.empty()) return pivots;
  const std::size_t ncols = rows.front().size();
  std::size_t r = 0;
  for (std::size_t c = 0; c < ncols && r < rows.size(); ++c) {
    std::size_t pivot = r;
    while (pivot < rows.size() && rows[pivot][c].is_zero()) ++pivot;
    if (pivot == rows.size()) continue;
    std::swap(rows[r], rows[pivot]);
    const FieldElement inv = rows[r][c].inverse();
    for (auto& x : rows[r]) x *= inv;
    for (std::size_t k = 0; k < rows.size(); ++k) {
      if (k == r || rows[k][c].is_zero()) continue;
      const FieldElement factor = rows[k][c];
      for (std::size_t j = 0; j < ncols; ++j) rows[k][j] -= factor * rows[r][j];
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

FieldRows reduce_mod_p(const ScalarMatrix& m) {
  FieldRows rows(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) rows[i].push_back(m(i, j).reduce());
  }
  return rows;
}

std::size_t rank_of(FieldRows rows) { return row_reduce(rows).size(); }

// Basis of {x : M x = 0}.
FieldRows kernel_basis(FieldRows m, const witt::ContextPtr& ctx) {
  const std::size_t ncols = m.empty() ? 0 : m.front().size();
  const auto pivots = row_reduce(m);
  std::vector<bool> is_pivot(ncols, false);
  for (auto c : pivots) is_pivot[c] = true;
  FieldRows basis;
  for (std::size_t free = 0; free < ncols; ++free) {
    if (is_pivot[free]) continue;
    std::vector<FieldElement> x(ncols, FieldElement(ctx));
    x[free] = FieldElement::from_index(ctx, 1);
    for (std::size_t r = 0; r < pivots.size(); ++r) x[pivots[r]] = -m[r][free];
    basis.push_back(std::move(x));
  }
  return basis;
}

struct VerschiebungResult {
  std::optional<VerschiebungMatrix> matrix;
  bool singular = false;
  std::string failure;
};

VerschiebungResult try_verschiebung(const DieudonneDisplay& display) {
  const auto& ctx = display.context;
  const PadicScalar zero(ctx), one(ctx, 1), p(ctx, ctx->prime());
  const auto& a = display.frobenius;
  VerschiebungResult result;

  const PadicScalar det = determinant(a, zero, one);
  const auto det_val = det.valuation();
  if (!det_val) {
    result.singular = true;
    result.failure = "V not computable at this precision";
    return result;
  }
  const int v = *det_val;
  const PadicScalar unit_inverse = det.divide_by_p_power(v).inverse();
  const ScalarMatrix adj = adjugate(a, zero, one);

  ScalarMatrix out(a.rows(), a.cols(), zero);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const PadicScalar numerator = p * adj(i, j);
      const auto w = numerator.valuation();
      if (w && *w < v) {
        result.failure = "p A^-1 not integral at entry " + entry_name(display, i, j) + ", valuation " +
                         std::to_string(*w - v);
        return result;
      }
      const PadicScalar integral = w ? numerator.divide_by_p_power(v) : zero;
      out(i, j) = (integral * unit_inverse).frobenius(-1);
    }
  }
  result.matrix = VerschiebungMatrix{std::move(out), ctx->precision() - v};
  return result;
}

bool vanishes_below(const PadicScalar& x, int precision) {
  const auto v = x.valuation();
  return !v || *v >= precision;
}

}  // namespace

BasisLabel BasisLabel::parse(const std::string& text) {
  auto digits = [](const std::string& s) {
    return !s.empty() && s.size() < 9 && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
  };
  if (text.size() < 2 || (text[0] != 'u' && text[0] != 'v')) throw InvalidArgument("bad basis label '" + text + "'");
  const auto underscore = text.find('_');
  const std::string index = text.substr(1, underscore == std::string::npos ? std::string::npos : underscore - 1);
  const std::string copy = underscore == std::string::npos ? "0" : text.substr(underscore + 1);
  if (!digits(index) || !digits(copy)) throw InvalidArgument("bad basis label '" + text + "'");
  return {text[0] == 'u' ? Family::U : Family::V, std::stoi(index), std::stoi(copy)};
}

std::size_t DieudonneDisplay::index_of(const BasisLabel& label) const {
  for (std::size_t i = 0; i < basis.size(); ++i) {
    if (basis[i] == label) return i;
  }
  throw InvalidArgument("no basis vector " + label.name());
}

DieudonneDisplay DieudonneDisplay::lifted_to(const witt::ContextPtr& target) const {
  DieudonneDisplay out = *this;
  out.context = target;
  out.frobenius = frobenius.map([&](const PadicScalar& x) { return x.lift_to(target); });
  out.pairing = pairing.map([&](const PadicScalar& x) { return x.lift_to(target); });
  return out;
}

bool DieudonneDisplay::operator==(const DieudonneDisplay& other) const {
  return *context == *other.context && basis == other.basis && frobenius == other.frobenius &&
         pairing == other.pairing && u_indices == other.u_indices && v_indices == other.v_indices;
}

VerschiebungMatrix verschiebung(const DieudonneDisplay& display) {
  auto result = try_verschiebung(display);
  if (result.singular) throw PrecisionError(result.failure);
  if (!result.matrix) throw InvalidArgument(result.failure);
  return std::move(*result.matrix);
}

bool ValidationReport::ok() const {
  return std::all_of(checks.begin(), checks.end(), [](const ValidationCheck& c) { return c.passed; });
}

const ValidationCheck* ValidationReport::find(const std::string& name) const {
  for (const auto& c : checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

ValidationReport validate_display(const DieudonneDisplay& display) {
  ValidationReport report;
  const std::size_t n = display.rank();

  ValidationCheck shape{"shape", true, ""};
  std::set<std::string> names;
  for (const auto& b : display.basis) names.insert(b.name());
  std::vector<int> seen(n, 0);
  for (auto i : display.u_indices) {
    if (i < n) ++seen[i];
  }
  for (auto i : display.v_indices) {
    if (i < n) ++seen[i];
  }
  if (display.frobenius.rows() != n || display.frobenius.cols() != n || display.pairing.rows() != n ||
      display.pairing.cols() != n) {
    shape = {"shape", false, "matrix dimensions do not match the basis"};
  } else if (names.size() != n) {
    shape = {"shape", false, "basis labels are not distinct"};
  } else if (std::any_of(seen.begin(), seen.end(), [](int c) { return c != 1; })) {
    shape = {"shape", false, "grading is not a partition of the basis"};
  }
  report.checks.push_back(shape);
  if (!shape.passed) return report;

  // Entries are elements of W_N by construction.
  report.checks.push_back({"frobenius_integral", true, ""});

  const auto v = try_verschiebung(display);
  report.checks.push_back({"v_integral", v.matrix.has_value(), v.failure});

  ValidationCheck alternating{"pairing_alternating", true, ""};
  for (std::size_t i = 0; i < n && alternating.passed; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      if (!(display.pairing(i, j) + display.pairing(j, i)).is_zero() ||
          (i == j && !display.pairing(i, i).is_zero())) {
        alternating = {"pairing_alternating", false, "J^T != -J at entry " + entry_name(display, i, j)};
        break;
      }
    }
  }
  report.checks.push_back(alternating);

  const auto& ctx = display.context;
  const auto det_j = determinant(display.pairing, PadicScalar(ctx), PadicScalar(ctx, 1)).valuation();
  report.checks.push_back(
      {"pairing_unimodular", det_j && *det_j == 0,
       det_j && *det_j == 0 ? "" : "det J has valuation " + (det_j ? std::to_string(*det_j) : ">=N")});

  std::vector<bool> is_u(n, false);
  for (auto i : display.u_indices) is_u[i] = true;
  ValidationCheck graded{"grading_antidiagonal", true, ""};
  for (std::size_t j = 0; j < n && graded.passed; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      if (is_u[i] == is_u[j] && !display.frobenius(i, j).is_zero()) {
        graded = {"grading_antidiagonal", false,
                  "F maps " + display.basis[j].name() + " into its own eigenspace (" + display.basis[i].name() + ")"};
        break;
      }
    }
  }
  report.checks.push_back(graded);
  return report;
}

ScalarMatrix linearized_frobenius(const DieudonneDisplay& display) {
  ScalarMatrix product = display.frobenius;
  for (int k = 1; k < display.context->degree(); ++k) {
    product = product * display.frobenius.map([k](const PadicScalar& x) { return x.frobenius(k); });
  }
  return product;
}

namespace {

NewtonPolygon slopes_at_working_precision(const DieudonneDisplay& display) {
  const auto& ctx = display.context;
  const auto chi = charpoly_berkowitz(linearized_frobenius(display), PadicScalar(ctx), PadicScalar(ctx, 1));
  std::vector<std::optional<int>> vals;
  vals.reserve(chi.size());
  for (const auto& c : chi) vals.push_back(c.valuation());
  return newton_polygon_from_valuations(vals).scaled(Rational(1, ctx->degree()));
}

}  // namespace

NewtonPolygon newton_slopes(const DieudonneDisplay& display, bool verify_doubled) {
  NewtonPolygon polygon = slopes_at_working_precision(display);
  if (verify_doubled) {
    const auto doubled = display.context->with_precision(2 * display.context->precision());
    const NewtonPolygon check = slopes_at_working_precision(display.lifted_to(doubled));
    if (!(check == polygon)) {
      throw PrecisionError("insufficient precision: slopes " + polygon.to_string() + " at N but " + check.to_string() +
                           " at 2N");
    }
  }
  return polygon;
}

std::vector<PolarizationViolation> polarization_check(const DieudonneDisplay& display) {
  const VerschiebungMatrix v = verschiebung(display);
  const ScalarMatrix lhs = display.frobenius.transpose() * display.pairing;  // <F e_i, e_j>
  const ScalarMatrix inner = display.pairing * v.matrix;                     // <e_i, V e_j>
  std::vector<PolarizationViolation> out;
  for (std::size_t i = 0; i < lhs.rows(); ++i) {
    for (std::size_t j = 0; j < lhs.cols(); ++j) {
      PadicScalar diff = lhs(i, j) - inner(i, j).frobenius(1);
      if (!vanishes_below(diff, v.precision)) out.push_back({i, j, std::move(diff)});
    }
  }
  return out;
}

int a_number(const DieudonneDisplay& display) {
  const auto& ctx = display.context;
  const VerschiebungMatrix v = verschiebung(display);
  if (v.precision < 1) throw PrecisionError("V mod p not known at this precision");

  FieldRows ker_f = kernel_basis(reduce_mod_p(display.frobenius), ctx);
  for (auto& vec : ker_f) {
    for (auto& x : vec) x = x.frobenius(-1);
  }
  FieldRows ker_v = kernel_basis(reduce_mod_p(v.matrix), ctx);
  for (auto& vec : ker_v) {
    for (auto& x : vec) x = x.frobenius(1);
  }
  const std::size_t dim_f = ker_f.size(), dim_v = ker_v.size();
  FieldRows both = std::move(ker_f);
  both.insert(both.end(), ker_v.begin(), ker_v.end());
  return static_cast<int>(dim_f + dim_v - rank_of(std::move(both)));
}

int p_rank(const DieudonneDisplay& display) { return newton_slopes(display).multiplicity(Rational(0)); }

std::pair<int, int> signature(const DieudonneDisplay& display) {
  const VerschiebungMatrix v = verschiebung(display);
  if (v.precision < 1) throw PrecisionError("V mod p not known at this precision");
  const FieldRows image = reduce_mod_p(v.matrix);
  auto part = [&](const std::vector<std::size_t>& rows) {
    FieldRows sub;
    for (auto i : rows) sub.push_back(image[i]);
    return static_cast<int>(rows.size() - rank_of(std::move(sub)));
  };
  return {part(display.u_indices), part(display.v_indices)};
}

}  // namespace gustrata
