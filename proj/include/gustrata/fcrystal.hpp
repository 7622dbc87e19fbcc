#pragma once

// Displayed Dieudonne modules over W_N(F_{p^d}) and their invariants.
//
// Conventions: F is sigma-semilinear, F(c x) = sigma(c) F(x), and column j of
// the Frobenius matrix A holds the coordinates of F(e_j). V is determined by
// FV = p, so its matrix is sigma^{-1}(p A^{-1}). The pairing Gram matrix J has
// J(i, j) = <e_i, e_j>.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gustrata/matrix.hpp"
#include "gustrata/newton.hpp"
#include "gustrata/wittring.hpp"

namespace gustrata {

using witt::PadicScalar;
using ScalarMatrix = Matrix<PadicScalar>;

enum class Family { U, V };

struct BasisLabel {
  Family family = Family::U;
  int index = 0;
  /// Distinguishes repeated summands in a direct sum: "u0", "u0_1", "u0_2", ...
  int copy = 0;

  std::string name() const {
    return (family == Family::U ? "u" : "v") + std::to_string(index) + (copy > 0 ? "_" + std::to_string(copy) : "");
  }
  bool operator==(const BasisLabel&) const = default;
  /// Parses "u3", "v0", "u0_2"; throws InvalidArgument otherwise.
  static BasisLabel parse(const std::string& text);
};

struct DieudonneDisplay {
  witt::ContextPtr context;
  std::vector<BasisLabel> basis;
  ScalarMatrix frobenius;
  ScalarMatrix pairing;
  /// Basis positions of the two O_L eigenspaces.
  std::vector<std::size_t> u_indices;
  std::vector<std::size_t> v_indices;

  std::size_t rank() const { return basis.size(); }
  /// Position of a label in the basis; throws InvalidArgument if absent.
  std::size_t index_of(const BasisLabel& label) const;
  /// Same entries reinterpreted in a context of equal (p, d) and other precision.
  DieudonneDisplay lifted_to(const witt::ContextPtr& target) const;
  bool operator==(const DieudonneDisplay& other) const;
};

/// The matrix of V together with the precision it is known to.
struct VerschiebungMatrix {
  ScalarMatrix matrix;
  int precision = 0;
};

/// sigma^{-1}(p A^{-1}). Throws PrecisionError("V not computable at this
/// precision") when det A vanishes mod p^N, and InvalidArgument when p A^{-1}
/// is not integral.
VerschiebungMatrix verschiebung(const DieudonneDisplay& display);

struct ValidationCheck {
  std::string name;
  bool passed = true;
  std::string detail;
};

struct ValidationReport {
  std::vector<ValidationCheck> checks;
  bool ok() const;
  const ValidationCheck* find(const std::string& name) const;
};

/// Checks: shape, frobenius_integral, v_integral, pairing_alternating,
/// pairing_unimodular, grading_antidiagonal.
ValidationReport validate_display(const DieudonneDisplay& display);

/// A Frobenius-twisted product A sigma(A) ... sigma^{d-1}(A): the matrix of
/// the linear map F^d.
ScalarMatrix linearized_frobenius(const DieudonneDisplay& display);

/// Newton slopes of (D, F). With verify_doubled the computation is repeated on
/// the display lifted to precision 2N and a PrecisionError is raised if the
/// two results differ.
NewtonPolygon newton_slopes(const DieudonneDisplay& display, bool verify_doubled = true);

struct PolarizationViolation {
  std::size_t i = 0;
  std::size_t j = 0;
  PadicScalar discrepancy;
};

/// Pairs (i, j) where <F e_i, e_j> - sigma(<e_i, V e_j>) is nonzero at the
/// precision to which V is known.
std::vector<PolarizationViolation> polarization_check(const DieudonneDisplay& display);

/// dim over F_{p^d} of ker(F mod p) intersected with ker(V mod p).
int a_number(const DieudonneDisplay& display);

/// Multiplicity of slope 0.
int p_rank(const DieudonneDisplay& display);

/// (dim of the u-part, dim of the v-part) of D / VD over the residue field.
std::pair<int, int> signature(const DieudonneDisplay& display);

}  // namespace gustrata
