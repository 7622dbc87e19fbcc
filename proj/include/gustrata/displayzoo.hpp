#pragma once

// Constructors for the displays N, M(m), their direct sums, the per-stratum
// modules M(2h) + N^r, the supersingular module and the specialized universal
// deformations of the supersingular module.

#include <vector>

#include "gustrata/fcrystal.hpp"

namespace gustrata::zoo {

/// Precision used by the high-level drivers: 4 n d + 8.
inline int default_precision(int n, int d) { return 4 * n * d + 8; }

/// Rank 2: F v0 = -u0, F u0 = p v0, <u0, v0> = 1.
DieudonneDisplay module_N(const witt::ContextPtr& ctx);

/// Rank 2m, basis u1..um, v1..vm: F u1 = (-1)^m vm, F vk = u(k-1),
/// F v1 = p um, F uk = p v(k-1), <ui, vj> = (-1)^i delta_ij. Requires m >= 2.
DieudonneDisplay module_M(const witt::ContextPtr& ctx, int m);

/// Block-diagonal sum. Labels of the second summand that collide with the
/// first get the next free copy number.
DieudonneDisplay direct_sum(const DieudonneDisplay& first, const DieudonneDisplay& second);

/// N^r for r >= 1.
DieudonneDisplay power_of_N(const witt::ContextPtr& ctx, int r);

/// M(2h) + N^r with h = floor(n/2) + 1 - j and r = n - 2h, for 1 <= j <= floor(n/2).
DieudonneDisplay expected_module(const witt::ContextPtr& ctx, int n, int j);

/// M(n) for odd n, M(n-1) + N for even n; n >= 3.
DieudonneDisplay supersingular_module(const witt::ContextPtr& ctx, int n);

/// Which version of the deformation display to build.
///
/// AsPrinted transcribes the relations literally: F v1 = p(u_n - s_n u1) and,
/// for even n, no v0 term in F u2. Polarized flips the sign of the s_n term in
/// F v1 and adds s0 v0 to F u2 for even n; these are the unique changes for
/// which the pairing satisfies <Fx, Fy> = p <x, y> at every point.
enum class DeformationConvention { Polarized, AsPrinted };

/// A field-valued point of the deformation space. Parameters are stored in
/// the order of parameter_indices(n).
struct DeformationPoint {
  int n = 0;
  std::vector<witt::FieldElement> params;

  /// Odd n: 2, 3, ..., n. Even n: 0, 2, 3, ..., n-1. Always n - 1 entries.
  static std::vector<int> parameter_indices(int n);
  /// s_index; throws InvalidArgument for an index that is not a coordinate.
  const witt::FieldElement& s(int index) const;
  /// All-zero point.
  static DeformationPoint zero(const witt::ContextPtr& ctx, int n);
  /// Point whose i-th parameter is FieldElement::from_index(ctx, digit i of
  /// code in base p^d), least significant digit first.
  static DeformationPoint from_code(const witt::ContextPtr& ctx, int n, std::int64_t code);
};

DieudonneDisplay deformation_display(const witt::ContextPtr& ctx, const DeformationPoint& point,
                                     DeformationConvention convention = DeformationConvention::Polarized);

}  // namespace gustrata::zoo
