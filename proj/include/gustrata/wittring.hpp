#pragma once

// Truncated Witt vectors W_N(F_{p^d}), modelled as the unramified degree-d
// extension of Z_p reduced mod p^N, in the power basis of a fixed monic
// polynomial that is irreducible mod p.

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include <gmpxx.h>

namespace gustrata::witt {

class RingContext;
using ContextPtr = std::shared_ptr<const RingContext>;

/// Largest supported bit size of p^N.
inline constexpr int kMaxModulusBits = 1 << 16;

bool is_prime(std::int64_t n);

/// Coefficients ascending, monic of degree poly.size() - 1, entries in [0, p).
bool is_irreducible_mod_p(const std::vector<std::int64_t>& poly, std::int64_t p);

/// Lexicographically smallest monic irreducible of degree d over F_p, comparing
/// the coefficient of x^{d-1} first. Returned ascending with the leading 1.
std::vector<std::int64_t> smallest_irreducible(std::int64_t p, int d);

class RingContext {
 public:
  /// Throws InvalidArgument for non-prime p or d, N < 1 and CapacityError when
  /// p^N or p^d exceed the supported sizes.
  static ContextPtr make(std::int64_t p, int d, int precision);

  std::int64_t prime() const { return p_; }
  int degree() const { return d_; }
  int precision() const { return n_; }
  /// p^d, the size of the residue field.
  std::int64_t residue_field_size() const { return q_; }
  /// p^N.
  const mpz_class& modulus() const { return pn_; }
  /// Ascending coefficients of the defining polynomial, leading 1 included.
  const std::vector<std::int64_t>& defining_polynomial() const { return poly_; }

  /// Same (p, d) and defining polynomial at another precision.
  ContextPtr with_precision(int precision) const;

  bool operator==(const RingContext& other) const {
    return p_ == other.p_ && d_ == other.d_ && n_ == other.n_;
  }

 private:
  RingContext(std::int64_t p, int d, int precision);
  void init_frobenius(const ContextPtr& self);

  friend class PadicScalar;

  std::int64_t p_;
  int d_;
  int n_;
  std::int64_t q_;
  mpz_class pn_;
  std::vector<std::int64_t> poly_;
  // frob_[k][i] holds the coordinates of sigma^k(theta^i), 0 <= k < d.
  std::vector<std::vector<std::vector<mpz_class>>> frob_;
};

class FieldElement;

/// Element of W_N(F_{p^d}). Value type; the context must outlive nothing since
/// it is shared.
class PadicScalar {
 public:
  explicit PadicScalar(ContextPtr ctx);
  PadicScalar(ContextPtr ctx, std::int64_t value);
  PadicScalar(ContextPtr ctx, std::vector<mpz_class> coords);

  const ContextPtr& context() const { return ctx_; }
  const std::vector<mpz_class>& coords() const { return coords_; }

  PadicScalar& operator+=(const PadicScalar& rhs);
  PadicScalar& operator-=(const PadicScalar& rhs);
  PadicScalar& operator*=(const PadicScalar& rhs);
  friend PadicScalar operator+(PadicScalar lhs, const PadicScalar& rhs) { return lhs += rhs; }
  friend PadicScalar operator-(PadicScalar lhs, const PadicScalar& rhs) { return lhs -= rhs; }
  friend PadicScalar operator*(PadicScalar lhs, const PadicScalar& rhs) { return lhs *= rhs; }
  PadicScalar operator-() const;
  bool operator==(const PadicScalar& rhs) const { return coords_ == rhs.coords_; }

  /// Throws NotInvertible when the valuation is positive.
  PadicScalar inverse() const;
  PadicScalar pow(const mpz_class& exponent) const;

  /// nullopt means "valuation >= N": zero at this precision.
  std::optional<int> valuation() const;
  bool is_zero() const;

  /// sigma^times; negative counts apply the inverse Frobenius.
  PadicScalar frobenius(int times = 1) const;
  FieldElement reduce() const;
  /// Exact division by p^k; every coordinate must be divisible by p^k. The
  /// result is only meaningful mod p^(N-k).
  PadicScalar divide_by_p_power(int k) const;
  /// Same representatives in a context of equal (p, d) and other precision.
  PadicScalar lift_to(const ContextPtr& target) const;

 private:
  void normalize();

  ContextPtr ctx_;
  std::vector<mpz_class> coords_;
};

/// Element of F_{p^d} = F_p[x]/(defining polynomial mod p).
class FieldElement {
 public:
  explicit FieldElement(ContextPtr ctx);
  FieldElement(ContextPtr ctx, std::vector<std::int64_t> coords);

  /// Element whose coordinates are the base-p digits of index, 0 <= index < p^d.
  static FieldElement from_index(ContextPtr ctx, std::int64_t index);
  std::int64_t index() const;

  const ContextPtr& context() const { return ctx_; }
  const std::vector<std::int64_t>& coords() const { return coords_; }

  FieldElement& operator+=(const FieldElement& rhs);
  FieldElement& operator-=(const FieldElement& rhs);
  FieldElement& operator*=(const FieldElement& rhs);
  friend FieldElement operator+(FieldElement lhs, const FieldElement& rhs) { return lhs += rhs; }
  friend FieldElement operator-(FieldElement lhs, const FieldElement& rhs) { return lhs -= rhs; }
  friend FieldElement operator*(FieldElement lhs, const FieldElement& rhs) { return lhs *= rhs; }
  FieldElement operator-() const;
  bool operator==(const FieldElement& rhs) const { return coords_ == rhs.coords_; }

  bool is_zero() const;
  FieldElement pow(std::uint64_t exponent) const;
  /// Throws NotInvertible(valuation 1) for zero.
  FieldElement inverse() const;
  /// x -> x^(p^times), times taken mod d.
  FieldElement frobenius(int times = 1) const;
  /// Lift with coordinates in [0, p).
  PadicScalar lift() const;

 private:
  ContextPtr ctx_;
  std::vector<std::int64_t> coords_;
};

PadicScalar frobenius(const PadicScalar& x);
std::optional<int> valuation(const PadicScalar& x);
/// The multiplicative lift: reduces to a and satisfies x^(p^d) = x mod p^N.
PadicScalar teichmuller(const FieldElement& a);

}  // namespace gustrata::witt
