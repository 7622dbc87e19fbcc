#include "gustrata/wittring.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "gustrata/errors.hpp"

namespace gustrata::witt {

namespace {

using Poly = std::vector<std::int64_t>;  // ascending, over F_p

std::int64_t mulmod(std::int64_t a, std::int64_t b, std::int64_t p) {
  return static_cast<std::int64_t>(static_cast<__int128>(a) * b % p);
}

std::int64_t powmod(std::int64_t a, std::int64_t e, std::int64_t p) {
  std::int64_t r = 1 % p;
  a %= p;
  while (e > 0) {
    if (e & 1) r = mulmod(r, a, p);
    a = mulmod(a, a, p);
    e >>= 1;
  }
  return r;
}

void trim(Poly& f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
}

Poly poly_mod(Poly a, const Poly& m, std::int64_t p) {
  trim(a);
  const std::size_t dm = m.size() - 1;
  const std::int64_t lead_inv = powmod(m.back(), p - 2, p);
  while (a.size() > dm) {
    const std::int64_t c = mulmod(a.back(), lead_inv, p);
    const std::size_t shift = a.size() - 1 - dm;
    for (std::size_t i = 0; i <= dm; ++i) {
      a[shift + i] = ((a[shift + i] - mulmod(c, m[i], p)) % p + p) % p;
    }
    trim(a);
  }
  return a;
}

Poly poly_mulmod(const Poly& a, const Poly& b, const Poly& m, std::int64_t p) {
  if (a.empty() || b.empty()) return {};
  Poly c(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) c[i + j] = (c[i + j] + mulmod(a[i], b[j], p)) % p;
  }
  return poly_mod(std::move(c), m, p);
}

Poly poly_gcd(Poly a, Poly b, std::int64_t p) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    Poly r = poly_mod(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

// Degree-d reduction of a convolution: theta^d = -sum f_i theta^i.
void reduce_by_poly(std::vector<mpz_class>& c, const std::vector<std::int64_t>& f, int d) {
  for (int k = static_cast<int>(c.size()) - 1; k >= d; --k) {
    if (c[k] == 0) continue;
    for (int i = 0; i < d; ++i) {
      if (f[i] != 0) c[k - d + i] -= c[k] * f[i];
    }
    c[k] = 0;
  }
  c.resize(d);
}

}  // namespace

bool is_prime(std::int64_t n) {
  if (n < 2) return false;
  for (std::int64_t k = 2; k * k <= n; ++k) {
    if (n % k == 0) return false;
  }
  return true;
}

bool is_irreducible_mod_p(const std::vector<std::int64_t>& poly, std::int64_t p) {
  Poly f = poly;
  trim(f);
  const int d = static_cast<int>(f.size()) - 1;
  if (d < 1) return false;
  if (d == 1) return true;
  // Ben-Or: f is irreducible iff gcd(f, x^(p^i) - x) = 1 for 1 <= i <= d/2.
  Poly xp = {0, 1};
  for (int i = 1; i <= d / 2; ++i) {
    Poly base = xp;
    Poly acc = {1};
    for (std::int64_t e = p; e > 0; e >>= 1) {
      if (e & 1) acc = poly_mulmod(acc, base, f, p);
      base = poly_mulmod(base, base, f, p);
    }
    xp = acc;
    Poly g = xp;
    g.resize(std::max<std::size_t>(g.size(), 2), 0);
    g[1] = (g[1] - 1 + p) % p;
    if (poly_gcd(f, g, p).size() > 1) return false;
  }
  return true;
}

std::vector<std::int64_t> smallest_irreducible(std::int64_t p, int d) {
  std::int64_t count = 1;
  for (int i = 0; i < d; ++i) count *= p;
  for (std::int64_t code = 0; code < count; ++code) {
    std::vector<std::int64_t> f(d + 1, 0);
    std::int64_t rest = code;
    for (int i = 0; i < d; ++i) {
      f[i] = rest % p;
      rest /= p;
    }
    f[d] = 1;
    if (is_irreducible_mod_p(f, p)) return f;
  }
  throw Error("no irreducible polynomial found");  // unreachable for prime p
}

RingContext::RingContext(std::int64_t p, int d, int precision) : p_(p), d_(d), n_(precision) {
  q_ = 1;
  for (int i = 0; i < d; ++i) q_ *= p;
  mpz_ui_pow_ui(pn_.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(precision));
  poly_ = smallest_irreducible(p, d);
}

ContextPtr RingContext::make(std::int64_t p, int d, int precision) {
  if (!is_prime(p)) throw InvalidArgument("p = " + std::to_string(p) + " is not prime");
  if (d < 1) throw InvalidArgument("degree d must be >= 1");
  if (precision < 1) throw InvalidArgument("precision N must be >= 1");
  if (p > (std::int64_t{1} << 31)) throw CapacityError("p exceeds 2^31");
  const double bits_q = d * std::log2(static_cast<double>(p));
  if (d > 64 || bits_q > 60) throw CapacityError("residue field p^d exceeds 2^60");
  const double bits = precision * std::log2(static_cast<double>(p));
  if (bits > kMaxModulusBits) {
    throw CapacityError("p^N needs " + std::to_string(static_cast<long>(bits)) + " bits; capacity is " +
                        std::to_string(kMaxModulusBits));
  }
  std::shared_ptr<RingContext> ctx(new RingContext(p, d, precision));
  ctx->init_frobenius(ctx);
  return ctx;
}

ContextPtr RingContext::with_precision(int precision) const { return make(p_, d_, precision); }

void RingContext::init_frobenius(const ContextPtr& self) {
  frob_.assign(d_, std::vector<std::vector<mpz_class>>(d_, std::vector<mpz_class>(d_, 0)));
  for (int i = 0; i < d_; ++i) frob_[0][i][i] = 1;
  if (d_ == 1) return;

  std::vector<mpz_class> theta_coords(d_, 0);
  theta_coords[1] = 1;
  const PadicScalar theta(self, theta_coords);

  // sigma(theta) is the root of f congruent to theta^p; Hensel-lift it.
  PadicScalar y = theta.pow(mpz_class(static_cast<long>(p_)));
  for (int iter = 0; iter < 2 * n_ + 4; ++iter) {
    PadicScalar fy(self);
    PadicScalar dfy(self);
    for (int i = d_; i >= 0; --i) {
      fy = fy * y + PadicScalar(self, poly_[i]);
      if (i >= 1) dfy = dfy * y + PadicScalar(self, poly_[i] * i);
    }
    if (fy.is_zero()) break;
    y -= fy * dfy.inverse();
  }

  std::vector<PadicScalar> images;  // sigma(theta^i)
  PadicScalar power(self, 1);
  for (int i = 0; i < d_; ++i) {
    images.push_back(power);
    power *= y;
  }
  for (int k = 1; k < d_; ++k) {
    for (int i = 0; i < d_; ++i) {
      // sigma^k(theta^i) = sigma(sigma^{k-1}(theta^i)) = sum_l c_l sigma(theta^l)
      const auto& prev = frob_[k - 1][i];
      PadicScalar acc(self);
      for (int l = 0; l < d_; ++l) {
        if (prev[l] == 0) continue;
        std::vector<mpz_class> scaled(images[l].coords());
        for (auto& c : scaled) c *= prev[l];
        acc += PadicScalar(self, std::move(scaled));
      }
      frob_[k][i] = acc.coords();
    }
  }
}

// ---------------------------------------------------------------------------

PadicScalar::PadicScalar(ContextPtr ctx) : ctx_(std::move(ctx)), coords_(ctx_->degree(), 0) {}

PadicScalar::PadicScalar(ContextPtr ctx, std::int64_t value) : PadicScalar(std::move(ctx)) {
  coords_[0] = static_cast<long>(value);
  normalize();
}

PadicScalar::PadicScalar(ContextPtr ctx, std::vector<mpz_class> coords)
    : ctx_(std::move(ctx)), coords_(std::move(coords)) {
  if (static_cast<int>(coords_.size()) != ctx_->degree()) {
    throw InvalidArgument("scalar needs exactly d coordinates");
  }
  normalize();
}

void PadicScalar::normalize() {
  for (auto& c : coords_) {
    mpz_fdiv_r(c.get_mpz_t(), c.get_mpz_t(), ctx_->modulus().get_mpz_t());
  }
}

PadicScalar& PadicScalar::operator+=(const PadicScalar& rhs) {
  for (std::size_t i = 0; i < coords_.size(); ++i) coords_[i] += rhs.coords_[i];
  normalize();
  return *this;
}

PadicScalar& PadicScalar::operator-=(const PadicScalar& rhs) {
  for (std::size_t i = 0; i < coords_.size(); ++i) coords_[i] -= rhs.coords_[i];
  normalize();
  return *this;
}

PadicScalar& PadicScalar::operator*=(const PadicScalar& rhs) {
  const int d = ctx_->degree();
  if (d == 1) {
    coords_[0] *= rhs.coords_[0];
    normalize();
    return *this;
  }
  std::vector<mpz_class> c(2 * d - 1, 0);
  for (int i = 0; i < d; ++i) {
    if (coords_[i] == 0) continue;
    for (int j = 0; j < d; ++j) c[i + j] += coords_[i] * rhs.coords_[j];
  }
  reduce_by_poly(c, ctx_->poly_, d);
  coords_ = std::move(c);
  normalize();
  return *this;
}

PadicScalar PadicScalar::operator-() const {
  PadicScalar r(ctx_);
  return r -= *this;
}

std::optional<int> PadicScalar::valuation() const {
  const mpz_class p(static_cast<long>(ctx_->prime()));
  int best = ctx_->precision();
  for (const auto& c : coords_) {
    if (c == 0) continue;
    mpz_class t = c;
    int v = 0;
    while (v < best && mpz_divisible_p(t.get_mpz_t(), p.get_mpz_t())) {
      t /= p;
      ++v;
    }
    best = std::min(best, v);
  }
  if (best >= ctx_->precision()) return std::nullopt;
  return best;
}

bool PadicScalar::is_zero() const {
  for (const auto& c : coords_) {
    if (c != 0) return false;
  }
  return true;
}

PadicScalar PadicScalar::pow(const mpz_class& exponent) const {
  PadicScalar result(ctx_, 1);
  PadicScalar base = *this;
  mpz_class e = exponent;
  while (e > 0) {
    if (mpz_odd_p(e.get_mpz_t())) result *= base;
    e >>= 1;
    if (e > 0) base *= base;
  }
  return result;
}

PadicScalar PadicScalar::inverse() const {
  const auto v = valuation();
  if (!v) throw NotInvertible(ctx_->precision());
  if (*v > 0) throw NotInvertible(*v);
  // Inverse mod p in the residue field, then Newton: y <- y (2 - x y).
  PadicScalar y = reduce().inverse().lift();
  const PadicScalar two(ctx_, 2);
  for (int reached = 1; reached < ctx_->precision(); reached *= 2) y = y * (two - *this * y);
  return y;
}

PadicScalar PadicScalar::frobenius(int times) const {
  const int d = ctx_->degree();
  const int k = ((times % d) + d) % d;
  if (k == 0) return *this;
  std::vector<mpz_class> out(d, 0);
  const auto& images = ctx_->frob_[k];
  for (int i = 0; i < d; ++i) {
    if (coords_[i] == 0) continue;
    for (int l = 0; l < d; ++l) out[l] += coords_[i] * images[i][l];
  }
  return PadicScalar(ctx_, std::move(out));
}

FieldElement PadicScalar::reduce() const {
  const mpz_class p(static_cast<long>(ctx_->prime()));
  std::vector<std::int64_t> c(coords_.size());
  for (std::size_t i = 0; i < coords_.size(); ++i) {
    mpz_class r;
    mpz_fdiv_r(r.get_mpz_t(), coords_[i].get_mpz_t(), p.get_mpz_t());
    c[i] = r.get_si();
  }
  return FieldElement(ctx_, std::move(c));
}

PadicScalar PadicScalar::divide_by_p_power(int k) const {
  mpz_class pk;
  mpz_ui_pow_ui(pk.get_mpz_t(), static_cast<unsigned long>(ctx_->prime()), static_cast<unsigned long>(k));
  std::vector<mpz_class> out(coords_.size());
  for (std::size_t i = 0; i < coords_.size(); ++i) {
    if (!mpz_divisible_p(coords_[i].get_mpz_t(), pk.get_mpz_t())) {
      throw InvalidArgument("scalar not divisible by p^" + std::to_string(k));
    }
    mpz_divexact(out[i].get_mpz_t(), coords_[i].get_mpz_t(), pk.get_mpz_t());
  }
  return PadicScalar(ctx_, std::move(out));
}

PadicScalar PadicScalar::lift_to(const ContextPtr& target) const {
  if (target->prime() != ctx_->prime() || target->degree() != ctx_->degree()) {
    throw InvalidArgument("lift_to needs a context with the same p and d");
  }
  return PadicScalar(target, coords_);
}

// ---------------------------------------------------------------------------

FieldElement::FieldElement(ContextPtr ctx) : ctx_(std::move(ctx)), coords_(ctx_->degree(), 0) {}

FieldElement::FieldElement(ContextPtr ctx, std::vector<std::int64_t> coords)
    : ctx_(std::move(ctx)), coords_(std::move(coords)) {
  if (static_cast<int>(coords_.size()) != ctx_->degree()) {
    throw InvalidArgument("field element needs exactly d coordinates");
  }
  const std::int64_t p = ctx_->prime();
  for (auto& c : coords_) c = ((c % p) + p) % p;
}

FieldElement FieldElement::from_index(ContextPtr ctx, std::int64_t index) {
  if (index < 0 || index >= ctx->residue_field_size()) throw InvalidArgument("field index out of range");
  std::vector<std::int64_t> c(ctx->degree());
  for (auto& x : c) {
    x = index % ctx->prime();
    index /= ctx->prime();
  }
  return FieldElement(std::move(ctx), std::move(c));
}

std::int64_t FieldElement::index() const {
  std::int64_t r = 0;
  for (auto it = coords_.rbegin(); it != coords_.rend(); ++it) r = r * ctx_->prime() + *it;
  return r;
}

FieldElement& FieldElement::operator+=(const FieldElement& rhs) {
  const std::int64_t p = ctx_->prime();
  for (std::size_t i = 0; i < coords_.size(); ++i) coords_[i] = (coords_[i] + rhs.coords_[i]) % p;
  return *this;
}

FieldElement& FieldElement::operator-=(const FieldElement& rhs) {
  const std::int64_t p = ctx_->prime();
  for (std::size_t i = 0; i < coords_.size(); ++i) coords_[i] = (coords_[i] - rhs.coords_[i] + p) % p;
  return *this;
}

FieldElement& FieldElement::operator*=(const FieldElement& rhs) {
  const std::int64_t p = ctx_->prime();
  const int d = ctx_->degree();
  const auto& f = ctx_->defining_polynomial();
  std::vector<std::int64_t> c(2 * d - 1, 0);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) c[i + j] = (c[i + j] + mulmod(coords_[i], rhs.coords_[j], p)) % p;
  }
  for (int k = 2 * d - 2; k >= d; --k) {
    for (int i = 0; i < d; ++i) c[k - d + i] = ((c[k - d + i] - mulmod(c[k], f[i], p)) % p + p) % p;
    c[k] = 0;
  }
  c.resize(d);
  coords_ = std::move(c);
  return *this;
}

FieldElement FieldElement::operator-() const {
  FieldElement r(ctx_);
  return r -= *this;
}

bool FieldElement::is_zero() const {
  for (auto c : coords_) {
    if (c != 0) return false;
  }
  return true;
}

FieldElement FieldElement::pow(std::uint64_t exponent) const {
  FieldElement result(ctx_);
  result.coords_[0] = 1 % ctx_->prime();
  FieldElement base = *this;
  while (exponent > 0) {
    if (exponent & 1) result *= base;
    exponent >>= 1;
    if (exponent > 0) base *= base;
  }
  return result;
}

FieldElement FieldElement::inverse() const {
  if (is_zero()) throw NotInvertible(1);
  return pow(static_cast<std::uint64_t>(ctx_->residue_field_size() - 2));
}

FieldElement FieldElement::frobenius(int times) const {
  const int d = ctx_->degree();
  const int k = ((times % d) + d) % d;
  FieldElement r = *this;
  for (int i = 0; i < k; ++i) r = r.pow(static_cast<std::uint64_t>(ctx_->prime()));
  return r;
}

PadicScalar FieldElement::lift() const {
  std::vector<mpz_class> c(coords_.size());
  for (std::size_t i = 0; i < coords_.size(); ++i) c[i] = static_cast<long>(coords_[i]);
  return PadicScalar(ctx_, std::move(c));
}

PadicScalar frobenius(const PadicScalar& x) { return x.frobenius(1); }

std::optional<int> valuation(const PadicScalar& x) { return x.valuation(); }

PadicScalar teichmuller(const FieldElement& a) {
  const auto& ctx = a.context();
  const mpz_class q(static_cast<long>(ctx->residue_field_size()));
  PadicScalar y = a.lift();
  // Each application of y -> y^q gains at least one p-adic digit.
  for (int iter = 0; iter <= ctx->precision() + 1; ++iter) {
    PadicScalar next = y.pow(q);
    if (next == y) return y;
    y = std::move(next);
  }
  throw PrecisionError("Teichmuller iteration did not stabilize");
}

}  // namespace gustrata::witt
