#include "gustrata/displayzoo.hpp"

#include <algorithm>
#include <string>

#include "gustrata/errors.hpp"

namespace gustrata::zoo {

using witt::ContextPtr;
using witt::FieldElement;

namespace {

// Builder that addresses entries by label: set_image(x, y, c) means the
// y-coordinate of F x is c.
class DisplayBuilder {
 public:
  DisplayBuilder(const ContextPtr& ctx, std::vector<BasisLabel> basis) {
    display_.context = ctx;
    display_.basis = std::move(basis);
    const std::size_t n = display_.basis.size();
    display_.frobenius = ScalarMatrix(n, n, PadicScalar(ctx));
    display_.pairing = ScalarMatrix(n, n, PadicScalar(ctx));
    for (std::size_t i = 0; i < n; ++i) {
      (display_.basis[i].family == Family::U ? display_.u_indices : display_.v_indices).push_back(i);
    }
  }

  void add_image(const BasisLabel& x, const BasisLabel& y, const PadicScalar& c) {
    auto& entry = display_.frobenius(display_.index_of(y), display_.index_of(x));
    entry += c;
  }

  void set_pairing(const BasisLabel& x, const BasisLabel& y, const PadicScalar& c) {
    display_.pairing(display_.index_of(x), display_.index_of(y)) = c;
    display_.pairing(display_.index_of(y), display_.index_of(x)) = -c;
  }

  DieudonneDisplay build() && { return std::move(display_); }

 private:
  DieudonneDisplay display_;
};

BasisLabel u(int i) { return {Family::U, i}; }
BasisLabel v(int i) { return {Family::V, i}; }

std::vector<BasisLabel> m_basis(int m) {
  std::vector<BasisLabel> basis;
  for (int i = 1; i <= m; ++i) basis.push_back(u(i));
  for (int i = 1; i <= m; ++i) basis.push_back(v(i));
  return basis;
}

PadicScalar sign(const ContextPtr& ctx, int exponent) { return PadicScalar(ctx, exponent % 2 == 0 ? 1 : -1); }

}  // namespace

DieudonneDisplay module_N(const ContextPtr& ctx) {
  DisplayBuilder b(ctx, {u(0), v(0)});
  const PadicScalar one(ctx, 1), p(ctx, ctx->prime());
  b.add_image(v(0), u(0), -one);
  b.add_image(u(0), v(0), p);  // u0 = V v0
  b.set_pairing(u(0), v(0), one);
  return std::move(b).build();
}

DieudonneDisplay module_M(const ContextPtr& ctx, int m) {
  if (m < 2) throw InvalidArgument("M(m) needs m >= 2, got " + std::to_string(m));
  DisplayBuilder b(ctx, m_basis(m));
  const PadicScalar one(ctx, 1), p(ctx, ctx->prime());
  b.add_image(u(1), v(m), sign(ctx, m));
  for (int k = 2; k <= m; ++k) b.add_image(v(k), u(k - 1), one);
  b.add_image(v(1), u(m), p);  // v1 = V um
  for (int k = 2; k <= m; ++k) b.add_image(u(k), v(k - 1), p);  // uk = V v(k-1)
  for (int i = 1; i <= m; ++i) b.set_pairing(u(i), v(i), sign(ctx, i));
  return std::move(b).build();
}

DieudonneDisplay direct_sum(const DieudonneDisplay& first, const DieudonneDisplay& second) {
  if (!(*first.context == *second.context)) throw InvalidArgument("direct_sum: context mismatch");
  const std::size_t n1 = first.rank(), n = n1 + second.rank();
  DieudonneDisplay out;
  out.context = first.context;
  out.basis = first.basis;
  for (BasisLabel label : second.basis) {
    while (std::find(out.basis.begin(), out.basis.end(), label) != out.basis.end()) ++label.copy;
    out.basis.push_back(label);
  }
  const PadicScalar zero(first.context);
  out.frobenius = ScalarMatrix(n, n, zero);
  out.pairing = ScalarMatrix(n, n, zero);
  auto place = [](ScalarMatrix& dst, const ScalarMatrix& src, std::size_t offset) {
    for (std::size_t i = 0; i < src.rows(); ++i) {
      for (std::size_t j = 0; j < src.cols(); ++j) dst(offset + i, offset + j) = src(i, j);
    }
  };
  place(out.frobenius, first.frobenius, 0);
  place(out.frobenius, second.frobenius, n1);
  place(out.pairing, first.pairing, 0);
  place(out.pairing, second.pairing, n1);
  out.u_indices = first.u_indices;
  out.v_indices = first.v_indices;
  for (auto i : second.u_indices) out.u_indices.push_back(n1 + i);
  for (auto i : second.v_indices) out.v_indices.push_back(n1 + i);
  return out;
}

DieudonneDisplay power_of_N(const ContextPtr& ctx, int r) {
  if (r < 1) throw InvalidArgument("N^r needs r >= 1");
  DieudonneDisplay out = module_N(ctx);
  for (int i = 1; i < r; ++i) out = direct_sum(out, module_N(ctx));
  return out;
}

DieudonneDisplay expected_module(const ContextPtr& ctx, int n, int j) {
  if (n < 3) throw InvalidArgument("expected_module needs n >= 3");
  if (j < 1 || j > n / 2) {
    throw InvalidArgument("j = " + std::to_string(j) + " out of range 1.." + std::to_string(n / 2));
  }
  const int h = n / 2 + 1 - j;
  const int r = n - 2 * h;
  DieudonneDisplay out = module_M(ctx, 2 * h);
  if (r > 0) out = direct_sum(out, power_of_N(ctx, r));
  return out;
}

DieudonneDisplay supersingular_module(const ContextPtr& ctx, int n) {
  if (n < 3) throw InvalidArgument("supersingular_module needs n >= 3");
  if (n % 2 == 1) return module_M(ctx, n);
  return direct_sum(module_M(ctx, n - 1), module_N(ctx));
}

std::vector<int> DeformationPoint::parameter_indices(int n) {
  std::vector<int> out;
  if (n % 2 == 0) out.push_back(0);
  const int top = n % 2 == 1 ? n : n - 1;
  for (int i = 2; i <= top; ++i) out.push_back(i);
  return out;
}

const FieldElement& DeformationPoint::s(int index) const {
  const auto indices = parameter_indices(n);
  const auto it = std::find(indices.begin(), indices.end(), index);
  if (it == indices.end()) {
    throw InvalidArgument("s" + std::to_string(index) + " is not a coordinate for n = " + std::to_string(n));
  }
  return params.at(static_cast<std::size_t>(it - indices.begin()));
}

DeformationPoint DeformationPoint::zero(const ContextPtr& ctx, int n) {
  return {n, std::vector<FieldElement>(parameter_indices(n).size(), FieldElement(ctx))};
}

DeformationPoint DeformationPoint::from_code(const ContextPtr& ctx, int n, std::int64_t code) {
  DeformationPoint point{n, {}};
  const std::int64_t q = ctx->residue_field_size();
  for (std::size_t i = 0; i < parameter_indices(n).size(); ++i) {
    point.params.push_back(FieldElement::from_index(ctx, code % q));
    code /= q;
  }
  return point;
}

DieudonneDisplay deformation_display(const ContextPtr& ctx, const DeformationPoint& point,
                                     DeformationConvention convention) {
  const int n = point.n;
  if (n < 3) throw InvalidArgument("deformation needs n >= 3");
  if (point.params.size() != DeformationPoint::parameter_indices(n).size()) {
    throw InvalidArgument("deformation point for n = " + std::to_string(n) + " needs " + std::to_string(n - 1) +
                          " parameters, got " + std::to_string(point.params.size()));
  }
  for (const auto& s : point.params) {
    if (s.context()->prime() != ctx->prime() || s.context()->degree() != ctx->degree()) {
      throw InvalidArgument("deformation parameter outside the residue field of the context");
    }
  }
  auto lift = [&](int index) { return witt::teichmuller(FieldElement(ctx, point.s(index).coords())); };

  const bool even = n % 2 == 0;
  const int m = even ? n - 1 : n;  // size of the M(m) block
  DieudonneDisplay base = supersingular_module(ctx, n);
  DisplayBuilder b(ctx, base.basis);
  const PadicScalar one(ctx, 1), p(ctx, ctx->prime());

  b.add_image(u(1), v(m), -one);
  b.add_image(u(2), v(1), p);
  for (int j = 2; j <= m; ++j) b.add_image(u(2), v(j), p * sign(ctx, j) * lift(j));
  for (int k = 3; k <= m; ++k) b.add_image(u(k), v(k - 1), p);
  const PadicScalar sn = convention == DeformationConvention::Polarized ? lift(m) : -lift(m);
  b.add_image(v(1), u(m), p);
  b.add_image(v(1), u(1), p * sn);
  b.add_image(v(2), u(1), one);
  for (int k = 3; k <= m; ++k) {
    b.add_image(v(k), u(k - 1), one);
    b.add_image(v(k), u(1), lift(k - 1));
  }
  if (even) {
    const PadicScalar s0 = lift(0);
    b.add_image(v(0), u(0), -one);
    b.add_image(v(0), u(1), -s0);
    b.add_image(u(0), v(0), p);
    if (convention == DeformationConvention::Polarized) b.add_image(u(2), v(0), p * s0);
  }
  DieudonneDisplay out = std::move(b).build();
  out.pairing = base.pairing;
  return out;
}

}  // namespace gustrata::zoo
