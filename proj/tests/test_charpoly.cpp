#include "doctest.h"

#include <algorithm>
#include <numeric>
#include <random>

#include "gustrata/charpoly.hpp"
#include "gustrata/wittring.hpp"

using namespace gustrata;

namespace {

using IPoly = std::vector<std::int64_t>;  // ascending

IPoly mul(const IPoly& a, const IPoly& b) {
  IPoly c(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
  }
  return c;
}

int parity(const std::vector<std::size_t>& perm) {
  int inversions = 0;
  for (std::size_t i = 0; i < perm.size(); ++i) {
    for (std::size_t j = i + 1; j < perm.size(); ++j) inversions += perm[i] > perm[j];
  }
  return inversions % 2 ? -1 : 1;
}

// det(x I - A) by summing over all permutations.
IPoly leibniz_charpoly(const Matrix<std::int64_t>& a) {
  const std::size_t n = a.rows();
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  IPoly total(n + 1, 0);
  do {
    IPoly term{parity(perm)};
    for (std::size_t i = 0; i < n; ++i) {
      term = mul(term, perm[i] == i ? IPoly{-a(i, i), 1} : IPoly{-a(i, perm[i])});
    }
    for (std::size_t k = 0; k < term.size(); ++k) total[k] += term[k];
  } while (std::next_permutation(perm.begin(), perm.end()));
  return total;
}

std::int64_t leibniz_det(const Matrix<std::int64_t>& a) {
  const std::size_t n = a.rows();
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::int64_t total = 0;
  do {
    std::int64_t term = parity(perm);
    for (std::size_t i = 0; i < n; ++i) term *= a(i, perm[i]);
    total += term;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return total;
}

Matrix<std::int64_t> random_matrix(std::size_t n, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> dist(-4, 4);
  Matrix<std::int64_t> a(n, n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) a(i, j) = dist(rng);
  }
  return a;
}

// Cofactor matrix transposed, each minor by Leibniz.
Matrix<std::int64_t> cofactor_adjugate(const Matrix<std::int64_t>& a) {
  const std::size_t n = a.rows();
  Matrix<std::int64_t> adj(n, n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (n == 1) {
        adj(i, j) = 1;
        continue;
      }
      Matrix<std::int64_t> minor(n - 1, n - 1, 0);
      for (std::size_t r = 0, rr = 0; r < n; ++r) {
        if (r == i) continue;
        for (std::size_t c = 0, cc = 0; c < n; ++c) {
          if (c == j) continue;
          minor(rr, cc++) = a(r, c);
        }
        ++rr;
      }
      adj(j, i) = ((i + j) % 2 ? -1 : 1) * leibniz_det(minor);
    }
  }
  return adj;
}

}  // namespace

TEST_CASE("Berkowitz agrees with the Leibniz expansion over Z") {
  std::mt19937_64 rng(11);
  for (std::size_t n = 1; n <= 6; ++n) {
    for (int trial = 0; trial < 20; ++trial) {
      const auto a = random_matrix(n, rng);
      CHECK(charpoly_berkowitz<std::int64_t>(a, 0, 1) == leibniz_charpoly(a));
      CHECK(determinant<std::int64_t>(a, 0, 1) == leibniz_det(a));
    }
  }
}

TEST_CASE("adjugate agrees with cofactors") {
  std::mt19937_64 rng(12);
  for (std::size_t n = 1; n <= 5; ++n) {
    for (int trial = 0; trial < 10; ++trial) {
      const auto a = random_matrix(n, rng);
      CHECK(adjugate<std::int64_t>(a, 0, 1) == cofactor_adjugate(a));
    }
  }
}

TEST_CASE("Berkowitz over Z/p^N with zero divisors") {
  const auto ctx = witt::RingContext::make(2, 2, 6);
  const witt::PadicScalar zero(ctx), one(ctx, 1);
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 10; ++trial) {
    const auto ints = random_matrix(4, rng);
    Matrix<witt::PadicScalar> a(4, 4, zero);
    for (std::size_t i = 0; i < 4; ++i) {
      for (std::size_t j = 0; j < 4; ++j) a(i, j) = witt::PadicScalar(ctx, 2 * ints(i, j));
    }
    const auto chi = charpoly_berkowitz(a, zero, one);
    const auto expected = leibniz_charpoly(ints.map([](std::int64_t x) { return 2 * x; }));
    for (std::size_t k = 0; k < chi.size(); ++k) CHECK(chi[k] == witt::PadicScalar(ctx, expected[k]));
    const auto adj = adjugate(a, zero, one);
    const auto det = determinant(a, zero, one);
    CHECK(a * adj == Matrix<witt::PadicScalar>::identity(4, zero, det));
  }
}
