#pragma once

// Division-free characteristic polynomial (Berkowitz), usable over rings with
// zero divisors such as Z/p^N.

#include <stdexcept>
#include <vector>

#include "gustrata/matrix.hpp"

namespace gustrata {

/// Coefficients of det(x I - A), ascending; the result has size n + 1 and its
/// last entry is one.
template <class T>
std::vector<T> charpoly_berkowitz(const Matrix<T>& a, const T& zero, const T& one) {
  if (a.rows() != a.cols()) throw std::invalid_argument("charpoly needs a square matrix");
  const std::size_t n = a.rows();

  // poly holds the characteristic polynomial of the leading r x r block,
  // descending (poly[0] = 1).
  std::vector<T> poly{one};
  for (std::size_t r = 0; r < n; ++r) {
    // Toeplitz column: 1, -a_rr, -R C, -R S C, ..., -R S^{r-1} C where S is the
    // leading r x r block, R its row r, C its column r.
    std::vector<T> toeplitz;
    toeplitz.reserve(r + 2);
    toeplitz.push_back(one);
    toeplitz.push_back(zero - a(r, r));
    std::vector<T> vec(r, zero);  // S^k C
    for (std::size_t i = 0; i < r; ++i) vec[i] = a(i, r);
    for (std::size_t k = 0; k < r; ++k) {
      T dot = zero;
      for (std::size_t i = 0; i < r; ++i) dot += a(r, i) * vec[i];
      toeplitz.push_back(zero - dot);
      if (k + 1 < r) {
        std::vector<T> next(r, zero);
        for (std::size_t i = 0; i < r; ++i) {
          for (std::size_t j = 0; j < r; ++j) next[i] += a(i, j) * vec[j];
        }
        vec = std::move(next);
      }
    }
    std::vector<T> next(r + 2, zero);
    for (std::size_t i = 0; i < r + 2; ++i) {
      for (std::size_t j = 0; j <= r && j <= i; ++j) next[i] += toeplitz[i - j] * poly[j];
    }
    poly = std::move(next);
  }
  return std::vector<T>(poly.rbegin(), poly.rend());
}

template <class T>
T determinant(const Matrix<T>& a, const T& zero, const T& one) {
  const auto chi = charpoly_berkowitz(a, zero, one);
  return a.rows() % 2 == 0 ? chi.front() : zero - chi.front();
}

/// adj(A) with A adj(A) = det(A) I, from Cayley-Hamilton; division-free.
template <class T>
Matrix<T> adjugate(const Matrix<T>& a, const T& zero, const T& one) {
  const std::size_t n = a.rows();
  const auto chi = charpoly_berkowitz(a, zero, one);
  // Q = A^{n-1} + c_{n-1} A^{n-2} + ... + c_1 I (Horner), adj = (-1)^{n+1} Q.
  Matrix<T> q = Matrix<T>::identity(n, zero, one);
  for (std::size_t k = n - 1; k >= 1; --k) {
    q = a * q;
    for (std::size_t i = 0; i < n; ++i) q(i, i) += chi[k];
  }
  if (n % 2 == 0) q = q.map([&](const T& x) { return zero - x; });
  return q;
}

}  // namespace gustrata
