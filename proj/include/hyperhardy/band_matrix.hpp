#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "hyperhardy/errors.hpp"

namespace hyperhardy {

/// Symmetric band matrix stored by diagonals: band(k)[i] = A(i, i + k).
class SymBandMatrix {
 public:
  SymBandMatrix() = default;
  SymBandMatrix(std::size_t n, std::size_t bandwidth) : n_(n), p_(bandwidth), d_(bandwidth + 1) {
    for (std::size_t k = 0; k <= p_; ++k) d_[k].assign(n > k ? n - k : 0, 0.0);
  }

  std::size_t size() const noexcept { return n_; }
  std::size_t bandwidth() const noexcept { return p_; }

  double operator()(std::size_t i, std::size_t j) const {
    if (i > j) std::swap(i, j);
    const std::size_t k = j - i;
    return k > p_ ? 0.0 : d_[k][i];
  }

  /// Adds v to A(i, j) (and A(j, i)); |i - j| must not exceed the bandwidth.
  void add(std::size_t i, std::size_t j, double v) {
    if (i > j) std::swap(i, j);
    const std::size_t k = j - i;
    if (k > p_) throw ArgumentError("SymBandMatrix: entry outside band");
    d_[k][i] += v;
  }

  std::span<const double> band(std::size_t k) const { return d_[k]; }
  std::span<double> band(std::size_t k) { return d_[k]; }

  std::vector<double> multiply(std::span<const double> x) const {
    std::vector<double> y(n_, 0.0);
    for (std::size_t i = 0; i < n_; ++i) y[i] = d_[0][i] * x[i];
    for (std::size_t k = 1; k <= p_; ++k)
      for (std::size_t i = 0; i + k < n_; ++i) {
        y[i] += d_[k][i] * x[i + k];
        y[i + k] += d_[k][i] * x[i];
      }
    return y;
  }

  bool is_identity() const {
    for (double v : d_[0])
      if (v != 1.0) return false;
    for (std::size_t k = 1; k <= p_; ++k)
      for (double v : d_[k])
        if (v != 0.0) return false;
    return true;
  }

 private:
  std::size_t n_ = 0;
  std::size_t p_ = 0;
  std::vector<std::vector<double>> d_;
};

/// Banded LDL^T of (A - shift I) without pivoting.
///
/// Used both for Sturm counts (negative pivots = eigenvalues below the shift)
/// and as a solver when the shift lies below the spectrum.
class BandLDLT {
 public:
  BandLDLT(const SymBandMatrix& A, double shift) : n_(A.size()), p_(A.bandwidth()), D_(n_), L_(n_ * p_, 0.0) {
    const double tiny = 1e-300;
    for (std::size_t i = 0; i < n_; ++i) {
      const std::size_t j0 = i >= p_ ? i - p_ : 0;
      for (std::size_t j = j0; j < i; ++j) {
        double s = A(i, j);
        const std::size_t k0 = std::max(j0, j >= p_ ? j - p_ : std::size_t{0});
        for (std::size_t k = k0; k < j; ++k) s -= l(i, k) * l(j, k) * D_[k];
        l(i, j) = s / D_[j];
      }
      double d = A(i, i) - shift;
      for (std::size_t k = j0; k < i; ++k) d -= l(i, k) * l(i, k) * D_[k];
      if (d == 0.0) d = -tiny;
      D_[i] = d;
    }
  }

  std::size_t negative_pivots() const noexcept {
    return static_cast<std::size_t>(std::count_if(D_.begin(), D_.end(), [](double d) { return d < 0.0; }));
  }

  std::vector<double> solve(std::span<const double> b) const {
    std::vector<double> x(b.begin(), b.end());
    for (std::size_t i = 0; i < n_; ++i) {
      const std::size_t j0 = i >= p_ ? i - p_ : 0;
      for (std::size_t j = j0; j < i; ++j) x[i] -= l(i, j) * x[j];
    }
    for (std::size_t i = 0; i < n_; ++i) x[i] /= D_[i];
    for (std::size_t ii = n_; ii-- > 0;) {
      const std::size_t j1 = std::min(n_, ii + p_ + 1);
      for (std::size_t j = ii + 1; j < j1; ++j) x[ii] -= l(j, ii) * x[j];
    }
    return x;
  }

 private:
  // L(i, j) for i - p <= j < i, stored at row i, slot i - j - 1.
  double& l(std::size_t i, std::size_t j) { return L_[i * p_ + (i - j - 1)]; }
  double l(std::size_t i, std::size_t j) const { return L_[i * p_ + (i - j - 1)]; }

  std::size_t n_;
  std::size_t p_;
  std::vector<double> D_;
  std::vector<double> L_;
};

}  // namespace hyperhardy
