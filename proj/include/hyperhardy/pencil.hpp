#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <memory>
#include <numeric>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "hyperhardy/band_matrix.hpp"
#include "hyperhardy/errors.hpp"
#include "hyperhardy/grid.hpp"
#include "hyperhardy/manifold.hpp"

namespace hyperhardy {

enum class PencilOrder { second, fourth };

/// Discrete Rayleigh quotient x^T A x / x^T B x with B diagonal.
///
/// All pencils are assembled in the Liouville variable v = psi^((N-1)/2) u,
/// so the volume density never appears explicitly and A stays banded.
struct QuadraticPencil {
  SymBandMatrix A;
  std::vector<double> B;
  std::shared_ptr<const RadialGrid> grid;
  PencilOrder order = PencilOrder::second;
  /// Unknown k sits at grid point first_unknown + k.
  std::size_t first_unknown = 1;
  /// Rebuilds the same pencil on another interior node count, if known.
  std::function<QuadraticPencil(std::size_t)> rebuild;

  std::size_t size() const noexcept { return B.size(); }
};

using RadialFn = std::function<double(double)>;

namespace detail {

inline std::vector<double> lumped_mass(std::span<const double> x) {
  std::vector<double> m(x.size(), 0.0);
  for (std::size_t i = 1; i + 1 < x.size(); ++i) m[i] = 0.5 * (x[i + 1] - x[i - 1]);
  return m;
}

}  // namespace detail

/// Assembles the pencil for numerator  int v'^2 + (Q - V) v^2  (second order)
/// or  int (v'' - Q v)^2 - V v^2  (fourth order), denominator  int W v^2.
inline QuadraticPencil assemble_liouville_pencil(const RadialFn& Q, const RadialFn& V, const RadialFn& W,
                                                 std::shared_ptr<const RadialGrid> grid, PencilOrder order) {
  const auto x = grid->points();
  const std::size_t np = x.size();
  const auto m = detail::lumped_mass(x);
  const std::size_t first = order == PencilOrder::second ? 1 : 2;
  const std::size_t last = np - 1 - first;  // inclusive
  if (last < first) throw ArgumentError("assemble_pencil: grid too small for the boundary conditions");
  const std::size_t n = last - first + 1;

  QuadraticPencil P;
  P.grid = grid;
  P.order = order;
  P.first_unknown = first;
  P.B.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double r = x[first + k];
    const double w = W(r);
    if (!(w > 0.0) || !std::isfinite(w))
      throw ArgumentError("assemble_pencil: denominator weight not positive at r = " + std::to_string(r));
    P.B[k] = m[first + k] * w;
  }

  if (order == PencilOrder::second) {
    P.A = SymBandMatrix(n, 1);
    for (std::size_t i = 0; i + 1 < np; ++i) {
      const double c = 1.0 / (x[i + 1] - x[i]);
      const bool in0 = i >= first && i <= last;
      const bool in1 = i + 1 >= first && i + 1 <= last;
      if (in0) P.A.add(i - first, i - first, c);
      if (in1) P.A.add(i + 1 - first, i + 1 - first, c);
      if (in0 && in1) P.A.add(i - first, i + 1 - first, -c);
    }
    for (std::size_t k = 0; k < n; ++k) {
      const double r = x[first + k];
      P.A.add(k, k, m[first + k] * (Q(r) - V(r)));
    }
  } else {
    P.A = SymBandMatrix(n, 2);
    // Row i of G: second difference at interior point i minus Q(x_i).
    for (std::size_t i = 1; i + 1 < np; ++i) {
      const double h0 = x[i] - x[i - 1];
      const double h1 = x[i + 1] - x[i];
      const double s = 2.0 / (h0 + h1);
      const double g[3] = {s / h0, -s / h0 - s / h1 - Q(x[i]), s / h1};
      for (int a = 0; a < 3; ++a) {
        const std::size_t ia = i - 1 + static_cast<std::size_t>(a);
        if (ia < first || ia > last) continue;
        for (int b = a; b < 3; ++b) {
          const std::size_t ib = i - 1 + static_cast<std::size_t>(b);
          if (ib < first || ib > last) continue;
          P.A.add(ia - first, ib - first, m[i] * g[a] * g[b]);
        }
      }
    }
    for (std::size_t k = 0; k < n; ++k) {
      const double r = x[first + k];
      P.A.add(k, k, -m[first + k] * V(r));
    }
  }
  for (std::size_t k = 0; k < n; ++k)
    if (!std::isfinite(P.A(k, k))) throw EvaluationError("assemble_pencil: non-finite entry", x[first + k]);
  return P;
}

/// Pencil for  [int u'^2 psi^(N-1) - int V u^2 psi^(N-1)] / int W u^2 psi^(N-1)
/// (second order) or the bilaplacian analogue with (Delta_g u)^2.
inline QuadraticPencil assemble_pencil(const ModelManifold& M, RadialFn V, RadialFn W, const RadialGrid& grid,
                                       PencilOrder order) {
  auto g = std::make_shared<const RadialGrid>(grid);
  RadialFn Q = [M](double r) { return M.liouville_potential(r); };
  QuadraticPencil P = assemble_liouville_pencil(Q, V, W, g, order);
  P.rebuild = [M, V, W, g, order](std::size_t m) {
    return assemble_pencil(M, V, W, RadialGrid(g->r_min(), g->r_max(), m, g->grading(), g->split_point()), order);
  };
  return P;
}

/// Half-line pencil with no volume density: int z'^2 - V z^2 (or z''^2 - V z^2) over int W z^2.
inline QuadraticPencil assemble_flat_pencil(RadialFn V, RadialFn W, const RadialGrid& grid, PencilOrder order) {
  auto g = std::make_shared<const RadialGrid>(grid);
  QuadraticPencil P = assemble_liouville_pencil([](double) { return 0.0; }, V, W, g, order);
  P.rebuild = [V, W, g, order](std::size_t m) {
    return assemble_flat_pencil(V, W, RadialGrid(g->r_min(), g->r_max(), m, g->grading(), g->split_point()), order);
  };
  return P;
}

/// Sharp-constant estimate with its truncation and refinement history.
struct ConstantEstimate {
  double value = 0.0;
  double r_min = 0.0;
  double r_max = 0.0;
  std::size_t M = 0;
  std::vector<std::pair<std::size_t, double>> history;
  double bracket_width = 0.0;
  int iterations = 0;
  std::string label = "radial sector";

  /// |e(2M) - e(4M)| <= |e(M) - e(2M)| over the last three entries.
  bool refinement_error_decreasing() const {
    if (history.size() < 3) return false;
    const auto n = history.size();
    return std::abs(history[n - 1].second - history[n - 2].second) <=
           std::abs(history[n - 2].second - history[n - 3].second);
  }
};

struct EigenOptions {
  double tol = 1e-8;
  int max_iterations = 200;
  /// Number of grid levels M/2^(k-1), ..., M/2, M recorded in the history.
  int refinements = 3;
};

namespace detail {

// C = B^{-1/2} A B^{-1/2}; spectrum of the pencil, well scaled for Sturm counts.
inline SymBandMatrix scaled_pencil(const QuadraticPencil& P) {
  const std::size_t n = P.size();
  const std::size_t p = P.A.bandwidth();
  SymBandMatrix C(n, p);
  std::vector<double> s(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(P.B[i] > 0.0)) throw ArgumentError("pencil denominator must be positive definite");
    s[i] = 1.0 / std::sqrt(P.B[i]);
  }
  for (std::size_t k = 0; k <= p; ++k) {
    auto src = P.A.band(k);
    auto dst = C.band(k);
    for (std::size_t i = 0; i < src.size(); ++i) dst[i] = src[i] * s[i] * s[i + k];
  }
  return C;
}

struct SolveResult {
  double value;
  double width;
  int iterations;
};

inline SolveResult solve_min_eigenvalue(const QuadraticPencil& P, const EigenOptions& opt) {
  const std::size_t n = P.size();
  if (n == 0) throw ArgumentError("empty pencil");
  const SymBandMatrix C = scaled_pencil(P);
  const std::size_t p = C.bandwidth();

  double lo = std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    double radius = 0.0;
    for (std::size_t k = 1; k <= p; ++k) {
      if (i + k < n) radius += std::abs(C(i, i + k));
      if (i >= k) radius += std::abs(C(i - k, i));
    }
    lo = std::min(lo, C(i, i) - radius);
    hi = std::min(hi, C(i, i));
  }
  if (!std::isfinite(lo) || !std::isfinite(hi)) throw NumericError("non-finite pencil entries");
  if (hi - lo == 0.0) return {hi, 0.0, 0};  // already diagonal with equal minimum
  hi += 1e-12 * std::max(1.0, std::abs(hi));
  lo -= 1e-12 * std::max(1.0, std::abs(lo));

  int it = 0;
  while (hi - lo > opt.tol * std::max(1.0, std::abs(0.5 * (lo + hi)))) {
    if (++it > opt.max_iterations) {
      std::ostringstream os;
      os.precision(17);
      os << "eigenvalue bisection did not converge in " << opt.max_iterations << " steps; bracket [" << lo
         << ", " << hi << "], n = " << n;
      throw NumericError(os.str());
    }
    const double mid = 0.5 * (lo + hi);
    if (BandLDLT(C, mid).negative_pivots() >= 1)
      hi = mid;
    else
      lo = mid;
  }

  // Inverse iteration from below the spectrum, then the Rayleigh quotient.
  double value = 0.5 * (lo + hi);
  const double shift = lo - 1e-3 * std::max(hi - lo, opt.tol * std::max(1.0, std::abs(lo)));
  const BandLDLT F(C, shift);
  if (F.negative_pivots() == 0) {
    std::vector<double> x(n, 1.0);
    for (int k = 0; k < 6; ++k) {
      x = F.solve(x);
      const double nrm = std::sqrt(std::inner_product(x.begin(), x.end(), x.begin(), 0.0));
      if (!(nrm > 0.0) || !std::isfinite(nrm)) break;
      for (double& v : x) v /= nrm;
    }
    const auto Cx = C.multiply(x);
    const double rq = std::inner_product(x.begin(), x.end(), Cx.begin(), 0.0) /
                      std::inner_product(x.begin(), x.end(), x.begin(), 0.0);
    if (std::isfinite(rq) && rq >= lo && rq <= hi) value = rq;
  }
  return {value, hi - lo, it};
}

}  // namespace detail

/// Smallest mu with A x = mu B x, by Sturm-count bisection and inverse iteration.
///
/// When the pencil knows how to rebuild itself, the same problem is also
/// solved on coarser grids so that the history has `refinements` entries.
inline ConstantEstimate min_generalized_eigenvalue(const QuadraticPencil& P, const EigenOptions& opt = {}) {
  ConstantEstimate est;
  if (P.grid) {
    est.r_min = P.grid->r_min();
    est.r_max = P.grid->r_max();
    est.M = P.grid->size();
  } else {
    est.M = P.size();
  }
  if (P.rebuild && opt.refinements > 1 && P.grid) {
    for (int level = opt.refinements - 1; level >= 1; --level) {
      const std::size_t m = est.M >> level;
      if (m < RadialGrid::kMinInterior + 4) continue;
      const auto coarse = P.rebuild(m);
      est.history.emplace_back(m, detail::solve_min_eigenvalue(coarse, opt).value);
    }
  }
  const auto res = detail::solve_min_eigenvalue(P, opt);
  est.value = res.value;
  est.bracket_width = res.width;
  est.iterations = res.iterations;
  est.history.emplace_back(est.M, res.value);
  return est;
}

/// Pencil with A = B = I of size n.
inline QuadraticPencil identity_pencil(std::size_t n) {
  QuadraticPencil P;
  P.A = SymBandMatrix(n, 1);
  for (std::size_t i = 0; i < n; ++i) P.A.add(i, i, 1.0);
  P.B.assign(n, 1.0);
  return P;
}

}  // namespace hyperhardy
