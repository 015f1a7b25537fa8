#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "hyperhardy/errors.hpp"

namespace hyperhardy {

/// Nodes and weights of a one-dimensional quadrature rule.
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const noexcept { return nodes.size(); }

  template <class F>
  double integrate(F&& f) const {
    double sum = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) sum += weights[i] * f(nodes[i]);
    return sum;
  }
};

/// Composite Simpson weights on an arbitrary increasing node set.
///
/// Pairs of adjacent intervals are integrated with the interpolating
/// quadratic; an odd trailing interval uses the quadratic through the last
/// three nodes. The rule is exact for polynomials of degree two on any
/// spacing, which the finite-difference pencils do not need but the
/// closed-form quadratic forms do.
inline std::vector<double> simpson_weights(std::span<const double> x) {
  const std::size_t n = x.size();
  if (n < 3) throw ArgumentError("simpson_weights: need at least three nodes");
  std::vector<double> w(n, 0.0);
  const std::size_t intervals = n - 1;
  const std::size_t paired = intervals - intervals % 2;
  for (std::size_t i = 0; i + 2 <= paired; i += 2) {
    const double h0 = x[i + 1] - x[i];
    const double h1 = x[i + 2] - x[i + 1];
    const double s = h0 + h1;
    w[i] += s / 6.0 * (2.0 - h1 / h0);
    w[i + 1] += s * s * s / (6.0 * h0 * h1);
    w[i + 2] += s / 6.0 * (2.0 - h0 / h1);
  }
  if (intervals % 2 == 1) {
    const double h0 = x[n - 2] - x[n - 3];
    const double h1 = x[n - 1] - x[n - 2];
    const double s = h0 + h1;
    w[n - 3] += -h1 * h1 * h1 / (6.0 * h0 * s);
    w[n - 2] += h1 * (h1 + 3.0 * h0) / (6.0 * h0);
    w[n - 1] += h1 * (2.0 * h1 + 3.0 * h0) / (6.0 * s);
  }
  return w;
}

/// Uniform nodes on [a, b] (endpoints included) with Simpson weights.
inline QuadratureRule uniform_rule(double a, double b, std::size_t points) {
  if (!(b > a) || points < 3) throw ArgumentError("uniform_rule: need b > a and at least 3 points");
  QuadratureRule rule;
  rule.nodes.resize(points);
  const double h = (b - a) / static_cast<double>(points - 1);
  for (std::size_t i = 0; i < points; ++i) rule.nodes[i] = a + h * static_cast<double>(i);
  rule.nodes.back() = b;
  rule.weights = simpson_weights(rule.nodes);
  return rule;
}

enum class Grading { uniform, log_graded, geometric };

inline std::string to_string(Grading g) {
  switch (g) {
    case Grading::uniform: return "uniform";
    case Grading::log_graded: return "log_graded";
    case Grading::geometric: return "geometric";
  }
  return "unknown";
}

inline Grading grading_from_string(const std::string& s) {
  if (s == "uniform") return Grading::uniform;
  if (s == "log_graded") return Grading::log_graded;
  if (s == "geometric") return Grading::geometric;
  throw ArgumentError("unknown grading '" + s + "'");
}

/// Truncated radial mesh on [r_min, r_max].
///
/// `nodes()` are the M interior nodes. `points()` adds the two truncation
/// ends (size M + 2), where the pencils impose Dirichlet conditions.
/// Quadrature weights live on `points()`.
class RadialGrid {
 public:
  static constexpr std::size_t kMinInterior = 3;

  RadialGrid(double r_min, double r_max, std::size_t interior, Grading grading, double r_c = 1.0)
      : r_min_(r_min), r_max_(r_max), grading_(grading), r_c_(r_c) {
    if (!(r_min > 0.0) || !(r_max > r_min) || !std::isfinite(r_max))
      throw ArgumentError("RadialGrid: need 0 < r_min < r_max < inf");
    if (interior < kMinInterior) throw ArgumentError("RadialGrid: too few interior nodes");
    points_.reserve(interior + 2);
    points_.push_back(r_min);
    switch (grading) {
      case Grading::uniform: {
        const double h = (r_max - r_min) / static_cast<double>(interior + 1);
        for (std::size_t i = 1; i <= interior; ++i) points_.push_back(r_min + h * static_cast<double>(i));
        break;
      }
      case Grading::geometric: {
        const double step = std::log(r_max / r_min) / static_cast<double>(interior + 1);
        for (std::size_t i = 1; i <= interior; ++i)
          points_.push_back(r_min * std::exp(step * static_cast<double>(i)));
        break;
      }
      case Grading::log_graded: {
        if (!(r_c > r_min) || !(r_c < r_max))
          throw ArgumentError("RadialGrid: log_graded split point must lie inside (r_min, r_max)");
        const std::size_t below = interior / 2;
        const std::size_t above = interior - below;
        const double step = std::log(r_c / r_min) / static_cast<double>(below + 1);
        for (std::size_t i = 1; i <= below; ++i)
          points_.push_back(r_min * std::exp(step * static_cast<double>(i)));
        const double h = (r_max - r_c) / static_cast<double>(above);
        for (std::size_t j = 0; j < above; ++j) points_.push_back(r_c + h * static_cast<double>(j));
        break;
      }
    }
    points_.push_back(r_max);
    for (std::size_t i = 1; i < points_.size(); ++i)
      if (!(points_[i] > points_[i - 1])) throw ArgumentError("RadialGrid: nodes not strictly increasing");
    weights_ = simpson_weights(points_);
  }

  double r_min() const noexcept { return r_min_; }
  double r_max() const noexcept { return r_max_; }
  double split_point() const noexcept { return r_c_; }
  Grading grading() const noexcept { return grading_; }

  /// Number of interior nodes M.
  std::size_t size() const noexcept { return points_.size() - 2; }

  std::span<const double> nodes() const noexcept { return std::span(points_).subspan(1, size()); }
  std::span<const double> points() const noexcept { return points_; }
  std::span<const double> weights() const noexcept { return weights_; }

  QuadratureRule rule() const { return {points_, weights_}; }

  template <class F>
  double integrate(F&& f) const {
    double sum = 0.0;
    for (std::size_t i = 0; i < points_.size(); ++i) sum += weights_[i] * f(points_[i]);
    return sum;
  }

 private:
  double r_min_;
  double r_max_;
  Grading grading_;
  double r_c_;
  std::vector<double> points_;
  std::vector<double> weights_;
};

inline RadialGrid make_grid(double r_min, double r_max, std::size_t interior,
                            Grading grading = Grading::uniform, double r_c = 1.0) {
  return RadialGrid(r_min, r_max, interior, grading, r_c);
}

}  // namespace hyperhardy
