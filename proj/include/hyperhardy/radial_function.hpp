#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "hyperhardy/errors.hpp"
#include "hyperhardy/grid.hpp"

namespace hyperhardy {

struct Support {
  double lo = 0.0;
  double hi = std::numeric_limits<double>::infinity();
};

/// Value and first two derivatives at one point.
struct Jet2 {
  double f = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
};

/// Scalar function of r, either closed form (value, u', u'' evaluators) or
/// sampled on the points of a RadialGrid.
///
/// Closed-form functions are evaluated as zero outside their support.
class RadialFunction {
 public:
  using Fn = std::function<double(double)>;

  RadialFunction() = default;

  static RadialFunction closed_form(Fn value, Fn d1 = {}, Fn d2 = {}, Support support = {},
                                    std::string id = {}) {
    if (!value) throw ArgumentError("RadialFunction: value evaluator required");
    if (!(support.hi > support.lo) || support.lo < 0.0) throw ArgumentError("RadialFunction: bad support");
    RadialFunction u;
    u.value_ = std::move(value);
    u.d1_ = std::move(d1);
    u.d2_ = std::move(d2);
    u.support_ = support;
    u.id_ = std::move(id);
    return u;
  }

  /// `values` holds one sample per grid point, endpoints included.
  static RadialFunction sampled(std::shared_ptr<const RadialGrid> grid, std::vector<double> values,
                                std::string id = {}) {
    if (!grid) throw ArgumentError("RadialFunction: null grid");
    if (values.size() != grid->points().size())
      throw ArgumentError("RadialFunction: need one sample per grid point");
    RadialFunction u;
    u.grid_ = std::move(grid);
    u.samples_ = std::move(values);
    u.support_ = {u.grid_->r_min(), u.grid_->r_max()};
    u.id_ = std::move(id);
    return u;
  }

  /// Samples a closed-form function onto `grid`.
  static RadialFunction sample(const RadialFunction& f, std::shared_ptr<const RadialGrid> grid) {
    std::vector<double> v;
    v.reserve(grid->points().size());
    for (double r : grid->points()) v.push_back(f.value(r));
    return sampled(std::move(grid), std::move(v), f.id());
  }

  bool is_sampled() const noexcept { return static_cast<bool>(grid_); }
  bool has_d1() const noexcept { return is_sampled() || static_cast<bool>(d1_); }
  bool has_d2() const noexcept { return is_sampled() || static_cast<bool>(d2_); }
  const Support& support() const noexcept { return support_; }
  const std::string& id() const noexcept { return id_; }
  const std::vector<double>& samples() const noexcept { return samples_; }
  const std::shared_ptr<const RadialGrid>& grid() const noexcept { return grid_; }

  double value(double r) const {
    if (is_sampled()) return samples_[node_index(r)];
    if (r < support_.lo || r > support_.hi) return 0.0;
    return value_(r);
  }

  double d1(double r) const {
    if (is_sampled()) return sampled_derivatives(node_index(r)).d1;
    if (!d1_) throw CapabilityError("RadialFunction '" + id_ + "': no first-derivative data");
    if (r < support_.lo || r > support_.hi) return 0.0;
    return d1_(r);
  }

  double d2(double r) const {
    if (is_sampled()) return sampled_derivatives(node_index(r)).d2;
    if (!d2_) throw CapabilityError("RadialFunction '" + id_ + "': no second-derivative data");
    if (r < support_.lo || r > support_.hi) return 0.0;
    return d2_(r);
  }

  Jet2 jet(double r) const { return {value(r), d1(r), d2(r)}; }

  double operator()(double r) const { return value(r); }

 private:
  std::size_t node_index(double r) const {
    const auto pts = grid_->points();
    auto it = std::lower_bound(pts.begin(), pts.end(), r);
    const double tol = 1e-13 * std::abs(r);
    if (it != pts.end() && std::abs(*it - r) <= tol) return static_cast<std::size_t>(it - pts.begin());
    if (it != pts.begin() && std::abs(*(it - 1) - r) <= tol)
      return static_cast<std::size_t>(it - pts.begin() - 1);
    throw ArgumentError("RadialFunction '" + id_ + "': sampled function evaluated off its grid");
  }

  // Three-point nonuniform differences; one-sided at the two ends.
  Jet2 sampled_derivatives(std::size_t i) const {
    const auto x = grid_->points();
    const std::size_t n = x.size();
    const std::size_t c = std::clamp<std::size_t>(i, 1, n - 2);
    const double h0 = x[c] - x[c - 1];
    const double h1 = x[c + 1] - x[c];
    const double f0 = samples_[c - 1], f1 = samples_[c], f2 = samples_[c + 1];
    const double second = 2.0 * (h0 * f2 - (h0 + h1) * f1 + h1 * f0) / (h0 * h1 * (h0 + h1));
    double first = 0.0;
    if (i == c) {
      first = (h0 * h0 * f2 + (h1 * h1 - h0 * h0) * f1 - h1 * h1 * f0) / (h0 * h1 * (h0 + h1));
    } else if (i < c) {
      first = (-(2.0 * h0 + h1) * h1 * f0 + (h0 + h1) * (h0 + h1) * f1 - h0 * h0 * f2) / (h0 * h1 * (h0 + h1));
    } else {
      first = (h1 * h1 * f0 - (h0 + h1) * (h0 + h1) * f1 + (2.0 * h1 + h0) * h0 * f2) / (h0 * h1 * (h0 + h1));
    }
    return {samples_[i], first, second};
  }

  Fn value_, d1_, d2_;
  Support support_{};
  std::string id_;
  std::shared_ptr<const RadialGrid> grid_;
  std::vector<double> samples_;
};

/// Quintic smoothstep S(t) = 6t^5 - 15t^4 + 10t^3 on [0, 1], clamped outside.
inline Jet2 smoothstep(double t) {
  if (t <= 0.0) return {0.0, 0.0, 0.0};
  if (t >= 1.0) return {1.0, 0.0, 0.0};
  const double t2 = t * t;
  return {t2 * t * (10.0 + t * (-15.0 + 6.0 * t)), 30.0 * t2 * (1.0 - t) * (1.0 - t),
          60.0 * t * (1.0 - t) * (1.0 - 2.0 * t)};
}

/// C^2 bump on [a, b]: S(2t) on the left half, S(2 - 2t) on the right, t = (r-a)/(b-a).
inline Jet2 bump_jet(double a, double b, double r) {
  if (r <= a || r >= b) return {0.0, 0.0, 0.0};
  const double L = b - a;
  const double t = (r - a) / L;
  if (t <= 0.5) {
    const Jet2 s = smoothstep(2.0 * t);
    return {s.f, s.d1 * 2.0 / L, s.d2 * 4.0 / (L * L)};
  }
  const Jet2 s = smoothstep(2.0 - 2.0 * t);
  return {s.f, -s.d1 * 2.0 / L, s.d2 * 4.0 / (L * L)};
}

/// Product of a bump with the quadratic 1 + c1 t + c2 t^2 in t = (r-a)/(b-a).
inline Jet2 modulated_bump_jet(double a, double b, double c1, double c2, double r) {
  const Jet2 g = bump_jet(a, b, r);
  if (g.f == 0.0 && g.d1 == 0.0 && g.d2 == 0.0) return g;
  const double L = b - a;
  const double t = (r - a) / L;
  const double p = 1.0 + t * (c1 + c2 * t);
  const double dp = (c1 + 2.0 * c2 * t) / L;
  const double ddp = 2.0 * c2 / (L * L);
  return {g.f * p, g.d1 * p + g.f * dp, g.d2 * p + 2.0 * g.d1 * dp + g.f * ddp};
}

inline RadialFunction from_jet(std::function<Jet2(double)> j, Support s, std::string id) {
  return RadialFunction::closed_form([j](double r) { return j(r).f; }, [j](double r) { return j(r).d1; },
                                     [j](double r) { return j(r).d2; }, s, std::move(id));
}

inline RadialFunction bump(double a, double b, double amplitude = 1.0) {
  if (!(a >= 0.0) || !(b > a)) throw ArgumentError("bump: need 0 <= a < b");
  return from_jet(
      [=](double r) {
        Jet2 g = bump_jet(a, b, r);
        return Jet2{amplitude * g.f, amplitude * g.d1, amplitude * g.d2};
      },
      {a, b}, "bump[" + std::to_string(a) + "," + std::to_string(b) + "]");
}

inline RadialFunction modulated_bump(double a, double b, double c1, double c2) {
  if (!(a >= 0.0) || !(b > a)) throw ArgumentError("modulated_bump: need 0 <= a < b");
  return from_jet([=](double r) { return modulated_bump_jet(a, b, c1, c2, r); }, {a, b},
                  "mbump[" + std::to_string(a) + "," + std::to_string(b) + "]");
}

/// C-infinity bump exp(4 - 1/(t(1-t))), t = (r-a)/(b-a); equals 1 at the midpoint.
inline Jet2 smooth_bump_jet(double a, double b, double r) {
  if (r <= a || r >= b) return {0.0, 0.0, 0.0};
  const double L = b - a;
  const double t = (r - a) / L;
  const double q = t * (1.0 - t);
  const double q1 = 1.0 - 2.0 * t;
  const double g = 4.0 - 1.0 / q;
  const double g1 = q1 / (q * q);
  const double g2 = -2.0 * (q + q1 * q1) / (q * q * q);
  const double f = std::exp(g);
  return {f, f * g1 / L, f * (g2 + g1 * g1) / (L * L)};
}

inline RadialFunction smooth_bump(double a, double b, double amplitude = 1.0) {
  if (!(a >= 0.0) || !(b > a)) throw ArgumentError("smooth_bump: need 0 <= a < b");
  return from_jet(
      [=](double r) {
        Jet2 g = smooth_bump_jet(a, b, r);
        return Jet2{amplitude * g.f, amplitude * g.d1, amplitude * g.d2};
      },
      {a, b}, "sbump[" + std::to_string(a) + "," + std::to_string(b) + "]");
}

/// Seeded bump with support inside [lo, hi]. Endpoints are drawn
/// log-uniformly when the window spans more than a decade.
struct BumpSampler {
  double lo;
  double hi;
  double min_rel_width = 0.05;
  bool modulate = true;

  RadialFunction operator()(std::mt19937_64& rng) const {
    if (!(hi > lo) || !(lo > 0.0)) throw ArgumentError("BumpSampler: bad window");
    std::uniform_real_distribution<double> U(0.0, 1.0);
    const bool logscale = hi / lo > 10.0;
    auto to_r = [&](double s) { return logscale ? lo * std::pow(hi / lo, s) : lo + s * (hi - lo); };
    double s0 = U(rng), s1 = U(rng);
    if (s1 < s0) std::swap(s0, s1);
    if (s1 - s0 < min_rel_width) {
      const double mid = std::clamp(0.5 * (s0 + s1), 0.5 * min_rel_width, 1.0 - 0.5 * min_rel_width);
      s0 = mid - 0.5 * min_rel_width;
      s1 = mid + 0.5 * min_rel_width;
    }
    const double a = to_r(0.005 + 0.99 * s0);
    const double b = to_r(0.005 + 0.99 * s1);
    const double c1 = modulate ? 2.0 * U(rng) - 1.0 : 0.0;
    const double c2 = modulate ? 2.0 * U(rng) - 1.0 : 0.0;
    return modulated_bump(a, b, 0.5 * c1, 0.25 * c2);
  }
};

/// Throws SupportError unless u vanishes (with u') at the ends of its
/// support and that support sits strictly inside (lo, hi).
inline void require_compact_support(const RadialFunction& u, double lo, double hi) {
  if (u.is_sampled()) {
    const auto& v = u.samples();
    if (v.front() != 0.0 || v.back() != 0.0)
      throw SupportError("'" + u.id() + "' does not vanish at the truncation ends");
    return;
  }
  const Support s = u.support();
  if (!(s.lo > lo) || !(s.hi < hi) || !std::isfinite(s.hi))
    throw SupportError("'" + u.id() + "' support is not compact inside the integration window");
  double scale = 0.0;
  for (int i = 0; i <= 64; ++i) scale = std::max(scale, std::abs(u.value(s.lo + (s.hi - s.lo) * i / 64.0)));
  const double tol = 1e-12 * std::max(scale, 1e-300);
  if (std::abs(u.value(s.lo)) > tol || std::abs(u.value(s.hi)) > tol)
    throw SupportError("'" + u.id() + "' does not vanish at the ends of its support");
  if (u.has_d1()) {
    const double dtol = 1e-9 * std::max(scale, 1e-300) / (s.hi - s.lo);
    if (std::abs(u.d1(s.lo)) > dtol || std::abs(u.d1(s.hi)) > dtol)
      throw SupportError("'" + u.id() + "' derivative does not vanish at the ends of its support");
  }
}

}  // namespace hyperhardy
