#pragma once

#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "hyperhardy/errors.hpp"
#include "hyperhardy/grid.hpp"
#include "hyperhardy/manifold.hpp"
#include "hyperhardy/radial_function.hpp"

namespace hyperhardy {

/// Composite 10-point Gauss-Legendre on each piece [breaks[i], breaks[i+1]],
/// split into `panels` equal (or geometric) panels.
inline QuadratureRule gauss_rule(const std::vector<double>& breaks, std::size_t panels, bool geometric = false) {
  using G = boost::math::quadrature::gauss<double, 10>;
  const auto& xa = G::abscissa();
  const auto& wa = G::weights();
  QuadratureRule rule;
  for (std::size_t piece = 0; piece + 1 < breaks.size(); ++piece) {
    const double a = breaks[piece], b = breaks[piece + 1];
    if (!(b > a)) throw ArgumentError("gauss_rule: breakpoints must increase");
    for (std::size_t p = 0; p < panels; ++p) {
      double lo, hi;
      if (geometric && a > 0.0) {
        lo = a * std::pow(b / a, static_cast<double>(p) / panels);
        hi = a * std::pow(b / a, static_cast<double>(p + 1) / panels);
      } else {
        lo = a + (b - a) * p / panels;
        hi = a + (b - a) * (p + 1) / panels;
      }
      const double c = 0.5 * (lo + hi), h = 0.5 * (hi - lo);
      for (std::size_t k = 0; k < xa.size(); ++k) {
        if (xa[k] == 0.0) {
          rule.nodes.push_back(c);
          rule.weights.push_back(h * wa[k]);
          continue;
        }
        rule.nodes.push_back(c - h * xa[k]);
        rule.weights.push_back(h * wa[k]);
        rule.nodes.push_back(c + h * xa[k]);
        rule.weights.push_back(h * wa[k]);
      }
    }
  }
  return rule;
}

/// Gauss rule on the support of a closed-form test function, with a break
/// at the midpoint where the two-sided bumps switch polynomial pieces.
inline QuadratureRule support_rule(const RadialFunction& u, std::size_t panels = 32) {
  const Support s = u.support();
  if (!std::isfinite(s.hi)) throw SupportError("'" + u.id() + "' has unbounded support");
  return gauss_rule({s.lo, 0.5 * (s.lo + s.hi), s.hi}, panels);
}

/// Sum of weights * g(nodes), rejecting non-finite integrand values.
template <class F>
double integrate_checked(const QuadratureRule& rule, F&& g, const char* what = "integrand") {
  double sum = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i) {
    const double v = g(rule.nodes[i]);
    if (!std::isfinite(v)) throw EvaluationError(std::string("non-finite ") + what, rule.nodes[i]);
    sum += rule.weights[i] * v;
  }
  return sum;
}

/// int f(r) w(r) psi(r)^(N-1) dr
inline double integrate_weighted(const RadialFunction& f, const std::function<double(double)>& w,
                                 const ModelManifold& M, const QuadratureRule& rule) {
  return integrate_checked(rule, [&](double r) {
    const double fv = f.value(r);
    if (fv == 0.0) return 0.0;
    return fv * w(r) * M.volume_density(r);
  });
}

inline double integrate_weighted(const RadialFunction& f, const std::function<double(double)>& w,
                                 const ModelManifold& M, const RadialGrid& grid) {
  return integrate_weighted(f, w, M, grid.rule());
}

/// int u^2 W psi^(N-1) dr
inline double weighted_l2(const RadialFunction& u, const std::function<double(double)>& W, const ModelManifold& M,
                          const QuadratureRule& rule) {
  return integrate_checked(rule, [&](double r) {
    const double v = u.value(r);
    if (v == 0.0) return 0.0;
    return v * v * W(r) * M.volume_density(r);
  });
}

/// int u'^2 psi^(N-1) dr
inline double dirichlet_form(const RadialFunction& u, const ModelManifold& M, const QuadratureRule& rule) {
  if (!u.has_d1()) throw CapabilityError("dirichlet_form needs u'");
  return integrate_checked(rule, [&](double r) {
    const double d = u.d1(r);
    if (d == 0.0) return 0.0;
    return d * d * M.volume_density(r);
  });
}

/// Rejects test functions that are not compactly supported inside the grid.
inline double dirichlet_form(const RadialFunction& u, const ModelManifold& M, const RadialGrid& grid) {
  require_compact_support(u, grid.r_min(), grid.r_max());
  return dirichlet_form(u, M, grid.rule());
}

/// int (Delta_g u)^2 psi^(N-1) dr
inline double bilaplacian_form(const RadialFunction& u, const ModelManifold& M, const QuadratureRule& rule) {
  if (!u.has_d1() || !u.has_d2()) throw CapabilityError("bilaplacian_form needs u' and u''");
  const int N = M.dimension();
  return integrate_checked(rule, [&](double r) {
    const double d1 = u.d1(r), d2 = u.d2(r);
    if (d1 == 0.0 && d2 == 0.0) return 0.0;
    const double L = d2 + (N - 1) * M.log_derivative(r) * d1;
    return L * L * M.volume_density(r);
  });
}

inline double bilaplacian_form(const RadialFunction& u, const ModelManifold& M, const RadialGrid& grid) {
  require_compact_support(u, grid.r_min(), grid.r_max());
  return bilaplacian_form(u, M, grid.rule());
}

}  // namespace hyperhardy
