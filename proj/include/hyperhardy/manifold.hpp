#pragma once

#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>

#include "hyperhardy/errors.hpp"
#include "hyperhardy/grid.hpp"
#include "hyperhardy/radial_function.hpp"

namespace hyperhardy {

enum class Family { euclidean, hyperbolic, superexp, custom };

inline std::string to_string(Family f) {
  switch (f) {
    case Family::euclidean: return "euclidean";
    case Family::hyperbolic: return "hyperbolic";
    case Family::superexp: return "superexp";
    case Family::custom: return "custom";
  }
  return "unknown";
}

/// Rotationally symmetric model ds^2 = dr^2 + psi(r)^2 dw^2 of dimension N.
///
/// Besides psi and its derivatives, the ratios that enter the identities are
/// exposed directly (psi'/psi, psi''/psi, (psi'^2 - 1)/psi^2, log psi) so that
/// the builtin families stay finite for large r.
class ModelManifold {
 public:
  using Fn = std::function<double(double)>;

  static ModelManifold euclidean(int N) { return ModelManifold(N, Family::euclidean, 0.0); }
  static ModelManifold hyperbolic(int N) { return ModelManifold(N, Family::hyperbolic, 0.0); }
  static ModelManifold superexp(int N, double a) {
    if (!(a > 1.0)) throw ArgumentError("superexp family needs a > 1");
    return ModelManifold(N, Family::superexp, a);
  }
  static ModelManifold custom(int N, Fn psi, Fn dpsi, Fn ddpsi, std::string name = "custom") {
    if (!psi || !dpsi || !ddpsi)
      throw CapabilityError("custom model needs closed-form psi, psi' and psi''");
    ModelManifold m(N, Family::custom, 0.0);
    m.psi_ = std::move(psi);
    m.dpsi_ = std::move(dpsi);
    m.ddpsi_ = std::move(ddpsi);
    m.name_ = std::move(name);
    return m;
  }

  int dimension() const noexcept { return N_; }
  Family family() const noexcept { return family_; }
  double exponent() const noexcept { return a_; }
  const std::string& name() const noexcept { return name_; }

  double psi(double r) const {
    check(r);
    switch (family_) {
      case Family::euclidean: return r;
      case Family::hyperbolic:
        if (r > 700.0) throw NumericError("sinh r overflows for r > 700; use the ratio accessors");
        return std::sinh(r);
      case Family::superexp: return finite(r * std::exp(std::pow(r, a_)), "psi");
      case Family::custom: return psi_(r);
    }
    return 0.0;
  }

  double dpsi(double r) const {
    check(r);
    switch (family_) {
      case Family::euclidean: return 1.0;
      case Family::hyperbolic:
        if (r > 700.0) throw NumericError("cosh r overflows for r > 700; use the ratio accessors");
        return std::cosh(r);
      case Family::superexp: {
        const double ra = std::pow(r, a_);
        return finite(std::exp(ra) * (1.0 + a_ * ra), "psi'");
      }
      case Family::custom: return dpsi_(r);
    }
    return 0.0;
  }

  double ddpsi(double r) const {
    check(r);
    switch (family_) {
      case Family::euclidean: return 0.0;
      case Family::hyperbolic:
        if (r > 700.0) throw NumericError("sinh r overflows for r > 700; use the ratio accessors");
        return std::sinh(r);
      case Family::superexp: {
        const double ra = std::pow(r, a_);
        return finite(std::exp(ra) * a_ * std::pow(r, a_ - 1.0) * (1.0 + a_ + a_ * ra), "psi''");
      }
      case Family::custom: return ddpsi_(r);
    }
    return 0.0;
  }

  double log_psi(double r) const {
    check(r);
    switch (family_) {
      case Family::euclidean: return std::log(r);
      case Family::hyperbolic:
        return r < 1.0 ? std::log(std::sinh(r)) : r + std::log1p(-std::exp(-2.0 * r)) - std::log(2.0);
      case Family::superexp: return std::log(r) + std::pow(r, a_);
      case Family::custom: return std::log(psi_(r));
    }
    return 0.0;
  }

  /// psi'/psi
  double log_derivative(double r) const {
    check(r);
    switch (family_) {
      case Family::euclidean: return 1.0 / r;
      case Family::hyperbolic: return 1.0 / std::tanh(r);
      case Family::superexp: return (1.0 + a_ * std::pow(r, a_)) / r;
      case Family::custom: return dpsi_(r) / psi_(r);
    }
    return 0.0;
  }

  /// psi''/psi
  double second_ratio(double r) const {
    check(r);
    switch (family_) {
      case Family::euclidean: return 0.0;
      case Family::hyperbolic: return 1.0;
      case Family::superexp: {
        const double ra = std::pow(r, a_);
        return a_ * std::pow(r, a_ - 2.0) * (1.0 + a_ + a_ * ra);
      }
      case Family::custom: return ddpsi_(r) / psi_(r);
    }
    return 0.0;
  }

  /// (psi'^2 - 1)/psi^2
  double tangential_ratio(double r) const {
    check(r);
    switch (family_) {
      case Family::euclidean: return 0.0;
      case Family::hyperbolic: return 1.0;
      case Family::superexp: {
        const double ra = std::pow(r, a_);
        return (2.0 * a_ * ra + a_ * a_ * ra * ra - std::expm1(-2.0 * ra)) / (r * r);
      }
      case Family::custom: {
        const double p = psi_(r), dp = dpsi_(r);
        return (dp - 1.0) * (dp + 1.0) / (p * p);
      }
    }
    return 0.0;
  }

  /// 1/psi^2
  double inverse_square(double r) const {
    check(r);
    switch (family_) {
      case Family::euclidean: return 1.0 / (r * r);
      case Family::hyperbolic: {
        if (r < 300.0) {
          const double s = std::sinh(r);
          return 1.0 / (s * s);
        }
        return std::exp(-2.0 * log_psi(r));
      }
      case Family::superexp: return std::exp(-2.0 * log_psi(r));
      case Family::custom: {
        const double p = psi_(r);
        return 1.0 / (p * p);
      }
    }
    return 0.0;
  }

  /// psi^(N-1), the radial volume density with the sphere factor dropped.
  double volume_density(double r) const { return finite(std::exp((N_ - 1) * log_psi(r)), "psi^(N-1)"); }

  /// Potential Q with  int u'^2 psi^(N-1) = int v'^2 + Q v^2  for  v = psi^((N-1)/2) u.
  double liouville_potential(double r) const {
    const double k = 0.5 * (N_ - 1);
    if (family_ == Family::hyperbolic) return k * k + k * (k - 1.0) * inverse_square(r);
    const double p = log_derivative(r);
    return k * second_ratio(r) + k * (k - 1.0) * p * p;
  }

  /// Pole conditions psi(0+) = 0, psi'(0+) = 1, psi''(0+) = 0 at r = 1e-6, 1e-8.
  bool satisfies_pole_conditions(double rel_tol = 1e-4) const {
    for (double r : {1e-6, 1e-8}) {
      if (std::abs(psi(r) / r - 1.0) > rel_tol) return false;
      if (std::abs(dpsi(r) - 1.0) > rel_tol) return false;
      if (std::abs(ddpsi(r)) > rel_tol) return false;
    }
    return true;
  }

 private:
  ModelManifold(int N, Family f, double a) : N_(N), family_(f), a_(a), name_(to_string(f)) {
    if (N < 3) throw DomainError("model dimension must be an integer >= 3");
  }

  static void check(double r) {
    if (!(r > 0.0)) throw DomainError("radius must be positive");
  }

  static double finite(double x, const char* what) {
    if (!std::isfinite(x)) throw NumericError(std::string(what) + " overflowed; use the ratio accessors");
    return x;
  }

  int N_;
  Family family_;
  double a_;
  std::string name_;
  Fn psi_, dpsi_, ddpsi_;
};

/// K_rad = -psi''/psi
inline double curvature_rad(const ModelManifold& M, double r) { return -M.second_ratio(r); }

/// H_tan = -(psi'^2 - 1)/psi^2
inline double curvature_tan(const ModelManifold& M, double r) { return -M.tangential_ratio(r); }

/// w(r) = (N-1)/4 [2 psi''/psi + (N-3)(psi'^2 - 1)/psi^2]
inline double hardy_weight_general(const ModelManifold& M, double r) {
  const int N = M.dimension();
  if (M.family() == Family::hyperbolic) {
    if (!(r > 0.0)) throw DomainError("radius must be positive");
    return 0.25 * (N - 1) * (N - 1);
  }
  return 0.25 * (N - 1) * (2.0 * M.second_ratio(r) + (N - 3) * M.tangential_ratio(r));
}

struct ConditionCheck {
  bool holds = true;
  std::optional<double> first_violation;
};

/// (N-2)psi' + (N-1) r psi'' >= 0 at every grid point, tested through the
/// ratio form (N-2)psi'/psi + (N-1) r psi''/psi so that large r stays finite.
inline ConditionCheck check_condition_2_8(const ModelManifold& M, const RadialGrid& grid) {
  const int N = M.dimension();
  for (double r : grid.points()) {
    const double lhs = (N - 2) * M.log_derivative(r) + (N - 1) * r * M.second_ratio(r);
    if (lhs < 0.0) return {false, r};
  }
  return {};
}

/// Delta_g Phi = Phi'' + (N-1)(psi'/psi) Phi'
inline double laplace_radial(const ModelManifold& M, const RadialFunction& phi, double r) {
  if (!phi.has_d1() || !phi.has_d2())
    throw CapabilityError("laplace_radial needs first and second derivatives of '" + phi.id() + "'");
  return phi.d2(r) + (M.dimension() - 1) * M.log_derivative(r) * phi.d1(r);
}

/// Builds a model from `family`, `N` and `a` keys.
inline ModelManifold manifold_from_config(const std::map<std::string, std::string>& kv) {
  auto get = [&](const std::string& k) -> std::optional<std::string> {
    auto it = kv.find(k);
    if (it == kv.end()) return std::nullopt;
    return it->second;
  };
  const std::string fam = get("family").value_or("hyperbolic");
  int N = 0;
  try {
    N = std::stoi(get("N").value_or("3"));
  } catch (const std::exception&) {
    throw ArgumentError("N must be an integer");
  }
  if (fam == "hyperbolic") return ModelManifold::hyperbolic(N);
  if (fam == "euclidean") return ModelManifold::euclidean(N);
  if (fam == "superexp") {
    const auto a = get("a");
    if (!a) throw ArgumentError("superexp family needs key 'a'");
    double av = 0.0;
    try {
      av = std::stod(*a);
    } catch (const std::exception&) {
      throw ArgumentError("a must be a number");
    }
    return ModelManifold::superexp(N, av);
  }
  throw ArgumentError("unknown family '" + fam + "'");
}

}  // namespace hyperhardy
