#pragma once

#include <cmath>
#include <vector>

#include "hyperhardy/errors.hpp"

namespace hyperhardy {

/// X_1(t) = 1/(1 - log t), X_k = X_1(X_{k-1}); t in (0, 1].
inline double iterated_log(int k, double t) {
  if (k < 1) throw DomainError("iterated_log: k must be >= 1");
  if (!(t > 0.0) || t > 1.0) throw DomainError("iterated_log: t must lie in (0, 1]");
  double x = t;
  for (int i = 0; i < k; ++i) x = 1.0 / (1.0 - std::log(x));
  return x;
}

/// X_1..X_k at t together with the partial products P_i = X_1 ... X_i.
struct IteratedLogs {
  std::vector<double> X;
  std::vector<double> P;
};

inline IteratedLogs iterated_logs(int k, double t) {
  if (k < 0) throw DomainError("iterated_logs: k must be >= 0");
  if (!(t > 0.0) || t > 1.0) throw DomainError("iterated_logs: t must lie in (0, 1]");
  IteratedLogs out;
  double x = t, p = 1.0;
  for (int i = 0; i < k; ++i) {
    x = 1.0 / (1.0 - std::log(x));
    p *= x;
    out.X.push_back(x);
    out.P.push_back(p);
  }
  return out;
}

}  // namespace hyperhardy
