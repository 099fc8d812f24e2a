#pragma once

#include <functional>

namespace noma {

struct QuadResult {
  double value = 0.0;
  double abs_error = 0.0;
};

/// Adaptive integration of f over [a, b] (GSL QAGS).
QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     double epsabs = 0.0, double epsrel = 1e-10);

/// Adaptive integration of f over [a, inf) (GSL QAGIU).
QuadResult integrate_to_inf(const std::function<double(double)>& f, double a,
                            double epsabs = 0.0, double epsrel = 1e-10);

}  // namespace noma
