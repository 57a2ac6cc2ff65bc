#pragma once

#include <functional>

#include "lcnf/types.hpp"

namespace lcnf {

// Double-exponential (tanh-sinh) quadrature on (0,1); handles integrable
// endpoint singularities.
double tanh_sinh_01(const std::function<double(double)>& f, double tol = 1e-13);

// int_0^1 (1-x)^a x^b dx by quadrature (no Gamma identities).
double beta_integral_quad(double a, double b);

// Quadratic coefficient of the heteroclinic curve from the Melnikov
// condition M(0) = 0, with the two moment integrals evaluated numerically.
double melnikov_numeric(double theta, double delta, double Theta, double Delta);

}  // namespace lcnf
