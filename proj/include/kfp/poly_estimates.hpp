#pragma once

#include "kfp/hermite_newton.hpp"
#include "kfp/multipoly.hpp"

namespace kfp {

// Heat-kernel weighted integrals of polynomials, exact via Gauss-Hermite /
// truncated Gaussian moments. Gamma(t,x-y) = (4 pi t)^{-d/2} exp(-|x-y|^2/4t).
double heat_weighted_integral(const DPoly& p, double t, const std::array<double, kMaxDim>& y);
double heat_weighted_integral_cube(const DPoly& p, double t, const std::array<double, kMaxDim>& y, double r);

// Frobenius norms of the symmetric derivative / forward-difference tensors
// at the origin: |grad^n p(0)| = sqrt(sum_{|b|=n} (n!/b!) (d^b p(0))^2).
double deriv_tensor_norm(const DPoly& p, int n);
double diff_tensor_norm(const DPoly& p, int n);

// Evaluates the five polynomial inequalities on randomized polynomials
// (degree <= 6, d <= 3) and reports the worst observed constants. Explicit
// constants are enforced as stated; unspecified ones are checked against
// regression-locked fitted values with 10% headroom.
SelfTestReport poly_estimate_suite(double tol = 1e-9);

}  // namespace kfp
