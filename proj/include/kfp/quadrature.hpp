#pragma once

#include <cmath>
#include <vector>

#include "kfp/common.hpp"

namespace kfp {

struct Quad1d {
    std::vector<double> x;
    std::vector<double> w;
};

// Gauss-Hermite rule for weight e^{-x^2}; exact through degree 2n-1.
Quad1d gauss_hermite(int n);

// Same nodes transformed to the standard Gaussian weight
// (2*pi)^{-1/2} e^{-v^2/2}; weights sum to 1.
Quad1d gauss_hermite_gamma(int n);

// Gauss-Legendre rule on [a, b].
Quad1d gauss_legendre(int n, double a, double b);

// int_a^inf t^n e^{-t^2} dt (a >= 0).
double upper_gaussian_moment(int n, double a);

// int_{-inf}^inf t^n e^{-t^2} dt.
double full_gaussian_moment(int n);

}  // namespace kfp
