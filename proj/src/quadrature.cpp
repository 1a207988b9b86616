#include "kfp/quadrature.hpp"

#include <numbers>
#include <stdexcept>

namespace kfp {

Quad1d gauss_hermite(int n) {
    if (n < 1 || n > 180) throw std::invalid_argument("gauss_hermite: order out of range");
    Quad1d q;
    q.x.resize(n);
    q.w.resize(n);
    const double pim4 = 0.7511255444649425;  // pi^{-1/4}
    const int m = (n + 1) / 2;
    double z = 0;
    for (int i = 0; i < m; ++i) {
        // Stroud-Secrest style initial guesses, then Newton on the
        // orthonormal recurrence.
        if (i == 0)
            z = std::sqrt(2.0 * n + 1.0) - 1.85575 * std::pow(2.0 * n + 1.0, -1.0 / 6.0);
        else if (i == 1)
            z -= 1.14 * std::pow(static_cast<double>(n), 0.426) / z;
        else if (i == 2)
            z = 1.86 * z - 0.86 * q.x[0];
        else if (i == 3)
            z = 1.91 * z - 0.91 * q.x[1];
        else
            z = 2.0 * z - q.x[i - 2];
        double pp = 0;
        for (int iter = 0; iter < 100; ++iter) {
            double p1 = pim4, p2 = 0;
            for (int j = 1; j <= n; ++j) {
                double p3 = p2;
                p2 = p1;
                p1 = z * std::sqrt(2.0 / j) * p2 - std::sqrt((j - 1.0) / j) * p3;
            }
            pp = std::sqrt(2.0 * n) * p2;
            double dz = p1 / pp;
            z -= dz;
            if (std::abs(dz) < 1e-15 * (1.0 + std::abs(z))) break;
        }
        q.x[i] = z;
        q.x[n - 1 - i] = -z;
        q.w[i] = 2.0 / (pp * pp);
        q.w[n - 1 - i] = q.w[i];
    }
    if (n % 2 == 1) q.x[n / 2] = 0.0;
    // ascending nodes
    for (int i = 0; i < n / 2; ++i) {
        std::swap(q.x[i], q.x[n - 1 - i]);
        std::swap(q.w[i], q.w[n - 1 - i]);
    }
    return q;
}

Quad1d gauss_hermite_gamma(int n) {
    Quad1d q = gauss_hermite(n);
    const double s = 1.0 / std::sqrt(std::numbers::pi);
    for (int i = 0; i < n; ++i) {
        q.x[i] *= std::numbers::sqrt2;
        q.w[i] *= s;
    }
    return q;
}

Quad1d gauss_legendre(int n, double a, double b) {
    if (n < 1) throw std::invalid_argument("gauss_legendre: order out of range");
    Quad1d q;
    q.x.resize(n);
    q.w.resize(n);
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double pp = 0;
        for (int iter = 0; iter < 100; ++iter) {
            double p1 = 1.0, p2 = 0.0;
            for (int j = 0; j < n; ++j) {
                double p3 = p2;
                p2 = p1;
                p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1.0);
            }
            pp = n * (z * p1 - p2) / (z * z - 1.0);
            double dz = p1 / pp;
            z -= dz;
            if (std::abs(dz) < 1e-15) break;
        }
        const double xm = 0.5 * (b + a), xl = 0.5 * (b - a);
        q.x[i] = xm - xl * z;
        q.x[n - 1 - i] = xm + xl * z;
        q.w[i] = 2.0 * xl / ((1.0 - z * z) * pp * pp);
        q.w[n - 1 - i] = q.w[i];
    }
    return q;
}

double upper_gaussian_moment(int n, double a) {
    if (n == 0) return 0.5 * std::sqrt(std::numbers::pi) * std::erfc(a);
    if (n == 1) return 0.5 * std::exp(-a * a);
    return 0.5 * (n - 1) * upper_gaussian_moment(n - 2, a) + 0.5 * std::pow(a, n - 1) * std::exp(-a * a);
}

double full_gaussian_moment(int n) {
    if (n % 2 == 1) return 0.0;
    double r = std::sqrt(std::numbers::pi);
    for (int k = 2; k <= n; k += 2) r *= (k - 1) * 0.5;
    return r;
}

}  // namespace kfp
