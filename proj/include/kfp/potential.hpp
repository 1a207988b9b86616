#pragma once

#include <Eigen/Dense>
#include <map>

#include "kfp/common.hpp"

namespace kfp {

// Scalar periodic function as a finite Fourier series on T^d,
// f(x) = sum_k c_k e^{2 pi i k.x}.
struct FourierSeries {
    int dim = 1;
    std::map<MIdx, cplx> c;

    explicit FourierSeries(int d = 1) : dim(d) {}

    cplx coef(const MIdx& k) const {
        auto it = c.find(k);
        return it == c.end() ? cplx(0) : it->second;
    }
    void add(const MIdx& k, cplx v) {
        if (v == cplx(0)) return;
        c[k] += v;
        if (c[k] == cplx(0)) c.erase(k);
    }

    int max_mode() const {
        int m = 0;
        for (auto& [k, v] : c) m = std::max(m, k.max_abs());
        return m;
    }

    double eval(const std::array<double, kMaxDim>& x) const;
    FourierSeries derivative(int axis) const;  // d/dx_axis
    cplx mean() const { return coef(MIdx{}); }
    double hermitian_defect() const;  // deviation from c(-k) = conj(c(k))

    FourierSeries operator+(const FourierSeries& o) const;
    FourierSeries operator-(const FourierSeries& o) const;
    FourierSeries operator*(double s) const;
    FourierSeries product(const FourierSeries& o) const;  // convolution
};

// Periodic potential H as a real Fourier series with the derived force field
// and the sigma-weight exp(-H).
class Potential {
  public:
    explicit Potential(int dim = 1);
    static Potential zero(int dim) { return Potential(dim); }
    // lambda * cos(2 pi wave.x)
    static Potential cosine(int dim, double lambda, const MIdx& wave = midx(1));

    void set_mode(const MIdx& k, cplx coeff);  // also sets the conjugate mode

    int dim() const { return dim_; }
    const FourierSeries& h() const { return h_; }
    const FourierSeries& dh(int axis) const { return dh_[axis]; }
    int max_mode() const { return h_.max_mode(); }
    bool is_zero() const { return h_.c.empty(); }

    double eval(const std::array<double, kMaxDim>& x) const { return h_.eval(x); }
    double grad_eval(int axis, const std::array<double, kMaxDim>& x) const { return dh_[axis].eval(x); }
    double sup_grad_norm() const;  // max_x |grad H|, sampled

    // Fourier coefficients of exp(-H), computed once to near machine
    // precision; weight_mass is the k = 0 coefficient (= int exp(-H) dx).
    const FourierSeries& weight() const;
    double weight_mass() const { return weight().mean().real(); }
    double weight_eval(const std::array<double, kMaxDim>& x) const;
    // exact sigma-mass of one cell [lo, hi] per axis (1-d convenience)
    double weight_cell_mass_1d(double lo, double hi) const;

    uint64_t hash() const;

  private:
    int dim_;
    FourierSeries h_;
    std::array<FourierSeries, kMaxDim> dh_;
    mutable FourierSeries weight_;
    mutable bool weight_ready_ = false;

    void refresh_derivatives();
};

// d x d friction matrix, symmetric, uniformly positive definite, optionally
// x-dependent entry-wise as a finite Fourier series.
class FrictionMatrix {
  public:
    explicit FrictionMatrix(int dim = 1);
    static FrictionMatrix identity(int dim);
    static FrictionMatrix constant(const Eigen::MatrixXd& a);

    int dim() const { return dim_; }
    void set_mode(int i, int j, const MIdx& k, cplx v);  // symmetric in (i,j), Hermitian in k

    const FourierSeries& entry(int i, int j) const { return e_[i][j]; }
    bool is_constant() const;
    Eigen::MatrixXd mean() const;
    Eigen::MatrixXd eval(const std::array<double, kMaxDim>& x) const;
    int max_mode() const;
    double min_eigenvalue_sampled(int per_axis = 17) const;

    // throws std::invalid_argument on asymmetry / non-positive-definiteness
    void validate(double lambda_min = 1e-12) const;

    uint64_t hash() const;

  private:
    int dim_;
    std::array<std::array<FourierSeries, kMaxDim>, kMaxDim> e_;
};

}  // namespace kfp
