#pragma once

#include <Eigen/Dense>
#include <memory>
#include <vector>

#include "kfp/common.hpp"

namespace kfp {

struct Cuts {
    int nx = 0;  // max-norm bound on Fourier wave vectors
    int nv = 0;  // total-degree bound on Hermite indices
};

// Shared index bookkeeping for the truncated Fourier x Hermite basis:
// wave vectors |k|_inf <= nx, velocity indices |n|_1 <= nv (graded lex).
// Coefficient layout is k-major, n-minor.
class Basis {
  public:
    Basis(int dim, int nx, int nv);

    int dim() const { return dim_; }
    int nx() const { return cuts_.nx; }
    int nv() const { return cuts_.nv; }
    Cuts cuts() const { return cuts_; }

    long k_count() const { return k_count_; }
    long n_count() const { return static_cast<long>(vidx_.size()); }
    long size() const { return k_count_ * n_count(); }

    const std::vector<MIdx>& velocity_indices() const { return vidx_; }

    long k_flat(const MIdx& k) const;
    MIdx k_of(long flat) const;
    bool k_in_range(const MIdx& k) const { return k.max_abs() <= cuts_.nx; }

    long v_pos(const MIdx& n) const;  // -1 when |n|_1 > nv

    long index(const MIdx& k, const MIdx& n) const { return k_flat(k) * n_count() + v_pos(n); }

    bool same(const Basis& o) const { return dim_ == o.dim_ && cuts_.nx == o.cuts_.nx && cuts_.nv == o.cuts_.nv; }

  private:
    int dim_;
    Cuts cuts_;
    long k_count_;
    int k_side_;
    std::vector<MIdx> vidx_;
    std::vector<long> v_lookup_;  // packed (nv+1)-ary index -> position
    long v_pack(const MIdx& n) const;
};

using BasisPtr = std::shared_ptr<const Basis>;
BasisPtr make_basis(int dim, int nx, int nv);
BasisPtr make_basis(int dim, Cuts cuts);

// Truncated coefficient tensor of a (real-valued) function on T^d x R^d in
// the Fourier x Hermite basis; the velocity basis is orthonormal for gamma,
// so the flat coefficient norm is the L^2(dx x dgamma) norm.
class PhaseField {
  public:
    explicit PhaseField(BasisPtr basis);

    const BasisPtr& basis() const { return basis_; }
    Eigen::VectorXcd& coeffs() { return c_; }
    const Eigen::VectorXcd& coeffs() const { return c_; }

    cplx coef(const MIdx& k, const MIdx& n) const;
    void set_coef(const MIdx& k, const MIdx& n, cplx v);
    void add_coef(const MIdx& k, const MIdx& n, cplx v);

    double norm() const { return c_.norm(); }

    // reality invariant c(-k, n) = conj(c(k, n))
    double reality_defect() const;
    PhaseField& symmetrize_reality();

    PhaseField embedded(const BasisPtr& target) const;  // zero-pad into larger cuts

    // ladder operations
    PhaseField annihilate(int axis) const;         // d/dv_i, degree lowers
    PhaseField mul_v(int axis) const;              // v_i, degree raises by one
    PhaseField create(int axis) const;             // v_i - d/dv_i
    PhaseField dx(int axis) const;                 // 2 pi i k_i
    PhaseField gamma_average_field() const;        // n = 0 slice as a field

    // pointwise evaluation (real part; fields of interest are real)
    double eval(const std::array<double, kMaxDim>& x, const std::array<double, kMaxDim>& v) const;

    PhaseField operator+(const PhaseField& o) const;
    PhaseField operator-(const PhaseField& o) const;
    PhaseField operator*(double s) const;
    PhaseField operator*(cplx s) const;

    static PhaseField constant(BasisPtr basis, double value);
    static PhaseField hermite_unit(BasisPtr basis, const MIdx& n);            // one Hermite mode, k = 0
    static PhaseField fourier_unit(BasisPtr basis, const MIdx& k, cplx amp);  // one Fourier mode, n = 0

  private:
    BasisPtr basis_;
    Eigen::VectorXcd c_;
};

// Values of the orthonormal 1-d Hermite functions h_0..h_nmax at v.
void hermite_values(int nmax, double v, std::vector<double>& out);

}  // namespace kfp
