#pragma once

#include <Eigen/Sparse>

#include "kfp/phase_field.hpp"
#include "kfp/potential.hpp"

namespace kfp {

// Galerkin matrix of L = -div_v a grad_v + v.a grad_v - v.grad_x + grad H.grad_v
// on the truncated Fourier x Hermite basis. The collision part acts as
// sum_ij a_ij(x) A*_i A_j in the ladder calculus, transport couples the
// Fourier mode k to a Hermite raise/lower with factor -2 pi i k_j, the force
// is a Fourier convolution with the coefficients of d_j H times A_j.
struct SparseOperator {
    BasisPtr basis;
    Eigen::SparseMatrix<cplx, Eigen::RowMajor> mat;
    Eigen::MatrixXd a_mean;
    uint64_t pot_hash = 0;
    uint64_t friction_hash = 0;
};

SparseOperator assemble_operator(const Potential& pot, const FrictionMatrix& a, BasisPtr basis);

inline SparseOperator assemble_operator(const Potential& pot, const FrictionMatrix& a, Cuts cuts) {
    return assemble_operator(pot, a, make_basis(pot.dim(), cuts));
}

PhaseField apply(const SparseOperator& op, const PhaseField& f);

// dm-weighted functionals (dm normalized to a probability measure).
double dm_integral(const PhaseField& f, const Potential& pot);
double inner_product_m(const PhaseField& f, const PhaseField& g, const Potential& pot);

// gamma average of a field as a scalar Fourier series (n = 0 slice).
FourierSeries gamma_average(const PhaseField& f);

// sigma average of a scalar Fourier series: int g e^{-H} dx / int e^{-H} dx.
double sigma_average(const FourierSeries& g, const Potential& pot);

}  // namespace kfp
