#pragma once

#include <map>

#include "kfp/macro_op.hpp"
#include "kfp/solver.hpp"

namespace kfp {

// Corrector hierarchy phi_alpha with the effective scalars and fields.
//
// Sign convention: the recursion L phi_a = sum_j v_j phi_{a-e_j} - <...> is
// taken literally; the stored effective tensors are a_alpha =
// +sum_j <v_j phi_{a-e_j}>_m, so that the macroscopic operator
// A = sum a_alpha d^a is the (positive-definite) operator of the homogenized
// heat equation and A = Delta in the free case. Equivalently
// sum_a L(phi_a d^a q) = -A q.
struct CorrectorSet {
    int dim = 1;
    int order = 0;
    Potential pot;
    FrictionMatrix friction;
    Cuts base_cuts;
    double tol = 1e-10;

    std::map<MIdx, PhaseField> phi;          // |alpha| <= order; phi_0 = 1
    std::map<MIdx, double> a_alpha;          // zero for |alpha| <= 1
    std::map<MIdx, double> residuals;        // per-alpha relative solve residuals
    std::array<std::array<FourierSeries, kMaxDim>, kMaxDim> a_field;  // a_ij(x) = <v_i phi_j>_gamma
    Eigen::MatrixXd a_matrix;                // a_ij = <v_i phj_j>_m

    const PhaseField& corrector(const MIdx& alpha) const;
    DiffTensors<double> tensors() const;
    uint64_t cache_key() const;

    // max_{|a|=k} ||phi_a|| for k = 0..order plus the fitted log-linear
    // growth rate (coefficient-norm surrogate of the C^k bound).
    struct GrowthFit {
        std::vector<double> level_norms;
        double log_c = 0;
        double r_squared = 0;
    };
    GrowthFit growth_fit() const;
};

CorrectorSet build_correctors(const Potential& pot, const FrictionMatrix& a, int order, Cuts cuts,
                              double tol = 1e-10, int threads = 1);

// Second-order correctors: L psi_ij = v_i phi_j - a_ij with mean-zero dm.
using SecondCorrectors = std::map<std::pair<int, int>, PhaseField>;
SecondCorrectors second_correctors(const CorrectorSet& cset, int threads = 1);

// Residual of the gamma-averaged identity
// <B psi_ij>_gamma = a_ij(x) - a_ij,  B = -v.grad_x + grad H.grad_v,
// as a sup over an x-grid, maximized over (i,j).
double avg_psi_identity(const SecondCorrectors& psi, const CorrectorSet& cset);

// Residual of the divergence-form reduction of the two-scale error term:
// sum_i d_i(e^{-H} a_ij(x)) = 0 in e^H-units, i.e.
// sum_i [d_i a_ij(x) - d_i H a_ij(x)] = 0 for each j.
struct DivergenceFormReport {
    double sup_residual = 0;    // the combined identity above
    double cross_residual = 0;  // sum_i d_i a_ij(x) vs <v.grad_x phi_j>_gamma
};
DivergenceFormReport divergence_form_identity(const CorrectorSet& cset);

}  // namespace kfp
