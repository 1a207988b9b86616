#pragma once

#include "kfp/spectral_operator.hpp"

namespace kfp {

struct SolveOptions {
    double tol = 1e-10;
    double compat_tol = 1e-10;
    int max_iter = 4000;
    int restart = 120;
};

struct SolveResult {
    PhaseField phi;
    double rel_residual = 0;
    int iterations = 0;
    std::vector<double> history;
};

// Per-Fourier-mode inverse of the constant-coefficient symbol
// (mean-friction collision block plus the 2 pi k transport coupling);
// the degenerate transport term stalls unpreconditioned Krylov iterations.
class BlockPreconditioner {
  public:
    BlockPreconditioner(const SparseOperator& op);
    void apply_inplace(Eigen::VectorXcd& x) const;
    const BasisPtr& basis() const { return basis_; }

  private:
    BasisPtr basis_;
    std::vector<Eigen::PartialPivLU<Eigen::MatrixXcd>> lu_;
};

// Solve L phi = rhs subject to int phi dm = 0. The singular direction is
// handled by a rank-one bordering L + (int . dm) e_0, which pins the
// dm-mean without perturbing compatible right-hand sides.
SolveResult solve_mean_zero(const SparseOperator& op, const Potential& pot, const PhaseField& rhs,
                            const SolveOptions& opt = {});

}  // namespace kfp
