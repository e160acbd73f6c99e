#pragma once

#include "moo/core.hpp"

namespace moo {

/// Symmetric matrix of pairwise gradient inner products, m[i][j] = <g_i, g_j>.
/// Positive semidefinite by construction.
class GramMatrix {
 public:
  explicit GramMatrix(std::vector<Vec> m);
  std::size_t size() const { return m_.size(); }
  double at(std::size_t i, std::size_t j) const { return m_[i][j]; }
  const std::vector<Vec>& rows() const { return m_; }

 private:
  std::vector<Vec> m_;
};

GramMatrix gram_matrix(const GradientSet& g);

struct MinNormResult {
  SimplexWeights alpha;
  Vec direction;     // sum_t alpha[t] * g[t]
  double sq_norm;    // direction . direction
  int iterations;    // conditional-gradient iterations performed
  Vec q_trace;       // quadratic objective after each iteration, non-increasing
};

/// Index r minimizing (M alpha)_r, ties broken by lowest index.
std::size_t fw_linear_minimizer(const SimplexWeights& alpha, const GramMatrix& m);

/// Exact minimizer in [0, 1] of the quadratic
///   q(gamma) = ((1-gamma) alpha + gamma e_t)' M ((1-gamma) alpha + gamma e_t).
/// When the quadratic coefficient is below 1e-12 the cheaper endpoint wins,
/// with gamma = 0 on ties.
double fw_line_search(const SimplexWeights& alpha, std::size_t t_hat, const GramMatrix& m);

/// Min-norm point of the convex hull of the objective gradients, via
/// conditional-gradient iterations over the weight simplex starting from the
/// uniform point. The Gram matrix is computed once; iterations stop when the
/// step size falls to gamma_tol or the iteration limit is hit. A final
/// active-set projection sharpens the weights to machine-precision
/// stationarity, which the descent-direction guarantee needs.
///
/// Degenerate all-zero gradients return uniform weights with sq_norm 0:
/// every weighting is stationary there.
MinNormResult frank_wolfe_solve(const GradientSet& g, int max_iters = 100,
                                double gamma_tol = 1e-5);

}  // namespace moo
