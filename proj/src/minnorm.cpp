#include "moo/minnorm.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

namespace moo {

namespace {

double quad_form(const GramMatrix& m, const Vec& a) {
  const std::size_t n = a.size();
  double q = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < n; ++j) row += m.at(i, j) * a[j];
    q += a[i] * row;
  }
  return q;
}

Vec mat_vec(const GramMatrix& m, const Vec& a) {
  const std::size_t n = a.size();
  Vec out(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < n; ++j) row += m.at(i, j) * a[j];
    out[i] = row;
  }
  return out;
}

std::size_t argmin_mv(const Vec& mv) {
  std::size_t best = 0;
  for (std::size_t r = 1; r < mv.size(); ++r) {
    if (mv[r] < mv[best]) best = r;
  }
  return best;
}

double line_search_impl(const Vec& alpha, std::size_t t_hat, const GramMatrix& m) {
  // q(gamma) = (1-g)^2 a + 2 g (1-g) b + g^2 c
  const Vec mv = mat_vec(m, alpha);
  double a = 0.0;
  for (std::size_t i = 0; i < alpha.size(); ++i) a += alpha[i] * mv[i];
  const double b = mv[t_hat];
  const double c = m.at(t_hat, t_hat);
  const double curv = a - 2.0 * b + c;
  if (curv <= 1e-12) {
    // flat or concave along the segment: an endpoint wins, prefer gamma = 0
    return (a <= c) ? 0.0 : 1.0;
  }
  const double gamma = (a - b) / curv;
  return std::clamp(gamma, 0.0, 1.0);
}

// Solve min b' M b subject to sum(b) = 1 over the coordinates in `support`
// (sign unconstrained), via Gaussian elimination on the bordered KKT system.
std::optional<Vec> solve_affine(const GramMatrix& m, const std::vector<std::size_t>& support,
                                double scale) {
  const std::size_t k = support.size();
  const std::size_t n = k + 1;
  std::vector<Vec> a(n, Vec(n + 1, 0.0));
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) a[i][j] = m.at(support[i], support[j]);
    a[i][k] = 1.0;
    a[i][n] = 0.0;
  }
  for (std::size_t j = 0; j < k; ++j) a[k][j] = 1.0;
  a[k][k] = 0.0;
  a[k][n] = 1.0;

  const double pivot_tol = 1e-13 * std::max(scale, 1.0);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r) {
      if (std::fabs(a[r][col]) > std::fabs(a[piv][col])) piv = r;
    }
    if (std::fabs(a[piv][col]) <= pivot_tol) return std::nullopt;
    std::swap(a[col], a[piv]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col) continue;
      const double f = a[r][col] / a[col][col];
      if (f == 0.0) continue;
      for (std::size_t cc = col; cc <= n; ++cc) a[r][cc] -= f * a[col][cc];
    }
  }
  Vec beta(k, 0.0);
  for (std::size_t i = 0; i < k; ++i) beta[i] = a[i][n] / a[i][i];
  if (!all_finite(beta)) return std::nullopt;
  return beta;
}

// Active-set polish: project onto the exact min-norm weights. Starts from the
// full support, prunes negative coordinates, and re-adds any vertex whose
// stationarity condition is violated. Falls back to `fallback` when the
// polished point is not strictly better.
Vec refine_alpha(const GramMatrix& m, const Vec& fallback, double scale) {
  const std::size_t t_count = m.size();
  std::vector<std::size_t> support(t_count);
  for (std::size_t i = 0; i < t_count; ++i) support[i] = i;

  Vec best = fallback;
  double best_q = quad_form(m, fallback);
  const double kkt_tol = 1e-11 * std::max(scale, 1.0);

  for (std::size_t major = 0; major < 4 * t_count + 4; ++major) {
    // prune infeasible coordinates until the affine solution is a simplex point
    Vec alpha;
    while (true) {
      auto beta = solve_affine(m, support, scale);
      if (!beta) {
        if (support.size() <= 1) return best;
        support.pop_back();  // singular face, retry on a smaller one
        continue;
      }
      double min_b = (*beta)[0];
      std::size_t min_i = 0;
      for (std::size_t i = 1; i < beta->size(); ++i) {
        if ((*beta)[i] < min_b) {
          min_b = (*beta)[i];
          min_i = i;
        }
      }
      if (min_b < -1e-12) {
        if (support.size() <= 1) return best;
        support.erase(support.begin() + static_cast<std::ptrdiff_t>(min_i));
        continue;
      }
      alpha.assign(t_count, 0.0);
      for (std::size_t i = 0; i < support.size(); ++i)
        alpha[support[i]] = std::max(0.0, (*beta)[i]);
      break;
    }

    const double q = quad_form(m, alpha);
    if (q < best_q) {
      best_q = q;
      best = alpha;
    }

    // stationarity over all vertices: (M alpha)_r >= alpha' M alpha
    const Vec mv = mat_vec(m, alpha);
    std::size_t worst = argmin_mv(mv);
    if (mv[worst] >= q - kkt_tol) return best;
    if (std::find(support.begin(), support.end(), worst) != support.end()) return best;
    support.push_back(worst);
    std::sort(support.begin(), support.end());
  }
  return best;
}

Vec combine(const GradientSet& g, const Vec& alpha) {
  const std::size_t d = g.dim();
  Vec dir(d, 0.0);
  for (std::size_t t = 0; t < g.objective_count(); ++t) {
    const Vec& row = g.row(t);
    const double a = alpha[t];
    if (a == 0.0) continue;
    for (std::size_t i = 0; i < d; ++i) dir[i] += a * row[i];
  }
  return dir;
}

}  // namespace

GramMatrix::GramMatrix(std::vector<Vec> m) : m_(std::move(m)) {
  if (m_.empty()) throw ContractViolation("GramMatrix: empty");
  for (const Vec& row : m_) {
    if (row.size() != m_.size()) throw ContractViolation("GramMatrix: not square");
  }
  for (std::size_t i = 0; i < m_.size(); ++i) {
    for (std::size_t j = i + 1; j < m_.size(); ++j) {
      if (std::fabs(m_[i][j] - m_[j][i]) > 1e-9 * std::max(1.0, std::fabs(m_[i][j])))
        throw ContractViolation("GramMatrix: not symmetric");
    }
  }
}

GramMatrix gram_matrix(const GradientSet& g) {
  const std::size_t t_count = g.objective_count();
  const std::size_t d = g.dim();
  std::vector<Vec> m(t_count, Vec(t_count, 0.0));
  for (std::size_t i = 0; i < t_count; ++i) {
    for (std::size_t j = i; j < t_count; ++j) {
      double dot = 0.0;
      const Vec& gi = g.row(i);
      const Vec& gj = g.row(j);
      for (std::size_t x = 0; x < d; ++x) dot += gi[x] * gj[x];
      m[i][j] = dot;
      m[j][i] = dot;
    }
  }
  return GramMatrix(std::move(m));
}

std::size_t fw_linear_minimizer(const SimplexWeights& alpha, const GramMatrix& m) {
  if (alpha.size() != m.size())
    throw ContractViolation("fw_linear_minimizer: dimension mismatch");
  return argmin_mv(mat_vec(m, alpha.alpha()));
}

double fw_line_search(const SimplexWeights& alpha, std::size_t t_hat, const GramMatrix& m) {
  if (alpha.size() != m.size() || t_hat >= m.size())
    throw ContractViolation("fw_line_search: dimension mismatch");
  return line_search_impl(alpha.alpha(), t_hat, m);
}

MinNormResult frank_wolfe_solve(const GradientSet& g, int max_iters, double gamma_tol) {
  if (max_iters < 1) throw ContractViolation("frank_wolfe_solve: max_iters must be >= 1");
  if (!(gamma_tol > 0.0)) throw ContractViolation("frank_wolfe_solve: gamma_tol must be > 0");

  const std::size_t t_count = g.objective_count();
  if (t_count == 1) {
    Vec dir = g.row(0);
    double sq = 0.0;
    for (double x : dir) sq += x * x;
    return MinNormResult{SimplexWeights({1.0}), std::move(dir), sq, 0, {}};
  }

  const GramMatrix m = gram_matrix(g);
  double scale = 0.0;
  for (std::size_t i = 0; i < t_count; ++i)
    for (std::size_t j = 0; j < t_count; ++j) scale = std::max(scale, std::fabs(m.at(i, j)));
  if (scale <= 1e-30) {
    // all gradients numerically zero: any weighting satisfies stationarity
    return MinNormResult{SimplexWeights::uniform(t_count), Vec(g.dim(), 0.0), 0.0, 0, {}};
  }

  Vec alpha(t_count, 1.0 / static_cast<double>(t_count));
  Vec q_trace;
  int iters = 0;
  while (iters < max_iters) {
    const std::size_t t_hat = argmin_mv(mat_vec(m, alpha));
    const double gamma = line_search_impl(alpha, t_hat, m);
    ++iters;
    for (std::size_t i = 0; i < t_count; ++i) alpha[i] *= (1.0 - gamma);
    alpha[t_hat] += gamma;
    q_trace.push_back(quad_form(m, alpha));
    if (gamma <= gamma_tol) break;
  }

  const Vec polished = refine_alpha(m, alpha, scale);
  if (quad_form(m, polished) < quad_form(m, alpha)) alpha = polished;

  Vec dir = combine(g, alpha);
  double sq = 0.0;
  for (double x : dir) sq += x * x;
  return MinNormResult{SimplexWeights(std::move(alpha)), std::move(dir), sq, iters,
                       std::move(q_trace)};
}

}  // namespace moo
