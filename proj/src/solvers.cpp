#include "stlab/solvers.hpp"

#include <cmath>
#include <sstream>

#include "stlab/block_eigensolver.hpp"
#include "stlab/parallel.hpp"

namespace stlab {

int default_cg_budget(std::size_t unknowns) {
  return static_cast<int>(std::ceil(50.0 * std::cbrt(static_cast<double>(unknowns))));
}

CgStats conjugate_gradient_box(const GridOperator& op, std::span<const double> b, std::span<double> x,
                               double tol, int max_iterations) {
  if (!(tol > 0.0)) throw std::invalid_argument("CG tolerance must be positive");
  const std::size_t n = op.grid().node_count();
  if (b.size() != n || x.size() != n) throw std::invalid_argument("box vector size mismatch");
  const int budget = max_iterations > 0 ? max_iterations : default_cg_budget(op.size());
  const auto& dinv = op.inverse_diagonal_box();

  const double bnorm = std::sqrt(parallel::chunked_sums<1>(n, [&](std::size_t lo, std::size_t hi) {
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += b[i] * b[i];
    return std::array<double, 1>{s};
  })[0]);
  if (bnorm == 0.0) {
    std::fill(x.begin(), x.end(), 0.0);
    return {0, 0.0};
  }

  std::vector<double> r(n), p(n), q(n);
  op.apply_symmetric_box(x, q);
  auto sums = parallel::chunked_sums<2>(n, [&](std::size_t lo, std::size_t hi) {
    double rr = 0.0, rz = 0.0;
    for (std::size_t i = lo; i < hi; ++i) {
      const double ri = (b[i] - q[i]) * (dinv[i] != 0.0 ? 1.0 : 0.0);
      r[i] = ri;
      p[i] = dinv[i] * ri;
      rr += ri * ri;
      rz += ri * p[i];
    }
    return std::array<double, 2>{rr, rz};
  });
  double rz = sums[1];
  double res = std::sqrt(sums[0]) / bnorm;
  int it = 0;
  while (res > tol) {
    if (it >= budget) {
      std::ostringstream msg;
      msg << "CG did not converge in " << budget << " iterations (relative residual " << res << ")";
      throw NonConvergence(msg.str(), it, res);
    }
    op.apply_symmetric_box(p, q);
    const double pq = parallel::chunked_sums<1>(n, [&](std::size_t lo, std::size_t hi) {
      double s = 0.0;
      for (std::size_t i = lo; i < hi; ++i) s += p[i] * q[i];
      return std::array<double, 1>{s};
    })[0];
    if (!(pq > 0.0)) throw NonConvergence("CG breakdown: operator not positive definite", it, res);
    const double alpha = rz / pq;
    sums = parallel::chunked_sums<2>(n, [&](std::size_t lo, std::size_t hi) {
      double rr = 0.0, rzn = 0.0;
      for (std::size_t i = lo; i < hi; ++i) {
        x[i] += alpha * p[i];
        const double ri = r[i] - alpha * q[i];
        r[i] = ri;
        rr += ri * ri;
        rzn += ri * ri * dinv[i];
      }
      return std::array<double, 2>{rr, rzn};
    });
    const double beta = sums[1] / rz;
    rz = sums[1];
    res = std::sqrt(sums[0]) / bnorm;
    ++it;
    if (res <= tol) break;
    parallel::for_chunks(n, [&](std::size_t lo, std::size_t hi) {
      for (std::size_t i = lo; i < hi; ++i) p[i] = dinv[i] * r[i] + beta * p[i];
    });
  }
  return {it, res};
}

PoissonSolution solve_poisson(const GridOperator& op, const Field& rhs, double tol) {
  if (rhs.size() != op.size()) throw std::invalid_argument("right-hand side does not match the operator");
  auto b = rhs.to_box();
  const auto& w = op.mass_box();
  parallel::for_chunks(b.size(), [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) b[i] *= w[i];
  });
  std::vector<double> x(b.size(), 0.0);
  const auto stats = conjugate_gradient_box(op, b, x, tol);
  return {Field::from_box(op.grid_ptr(), x), stats};
}

std::vector<EigenPair> smallest_eigenpairs(const GridOperator& op, std::size_t k, double tol,
                                           const EigenOptions& options, EigenSolveStats* stats) {
  if (k == 0) throw std::invalid_argument("need at least one eigenpair");
  if (k >= op.size()) throw std::invalid_argument("too many eigenpairs for this grid");
  PencilOperators ops;
  ops.size = op.grid().node_count();
  ops.mass = op.mass_box();
  ops.apply_stiffness = [&op](std::span<const double> in, std::span<double> out) {
    op.apply_symmetric_box(in, out);
  };
  ops.solve_shifted = [&op](std::span<const double> rhs, std::span<double> x, double rel_tol) {
    return conjugate_gradient_box(op, rhs, x, rel_tol).iterations;
  };
  std::vector<std::vector<double>> initial;
  for (const auto& f : options.initial) initial.push_back(f.to_box());
  BlockIterationOptions bopts;
  bopts.guard = options.guard;
  bopts.max_outer = options.max_outer;
  auto pairs = block_inverse_iteration(ops, k, tol, std::move(initial), bopts);
  if (stats) *stats = {pairs.outer_iterations, pairs.inner_iterations};
  if (!pairs.converged) {
    std::ostringstream msg;
    msg << "eigen solver did not converge in " << pairs.outer_iterations << " outer iterations; residuals:";
    double worst = 0.0;
    for (double r : pairs.residuals) {
      msg << ' ' << r;
      worst = std::max(worst, r);
    }
    throw NonConvergence(msg.str(), pairs.outer_iterations, worst, pairs.residuals);
  }
  std::vector<EigenPair> out;
  for (std::size_t j = 0; j < k; ++j)
    out.push_back({pairs.values[j], Field::from_box(op.grid_ptr(), pairs.vectors[j]), pairs.residuals[j]});
  return out;
}

}  // namespace stlab
