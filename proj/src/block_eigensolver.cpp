#include "stlab/block_eigensolver.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

#include "stlab/parallel.hpp"

namespace stlab {

namespace {

using Vec = std::vector<double>;

double m_dot(const Vec& a, const Vec& b, const Vec& m) { return parallel::weighted_dot(a, b, m); }

Vec random_vector(std::size_t n, const Vec& mass, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Vec v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = mass[i] > 0.0 ? dist(rng) : 0.0;
  return v;
}

/// M-orthonormalises `block` against `fixed` (already orthonormal) and itself,
/// replacing numerically dependent vectors by random ones.
void orthonormalize(std::vector<Vec>& block, const std::vector<Vec>& fixed, const Vec& mass,
                    std::mt19937_64& rng) {
  for (std::size_t j = 0; j < block.size(); ++j) {
    for (int attempt = 0; attempt < 5; ++attempt) {
      auto& v = block[j];
      const double before = std::sqrt(std::max(m_dot(v, v, mass), 0.0));
      for (int pass = 0; pass < 2; ++pass) {
        for (const auto& f : fixed) parallel::axpy(-m_dot(f, v, mass), f, v);
        for (std::size_t i = 0; i < j; ++i) parallel::axpy(-m_dot(block[i], v, mass), block[i], v);
      }
      const double after = std::sqrt(std::max(m_dot(v, v, mass), 0.0));
      if (after > 1e-10 * before && after > 0.0) {
        const double inv = 1.0 / after;
        parallel::for_chunks(v.size(), [&](std::size_t lo, std::size_t hi) {
          for (std::size_t i = lo; i < hi; ++i) v[i] *= inv;
        });
        break;
      }
      v = random_vector(v.size(), mass, rng);
    }
  }
}

/// Rayleigh-Ritz on an M-orthonormal block; overwrites block and a_block.
std::vector<double> rayleigh_ritz(std::vector<Vec>& block, std::vector<Vec>& a_block, const PencilOperators& ops) {
  const std::size_t p = block.size();
  for (std::size_t j = 0; j < p; ++j) ops.apply_stiffness(block[j], a_block[j]);
  Eigen::MatrixXd a(p, p), m(p, p);
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = i; j < p; ++j) {
      a(i, j) = a(j, i) = parallel::dot(block[i], a_block[j]);
      m(i, j) = m(j, i) = m_dot(block[i], block[j], ops.mass);
    }
  // symmetrise the projected stiffness against round-off
  a = 0.5 * (a + a.transpose()).eval();
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> solver(a, m);
  if (solver.info() != Eigen::Success) throw std::runtime_error("Rayleigh-Ritz projection failed");
  const Eigen::MatrixXd& coef = solver.eigenvectors();
  const std::size_t n = ops.size;
  std::vector<Vec> nb(p, Vec(n, 0.0)), na(p, Vec(n, 0.0));
  parallel::for_chunks(n, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t j = 0; j < p; ++j)
      for (std::size_t i = 0; i < p; ++i) {
        const double c = coef(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        for (std::size_t r = lo; r < hi; ++r) {
          nb[j][r] += c * block[i][r];
          na[j][r] += c * a_block[i][r];
        }
      }
  });
  block.swap(nb);
  a_block.swap(na);
  std::vector<double> values(p);
  for (std::size_t j = 0; j < p; ++j) values[j] = solver.eigenvalues()(static_cast<Eigen::Index>(j));
  return values;
}

double pair_residual(const Vec& x, const Vec& ax, double theta, const Vec& mass, double scale) {
  const auto s = parallel::chunked_sums<1>(x.size(), [&](std::size_t lo, std::size_t hi) {
    double acc = 0.0;
    for (std::size_t i = lo; i < hi; ++i)
      if (mass[i] > 0.0) {
        const double r = ax[i] - theta * mass[i] * x[i];
        acc += r * r / mass[i];
      }
    return std::array<double, 1>{acc};
  });
  return std::sqrt(s[0]) / scale;
}

}  // namespace

void canonicalize_eigenpairs(std::vector<double>& values, std::vector<Vec>& vectors,
                             std::vector<double>* residuals) {
  for (auto& v : vectors) {
    double peak = 0.0;
    for (double c : v) peak = std::max(peak, std::abs(c));
    for (double c : v)
      if (std::abs(c) > 1e-8 * peak) {
        if (c < 0.0)
          for (auto& e : v) e = -e;
        break;
      }
  }
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const double tie = 1e-12 * std::max(std::abs(values[a]), std::abs(values[b]));
    if (std::abs(values[a] - values[b]) > tie) return values[a] < values[b];
    return std::lexicographical_compare(vectors[a].begin(), vectors[a].end(), vectors[b].begin(),
                                        vectors[b].end(), [](double x, double y) { return x > y; });
  });
  std::vector<double> v2, r2;
  std::vector<Vec> x2;
  for (auto i : order) {
    v2.push_back(values[i]);
    x2.push_back(std::move(vectors[i]));
    if (residuals) r2.push_back((*residuals)[i]);
  }
  values.swap(v2);
  vectors.swap(x2);
  if (residuals) residuals->swap(r2);
}

PencilEigenpairs block_inverse_iteration(const PencilOperators& ops, std::size_t k, double tol,
                                         std::vector<Vec> initial, const BlockIterationOptions& options) {
  const std::size_t n = ops.size;
  if (k == 0) throw std::invalid_argument("need at least one eigenpair");
  if (!(tol > 0.0)) throw std::invalid_argument("eigen tolerance must be positive");
  if (ops.mass.size() != n) throw std::invalid_argument("mass diagonal size mismatch");
  const auto active_dofs =
      static_cast<std::size_t>(std::count_if(ops.mass.begin(), ops.mass.end(), [](double m) { return m > 0.0; }));
  if (k > active_dofs) throw std::invalid_argument("more eigenpairs requested than unknowns");
  const std::size_t p = std::min(k + options.guard, active_dofs);

  std::mt19937_64 rng(options.seed);
  std::vector<Vec> block;
  for (auto& v : initial) {
    if (block.size() == p) break;
    if (v.size() != n) throw std::invalid_argument("initial vector size mismatch");
    for (std::size_t i = 0; i < n; ++i)
      if (!(ops.mass[i] > 0.0)) v[i] = 0.0;
    block.push_back(std::move(v));
  }
  while (block.size() < p) block.push_back(random_vector(n, ops.mass, rng));

  PencilEigenpairs result;
  std::vector<Vec> locked;
  std::vector<double> locked_values;
  orthonormalize(block, locked, ops.mass, rng);
  std::vector<Vec> a_block(p, Vec(n));
  auto theta = rayleigh_ritz(block, a_block, ops);

  std::vector<double> res(p);
  for (int outer = 0;; ++outer) {
    const double scale_floor = 1e-3 * std::abs(theta.back());
    for (std::size_t j = 0; j < block.size(); ++j)
      res[j] = pair_residual(block[j], a_block[j], theta[j], ops.mass,
                             std::max({std::abs(theta[j]), scale_floor, 1e-300}));
    // lock converged leading pairs
    std::size_t newly = 0;
    while (locked.size() + newly < k && newly < block.size() && res[newly] <= tol) ++newly;
    for (std::size_t j = 0; j < newly; ++j) {
      locked.push_back(std::move(block[j]));
      locked_values.push_back(theta[j]);
      result.residuals.push_back(res[j]);
    }
    block.erase(block.begin(), block.begin() + static_cast<std::ptrdiff_t>(newly));
    a_block.erase(a_block.begin(), a_block.begin() + static_cast<std::ptrdiff_t>(newly));
    theta.erase(theta.begin(), theta.begin() + static_cast<std::ptrdiff_t>(newly));
    res.erase(res.begin(), res.begin() + static_cast<std::ptrdiff_t>(newly));
    result.outer_iterations = outer;
    if (locked.size() >= k) {
      result.converged = true;
      break;
    }
    if (outer >= options.max_outer || block.empty()) break;

    std::vector<Vec> next(block.size(), Vec(n));
    Vec rhs(n);
    for (std::size_t j = 0; j < block.size(); ++j) {
      const double denom = theta[j] + ops.shift;
      const double guess_scale = std::abs(denom) > 1e-300 ? 1.0 / denom : 1.0;
      parallel::for_chunks(n, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) {
          rhs[i] = ops.mass[i] * block[j][i];
          next[j][i] = guess_scale * block[j][i];
        }
      });
      const double inner_tol =
          std::clamp(options.inner_tol_factor * res[j], options.inner_tol_floor, options.inner_tol_ceiling);
      result.inner_iterations += ops.solve_shifted(rhs, next[j], inner_tol);
    }
    block.swap(next);
    orthonormalize(block, locked, ops.mass, rng);
    theta = rayleigh_ritz(block, a_block, ops);
  }

  // unconverged remainder fills up to k
  for (std::size_t j = 0; locked.size() < k && j < block.size(); ++j) {
    locked.push_back(std::move(block[j]));
    locked_values.push_back(theta[j]);
    result.residuals.push_back(res[j]);
  }
  canonicalize_eigenpairs(locked_values, locked, &result.residuals);
  result.values = std::move(locked_values);
  result.vectors = std::move(locked);
  return result;
}

}  // namespace stlab
