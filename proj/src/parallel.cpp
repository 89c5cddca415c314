#include "stlab/parallel.hpp"

#include <cstdlib>
#include <string>

namespace stlab::parallel {

void set_threads(int n) {
  if (n > 0) omp_set_num_threads(n);
}

int threads() { return omp_get_max_threads(); }

int threads_from_env() {
  const char* value = std::getenv("STL_THREADS");
  if (value == nullptr) return 0;
  try {
    const int n = std::stoi(value);
    return n > 0 ? n : 0;
  } catch (...) {
    return 0;
  }
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  return chunked_sums<1>(a.size(), [&](std::size_t lo, std::size_t hi) {
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += a[i] * b[i];
    return std::array<double, 1>{s};
  })[0];
}

double weighted_dot(const std::vector<double>& a, const std::vector<double>& b,
                    const std::vector<double>& w) {
  return chunked_sums<1>(a.size(), [&](std::size_t lo, std::size_t hi) {
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += a[i] * b[i] * w[i];
    return std::array<double, 1>{s};
  })[0];
}

void axpy(double alpha, const std::vector<double>& x, std::vector<double>& y) {
  for_chunks(x.size(), [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) y[i] += alpha * x[i];
  });
}

}  // namespace stlab::parallel
