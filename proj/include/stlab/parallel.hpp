#pragma once

// Data-parallel helpers. Reductions are split into fixed-size chunks that are
// summed in index order, so results do not depend on the thread count.

#include <array>
#include <cstddef>
#include <vector>

#include <omp.h>

namespace stlab::parallel {

inline constexpr std::size_t kChunk = std::size_t{1} << 14;

/// Sets the worker count for all kernels; n <= 0 keeps the OpenMP default.
void set_threads(int n);
int threads();
/// Thread count from the STL_THREADS environment variable, or 0 if unset/invalid.
int threads_from_env();

/// body(begin, end) over [0, n) in chunks, in parallel.
template <class Body>
void for_chunks(std::size_t n, Body&& body) {
  const auto chunks = static_cast<std::ptrdiff_t>((n + kChunk - 1) / kChunk);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t c = 0; c < chunks; ++c) {
    const std::size_t begin = static_cast<std::size_t>(c) * kChunk;
    const std::size_t end = begin + kChunk < n ? begin + kChunk : n;
    body(begin, end);
  }
}

/// K simultaneous deterministic sums; body(begin, end) returns the chunk partials.
template <std::size_t K, class Body>
std::array<double, K> chunked_sums(std::size_t n, Body&& body) {
  const std::size_t chunks = (n + kChunk - 1) / kChunk;
  std::vector<std::array<double, K>> partial(chunks);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t c = 0; c < static_cast<std::ptrdiff_t>(chunks); ++c) {
    const std::size_t begin = static_cast<std::size_t>(c) * kChunk;
    const std::size_t end = begin + kChunk < n ? begin + kChunk : n;
    partial[c] = body(begin, end);
  }
  std::array<double, K> total{};
  for (const auto& p : partial)
    for (std::size_t k = 0; k < K; ++k) total[k] += p[k];
  return total;
}

double dot(const std::vector<double>& a, const std::vector<double>& b);
/// sum_i a_i b_i w_i
double weighted_dot(const std::vector<double>& a, const std::vector<double>& b,
                    const std::vector<double>& w);
/// y += alpha x
void axpy(double alpha, const std::vector<double>& x, std::vector<double>& y);

}  // namespace stlab::parallel
