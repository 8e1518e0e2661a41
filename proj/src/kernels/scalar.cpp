#include <cmath>
#include <limits>

#include "rptopic/kernels.hpp"

namespace rptopic::kernels {
namespace {

void csr_matvec(const CsrView& a, double alpha, const double* x, double* y) {
  for (std::size_t r = 0; r < a.rows; ++r) {
    double acc = 0.0;
    for (std::size_t j = a.offsets[r]; j < a.offsets[r + 1]; ++j) {
      acc += a.values[j] * x[a.indices[j]];
    }
    y[r] = alpha * acc;
  }
}

void csr_matmul_block(const CsrView& a, double alpha, const double* x, double* y) {
  for (std::size_t r = 0; r < a.rows; ++r) {
    double acc[kBlock] = {};
    for (std::size_t j = a.offsets[r]; j < a.offsets[r + 1]; ++j) {
      const double w = a.values[j];
      const double* xr = x + static_cast<std::size_t>(a.indices[j]) * kBlock;
      for (std::size_t l = 0; l < kBlock; ++l) acc[l] += w * xr[l];
    }
    double* yr = y + r * kBlock;
    for (std::size_t l = 0; l < kBlock; ++l) yr[l] = alpha * acc[l];
  }
}

void cooc_block(const CsrView& a, const CsrView& b, double alpha, const double* x, double* y,
                std::size_t words) {
  for (std::size_t i = 0; i < words * kBlock; ++i) y[i] = 0.0;
  for (std::size_t m = 0; m < a.rows; ++m) {
    double u[kBlock] = {};
    for (std::size_t j = a.offsets[m]; j < a.offsets[m + 1]; ++j) {
      const double w = a.values[j];
      const double* xr = x + static_cast<std::size_t>(a.indices[j]) * kBlock;
      for (std::size_t l = 0; l < kBlock; ++l) u[l] += w * xr[l];
    }
    for (std::size_t j = b.offsets[m]; j < b.offsets[m + 1]; ++j) {
      const double w = b.values[j];
      double* yr = y + static_cast<std::size_t>(b.indices[j]) * kBlock;
      for (std::size_t l = 0; l < kBlock; ++l) yr[l] += w * u[l];
    }
  }
  for (std::size_t i = 0; i < words * kBlock; ++i) y[i] *= alpha;
}

std::size_t argmax_masked(const double* v, const std::uint8_t* excluded, std::size_t n) {
  std::size_t best = n;
  for (std::size_t i = 0; i < n; ++i) {
    if (excluded[i]) continue;
    if (best == n || v[i] > v[best]) best = i;
  }
  return best;
}

double max_masked(const double* v, const std::uint8_t* included, std::size_t n) {
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    if (included[i] && v[i] > best) best = v[i];
  }
  return best;
}

void far_mask(const double* row, const double* diag, double ref, double threshold,
              const std::uint8_t* silent, std::uint8_t* out, std::size_t n) {
  for (std::size_t j = 0; j < n; ++j) {
    const double dist = (ref + diag[j]) - 2.0 * row[j];
    out[j] = static_cast<std::uint8_t>(dist >= threshold && !silent[j]);
  }
}

double l1_distance(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += std::fabs(a[i] - b[i]);
  return acc;
}

}  // namespace

const KernelTable& scalar() {
  static const KernelTable table{"scalar",     &csr_matvec, &csr_matmul_block,
                                 &cooc_block,    &argmax_masked, &max_masked, &far_mask,
                                 &l1_distance};
  return table;
}

}  // namespace rptopic::kernels
