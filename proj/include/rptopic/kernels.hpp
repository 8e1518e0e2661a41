#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

#include "rptopic/sparse.hpp"

// Inner loops of the projector, detector and evaluator. Every kernel has a
// scalar reference implementation; SIMD variants are selected at runtime and
// must match the reference (bit-for-bit where documented).
namespace rptopic::kernels {

// Number of directions projected together by the blocked product.
inline constexpr std::size_t kBlock = 8;

struct CsrView {
  std::size_t rows = 0;
  const std::size_t* offsets = nullptr;
  const std::uint32_t* indices = nullptr;
  const double* values = nullptr;

  static CsrView of(const CsrMatrix<double>& m) {
    return {m.rows, m.offsets.data(), m.indices.data(), m.values.data()};
  }
};

struct KernelTable {
  const char* name;

  // y[r] = alpha * sum_j A[r, j] * x[j]. Summation order is variant specific.
  void (*csr_matvec)(const CsrView& a, double alpha, const double* x, double* y);

  // Y = alpha * A * X with X (cols x kBlock) and Y (rows x kBlock) row-major.
  // Each lane accumulates in column order: identical across variants.
  void (*csr_matmul_block)(const CsrView& a, double alpha, const double* x, double* y);

  // Y = alpha * B^T (A X) for doc-major A and B (docs x W), X and Y (W x kBlock)
  // row-major. Documents are visited in order and each is fully applied before
  // the next, so the working set is X, Y and one row of lanes. Each lane
  // accumulates in the same order in every variant: identical across variants.
  void (*cooc_block)(const CsrView& a, const CsrView& b, double alpha, const double* x, double* y,
                     std::size_t words);

  // Lowest index of the maximum over entries with excluded[i] == 0; n if none.
  std::size_t (*argmax_masked)(const double* v, const std::uint8_t* excluded, std::size_t n);

  // Maximum over entries with included[i] != 0; -inf if none.
  double (*max_masked)(const double* v, const std::uint8_t* included, std::size_t n);

  // out[j] = (ref + diag[j]) - 2 row[j] >= threshold && !silent[j].
  void (*far_mask)(const double* row, const double* diag, double ref, double threshold,
                   const std::uint8_t* silent, std::uint8_t* out, std::size_t n);

  double (*l1_distance)(const double* a, const double* b, std::size_t n);
};

const KernelTable& scalar();

// nullptr when not compiled in or the CPU lacks AVX2.
const KernelTable* avx2();

// Chosen once: RPTOPIC_SIMD=scalar|avx2 overrides CPU detection.
const KernelTable& active();

}  // namespace rptopic::kernels
