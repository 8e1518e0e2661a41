#include <immintrin.h>

#include <cmath>
#include <limits>

#include "rptopic/kernels.hpp"

namespace rptopic::kernels {
namespace {

double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d sh = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, sh));
}

double hmax(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_max_pd(lo, hi);
  __m128d sh = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_max_sd(lo, sh));
}

// Four 0/1 bytes widened to a 64-bit lane mask (all ones where byte != 0).
__m256d byte_mask(const std::uint8_t* m) {
  std::uint32_t packed;
  __builtin_memcpy(&packed, m, 4);
  __m128i bytes = _mm_cvtsi32_si128(static_cast<int>(packed));
  __m256i wide = _mm256_cvtepu8_epi64(bytes);
  __m256i nz = _mm256_cmpgt_epi64(wide, _mm256_setzero_si256());
  return _mm256_castsi256_pd(nz);
}

void csr_matvec(const CsrView& a, double alpha, const double* x, double* y) {
  for (std::size_t r = 0; r < a.rows; ++r) {
    std::size_t j = a.offsets[r];
    const std::size_t end = a.offsets[r + 1];
    __m256d acc = _mm256_setzero_pd();
    for (; j + 4 <= end; j += 4) {
      __m128i idx = _mm_loadu_si128(reinterpret_cast<const __m128i*>(a.indices + j));
      __m256d xv = _mm256_i32gather_pd(x, idx, 8);
      acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_loadu_pd(a.values + j), xv));
    }
    double tail = 0.0;
    for (; j < end; ++j) tail += a.values[j] * x[a.indices[j]];
    y[r] = alpha * (hsum(acc) + tail);
  }
}

void csr_matmul_block(const CsrView& a, double alpha, const double* x, double* y) {
  static_assert(kBlock == 8);
  const __m256d scale = _mm256_set1_pd(alpha);
  for (std::size_t r = 0; r < a.rows; ++r) {
    __m256d lo = _mm256_setzero_pd();
    __m256d hi = _mm256_setzero_pd();
    for (std::size_t j = a.offsets[r]; j < a.offsets[r + 1]; ++j) {
      const __m256d w = _mm256_set1_pd(a.values[j]);
      const double* xr = x + static_cast<std::size_t>(a.indices[j]) * kBlock;
      lo = _mm256_add_pd(lo, _mm256_mul_pd(w, _mm256_loadu_pd(xr)));
      hi = _mm256_add_pd(hi, _mm256_mul_pd(w, _mm256_loadu_pd(xr + 4)));
    }
    _mm256_storeu_pd(y + r * kBlock, _mm256_mul_pd(scale, lo));
    _mm256_storeu_pd(y + r * kBlock + 4, _mm256_mul_pd(scale, hi));
  }
}

void cooc_block(const CsrView& a, const CsrView& b, double alpha, const double* x, double* y,
                std::size_t words) {
  static_assert(kBlock == 8);
  const __m256d zero = _mm256_setzero_pd();
  for (std::size_t i = 0; i < words * kBlock; i += 4) _mm256_storeu_pd(y + i, zero);
  for (std::size_t m = 0; m < a.rows; ++m) {
    __m256d lo = zero;
    __m256d hi = zero;
    for (std::size_t j = a.offsets[m]; j < a.offsets[m + 1]; ++j) {
      const __m256d w = _mm256_set1_pd(a.values[j]);
      const double* xr = x + static_cast<std::size_t>(a.indices[j]) * kBlock;
      lo = _mm256_add_pd(lo, _mm256_mul_pd(w, _mm256_loadu_pd(xr)));
      hi = _mm256_add_pd(hi, _mm256_mul_pd(w, _mm256_loadu_pd(xr + 4)));
    }
    for (std::size_t j = b.offsets[m]; j < b.offsets[m + 1]; ++j) {
      const __m256d w = _mm256_set1_pd(b.values[j]);
      double* yr = y + static_cast<std::size_t>(b.indices[j]) * kBlock;
      _mm256_storeu_pd(yr, _mm256_add_pd(_mm256_loadu_pd(yr), _mm256_mul_pd(w, lo)));
      _mm256_storeu_pd(yr + 4, _mm256_add_pd(_mm256_loadu_pd(yr + 4), _mm256_mul_pd(w, hi)));
    }
  }
  const __m256d scale = _mm256_set1_pd(alpha);
  for (std::size_t i = 0; i < words * kBlock; i += 4) {
    _mm256_storeu_pd(y + i, _mm256_mul_pd(_mm256_loadu_pd(y + i), scale));
  }
}

double max_masked(const double* v, const std::uint8_t* included, std::size_t n) {
  const double ninf = -std::numeric_limits<double>::infinity();
  __m256d best = _mm256_set1_pd(ninf);
  const __m256d floor = _mm256_set1_pd(ninf);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d m = byte_mask(included + i);
    __m256d val = _mm256_blendv_pd(floor, _mm256_loadu_pd(v + i), m);
    best = _mm256_max_pd(best, val);
  }
  double out = hmax(best);
  for (; i < n; ++i) {
    if (included[i] && v[i] > out) out = v[i];
  }
  return out;
}

std::size_t argmax_masked(const double* v, const std::uint8_t* excluded, std::size_t n) {
  // Pass one finds the maximum value, pass two its first position.
  const double ninf = -std::numeric_limits<double>::infinity();
  __m256d best = _mm256_set1_pd(ninf);
  const __m256d floor = _mm256_set1_pd(ninf);
  bool any = false;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d keep = byte_mask(excluded + i);  // ones where excluded
    __m256d val = _mm256_blendv_pd(_mm256_loadu_pd(v + i), floor, keep);
    best = _mm256_max_pd(best, val);
    std::uint32_t packed;
    __builtin_memcpy(&packed, excluded + i, 4);
    any |= packed != 0x01010101u;
  }
  double top = hmax(best);
  for (; i < n; ++i) {
    if (excluded[i]) continue;
    any = true;
    if (v[i] > top) top = v[i];
  }
  if (!any) return n;
  const __m256d target = _mm256_set1_pd(top);
  i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d eq = _mm256_cmp_pd(_mm256_loadu_pd(v + i), target, _CMP_EQ_OQ);
    __m256d ok = _mm256_andnot_pd(byte_mask(excluded + i), eq);
    int bits = _mm256_movemask_pd(ok);
    if (bits) return i + static_cast<std::size_t>(__builtin_ctz(bits));
  }
  for (; i < n; ++i) {
    if (!excluded[i] && v[i] == top) return i;
  }
  // Only reachable when every candidate is -inf; match the scalar choice.
  for (i = 0; i < n; ++i) {
    if (!excluded[i]) return i;
  }
  return n;
}

void far_mask(const double* row, const double* diag, double ref, double threshold,
              const std::uint8_t* silent, std::uint8_t* out, std::size_t n) {
  const __m256d r = _mm256_set1_pd(ref);
  const __m256d two = _mm256_set1_pd(2.0);
  const __m256d thr = _mm256_set1_pd(threshold);
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    __m256d dist = _mm256_sub_pd(_mm256_add_pd(r, _mm256_loadu_pd(diag + j)),
                                 _mm256_mul_pd(two, _mm256_loadu_pd(row + j)));
    __m256d ge = _mm256_cmp_pd(dist, thr, _CMP_GE_OQ);
    __m256d keep = _mm256_andnot_pd(byte_mask(silent + j), ge);
    int bits = _mm256_movemask_pd(keep);
    for (int l = 0; l < 4; ++l) out[j + l] = static_cast<std::uint8_t>((bits >> l) & 1);
  }
  for (; j < n; ++j) {
    const double dist = (ref + diag[j]) - 2.0 * row[j];
    out[j] = static_cast<std::uint8_t>(dist >= threshold && !silent[j]);
  }
}

double l1_distance(const double* a, const double* b, std::size_t n) {
  const __m256d sign = _mm256_set1_pd(-0.0);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    acc = _mm256_add_pd(acc, _mm256_andnot_pd(sign, d));
  }
  double out = hsum(acc);
  for (; i < n; ++i) out += std::fabs(a[i] - b[i]);
  return out;
}

}  // namespace

const KernelTable& avx2_table() {
  static const KernelTable table{"avx2",        &csr_matvec, &csr_matmul_block,
                                 &cooc_block,    &argmax_masked, &max_masked, &far_mask,
                                 &l1_distance};
  return table;
}

}  // namespace rptopic::kernels
