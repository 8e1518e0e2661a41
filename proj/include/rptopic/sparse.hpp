#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace rptopic {

// Compressed sparse rows. Column indices within a row are strictly increasing.
template <class T>
struct CsrMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::size_t> offsets{0};
  std::vector<std::uint32_t> indices;
  std::vector<T> values;

  std::size_t nnz() const { return indices.size(); }

  std::span<const std::uint32_t> row_indices(std::size_t r) const {
    return {indices.data() + offsets[r], offsets[r + 1] - offsets[r]};
  }
  std::span<const T> row_values(std::size_t r) const {
    return {values.data() + offsets[r], offsets[r + 1] - offsets[r]};
  }

  // Appends a row; entries must already be sorted by column.
  void push_row(std::span<const std::uint32_t> idx, std::span<const T> val) {
    indices.insert(indices.end(), idx.begin(), idx.end());
    values.insert(values.end(), val.begin(), val.end());
    offsets.push_back(indices.size());
    ++rows;
  }
};

template <class T>
CsrMatrix<T> transpose(const CsrMatrix<T>& a) {
  CsrMatrix<T> t;
  t.rows = a.cols;
  t.cols = a.rows;
  t.offsets.assign(a.cols + 1, 0);
  for (std::uint32_t c : a.indices) ++t.offsets[c + 1];
  for (std::size_t c = 0; c < a.cols; ++c) t.offsets[c + 1] += t.offsets[c];
  t.indices.resize(a.nnz());
  t.values.resize(a.nnz());
  std::vector<std::size_t> cursor(t.offsets.begin(), t.offsets.end() - 1);
  for (std::size_t r = 0; r < a.rows; ++r) {
    for (std::size_t j = a.offsets[r]; j < a.offsets[r + 1]; ++j) {
      std::size_t pos = cursor[a.indices[j]]++;
      t.indices[pos] = static_cast<std::uint32_t>(r);
      t.values[pos] = a.values[j];
    }
  }
  return t;
}

}  // namespace rptopic
