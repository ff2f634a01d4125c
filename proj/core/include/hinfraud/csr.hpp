#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace hinfraud {

// Row-major compressed sparse matrix. Canonical form: column indices are
// strictly increasing within each row, no explicit zeros. Every producer in
// this library maintains the canonical form, so equality is entrywise.
class CsrMatrix {
 public:
  using Index = std::uint32_t;

  CsrMatrix() : rows_(0), cols_(0), row_ptr_(1, 0) {}
  CsrMatrix(Index rows, Index cols) : rows_(rows), cols_(cols), row_ptr_(rows + 1, 0) {}

  static CsrMatrix identity(Index n);

  // Builds a 0/1 matrix from (row, col) pairs. Duplicate pairs collapse to a
  // single entry of value 1; the collapsed count is reported through
  // `duplicates_collapsed` when non-null.
  static CsrMatrix binary_from_pairs(Index rows, Index cols,
                                     std::vector<std::pair<Index, Index>> entries,
                                     std::size_t* duplicates_collapsed = nullptr);

  Index rows() const { return rows_; }
  Index cols() const { return cols_; }
  std::size_t nnz() const { return col_idx_.size(); }

  std::span<const Index> row_cols(Index r) const {
    return {col_idx_.data() + row_ptr_[r], static_cast<std::size_t>(row_ptr_[r + 1] - row_ptr_[r])};
  }
  std::span<const double> row_vals(Index r) const {
    return {values_.data() + row_ptr_[r], static_cast<std::size_t>(row_ptr_[r + 1] - row_ptr_[r])};
  }
  std::size_t row_nnz(Index r) const { return static_cast<std::size_t>(row_ptr_[r + 1] - row_ptr_[r]); }
  std::size_t max_row_nnz() const;

  // Value at (r, c), 0 when the entry is absent.
  double value_at(Index r, Index c) const;

  CsrMatrix transpose() const;

  // Sparse-sparse product (Gustavson). When nnz_cap > 0 the build aborts with
  // OracleCapExceeded as soon as the output would exceed that many stored
  // values; this guards the deliberately redundant full-meta-path route.
  CsrMatrix multiply(const CsrMatrix& rhs, std::size_t nnz_cap = 0) const;

  std::vector<double> row_sums() const;
  std::vector<double> col_sums() const;

  // Copy with the rows where keep[r] == 0 emptied; shape unchanged.
  CsrMatrix filter_rows(const std::vector<std::uint8_t>& keep) const;

  bool operator==(const CsrMatrix& other) const {
    return rows_ == other.rows_ && cols_ == other.cols_ && row_ptr_ == other.row_ptr_ &&
           col_idx_ == other.col_idx_ && values_ == other.values_;
  }

 private:
  Index rows_;
  Index cols_;
  std::vector<std::int64_t> row_ptr_;
  std::vector<Index> col_idx_;
  std::vector<double> values_;
};

}  // namespace hinfraud
