#include "hinfraud/csr.hpp"

#include <algorithm>
#include <cassert>

#include "hinfraud/error.hpp"

namespace hinfraud {

CsrMatrix CsrMatrix::identity(Index n) {
  CsrMatrix m(n, n);
  m.row_ptr_.resize(n + 1);
  m.col_idx_.resize(n);
  m.values_.assign(n, 1.0);
  for (Index i = 0; i < n; ++i) {
    m.row_ptr_[i] = i;
    m.col_idx_[i] = i;
  }
  m.row_ptr_[n] = n;
  return m;
}

CsrMatrix CsrMatrix::binary_from_pairs(Index rows, Index cols,
                                       std::vector<std::pair<Index, Index>> entries,
                                       std::size_t* duplicates_collapsed) {
  for (const auto& [r, c] : entries) {
    assert(r < rows && c < cols);
    (void)r;
    (void)c;
  }
  std::sort(entries.begin(), entries.end());
  const std::size_t before = entries.size();
  entries.erase(std::unique(entries.begin(), entries.end()), entries.end());
  if (duplicates_collapsed != nullptr) *duplicates_collapsed = before - entries.size();

  CsrMatrix m(rows, cols);
  m.col_idx_.reserve(entries.size());
  m.values_.assign(entries.size(), 1.0);
  std::size_t k = 0;
  for (Index r = 0; r < rows; ++r) {
    m.row_ptr_[r] = static_cast<std::int64_t>(k);
    while (k < entries.size() && entries[k].first == r) {
      m.col_idx_.push_back(entries[k].second);
      ++k;
    }
  }
  m.row_ptr_[rows] = static_cast<std::int64_t>(k);
  return m;
}

std::size_t CsrMatrix::max_row_nnz() const {
  std::size_t best = 0;
  for (Index r = 0; r < rows_; ++r) best = std::max(best, row_nnz(r));
  return best;
}

double CsrMatrix::value_at(Index r, Index c) const {
  const auto cols = row_cols(r);
  const auto it = std::lower_bound(cols.begin(), cols.end(), c);
  if (it == cols.end() || *it != c) return 0.0;
  return values_[row_ptr_[r] + (it - cols.begin())];
}

CsrMatrix CsrMatrix::transpose() const {
  CsrMatrix t(cols_, rows_);
  t.col_idx_.resize(nnz());
  t.values_.resize(nnz());
  // counting pass
  for (const Index c : col_idx_) ++t.row_ptr_[c + 1];
  for (Index c = 0; c < cols_; ++c) t.row_ptr_[c + 1] += t.row_ptr_[c];
  std::vector<std::int64_t> cursor(t.row_ptr_.begin(), t.row_ptr_.end() - 1);
  for (Index r = 0; r < rows_; ++r) {
    for (std::int64_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) {
      const Index c = col_idx_[k];
      t.col_idx_[cursor[c]] = r;
      t.values_[cursor[c]] = values_[k];
      ++cursor[c];
    }
  }
  return t;
}

CsrMatrix CsrMatrix::multiply(const CsrMatrix& rhs, std::size_t nnz_cap) const {
  if (cols_ != rhs.rows_) {
    raise(ErrorKind::shape_mismatch, "sparse product: " + std::to_string(cols_) +
                                         " inner columns vs " + std::to_string(rhs.rows_) +
                                         " inner rows");
  }
  CsrMatrix out(rows_, rhs.cols_);
  std::vector<double> accum(rhs.cols_, 0.0);
  std::vector<Index> touched;
  for (Index i = 0; i < rows_; ++i) {
    touched.clear();
    for (std::int64_t ka = row_ptr_[i]; ka < row_ptr_[i + 1]; ++ka) {
      const Index k = col_idx_[ka];
      const double va = values_[ka];
      for (std::int64_t kb = rhs.row_ptr_[k]; kb < rhs.row_ptr_[k + 1]; ++kb) {
        const Index j = rhs.col_idx_[kb];
        if (accum[j] == 0.0) touched.push_back(j);
        accum[j] += va * rhs.values_[kb];
      }
    }
    if (nnz_cap > 0 && out.col_idx_.size() + touched.size() > nnz_cap) {
      raise(ErrorKind::oracle_cap_exceeded,
            "sparse product exceeds " + std::to_string(nnz_cap) + " stored values");
    }
    std::sort(touched.begin(), touched.end());
    for (const Index j : touched) {
      // exact-zero cancellations are dropped to keep the canonical form
      if (accum[j] != 0.0) {
        out.col_idx_.push_back(j);
        out.values_.push_back(accum[j]);
      }
      accum[j] = 0.0;
    }
    out.row_ptr_[i + 1] = static_cast<std::int64_t>(out.col_idx_.size());
  }
  return out;
}

std::vector<double> CsrMatrix::row_sums() const {
  std::vector<double> sums(rows_, 0.0);
  for (Index r = 0; r < rows_; ++r) {
    double s = 0.0;
    for (std::int64_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) s += values_[k];
    sums[r] = s;
  }
  return sums;
}

std::vector<double> CsrMatrix::col_sums() const {
  std::vector<double> sums(cols_, 0.0);
  for (std::size_t k = 0; k < col_idx_.size(); ++k) sums[col_idx_[k]] += values_[k];
  return sums;
}

CsrMatrix CsrMatrix::filter_rows(const std::vector<std::uint8_t>& keep) const {
  if (keep.size() != rows_) raise(ErrorKind::length_mismatch, "filter_rows mask length");
  CsrMatrix out(rows_, cols_);
  out.col_idx_.reserve(nnz());
  out.values_.reserve(nnz());
  for (Index r = 0; r < rows_; ++r) {
    if (keep[r]) {
      const auto cols = row_cols(r);
      const auto vals = row_vals(r);
      out.col_idx_.insert(out.col_idx_.end(), cols.begin(), cols.end());
      out.values_.insert(out.values_.end(), vals.begin(), vals.end());
    }
    out.row_ptr_[r + 1] = static_cast<std::int64_t>(out.col_idx_.size());
  }
  return out;
}

}  // namespace hinfraud
