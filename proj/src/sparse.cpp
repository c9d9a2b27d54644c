#include "mswe/sparse.hpp"

#include <algorithm>
#include <cmath>

#include "mswe/error.hpp"

namespace mswe {

SparseOperator::SparseOperator(int rows, int cols, std::vector<int> row_ptr, std::vector<int> col_index,
                               std::vector<double> values, Symmetry symmetry)
    : rows_(rows),
      cols_(cols),
      row_ptr_(std::move(row_ptr)),
      col_(std::move(col_index)),
      val_(std::move(values)),
      symmetry_(symmetry) {
  if (static_cast<int>(row_ptr_.size()) != rows_ + 1 || col_.size() != val_.size())
    throw InvalidArgument("SparseOperator: inconsistent CSR arrays");
}

void SparseOperator::apply(std::span<const double> x, std::span<double> y, Exec exec) const {
  for_each_index(rows_, exec, [&](int r) {
    double s = 0.0;
    for (int k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) s += val_[k] * x[col_[k]];
    y[r] = s;
  });
}

std::vector<double> SparseOperator::apply(std::span<const double> x, Exec exec) const {
  std::vector<double> y(rows_);
  apply(x, y, exec);
  return y;
}

std::vector<double> SparseOperator::apply_transpose(std::span<const double> x) const {
  std::vector<double> y(cols_, 0.0);
  for (int r = 0; r < rows_; ++r)
    for (int k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) y[col_[k]] += val_[k] * x[r];
  return y;
}

double SparseOperator::at(int r, int c) const {
  const auto first = col_.begin() + row_ptr_[r];
  const auto last = col_.begin() + row_ptr_[r + 1];
  const auto it = std::lower_bound(first, last, c);
  return (it != last && *it == c) ? val_[it - col_.begin()] : 0.0;
}

double SparseOperator::max_abs() const { return kernels::max_abs(val_); }

std::vector<double> SparseOperator::diagonal() const {
  std::vector<double> d(std::min(rows_, cols_), 0.0);
  for (int r = 0; r < static_cast<int>(d.size()); ++r) d[r] = at(r, r);
  return d;
}

std::vector<double> SparseOperator::to_dense() const {
  std::vector<double> a(static_cast<std::size_t>(rows_) * cols_, 0.0);
  for (int r = 0; r < rows_; ++r)
    for (int k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) a[static_cast<std::size_t>(r) * cols_ + col_[k]] += val_[k];
  return a;
}

double SparseOperator::symmetry_defect(Symmetry kind) const {
  if (rows_ != cols_) return INFINITY;
  const double sign = kind == Symmetry::skew ? -1.0 : 1.0;
  double defect = 0.0;
  for (int r = 0; r < rows_; ++r)
    for (int k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k)
      defect = std::max(defect, std::abs(val_[k] - sign * at(col_[k], r)));
  const double scale = max_abs();
  return scale == 0.0 ? 0.0 : defect / scale;
}

bool SparseOperator::verify_symmetry(double tol) const {
  if (symmetry_ == Symmetry::none) return true;
  return symmetry_defect(symmetry_) < tol;
}

SparsityPattern SparsityPattern::build(int rows, int cols, std::span<const int> row_map, int local_rows,
                                       std::span<const int> col_map, int local_cols, int n_elements) {
  std::vector<std::vector<int>> row_cols(rows);
  for (int e = 0; e < n_elements; ++e)
    for (int i = 0; i < local_rows; ++i) {
      auto& rc = row_cols[row_map[static_cast<std::size_t>(e) * local_rows + i]];
      for (int j = 0; j < local_cols; ++j) rc.push_back(col_map[static_cast<std::size_t>(e) * local_cols + j]);
    }
  SparsityPattern pat;
  pat.rows = rows;
  pat.cols = cols;
  pat.local_rows = local_rows;
  pat.local_cols = local_cols;
  pat.row_ptr.assign(rows + 1, 0);
  for (int r = 0; r < rows; ++r) {
    auto& rc = row_cols[r];
    std::sort(rc.begin(), rc.end());
    rc.erase(std::unique(rc.begin(), rc.end()), rc.end());
    pat.row_ptr[r + 1] = pat.row_ptr[r] + static_cast<int>(rc.size());
    pat.col_index.insert(pat.col_index.end(), rc.begin(), rc.end());
  }
  pat.slots.resize(static_cast<std::size_t>(n_elements) * local_rows * local_cols);
  for (int e = 0; e < n_elements; ++e)
    for (int i = 0; i < local_rows; ++i) {
      const int r = row_map[static_cast<std::size_t>(e) * local_rows + i];
      const auto first = pat.col_index.begin() + pat.row_ptr[r];
      const auto last = pat.col_index.begin() + pat.row_ptr[r + 1];
      for (int j = 0; j < local_cols; ++j) {
        const int c = col_map[static_cast<std::size_t>(e) * local_cols + j];
        pat.slots[(static_cast<std::size_t>(e) * local_rows + i) * local_cols + j] =
            static_cast<int>(std::lower_bound(first, last, c) - pat.col_index.begin());
      }
    }
  return pat;
}

}  // namespace mswe
