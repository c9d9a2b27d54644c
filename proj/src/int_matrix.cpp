#include "mswe/int_matrix.hpp"

#include <algorithm>

namespace mswe {

IntMatrix IntMatrix::operator*(const IntMatrix& rhs) const {
  IntMatrix out(rows, rhs.cols);
  for (int i = 0; i < rows; ++i)
    for (int k = 0; k < cols; ++k) {
      const int a = (*this)(i, k);
      if (a == 0) continue;
      for (int j = 0; j < rhs.cols; ++j) out(i, j) += a * rhs(k, j);
    }
  return out;
}

bool IntMatrix::is_zero() const {
  return std::all_of(data.begin(), data.end(), [](int v) { return v == 0; });
}

IntCsr IntCsr::from_triplets(int rows, int cols, std::vector<IntTriplet> triplets) {
  std::sort(triplets.begin(), triplets.end(), [](const IntTriplet& a, const IntTriplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  IntCsr m;
  m.rows_ = rows;
  m.cols_ = cols;
  m.row_ptr_.assign(rows + 1, 0);
  std::size_t k = 0;
  while (k < triplets.size()) {
    const int r = triplets[k].row;
    const int c = triplets[k].col;
    int v = 0;
    while (k < triplets.size() && triplets[k].row == r && triplets[k].col == c) v += triplets[k++].value;
    if (v != 0) {
      m.col_.push_back(c);
      m.val_.push_back(v);
      ++m.row_ptr_[r + 1];
    }
  }
  for (int r = 0; r < rows; ++r) m.row_ptr_[r + 1] += m.row_ptr_[r];
  return m;
}

void IntCsr::apply(std::span<const double> x, std::span<double> y) const {
  for (int r = 0; r < rows_; ++r) {
    double s = 0.0;
    for (int k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) {
      const int v = val_[k];
      if (v == 1)
        s += x[col_[k]];
      else if (v == -1)
        s -= x[col_[k]];
      else
        s += v * x[col_[k]];
    }
    y[r] = s;
  }
}

std::vector<double> IntCsr::apply(std::span<const double> x) const {
  std::vector<double> y(rows_);
  apply(x, y);
  return y;
}

IntCsr IntCsr::transpose() const {
  std::vector<IntTriplet> t;
  t.reserve(col_.size());
  for (int r = 0; r < rows_; ++r)
    for (int k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) t.push_back({col_[k], r, val_[k]});
  return from_triplets(cols_, rows_, std::move(t));
}

IntCsr IntCsr::operator*(const IntCsr& rhs) const {
  std::vector<IntTriplet> t;
  for (int r = 0; r < rows_; ++r)
    for (int k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) {
      const int mid = col_[k];
      for (int l = rhs.row_ptr_[mid]; l < rhs.row_ptr_[mid + 1]; ++l)
        t.push_back({r, rhs.col_[l], val_[k] * rhs.val_[l]});
    }
  return from_triplets(rows_, rhs.cols_, std::move(t));
}

int IntCsr::at(int r, int c) const {
  for (int k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k)
    if (col_[k] == c) return val_[k];
  return 0;
}

std::vector<long long> IntCsr::row_sums() const {
  std::vector<long long> s(rows_, 0);
  for (int r = 0; r < rows_; ++r)
    for (int k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) s[r] += val_[k];
  return s;
}

std::vector<long long> IntCsr::column_sums() const {
  std::vector<long long> s(cols_, 0);
  for (std::size_t k = 0; k < col_.size(); ++k) s[col_[k]] += val_[k];
  return s;
}

}  // namespace mswe
