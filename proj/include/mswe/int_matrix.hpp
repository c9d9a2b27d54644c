#pragma once

#include <span>
#include <vector>

namespace mswe {

/// Small dense integer matrix, row-major. Used for the single-element
/// incidence patterns.
struct IntMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<int> data;

  IntMatrix() = default;
  IntMatrix(int r, int c) : rows(r), cols(c), data(static_cast<std::size_t>(r) * c, 0) {}

  int& operator()(int r, int c) { return data[static_cast<std::size_t>(r) * cols + c]; }
  int operator()(int r, int c) const { return data[static_cast<std::size_t>(r) * cols + c]; }

  IntMatrix operator*(const IntMatrix& rhs) const;
  bool is_zero() const;
};

struct IntTriplet {
  int row;
  int col;
  int value;
};

/// Row-compressed integer matrix. Applying it to a floating-point vector only
/// adds and subtracts entries, so no rounding beyond the sums themselves.
class IntCsr {
 public:
  IntCsr() = default;
  /// Duplicate (row, col) entries are summed; resulting zeros are dropped.
  static IntCsr from_triplets(int rows, int cols, std::vector<IntTriplet> triplets);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  int nonzeros() const { return static_cast<int>(col_.size()); }
  std::span<const int> row_ptr() const { return row_ptr_; }
  std::span<const int> col_index() const { return col_; }
  std::span<const int> values() const { return val_; }

  /// y = A x
  void apply(std::span<const double> x, std::span<double> y) const;
  std::vector<double> apply(std::span<const double> x) const;

  IntCsr transpose() const;
  IntCsr operator*(const IntCsr& rhs) const;
  bool is_zero() const { return col_.empty(); }
  int at(int r, int c) const;
  std::vector<long long> row_sums() const;
  std::vector<long long> column_sums() const;
  bool operator==(const IntCsr& other) const = default;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<int> row_ptr_{0};
  std::vector<int> col_;
  std::vector<int> val_;
};

}  // namespace mswe
