#pragma once

#include <span>
#include <vector>

#include "mswe/parallel.hpp"

namespace mswe {

enum class Symmetry { none, symmetric, skew };

/// Row-compressed real matrix tagged with the symmetry its construction
/// guarantees.
class SparseOperator {
 public:
  SparseOperator() = default;
  SparseOperator(int rows, int cols, std::vector<int> row_ptr, std::vector<int> col_index,
                 std::vector<double> values, Symmetry symmetry);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  Symmetry symmetry() const { return symmetry_; }
  std::span<const int> row_ptr() const { return row_ptr_; }
  std::span<const int> col_index() const { return col_; }
  std::span<const double> values() const { return val_; }
  std::span<double> values() { return val_; }

  /// y = A x
  void apply(std::span<const double> x, std::span<double> y, Exec exec = Exec::parallel) const;
  std::vector<double> apply(std::span<const double> x, Exec exec = Exec::parallel) const;
  /// y = A^T x
  std::vector<double> apply_transpose(std::span<const double> x) const;

  double at(int r, int c) const;
  double max_abs() const;
  std::vector<double> diagonal() const;
  /// Row-major dense copy; for tests and small oracles.
  std::vector<double> to_dense() const;

  /// max |A - s A^T| / max |A| where s = +1 (symmetric) or -1 (skew).
  double symmetry_defect(Symmetry kind) const;
  /// Checks the tagged symmetry to tol relative to max |A|.
  bool verify_symmetry(double tol = 1e-12) const;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<int> row_ptr_{0};
  std::vector<int> col_;
  std::vector<double> val_;
  Symmetry symmetry_ = Symmetry::none;
};

/// Global CSR structure for a (row space, column space) pair plus, for every
/// element, the CSR slot of each local (i, j) entry.
struct SparsityPattern {
  int rows = 0;
  int cols = 0;
  int local_rows = 0;
  int local_cols = 0;
  std::vector<int> row_ptr;
  std::vector<int> col_index;
  std::vector<int> slots;  // n_elements * local_rows * local_cols

  static SparsityPattern build(int rows, int cols, std::span<const int> row_map, int local_rows,
                               std::span<const int> col_map, int local_cols, int n_elements);
  int n_elements() const { return local_rows * local_cols == 0 ? 0 : static_cast<int>(slots.size()) / (local_rows * local_cols); }
};

/// Assembles a global operator from element matrices. local(e, out) fills the
/// row-major local_rows x local_cols matrix of element e. Element matrices are
/// computed in parallel and reduced serially in element order, so the result
/// is bitwise independent of the thread count.
template <class LocalFn>
SparseOperator assemble(const SparsityPattern& pattern, Symmetry symmetry, Exec exec, LocalFn&& local) {
  const int ne = pattern.n_elements();
  const std::size_t block = static_cast<std::size_t>(pattern.local_rows) * pattern.local_cols;
  std::vector<double> buffer(block * ne);
  for_each_index(ne, exec, [&](int e) { local(e, std::span<double>(buffer.data() + block * e, block)); });
  std::vector<double> values(pattern.col_index.size(), 0.0);
  for (std::size_t k = 0; k < buffer.size(); ++k) values[pattern.slots[k]] += buffer[k];
  return SparseOperator(pattern.rows, pattern.cols, pattern.row_ptr, pattern.col_index, std::move(values),
                        symmetry);
}

}  // namespace mswe
