#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "symcurve/scalar.hpp"

namespace symcurve {

class Mat;

/// Row echelon data: reduced matrix plus pivot columns.
struct RrefResult {
  std::vector<int> pivot_cols;
  int rank() const { return static_cast<int>(pivot_cols.size()); }
};

/// Dense matrix over Scalar with a uniform backend across entries.
class Mat {
 public:
  Mat() : rows_(0), cols_(0), bk_(Backend::exact) {}
  Mat(int rows, int cols, Backend b = Backend::exact)
      : rows_(rows), cols_(cols), bk_(b), a_(static_cast<size_t>(rows) * cols, Scalar::zero(b)) {}

  static Mat identity(int n, Backend b = Backend::exact);
  static Mat from_ints(const std::vector<std::vector<long>>& rows);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  Backend backend() const { return bk_; }
  bool empty() const { return a_.empty(); }

  Scalar& at(int i, int j) { return a_[static_cast<size_t>(i) * cols_ + j]; }
  const Scalar& at(int i, int j) const { return a_[static_cast<size_t>(i) * cols_ + j]; }
  Scalar& operator()(int i, int j) { return at(i, j); }
  const Scalar& operator()(int i, int j) const { return at(i, j); }

  Mat operator-() const;
  Mat& operator+=(const Mat& o);
  Mat& operator-=(const Mat& o);
  friend Mat operator+(Mat a, const Mat& b) { return a += b; }
  friend Mat operator-(Mat a, const Mat& b) { return a -= b; }
  friend Mat operator*(const Mat& a, const Mat& b);
  Mat scaled(const Scalar& s) const;
  Mat transpose() const;
  bool operator==(const Mat& o) const;

  Mat to_float() const;
  Mat to_backend(Backend b) const { return b == Backend::exact ? *this : to_float(); }

  Mat block(int i, int j, int r, int c) const;
  void set_block(int i, int j, const Mat& m);
  Mat col(int j) const { return block(0, j, rows_, 1); }
  Mat cols_selected(const std::vector<int>& idx) const;
  static Mat hcat(const Mat& a, const Mat& b);
  static Mat vcat(const Mat& a, const Mat& b);

  bool is_zero() const;
  /// Largest |entry|.
  Scalar max_abs() const;

  /// Reduced row echelon form with deterministic pivoting (first nonzero entry
  /// in column order on the exact backend; |entry| > tol on the floating one).
  struct Rref;
  Rref rref(const Scalar* float_tol = nullptr) const;

  int rank() const;
  /// Columns spanning the null space (free variables set to deterministic units).
  Mat kernel() const;
  /// Particular solution of A X = B with free variables zero; nullopt if inconsistent.
  std::optional<Mat> solve(const Mat& B) const;
  /// Inverse of a square matrix; throws RankDeficientInput if singular.
  Mat inverse() const;

  /// Eigenvalues of a symmetric matrix by cyclic Jacobi; floating backend only.
  std::vector<Scalar> symmetric_eigenvalues() const;
  /// Singular values (descending) via the symmetric eigenproblem of A^T A.
  std::vector<Scalar> singular_values() const;

 private:
  int rows_, cols_;
  Backend bk_;
  std::vector<Scalar> a_;
};

struct Mat::Rref {
  Mat R;
  std::vector<int> pivot_cols;
  int rank() const { return static_cast<int>(pivot_cols.size()); }
};

/// Columns of `cand` whose addition keeps the stack [base | picked] independent.
/// Rank decisions are exact or tolerance-based per backend.
std::vector<int> independent_columns(const Mat& base, const Mat& cand);

}  // namespace symcurve
