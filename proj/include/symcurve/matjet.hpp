#pragma once

#include <functional>

#include "symcurve/jet.hpp"
#include "symcurve/matrix.hpp"

namespace symcurve {

/// Matrix with Jet entries, stored coefficient-major: c[k] is the k-th Taylor
/// coefficient matrix. All entries share (t0, K).
class MatrixJet {
 public:
  MatrixJet() : t0_(Scalar::exact(0)) { c_.emplace_back(); }
  MatrixJet(Scalar t0, std::vector<Mat> coeffs);
  static MatrixJet constant(const Mat& value, const Scalar& t0, int order);
  static MatrixJet zero(int rows, int cols, const Scalar& t0, int order, Backend b);

  int rows() const { return c_[0].rows(); }
  int cols() const { return c_[0].cols(); }
  int order() const { return static_cast<int>(c_.size()) - 1; }
  const Scalar& t0() const { return t0_; }
  Backend backend() const { return c_[0].backend(); }

  const Mat& coeff(int k) const { return c_[static_cast<size_t>(k)]; }
  Mat& coeff(int k) { return c_[static_cast<size_t>(k)]; }

  Jet entry(int i, int j) const;
  void set_entry(int i, int j, const Jet& jet);

  MatrixJet operator-() const;
  friend MatrixJet operator+(const MatrixJet& a, const MatrixJet& b);
  friend MatrixJet operator-(const MatrixJet& a, const MatrixJet& b);
  friend MatrixJet operator*(const MatrixJet& a, const MatrixJet& b);
  MatrixJet scaled(const Jet& s) const;
  MatrixJet scaled(const Scalar& s) const;
  MatrixJet transpose() const;

  MatrixJet derivative() const;
  /// Coefficientwise inverse; requires the constant matrix to be invertible.
  MatrixJet inverse() const;

  MatrixJet truncated(int new_order) const;
  MatrixJet rebased(const Scalar& new_t0) const;
  MatrixJet to_float() const;

  Mat evaluate(const Scalar& t) const;
  bool is_zero() const;
  Scalar max_abs_coeff() const;

  MatrixJet block(int i, int j, int r, int c) const;
  void set_block(int i, int j, const MatrixJet& m);
  MatrixJet cols_selected(const std::vector<int>& idx) const;
  static MatrixJet hcat(const MatrixJet& a, const MatrixJet& b);

  bool same_frame(const MatrixJet& o) const {
    return order() == o.order() && t0_ == o.t0_;
  }

 private:
  Scalar t0_;
  std::vector<Mat> c_;
  void check(const MatrixJet& o) const {
    if (!same_frame(o)) throw OrderMismatch("matrix jet (t0, K) mismatch");
  }
};

/// Truncated exponential sum_{i<q} x^i / i! of a jet whose constant matrix is
/// nilpotent with x^q = 0, q <= nilpotency_bound. Exact on the rational backend.
MatrixJet matjet_exp_nilpotent(const MatrixJet& x, int nilpotency_bound);

/// Unique jet solution A of A' = rhs(A), A(t0) = initial, for rhs linear in the
/// state with causal jet coefficients; computed by coefficient recursion.
MatrixJet jet_ode_solve(const std::function<MatrixJet(const MatrixJet&)>& rhs,
                        const Mat& initial, const Scalar& t0, int order);

/// Columns spanning the kernel of A(t) as jets near t0, assuming the rank of
/// A(t0) equals the generic rank (pivots chosen on unit constant terms).
MatrixJet matjet_kernel(const MatrixJet& A);

void align(MatrixJet& a, MatrixJet& b);

}  // namespace symcurve
