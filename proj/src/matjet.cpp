#include "symcurve/matjet.hpp"

#include <algorithm>

namespace symcurve {

MatrixJet::MatrixJet(Scalar t0, std::vector<Mat> coeffs)
    : t0_(std::move(t0)), c_(std::move(coeffs)) {
  if (c_.empty()) throw OrderMismatch("matrix jet needs the constant coefficient");
  for (const auto& m : c_)
    if (m.rows() != c_[0].rows() || m.cols() != c_[0].cols())
      throw ShapeMismatch("ragged matrix jet");
}

MatrixJet MatrixJet::constant(const Mat& value, const Scalar& t0, int order) {
  std::vector<Mat> c(static_cast<size_t>(order) + 1,
                     Mat(value.rows(), value.cols(), value.backend()));
  c[0] = value;
  return MatrixJet(t0, std::move(c));
}

MatrixJet MatrixJet::zero(int rows, int cols, const Scalar& t0, int order, Backend b) {
  return constant(Mat(rows, cols, b), t0, order);
}

Jet MatrixJet::entry(int i, int j) const {
  std::vector<Scalar> c;
  c.reserve(c_.size());
  for (const auto& m : c_) c.push_back(m.at(i, j));
  return Jet(t0_, std::move(c));
}

void MatrixJet::set_entry(int i, int j, const Jet& jet) {
  if (jet.order() != order() || jet.t0() != t0_) throw OrderMismatch();
  for (int k = 0; k <= order(); ++k) c_[k].at(i, j) = jet.coeff(k);
}

MatrixJet MatrixJet::operator-() const {
  MatrixJet r = *this;
  for (auto& m : r.c_) m = -m;
  return r;
}

MatrixJet operator+(const MatrixJet& a, const MatrixJet& b) {
  a.check(b);
  MatrixJet r = a;
  for (int k = 0; k <= a.order(); ++k) r.coeff(k) += b.coeff(k);
  return r;
}

MatrixJet operator-(const MatrixJet& a, const MatrixJet& b) {
  a.check(b);
  MatrixJet r = a;
  for (int k = 0; k <= a.order(); ++k) r.coeff(k) -= b.coeff(k);
  return r;
}

MatrixJet operator*(const MatrixJet& a, const MatrixJet& b) {
  a.check(b);
  const int K = a.order();
  MatrixJet r = MatrixJet::zero(a.rows(), b.cols(), a.t0(), K, a.backend());
  for (int i = 0; i <= K; ++i) {
    if (a.coeff(i).is_zero()) continue;
    for (int j = 0; i + j <= K; ++j) {
      if (b.coeff(j).is_zero()) continue;
      r.coeff(i + j) += a.coeff(i) * b.coeff(j);
    }
  }
  return r;
}

MatrixJet MatrixJet::scaled(const Jet& s) const {
  if (s.order() != order() || s.t0() != t0_) throw OrderMismatch();
  MatrixJet r = zero(rows(), cols(), t0_, order(), backend());
  for (int i = 0; i <= order(); ++i) {
    if (s.coeff(i).is_zero()) continue;
    for (int j = 0; i + j <= order(); ++j) r.coeff(i + j) += c_[j].scaled(s.coeff(i));
  }
  return r;
}

MatrixJet MatrixJet::scaled(const Scalar& s) const {
  MatrixJet r = *this;
  for (auto& m : r.c_) m = m.scaled(s);
  return r;
}

MatrixJet MatrixJet::transpose() const {
  MatrixJet r = *this;
  for (auto& m : r.c_) m = m.transpose();
  return r;
}

MatrixJet MatrixJet::derivative() const {
  if (order() == 0)
    return zero(rows(), cols(), t0_, 0, backend());
  std::vector<Mat> c(static_cast<size_t>(order()));
  for (int k = 1; k <= order(); ++k)
    c[k - 1] = c_[k].scaled(Scalar::exact(k).to_backend(backend()));
  return MatrixJet(t0_, std::move(c));
}

MatrixJet MatrixJet::inverse() const {
  if (rows() != cols()) throw ShapeMismatch();
  Mat inv0;
  try {
    inv0 = c_[0].inverse();
  } catch (const RankDeficientInput&) {
    throw NonInvertibleJet("constant coefficient matrix is singular");
  }
  const int K = order();
  MatrixJet r = constant(inv0, t0_, K);
  // B_k = -inv0 * sum_{i=1..k} A_i B_{k-i}
  for (int k = 1; k <= K; ++k) {
    Mat s(rows(), cols(), backend());
    for (int i = 1; i <= k; ++i) s += c_[i] * r.coeff(k - i);
    r.coeff(k) = -(inv0 * s);
  }
  return r;
}

MatrixJet MatrixJet::truncated(int new_order) const {
  if (new_order >= order()) return *this;
  std::vector<Mat> c(c_.begin(), c_.begin() + new_order + 1);
  return MatrixJet(t0_, std::move(c));
}

MatrixJet MatrixJet::rebased(const Scalar& new_t0) const {
  MatrixJet r = *this;
  r.t0_ = new_t0;
  for (int i = 0; i < rows(); ++i)
    for (int j = 0; j < cols(); ++j) r.set_entry(i, j, entry(i, j).rebased(new_t0));
  return r;
}

MatrixJet MatrixJet::to_float() const {
  std::vector<Mat> c;
  c.reserve(c_.size());
  for (const auto& m : c_) c.push_back(m.to_float());
  return MatrixJet(t0_.to_float(), std::move(c));
}

Mat MatrixJet::evaluate(const Scalar& t) const {
  Scalar h = t - t0_;
  Mat r = c_[order()];
  for (int k = order() - 1; k >= 0; --k) r = r.scaled(h) + c_[k];
  return r;
}

bool MatrixJet::is_zero() const {
  for (const auto& m : c_)
    if (!m.is_zero()) return false;
  return true;
}

Scalar MatrixJet::max_abs_coeff() const {
  Scalar r = Scalar::zero(backend());
  for (const auto& m : c_) {
    Scalar v = m.max_abs();
    if (v > r) r = v;
  }
  return r;
}

MatrixJet MatrixJet::block(int i, int j, int r, int c) const {
  std::vector<Mat> out;
  out.reserve(c_.size());
  for (const auto& m : c_) out.push_back(m.block(i, j, r, c));
  return MatrixJet(t0_, std::move(out));
}

void MatrixJet::set_block(int i, int j, const MatrixJet& m) {
  check(m);
  for (int k = 0; k <= order(); ++k) c_[k].set_block(i, j, m.coeff(k));
}

MatrixJet MatrixJet::cols_selected(const std::vector<int>& idx) const {
  std::vector<Mat> out;
  out.reserve(c_.size());
  for (const auto& m : c_) out.push_back(m.cols_selected(idx));
  return MatrixJet(t0_, std::move(out));
}

MatrixJet MatrixJet::hcat(const MatrixJet& a, const MatrixJet& b) {
  a.check(b);
  std::vector<Mat> out;
  out.reserve(a.c_.size());
  for (int k = 0; k <= a.order(); ++k) out.push_back(Mat::hcat(a.coeff(k), b.coeff(k)));
  return MatrixJet(a.t0(), std::move(out));
}

MatrixJet matjet_exp_nilpotent(const MatrixJet& x, int nilpotency_bound) {
  if (x.rows() != x.cols()) throw ShapeMismatch();
  const int n = x.rows();
  const Backend b = x.backend();
  // Power of the constant coefficient must vanish within the bound.
  Mat p0 = Mat::identity(n, b);
  for (int i = 0; i < nilpotency_bound; ++i) p0 = p0 * x.coeff(0);
  Scalar resid = p0.max_abs();
  Scalar tol = b == Backend::exact ? Scalar::exact(0)
                                   : Scalar(rank_tolerance()) *
                                         (Scalar::one(b) + x.max_abs_coeff());
  if (resid > tol) throw NilpotencyViolated();

  MatrixJet sum = MatrixJet::constant(Mat::identity(n, b), x.t0(), x.order());
  MatrixJet pw = sum;
  Scalar fact = Scalar::one(b);
  for (int i = 1; i < nilpotency_bound; ++i) {
    pw = pw * x;
    fact *= Scalar::exact(i).to_backend(b);
    sum = sum + pw.scaled(fact.inv());
  }
  return sum;
}

MatrixJet jet_ode_solve(const std::function<MatrixJet(const MatrixJet&)>& rhs,
                        const Mat& initial, const Scalar& t0, int order) {
  MatrixJet A = MatrixJet::constant(initial, t0, order);
  for (int k = 0; k < order; ++k) {
    // The order-k coefficient of A' fixes the order-(k+1) coefficient of A.
    MatrixJet d = rhs(A);
    if (d.order() < k)
      throw OrderMismatch("ode right-hand side lost too many jet orders");
    A.coeff(k + 1) =
        d.coeff(k).scaled(Scalar::exact(k + 1).to_backend(A.backend()).inv());
  }
  return A;
}

MatrixJet matjet_kernel(const MatrixJet& A) {
  const int n = A.cols();
  const Backend b = A.backend();
  Scalar tol = Scalar::zero(b);
  if (b == Backend::floating) {
    Scalar scale = A.coeff(0).max_abs();
    tol = Scalar(rank_tolerance()) * (scale.is_zero() ? Scalar::one(b) : scale);
  }
  // Row reduce over the local ring of jets: pivots need a unit constant term.
  MatrixJet R = A;
  std::vector<int> pivot_cols;
  int lead = 0;
  for (int col = 0; col < n && lead < R.rows(); ++col) {
    int piv = -1;
    Scalar best = tol;
    for (int i = lead; i < R.rows(); ++i) {
      Scalar v = R.coeff(0).at(i, col).abs();
      if (b == Backend::exact ? !v.is_zero() : v > best) {
        piv = i;
        if (b == Backend::exact) break;
        best = v;
      }
    }
    if (piv < 0) continue;
    // Swap rows piv <-> lead across all coefficients.
    for (int k = 0; k <= R.order(); ++k)
      for (int j = 0; j < n; ++j) std::swap(R.coeff(k).at(piv, j), R.coeff(k).at(lead, j));
    Jet pj = R.entry(lead, col).invert();
    for (int j = 0; j < n; ++j) R.set_entry(lead, j, R.entry(lead, j) * pj);
    for (int i = 0; i < R.rows(); ++i) {
      if (i == lead) continue;
      Jet f = R.entry(i, col);
      if (f.is_zero()) continue;
      for (int j = 0; j < n; ++j)
        R.set_entry(i, j, R.entry(i, j) - f * R.entry(lead, j));
    }
    pivot_cols.push_back(col);
    ++lead;
  }
  std::vector<int> free_cols;
  for (int j = 0; j < n; ++j)
    if (!std::binary_search(pivot_cols.begin(), pivot_cols.end(), j)) free_cols.push_back(j);
  MatrixJet K = MatrixJet::zero(n, static_cast<int>(free_cols.size()), A.t0(), A.order(), b);
  for (int f = 0; f < static_cast<int>(free_cols.size()); ++f) {
    int fc = free_cols[f];
    K.set_entry(fc, f, Jet::constant(Scalar::one(b), A.t0(), A.order()));
    for (int p = 0; p < static_cast<int>(pivot_cols.size()); ++p)
      K.set_entry(pivot_cols[p], f, -R.entry(p, fc));
  }
  return K;
}

void align(MatrixJet& a, MatrixJet& b) {
  int K = std::min(a.order(), b.order());
  a = a.truncated(K);
  b = b.truncated(K);
}

}  // namespace symcurve
