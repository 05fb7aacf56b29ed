#include "symcurve/matrix.hpp"

#include <algorithm>

namespace symcurve {

Mat Mat::identity(int n, Backend b) {
  Mat m(n, n, b);
  for (int i = 0; i < n; ++i) m.at(i, i) = Scalar::one(b);
  return m;
}

Mat Mat::from_ints(const std::vector<std::vector<long>>& rows) {
  int r = static_cast<int>(rows.size());
  int c = r ? static_cast<int>(rows[0].size()) : 0;
  Mat m(r, c);
  for (int i = 0; i < r; ++i) {
    if (static_cast<int>(rows[i].size()) != c) throw ShapeMismatch();
    for (int j = 0; j < c; ++j) m.at(i, j) = Scalar::exact(rows[i][j]);
  }
  return m;
}

Mat Mat::operator-() const {
  Mat m = *this;
  for (auto& x : m.a_) x = -x;
  return m;
}

Mat& Mat::operator+=(const Mat& o) {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw ShapeMismatch();
  for (size_t i = 0; i < a_.size(); ++i) a_[i] += o.a_[i];
  return *this;
}

Mat& Mat::operator-=(const Mat& o) {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw ShapeMismatch();
  for (size_t i = 0; i < a_.size(); ++i) a_[i] -= o.a_[i];
  return *this;
}

Mat operator*(const Mat& a, const Mat& b) {
  if (a.cols() != b.rows()) throw ShapeMismatch();
  Mat r(a.rows(), b.cols(), a.backend());
  for (int i = 0; i < a.rows(); ++i)
    for (int k = 0; k < a.cols(); ++k) {
      const Scalar& aik = a.at(i, k);
      if (aik.is_zero()) continue;
      for (int j = 0; j < b.cols(); ++j) {
        const Scalar& bkj = b.at(k, j);
        if (bkj.is_zero()) continue;
        r.at(i, j) += aik * bkj;
      }
    }
  return r;
}

Mat Mat::scaled(const Scalar& s) const {
  Mat m = *this;
  for (auto& x : m.a_) x *= s;
  return m;
}

Mat Mat::transpose() const {
  Mat m(cols_, rows_, backend());
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) m.at(j, i) = at(i, j);
  return m;
}

bool Mat::operator==(const Mat& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_) return false;
  for (size_t i = 0; i < a_.size(); ++i)
    if (a_[i] != o.a_[i]) return false;
  return true;
}

Mat Mat::to_float() const {
  Mat m(rows_, cols_, Backend::floating);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) m.at(i, j) = at(i, j).to_float();
  return m;
}

Mat Mat::block(int i, int j, int r, int c) const {
  if (i < 0 || j < 0 || i + r > rows_ || j + c > cols_) throw ShapeMismatch();
  Mat m(r, c, backend());
  for (int u = 0; u < r; ++u)
    for (int v = 0; v < c; ++v) m.at(u, v) = at(i + u, j + v);
  return m;
}

void Mat::set_block(int i, int j, const Mat& m) {
  if (i + m.rows_ > rows_ || j + m.cols_ > cols_) throw ShapeMismatch();
  for (int u = 0; u < m.rows_; ++u)
    for (int v = 0; v < m.cols_; ++v) at(i + u, j + v) = m.at(u, v);
}

Mat Mat::cols_selected(const std::vector<int>& idx) const {
  Mat m(rows_, static_cast<int>(idx.size()), backend());
  for (int j = 0; j < m.cols_; ++j)
    for (int i = 0; i < rows_; ++i) m.at(i, j) = at(i, idx[j]);
  return m;
}

Mat Mat::hcat(const Mat& a, const Mat& b) {
  if (a.empty()) return b;
  if (b.empty()) return a;
  if (a.rows() != b.rows()) throw ShapeMismatch();
  Mat m(a.rows(), a.cols() + b.cols(), a.backend());
  m.set_block(0, 0, a);
  m.set_block(0, a.cols(), b);
  return m;
}

Mat Mat::vcat(const Mat& a, const Mat& b) {
  if (a.empty()) return b;
  if (b.empty()) return a;
  if (a.cols() != b.cols()) throw ShapeMismatch();
  Mat m(a.rows() + b.rows(), a.cols(), a.backend());
  m.set_block(0, 0, a);
  m.set_block(a.rows(), 0, b);
  return m;
}

bool Mat::is_zero() const {
  for (const auto& x : a_)
    if (!x.is_zero()) return false;
  return true;
}

Scalar Mat::max_abs() const {
  Scalar m = Scalar::zero(backend());
  for (const auto& x : a_) {
    Scalar v = x.abs();
    if (v > m) m = v;
  }
  return m;
}

Mat::Rref Mat::rref(const Scalar* float_tol) const {
  Rref out;
  out.R = *this;
  Mat& R = out.R;
  const bool exact = backend() == Backend::exact;
  Scalar tol = Scalar::zero(backend());
  if (!exact) {
    Scalar scale = max_abs();
    Scalar base = float_tol ? *float_tol : Scalar(rank_tolerance());
    tol = scale.is_zero() ? base : base * scale;
  }
  int lead = 0;
  for (int col = 0; col < cols_ && lead < rows_; ++col) {
    int piv = -1;
    if (exact) {
      for (int i = lead; i < rows_; ++i)
        if (!R.at(i, col).is_zero()) {
          piv = i;
          break;
        }
    } else {
      Scalar best = tol;
      for (int i = lead; i < rows_; ++i) {
        Scalar v = R.at(i, col).abs();
        if (v > best) {
          best = v;
          piv = i;
        }
      }
    }
    if (piv < 0) continue;
    if (piv != lead)
      for (int j = 0; j < cols_; ++j) std::swap(R.at(piv, j), R.at(lead, j));
    Scalar inv = R.at(lead, col).inv();
    for (int j = col; j < cols_; ++j) R.at(lead, j) *= inv;
    for (int i = 0; i < rows_; ++i) {
      if (i == lead) continue;
      Scalar f = R.at(i, col);
      if (f.is_zero()) continue;
      for (int j = col; j < cols_; ++j) R.at(i, j) -= f * R.at(lead, j);
      R.at(i, col) = Scalar::zero(backend());
    }
    out.pivot_cols.push_back(col);
    ++lead;
  }
  return out;
}

int Mat::rank() const { return rref().rank(); }

Mat Mat::kernel() const {
  Rref rr = rref();
  std::vector<int> free_cols;
  for (int j = 0; j < cols_; ++j)
    if (!std::binary_search(rr.pivot_cols.begin(), rr.pivot_cols.end(), j))
      free_cols.push_back(j);
  Mat K(cols_, static_cast<int>(free_cols.size()), backend());
  for (int f = 0; f < static_cast<int>(free_cols.size()); ++f) {
    int fc = free_cols[f];
    K.at(fc, f) = Scalar::one(backend());
    for (int p = 0; p < rr.rank(); ++p)
      K.at(rr.pivot_cols[p], f) = -rr.R.at(p, fc);
  }
  return K;
}

std::optional<Mat> Mat::solve(const Mat& B) const {
  if (B.rows() != rows_) throw ShapeMismatch();
  Mat aug = hcat(*this, B);
  Rref rr = aug.rref();
  for (int c : rr.pivot_cols)
    if (c >= cols_) return std::nullopt;  // inconsistent system
  Mat X(cols_, B.cols(), backend());
  for (int p = 0; p < rr.rank(); ++p) {
    int pc = rr.pivot_cols[p];
    for (int j = 0; j < B.cols(); ++j) X.at(pc, j) = rr.R.at(p, cols_ + j);
  }
  return X;
}

Mat Mat::inverse() const {
  if (rows_ != cols_) throw ShapeMismatch();
  Mat aug = hcat(*this, identity(rows_, backend()));
  Rref rr = aug.rref();
  if (rr.rank() != rows_) throw RankDeficientInput("singular matrix");
  for (int p = 0; p < rows_; ++p)
    if (rr.pivot_cols[p] != p) throw RankDeficientInput("singular matrix");
  return rr.R.block(0, cols_, rows_, cols_);
}

std::vector<Scalar> Mat::symmetric_eigenvalues() const {
  if (rows_ != cols_) throw ShapeMismatch();
  if (backend() != Backend::floating)
    throw BackendMismatch("symmetric_eigenvalues requires the floating backend");
  Mat A = *this;
  const int n = rows_;
  Scalar tol = Scalar(rank_tolerance());
  Scalar scale = A.max_abs();
  if (scale.is_zero()) return std::vector<Scalar>(n, Scalar::zero(Backend::floating));
  Scalar stop = tol * scale;
  Scalar two = Scalar::one(Backend::floating) + Scalar::one(Backend::floating);
  for (int sweep = 0; sweep < 64; ++sweep) {
    Scalar off = Scalar::zero(Backend::floating);
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q)
        if (A.at(p, q).abs() > off) off = A.at(p, q).abs();
    if (off <= stop) break;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) {
        Scalar apq = A.at(p, q);
        if (apq.abs() <= stop) continue;
        Scalar theta = (A.at(q, q) - A.at(p, p)) / (two * apq);
        // t = sign(theta)/(|theta| + sqrt(theta^2+1))
        Scalar t = (theta.abs() + (theta * theta + Scalar::one(Backend::floating)).sqrt()).inv();
        if (theta.sign() < 0) t = -t;
        Scalar c = (t * t + Scalar::one(Backend::floating)).sqrt().inv();
        Scalar s = t * c;
        for (int k = 0; k < n; ++k) {
          Scalar akp = A.at(k, p), akq = A.at(k, q);
          A.at(k, p) = c * akp - s * akq;
          A.at(k, q) = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          Scalar apk = A.at(p, k), aqk = A.at(q, k);
          A.at(p, k) = c * apk - s * aqk;
          A.at(q, k) = s * apk + c * aqk;
        }
      }
  }
  std::vector<Scalar> ev;
  ev.reserve(n);
  for (int i = 0; i < n; ++i) ev.push_back(A.at(i, i));
  std::sort(ev.begin(), ev.end(), [](const Scalar& a, const Scalar& b) { return b < a; });
  return ev;
}

std::vector<Scalar> Mat::singular_values() const {
  Mat g = transpose() * (*this);
  auto ev = g.symmetric_eigenvalues();
  for (auto& e : ev) {
    if (e.sign() < 0) e = Scalar::zero(Backend::floating);
    e = e.sqrt();
  }
  return ev;
}

std::vector<int> independent_columns(const Mat& base, const Mat& cand) {
  std::vector<int> picked;
  Mat stack = base;
  int r = stack.empty() ? 0 : stack.rank();
  for (int j = 0; j < cand.cols(); ++j) {
    Mat trial = Mat::hcat(stack, cand.col(j));
    int tr = trial.rank();
    if (tr > r) {
      picked.push_back(j);
      stack = trial;
      r = tr;
    }
  }
  return picked;
}

}  // namespace symcurve
