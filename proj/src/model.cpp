#include "symcurve/model.hpp"

namespace symcurve {

SymplecticModel::SymplecticModel(DoubleDiagram dd) : dd_(std::move(dd)) {
  m_ = dd_.half_dim();
  const int n = 2 * m_;
  slots_.resize(dd_.boxes().size());
  int off = 0;
  for (size_t i = 0; i < dd_.boxes().size(); ++i) {
    slots_[i] = off;
    off += dd_.block_size(dd_.boxes()[i]);
  }
  slot_deg_.assign(static_cast<size_t>(n), 0);
  for (size_t i = 0; i < dd_.boxes().size(); ++i) {
    const Box& b = dd_.boxes()[i];
    for (int t = 0; t < dd_.block_size(b); ++t)
      slot_deg_[static_cast<size_t>(slots_[i] + t)] = dd_.deg(b);
  }

  J_ = Mat(n, n);
  for (const Box& a : dd_.boxes()) {
    if (a.col < 0) continue;  // pair each original-side box with its mirror
    Box ma = dd_.mirror(a);
    int sa = slot(a), sm = slot(ma);
    for (int t = 0; t < dd_.block_size(a); ++t) {
      J_.at(sm + t, sa + t) = Scalar::exact(1);
      J_.at(sa + t, sm + t) = Scalar::exact(-1);
    }
  }

  // Standard-basis conversion: q-th Darboux pair = (mirror slot, original slot).
  T_ = Mat(n, n);
  int q = 0;
  for (const Box& a : dd_.boxes()) {
    if (a.col < 0) continue;
    Box ma = dd_.mirror(a);
    for (int t = 0; t < dd_.block_size(a); ++t) {
      T_.at(q, slot(ma) + t) = Scalar::exact(1);       // e_q
      T_.at(m_ + q, slot(a) + t) = Scalar::exact(1);   // f_q
      ++q;
    }
  }
}

Mat SymplecticModel::standard_J(int m, Backend b) {
  Mat J(2 * m, 2 * m, b);
  for (int i = 0; i < m; ++i) {
    J.at(i, m + i) = Scalar::one(b);
    J.at(m + i, i) = -Scalar::one(b);
  }
  return J;
}

SymplecticModel darboux_model(const DoubleDiagram& dd) { return SymplecticModel(dd); }

BlockEndomorphism::BlockEndomorphism(const SymplecticModel* model, Mat m)
    : model_(model), m_(std::move(m)) {
  if (m_.rows() != model_->dim() || m_.cols() != model_->dim())
    throw ShapeMismatch("endomorphism size does not match the model");
}

BlockEndomorphism BlockEndomorphism::zero(const SymplecticModel* model, Backend b) {
  return {model, Mat(model->dim(), model->dim(), b)};
}

Mat BlockEndomorphism::block(const Box& b, const Box& a) const {
  return m_.block(model_->slot(b), model_->slot(a), model_->block_size(b),
                  model_->block_size(a));
}

void BlockEndomorphism::set_block(const Box& b, const Box& a, const Mat& value) {
  if (value.rows() != model_->block_size(b) || value.cols() != model_->block_size(a))
    throw ShapeMismatch("block size mismatch");
  m_.set_block(model_->slot(b), model_->slot(a), value);
}

void BlockEndomorphism::add_block(const Box& b, const Box& a, const Mat& value) {
  set_block(b, a, block(b, a) + value);
}

BlockEndomorphism operator+(const BlockEndomorphism& x, const BlockEndomorphism& y) {
  return {x.model_, x.m_ + y.m_};
}

BlockEndomorphism operator-(const BlockEndomorphism& x, const BlockEndomorphism& y) {
  return {x.model_, x.m_ - y.m_};
}

BlockEndomorphism bracket(const BlockEndomorphism& x, const BlockEndomorphism& y) {
  return {&x.model(), x.dense() * y.dense() - y.dense() * x.dense()};
}

SpCheckResult sp_check(const BlockEndomorphism& X, const Scalar* tol) {
  const SymplecticModel& model = X.model();
  const DoubleDiagram& dd = model.diagram();
  SpCheckResult res;
  Backend bk = X.backend();
  Scalar eps = Scalar::zero(bk);
  if (bk == Backend::floating) {
    if (tol) {
      eps = *tol;  // caller-supplied absolute tolerance
    } else {
      Scalar scale = X.dense().max_abs();
      eps = Scalar(rank_tolerance()) * (scale.is_zero() ? Scalar::one(bk) : scale);
    }
  }

  // Blockwise relations X_ab = -eps(a) eps(b) X_{m(b) m(a)}^T.
  for (const Box& a : dd.boxes())
    for (const Box& b : dd.boxes()) {
      Mat lhs = X.block(a, b);
      Mat rhs = X.block(dd.mirror(b), dd.mirror(a)).transpose();
      Scalar sign = Scalar::exact(-dd.eps(a) * dd.eps(b)).to_backend(bk);
      Mat diff = lhs - rhs.scaled(sign);
      Scalar r = diff.max_abs();
      if (r > eps) {
        res.ok = false;
        res.a = b;
        res.b = a;
        res.residual = r;
        // Dense criterion must agree with the blockwise one.
        Mat JX = model.J().to_backend(bk) * X.dense();
        if (!((JX - JX.transpose()).max_abs() > eps))
          throw Error("sp_check: blockwise and dense criteria disagree");
        return res;
      }
    }
  Mat JX = model.J().to_backend(bk) * X.dense();
  if ((JX - JX.transpose()).max_abs() > eps)
    throw Error("sp_check: dense criterion fails where blockwise passes");
  return res;
}

GradedDecomposition degree_split(const BlockEndomorphism& X) {
  const SymplecticModel& model = X.model();
  GradedDecomposition out;
  int top = 2 * model.diagram().p1() - 1;
  for (int k = -top; k <= top; ++k) {
    Mat comp = degree_component(model, X.dense(), k);
    if (!comp.is_zero())
      out.emplace(k, BlockEndomorphism(&model, comp));
  }
  return out;
}

Mat degree_component(const SymplecticModel& model, const Mat& dense, int k) {
  Mat comp(dense.rows(), dense.cols(), dense.backend());
  for (int i = 0; i < dense.rows(); ++i)
    for (int j = 0; j < dense.cols(); ++j)
      if (model.slot_degree(i) - model.slot_degree(j) == k) comp.at(i, j) = dense.at(i, j);
  return comp;
}

std::optional<int> min_degree(const BlockEndomorphism& X, const Scalar* tol) {
  const SymplecticModel& model = X.model();
  Backend bk = X.backend();
  Scalar eps = Scalar::zero(bk);
  if (bk == Backend::floating && tol) eps = *tol;
  int top = 2 * model.diagram().p1() - 1;
  for (int k = -top; k <= top; ++k) {
    Mat comp = degree_component(model, X.dense(), k);
    if (comp.max_abs() > eps) return k;
  }
  return std::nullopt;
}

BlockEndomorphism delta_normal(const SymplecticModel& model) {
  BlockEndomorphism d = BlockEndomorphism::zero(&model);
  const DoubleDiagram& dd = model.diagram();
  for (const Box& a : dd.boxes()) {
    auto ra = dd.right(a);
    if (!ra) continue;
    Mat blk = Mat::identity(model.block_size(a)).scaled(Scalar::exact(dd.eps(a)));
    d.set_block(*ra, a, blk);
  }
  return d;
}

Mat skew_complement(const Mat& S, const SymplecticModel& model) {
  if (S.rows() != model.dim()) throw ShapeMismatch();
  if (S.rank() != S.cols()) throw RankDeficientInput("dependent spanning columns");
  Mat A = S.transpose() * model.J().to_backend(S.backend());
  return A.kernel();
}

}  // namespace symcurve
