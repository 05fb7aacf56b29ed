#include "symcurve/graded.hpp"

#include <algorithm>

namespace symcurve {

namespace {

// Rows R with M[R, :] invertible, for M of full column rank.
void build_col_solver(const Mat& M, std::vector<int>& rows, Mat& inv) {
  auto rr = M.transpose().rref();
  rows = rr.pivot_cols;
  if (static_cast<int>(rows.size()) != M.cols())
    throw RankDeficientInput("matrix is not of full column rank");
  Mat square(M.cols(), M.cols(), M.backend());
  for (int i = 0; i < M.cols(); ++i)
    for (int j = 0; j < M.cols(); ++j) square.at(i, j) = M.at(rows[i], j);
  inv = square.inverse();
}

Mat rows_selected(const Mat& y, const std::vector<int>& rows) {
  Mat out(static_cast<int>(rows.size()), y.cols(), y.backend());
  for (int i = 0; i < out.rows(); ++i)
    for (int j = 0; j < y.cols(); ++j) out.at(i, j) = y.at(rows[i], j);
  return out;
}

// Columns of M reduced to an independent spanning subset (exact backend).
Mat column_space_basis(const Mat& M) {
  if (M.cols() == 0) return M;
  auto picked = independent_columns(Mat(M.rows(), 0, M.backend()), M);
  return M.cols_selected(picked);
}

}  // namespace

GradedContext::GradedContext(const SymplecticModel& model)
    : model_(&model), delta_(delta_normal(model)) {}

const DegreeCoords& GradedContext::coords(int k) const {
  auto it = coords_.find(k);
  if (it != coords_.end()) return it->second;
  DegreeCoords dc;
  const DoubleDiagram& dd = model_->diagram();
  const auto& boxes = dd.boxes();
  for (size_t bi = 0; bi < boxes.size(); ++bi)
    for (size_t ai = 0; ai < boxes.size(); ++ai) {
      if (dd.deg(boxes[bi]) - dd.deg(boxes[ai]) != k) continue;
      dc.positions.emplace_back(static_cast<int>(bi), static_cast<int>(ai));
      dc.offsets.push_back(dc.total);
      dc.total += dd.block_size(boxes[bi]) * dd.block_size(boxes[ai]);
    }
  return coords_.emplace(k, std::move(dc)).first->second;
}

Mat GradedContext::to_coords(const Mat& dense, int k) const {
  const DegreeCoords& dc = coords(k);
  const DoubleDiagram& dd = model_->diagram();
  Mat v(dc.total, 1, dense.backend());
  for (size_t p = 0; p < dc.positions.size(); ++p) {
    const Box& b = dd.boxes()[static_cast<size_t>(dc.positions[p].first)];
    const Box& a = dd.boxes()[static_cast<size_t>(dc.positions[p].second)];
    int rb = dd.block_size(b), ra = dd.block_size(a);
    int sb = model_->slot(b), sa = model_->slot(a);
    for (int i = 0; i < rb; ++i)
      for (int j = 0; j < ra; ++j)
        v.at(dc.offsets[p] + i * ra + j, 0) = dense.at(sb + i, sa + j);
  }
  return v;
}

Mat GradedContext::from_coords(const Mat& column, int k) const {
  const DegreeCoords& dc = coords(k);
  const DoubleDiagram& dd = model_->diagram();
  Mat dense(model_->dim(), model_->dim(), column.backend());
  for (size_t p = 0; p < dc.positions.size(); ++p) {
    const Box& b = dd.boxes()[static_cast<size_t>(dc.positions[p].first)];
    const Box& a = dd.boxes()[static_cast<size_t>(dc.positions[p].second)];
    int rb = dd.block_size(b), ra = dd.block_size(a);
    int sb = model_->slot(b), sa = model_->slot(a);
    for (int i = 0; i < rb; ++i)
      for (int j = 0; j < ra; ++j)
        dense.at(sb + i, sa + j) = column.at(dc.offsets[p] + i * ra + j, 0);
  }
  return dense;
}

const std::vector<BlockEndomorphism>& GradedContext::g_basis(int k) const {
  auto it = bases_.find(k);
  if (it != bases_.end()) return it->second;
  const DoubleDiagram& dd = model_->diagram();
  const auto& boxes = dd.boxes();
  std::vector<BlockEndomorphism> basis;
  for (size_t bi = 0; bi < boxes.size(); ++bi)
    for (size_t ai = 0; ai < boxes.size(); ++ai) {
      const Box& b = boxes[bi];
      const Box& a = boxes[ai];
      if (dd.deg(b) - dd.deg(a) != k) continue;
      Box pb = dd.mirror(a), pa = dd.mirror(b);  // partner position
      size_t pbi = static_cast<size_t>(dd.index_of(pb));
      size_t pai = static_cast<size_t>(dd.index_of(pa));
      bool self_paired = (pbi == bi && pai == ai);
      if (!self_paired && std::make_pair(pbi, pai) < std::make_pair(bi, ai))
        continue;  // handled at the partner position
      int rb = dd.block_size(b), ra = dd.block_size(a);
      Scalar sign = Scalar::exact(-dd.eps(b) * dd.eps(a));
      if (self_paired) {
        // Constraint forces a symmetric block here.
        for (int i = 0; i < rb; ++i)
          for (int j = i; j < ra; ++j) {
            BlockEndomorphism e = BlockEndomorphism::zero(model_);
            Mat blk(rb, ra);
            blk.at(i, j) = Scalar::exact(1);
            blk.at(j, i) = Scalar::exact(1);
            e.set_block(b, a, blk);
            basis.push_back(e);
          }
      } else {
        for (int i = 0; i < rb; ++i)
          for (int j = 0; j < ra; ++j) {
            BlockEndomorphism e = BlockEndomorphism::zero(model_);
            Mat blk(rb, ra);
            blk.at(i, j) = Scalar::exact(1);
            e.set_block(b, a, blk);
            e.set_block(pb, pa, blk.transpose().scaled(sign));
            basis.push_back(e);
          }
      }
    }
  return bases_.emplace(k, std::move(basis)).first->second;
}

const Mat& GradedContext::g_basis_coords(int k) const {
  auto it = basis_coords_.find(k);
  if (it != basis_coords_.end()) return it->second;
  const auto& basis = g_basis(k);
  Mat M(coords(k).total, static_cast<int>(basis.size()));
  for (size_t i = 0; i < basis.size(); ++i) {
    Mat c = to_coords(basis[i].dense(), k);
    for (int r = 0; r < c.rows(); ++r) M.at(r, static_cast<int>(i)) = c.at(r, 0);
  }
  return basis_coords_.emplace(k, std::move(M)).first->second;
}

int GradedContext::dim_g(int k) const { return static_cast<int>(g_basis(k).size()); }

const Mat& GradedContext::ad_delta(int k) const {
  auto it = ad_.find(k);
  if (it != ad_.end()) return it->second;
  const auto& basis = g_basis(k);
  Mat M(coords(k - 1).total, static_cast<int>(basis.size()));
  for (size_t i = 0; i < basis.size(); ++i) {
    BlockEndomorphism br = bracket(delta_, basis[i]);
    Mat c = to_coords(br.dense(), k - 1);
    for (int r = 0; r < c.rows(); ++r) M.at(r, static_cast<int>(i)) = c.at(r, 0);
  }
  return ad_.emplace(k, std::move(M)).first->second;
}

BlockEndomorphism GradedContext::ad_preimage(int k, const Mat& target_coords) {
  if (k < 1) throw Error("ad_preimage needs k >= 1 where ad(delta) is injective");
  const Mat& A = ad_delta(k);
  if (A.cols() == 0) {
    if (!target_coords.is_zero()) throw Error("ad_preimage: empty source, nonzero target");
    return BlockEndomorphism::zero(model_, target_coords.backend());
  }
  auto rit = ad_solver_rows_.find(k);
  if (rit == ad_solver_rows_.end()) {
    std::vector<int> rows;
    Mat inv;
    build_col_solver(A, rows, inv);
    ad_solver_rows_.emplace(k, rows);
    rit = ad_solver_rows_.find(k);
    ad_solver_inv_.emplace(k, inv);
  }
  const std::vector<int>& rows = rit->second;
  Mat inv = ad_solver_inv_.at(k).to_backend(target_coords.backend());
  Mat coeffs = inv * rows_selected(target_coords, rows);
  // Assemble in the target backend.
  Mat dense(model_->dim(), model_->dim(), target_coords.backend());
  const auto& basis = g_basis(k);
  for (size_t i = 0; i < basis.size(); ++i) {
    const Scalar& c = coeffs.at(static_cast<int>(i), 0);
    if (c.is_zero()) continue;
    dense += basis[i].dense().to_backend(target_coords.backend()).scaled(c);
  }
  return BlockEndomorphism(model_, dense);
}

BlockEndomorphism GradedContext::random_gk(int k, Rng& rng) {
  BlockEndomorphism x = BlockEndomorphism::zero(model_);
  for (const auto& e : g_basis(k)) {
    Scalar c = rng.rational();
    if (!c.is_zero()) x = x + e.scaled(c);
  }
  return x;
}

BlockEndomorphism GradedContext::random_g0plus(Rng& rng) {
  BlockEndomorphism x = BlockEndomorphism::zero(model_);
  for (int k = 0; k <= top_degree(); ++k) x = x + random_gk(k, rng);
  return x;
}

Prolongation prolongation(GradedContext& ctx) {
  Prolongation out;
  const SymplecticModel& model = ctx.model();
  // Degree 0: kernel of ad(delta) on g_0.
  Mat A0 = ctx.ad_delta(0);
  Mat K0 = A0.kernel();
  Mat U_prev = ctx.g_basis_coords(0) * K0;  // coordinates, degree 0
  out.u.coords[0] = column_space_basis(U_prev);
  for (int k = 1; k <= ctx.top_degree(); ++k) {
    const Mat& Ak = ctx.ad_delta(k);
    if (Ak.cols() == 0) {
      out.u.coords[k] = Mat(ctx.coords(k).total, 0);
      U_prev = out.u.coords[k];
      continue;
    }
    Mat M = Mat::hcat(Ak, U_prev.cols() ? U_prev : Mat(Ak.rows(), 0));
    Mat Kf = M.kernel();
    Mat top = Kf.block(0, 0, Ak.cols(), Kf.cols());
    Mat Uk = ctx.g_basis_coords(k) * top;
    out.u.coords[k] = column_space_basis(Uk);
    U_prev = out.u.coords[k];
  }

  // Closed form: equal skew diagonal blocks along each row, nothing above.
  const DoubleDiagram& dd = model.diagram();
  int expected = 0;
  for (const auto& row : dd.reduced().rows)
    expected += row.multiplicity * (row.multiplicity - 1) / 2;
  if (out.u.dim(0) != expected) throw ClosedFormMismatch("dim u_0 drifts from the closed form");
  for (int k = 1; k <= ctx.top_degree(); ++k)
    if (out.u.dim(k) != 0) throw ClosedFormMismatch("u_k nonzero in positive degree");
  for (int i = 1; i <= dd.reduced().num_rows(); ++i) {
    int r = dd.reduced().r(i);
    for (int u = 0; u < r; ++u)
      for (int v = u + 1; v < r; ++v) {
        BlockEndomorphism e = BlockEndomorphism::zero(&model);
        Mat skew(r, r);
        skew.at(u, v) = Scalar::exact(1);
        skew.at(v, u) = Scalar::exact(-1);
        for (const Box& a : dd.boxes())
          if (a.row == i) e.set_block(a, a, skew);
        if (auto chk = sp_check(e); !chk.ok)
          throw ClosedFormMismatch("closed-form generator leaves the algebra");
        Mat c = ctx.to_coords(e.dense(), 0);
        if (!out.u.coords[0].solve(c)) throw ClosedFormMismatch("closed-form generator outside u_0");
      }
  }
  out.closed_form_ok = true;
  return out;
}

GradedSubspace unparametrized_prolongation(GradedContext& ctx) {
  GradedSubspace out;
  Mat dcol = ctx.to_coords(ctx.delta().dense(), -1);
  out.coords[-1] = dcol;
  Mat U_prev = dcol;
  for (int k = 0; k <= ctx.top_degree(); ++k) {
    const Mat& Ak = ctx.ad_delta(k);
    if (Ak.cols() == 0) {
      out.coords[k] = Mat(ctx.coords(k).total, 0);
      U_prev = out.coords[k];
      continue;
    }
    Mat M = Mat::hcat(Ak, U_prev.cols() ? U_prev : Mat(Ak.rows(), 0));
    Mat Kf = M.kernel();
    Mat top = Kf.block(0, 0, Ak.cols(), Kf.cols());
    out.coords[k] = column_space_basis(ctx.g_basis_coords(k) * top);
    U_prev = out.coords[k];
  }
  return out;
}

bool flat_symmetry_check(const BlockEndomorphism& y, GradedContext& ctx) {
  Mat z = y.dense();
  const Mat& d = ctx.delta().dense();
  for (int k = 0; k <= 2 * ctx.model().diagram().p1() + 1; ++k) {
    BlockEndomorphism ze(&ctx.model(), z);
    auto md = min_degree(ze);
    if (md && *md < 0) return false;
    z = d * z - z * d;
  }
  return true;
}

BlockEndomorphism bracket_blocks(const BlockEndomorphism& delta,
                                 const BlockEndomorphism& X) {
  if (!(delta.model() == X.model())) throw ModelMismatch();
  const SymplecticModel& model = X.model();
  const DoubleDiagram& dd = model.diagram();
  Backend bk = X.backend();
  BlockEndomorphism Y = BlockEndomorphism::zero(&model, bk);
  for (const Box& b : dd.boxes())
    for (const Box& a : dd.boxes()) {
      Mat val(dd.block_size(b), dd.block_size(a), bk);
      if (auto lb = dd.left(b))
        val += X.block(*lb, a).scaled(Scalar::exact(dd.eps(*lb)).to_backend(bk));
      if (auto ra = dd.right(a))
        val -= X.block(b, *ra).scaled(Scalar::exact(dd.eps(a)).to_backend(bk));
      if (!val.is_zero()) Y.set_block(b, a, val);
    }
  return Y;
}

Mat d_operator(const BlockEndomorphism& Y, const Box& b, const Box& a) {
  const DoubleDiagram& dd = Y.model().diagram();
  dd.require(b);
  dd.require(a);
  Backend bk = Y.backend();
  Mat sum = Y.block(b, a);
  Scalar ratio = Scalar::one(bk);
  Box x = b, y = a;
  while (true) {
    auto lx = dd.left(x);
    auto ly = dd.left(y);
    if (!lx || !ly) break;
    x = *lx;
    y = *ly;
    ratio *= Scalar::exact(dd.eps(x) * dd.eps(y)).to_backend(bk);
    sum += Y.block(x, y).scaled(ratio);
  }
  return sum;
}

CoboundaryCertificate coboundary_test(const BlockEndomorphism& Y, GradedContext& ctx) {
  const SymplecticModel& model = ctx.model();
  const DoubleDiagram& dd = model.diagram();
  CoboundaryCertificate cert{false, BlockEndomorphism::zero(&model, Y.backend()), {}, {}, Mat()};
  if (auto md = min_degree(Y); md && *md < 0)
    throw Error("coboundary_test requires an input concentrated in nonnegative degrees");
  if (auto chk = sp_check(Y); !chk.ok)
    throw Error("coboundary_test requires an input in the symplectic algebra");

  // Chain conditions at the last boxes.
  for (int i = 1; i <= dd.reduced().num_rows(); ++i) {
    Box rho = dd.last_box(i);
    for (const Box& b : dd.boxes()) {
      if (b.row < i) continue;
      Mat dv = d_operator(Y, b, rho);
      if (!dv.is_zero()) {
        cert.member = false;
        cert.witness_b = b;
        cert.witness_rho = rho;
        cert.witness_value = dv;
        return cert;
      }
    }
  }

  // Reconstruct the preimage blockwise; positions (x, y) with y not the first
  // box of its row and x weakly to the lower left of y carry the chain value,
  // the rest follow from the transpose relations.
  const auto& boxes = dd.boxes();
  const int nb = static_cast<int>(boxes.size());
  std::vector<bool> assigned(static_cast<size_t>(nb) * nb, false);
  BlockEndomorphism X = BlockEndomorphism::zero(&model, Y.backend());
  auto mark = [&](const Box& x, const Box& y) {
    assigned[static_cast<size_t>(dd.index_of(x)) * nb + dd.index_of(y)] = true;
  };
  auto is_assigned = [&](const Box& x, const Box& y) {
    return assigned[static_cast<size_t>(dd.index_of(x)) * nb + dd.index_of(y)];
  };
  auto in_free_region = [&](const Box& x, const Box& y) {
    if (!dd.left(y)) return false;  // first box of a row
    return x.col <= y.col && x.row >= y.row;
  };
  for (const Box& x : boxes)
    for (const Box& y : boxes) {
      if (!in_free_region(x, y)) continue;
      Box a = *dd.left(y);
      Mat val = d_operator(Y, x, a).scaled(Scalar::exact(-dd.eps(a)).to_backend(Y.backend()));
      X.set_block(x, y, val);
      mark(x, y);
    }
  Scalar tol = Scalar::zero(Y.backend());
  if (Y.backend() == Backend::floating)
    tol = Scalar(rank_tolerance()) * (Scalar::one(Backend::floating) + Y.dense().max_abs());
  for (const Box& x : boxes)
    for (const Box& y : boxes) {
      Box px = dd.mirror(y), py = dd.mirror(x);
      Scalar sign = Scalar::exact(-dd.eps(x) * dd.eps(y)).to_backend(Y.backend());
      if (is_assigned(x, y)) {
        if (is_assigned(px, py)) {
          Mat diff = X.block(x, y) - X.block(px, py).transpose().scaled(sign);
          if (diff.max_abs() > tol)
            throw InconsistentReconstruction("transpose relations conflict at " + x.str() +
                                             "x" + y.str());
        }
        continue;
      }
      if (is_assigned(px, py)) {
        X.set_block(x, y, X.block(px, py).transpose().scaled(sign));
        mark(x, y);
      } else if (dd.deg(x) - dd.deg(y) >= 0) {
        throw InconsistentReconstruction("uncovered nonnegative block at " + x.str() + "x" +
                                         y.str());
      }
    }

  BlockEndomorphism check = bracket(ctx.delta(), X) - Y;
  if (check.dense().max_abs() > tol)
    throw InconsistentReconstruction("reconstructed preimage fails the bracket identity");
  cert.member = true;
  cert.X = X;
  return cert;
}

NormalizationSpace::NormalizationSpace(GradedContext& ctx, const Assignment& phi)
    : ctx_(&ctx), phi_(phi) {
  const SymplecticModel& model = ctx.model();
  const DoubleDiagram& dd = model.diagram();
  if (phi_.keys.size() != phi_.choice.size())
    throw Error("assignment keys/choices size mismatch");

  std::map<int, std::vector<BlockEndomorphism>> n_dense;
  for (size_t idx = 0; idx < phi_.keys.size(); ++idx) {
    const Box& b = phi_.keys[idx].first;
    const Box& rho = phi_.keys[idx].second;
    auto chain = pair_chain(dd, b, rho);
    int j = phi_.choice[idx];
    if (j < 0 || j >= static_cast<int>(chain.size()))
      throw Error("assignment index outside the chain");
    Box pb = chain[static_cast<size_t>(j)].first;
    Box pa = chain[static_cast<size_t>(j)].second;
    FreeBlock fb;
    fb.b = b;
    fb.rho = rho;
    fb.pos_b = pb;
    fb.pos_a = pa;
    fb.degree = dd.deg(pb) - dd.deg(pa);
    fb.k_index = dd.left_index(b);
    fb.same_row = b.row == rho.row;
    int rb = dd.block_size(pb), ra = dd.block_size(pa);
    Scalar sign = Scalar::exact(-dd.eps(pb) * dd.eps(pa));
    Box qb = dd.mirror(pa), qa = dd.mirror(pb);  // partner position
    bool self = (qb == pb && qa == pa);
    std::vector<Mat> blocks;
    if (fb.same_row) {
      bool symmetric = fb.k_index % 2 == 1;
      for (int i = 0; i < rb; ++i)
        for (int jj = symmetric ? i : i + 1; jj < ra; ++jj) {
          Mat blk(rb, ra);
          blk.at(i, jj) = Scalar::exact(1);
          if (symmetric)
            blk.at(jj, i) = Scalar::exact(1);
          else
            blk.at(jj, i) = Scalar::exact(-1);
          blocks.push_back(blk);
        }
    } else {
      for (int i = 0; i < rb; ++i)
        for (int jj = 0; jj < ra; ++jj) {
          Mat blk(rb, ra);
          blk.at(i, jj) = Scalar::exact(1);
          blocks.push_back(blk);
        }
    }
    fb.param_count = static_cast<int>(blocks.size());
    free_blocks_.push_back(fb);
    for (const Mat& blk : blocks) {
      BlockEndomorphism e = BlockEndomorphism::zero(&model);
      e.set_block(pb, pa, blk);
      if (!self) e.set_block(qb, qa, blk.transpose().scaled(sign));
      if (auto chk = sp_check(e); !chk.ok)
        throw Error("normalization basis element leaves the algebra at " + pb.str() + "x" +
                    pa.str());
      n_dense[fb.degree].push_back(e);
    }
  }

  Prolongation prol = prolongation(ctx);
  u_ = prol.u;
  for (int k = 0; k <= ctx.top_degree(); ++k) {
    const Mat& Ak1 = ctx.ad_delta(k + 1);
    im_.coords[k] =
        Ak1.cols() ? column_space_basis(Ak1) : Mat(ctx.coords(k).total, 0);
    Mat Nk(ctx.coords(k).total, 0);
    auto it = n_dense.find(k);
    if (it != n_dense.end())
      for (const auto& e : it->second) Nk = Mat::hcat(Nk, ctx.to_coords(e.dense(), k));
    n_.coords[k] = Nk;

    DegreeSolver ds;
    ds.du = u_.dim(k);
    ds.di = im_.coords[k].cols();
    ds.dn = Nk.cols();
    ds.M = Mat::hcat(Mat::hcat(u_.coords[k], im_.coords[k]), Nk);
    int want = ctx.dim_g(k);
    if (ds.du + ds.di + ds.dn != want || (ds.M.cols() && ds.M.rank() != want))
      throw NotComplementary("direct sum fails at degree " + std::to_string(k) + ": " +
                             std::to_string(ds.du) + "+" + std::to_string(ds.di) + "+" +
                             std::to_string(ds.dn) + " vs dim g_k = " + std::to_string(want));
    if (ds.M.cols()) build_col_solver(ds.M, ds.rows, ds.inv);
    solvers_.emplace(k, std::move(ds));
  }
}

const NormalizationSpace::DegreeSolver* NormalizationSpace::solver(int k) const {
  auto it = solvers_.find(k);
  return it == solvers_.end() ? nullptr : &it->second;
}

NormalizationSpace::Split NormalizationSpace::split(const Mat& y, int k) const {
  const DegreeSolver* ds = solver(k);
  Split out;
  Backend bk = y.backend();
  out.u_part = Mat(y.rows(), 1, bk);
  out.im_part = Mat(y.rows(), 1, bk);
  out.n_part = Mat(y.rows(), 1, bk);
  out.u_coeffs = Mat(ds ? ds->du : 0, 1, bk);
  out.im_coeffs = Mat(ds ? ds->di : 0, 1, bk);
  out.n_coeffs = Mat(ds ? ds->dn : 0, 1, bk);
  out.residual = Scalar::zero(bk);
  if (!ds || !ds->M.cols()) {
    out.residual = y.max_abs();
    return out;
  }
  const Mat* M = &ds->M;
  const Mat* inv = &ds->inv;
  Mat Mf, invf;
  if (bk == Backend::floating) {
    if (!ds->M_f) {
      ds->M_f = std::make_unique<Mat>(ds->M.to_float());
      ds->inv_f = std::make_unique<Mat>(ds->inv.to_float());
    }
    M = ds->M_f.get();
    inv = ds->inv_f.get();
  }
  Mat c = (*inv) * rows_selected(y, ds->rows);
  out.residual = ((*M) * c - y).max_abs();
  for (int i = 0; i < ds->du; ++i) out.u_coeffs.at(i, 0) = c.at(i, 0);
  for (int i = 0; i < ds->di; ++i) out.im_coeffs.at(i, 0) = c.at(ds->du + i, 0);
  for (int i = 0; i < ds->dn; ++i) out.n_coeffs.at(i, 0) = c.at(ds->du + ds->di + i, 0);
  if (ds->du) out.u_part = M->block(0, 0, M->rows(), ds->du) * out.u_coeffs;
  if (ds->di) out.im_part = M->block(0, ds->du, M->rows(), ds->di) * out.im_coeffs;
  if (ds->dn) out.n_part = M->block(0, ds->du + ds->di, M->rows(), ds->dn) * out.n_coeffs;
  return out;
}

bool NormalizationSpace::contains(const Mat& dense, Scalar* residual_out) const {
  Backend bk = dense.backend();
  Scalar tol = Scalar::zero(bk);
  if (bk == Backend::floating)
    tol = Scalar(rank_tolerance()) * (Scalar::one(bk) + dense.max_abs());
  Scalar worst = Scalar::zero(bk);
  bool ok = true;
  const SymplecticModel& model = ctx_->model();
  int top = ctx_->top_degree();
  for (int k = -top; k <= top; ++k) {
    Mat comp = degree_component(model, dense, k);
    if (k < 0) {
      Scalar r = comp.max_abs();
      if (r > worst) worst = r;
      if (r > tol) ok = false;
      continue;
    }
    Mat y = ctx_->to_coords(comp, k);
    Split s = split(y, k);
    for (const Scalar& r : {s.residual, s.u_part.max_abs(), s.im_part.max_abs()}) {
      if (r > worst) worst = r;
      if (r > tol) ok = false;
    }
  }
  if (residual_out) *residual_out = worst;
  return ok;
}

Mat NormalizationSpace::n_from_coeffs(const Mat& coeffs, int k) const {
  auto it = n_.coords.find(k);
  if (it == n_.coords.end() || it->second.cols() == 0)
    return Mat(ctx_->model().dim(), ctx_->model().dim(), coeffs.backend());
  return ctx_->from_coords(it->second.to_backend(coeffs.backend()) * coeffs, k);
}

ComplementarityReport complementarity_audit(const NormalizationSpace& N, int ad_samples,
                                            std::uint64_t seed) {
  GradedContext& ctx = N.ctx();
  ComplementarityReport rep;
  for (int k = 0; k <= ctx.top_degree(); ++k) {
    ComplementarityReport::DegreeRow row;
    row.k = k;
    row.dim_g = ctx.dim_g(k);
    row.dim_u = N.u_space().dim(k);
    row.dim_im = N.im_space().dim(k);
    row.dim_n = N.n_space().dim(k);
    Mat M = Mat::hcat(Mat::hcat(N.u_space().coords.at(k), N.im_space().coords.at(k)),
                      N.n_space().coords.at(k));
    row.direct_sum = (row.dim_u + row.dim_im + row.dim_n == row.dim_g) &&
                     (M.cols() == 0 || M.rank() == row.dim_g);
    if (!row.direct_sum) rep.dimensions_ok = false;
    rep.degrees.push_back(row);
  }
  Rng rng(seed);
  const SymplecticModel& model = ctx.model();
  for (int s = 0; s < ad_samples; ++s) {
    Mat U = random_residual_element(model, rng);
    Mat Uinv = U.inverse();
    for (int k = 0; k <= ctx.top_degree(); ++k) {
      const Mat& Nk = N.n_space().coords.at(k);
      for (int j = 0; j < Nk.cols(); ++j) {
        Mat n = ctx.from_coords(Nk.col(j), k);
        Mat ad = U * n * Uinv;
        ++rep.ad_checks;
        if (!N.contains(ad)) ++rep.ad_failures;
      }
    }
  }
  return rep;
}

Mat random_cayley_orthogonal(int n, Rng& rng) {
  Mat S(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      Scalar v = rng.rational(3, 3);
      S.at(i, j) = v;
      S.at(j, i) = -v;
    }
  Mat I = Mat::identity(n);
  return (I - S) * (I + S).inverse();
}

Mat random_residual_element(const SymplecticModel& model, Rng& rng) {
  const DoubleDiagram& dd = model.diagram();
  Mat U(model.dim(), model.dim());
  for (int i = 1; i <= dd.reduced().num_rows(); ++i) {
    Mat Ui = random_cayley_orthogonal(dd.reduced().r(i), rng);
    for (const Box& a : dd.boxes())
      if (a.row == i) U.set_block(model.slot(a), model.slot(a), Ui);
  }
  return U;
}

namespace {
Mat random_symplectic_for(const Mat& J, Rng& rng) {
  const int n = J.rows();
  for (int attempt = 0; attempt < 32; ++attempt) {
    Mat S(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        Scalar v = rng.rational(2, 3);
        S.at(i, j) = v;
        S.at(j, i) = v;
      }
    Mat H = J.scaled(Scalar::exact(-1)) * S;  // Hamiltonian: J H symmetric
    Mat I = Mat::identity(n);
    Mat IpH = I + H;
    if (IpH.rank() != n) continue;
    Mat A = (I - H) * IpH.inverse();
    // Near-singular draws give extreme entries and needlessly ill-conditioned
    // transforms; redraw instead.
    if (A.max_abs() > Scalar::exact(32)) continue;
    if ((A.transpose() * J * A - J).is_zero()) return A;
  }
  throw Error("failed to draw a symplectic matrix");
}
}  // namespace

Mat random_symplectic(const SymplecticModel& model, Rng& rng) {
  return random_symplectic_for(model.J(), rng);
}

Mat random_symplectic_standard(int m, Rng& rng) {
  return random_symplectic_for(SymplecticModel::standard_J(m), rng);
}

}  // namespace symcurve
