#include "symcurve/curve.hpp"

#include <algorithm>

namespace symcurve {

namespace {

MatrixJet amul(MatrixJet a, MatrixJet b) {
  align(a, b);
  return a * b;
}

MatrixJet aadd(MatrixJet a, MatrixJet b) {
  align(a, b);
  return a + b;
}

Jet ajmul(Jet a, Jet b) {
  align(a, b);
  return a * b;
}

// sigma_eff evaluation between jet columns: x^T (s J_std) y.
Jet sig(const MatrixJet& x, const MatrixJet& y, const Mat& Jeff) {
  MatrixJet xt = x.transpose();
  MatrixJet Jy = amul(MatrixJet::constant(Jeff, y.t0(), y.order()), y);
  MatrixJet v = amul(xt, Jy);
  return v.entry(0, 0);
}

Scalar float_tol() { return Scalar(rank_tolerance()); }

// Column indices of cand independent modulo base at the constant coefficient,
// with an ambiguity band: residuals between tol and sqrt(tol) stop the run.
std::vector<int> pick_independent(const Mat& base, const Mat& cand, int want,
                                  const Scalar* noise_floor = nullptr) {
  const Backend bk = cand.backend();
  std::vector<int> picked;
  if (bk == Backend::exact) {
    picked = independent_columns(base, cand);
  } else {
    // Rank-revealing greedy selection: columns are normalized and the largest
    // orthogonal residual wins each round, which keeps the later triangular
    // corrections well conditioned.
    Scalar one = Scalar::one(bk);
    Scalar scale = one + cand.max_abs() + base.max_abs();
    Scalar lo = float_tol() * scale;
    Scalar hi = lo.sqrt() * scale.sqrt();  // geometric band edge
    if (noise_floor && *noise_floor > lo) {
      // Truncation noise dominates: split the gap to the O(scale) signal
      // geometrically and drop the ambiguity band.
      lo = (*noise_floor * scale).sqrt();
      hi = lo;
    }
    std::vector<Mat> ortho;  // orthonormalized stack (plain euclidean)
    auto project = [&](Mat v) {
      for (int rep = 0; rep < 2; ++rep)
        for (const Mat& u : ortho) {
          Scalar c = (u.transpose() * v).at(0, 0);
          v -= u.scaled(c);
        }
      return v;
    };
    auto norm_of = [&](const Mat& v) {
      return ((v.transpose() * v).at(0, 0)).sqrt();
    };
    for (int j = 0; j < base.cols(); ++j) {
      Mat v = project(base.col(j));
      Scalar n = norm_of(v);
      if (n > hi) ortho.push_back(v.scaled(n.inv()));
    }
    std::vector<Mat> unit;
    std::vector<bool> used(static_cast<size_t>(cand.cols()), false);
    for (int j = 0; j < cand.cols(); ++j) {
      Mat v = cand.col(j);
      Scalar n = norm_of(v);
      unit.push_back(n > lo ? v.scaled(n.inv()) : v);
    }
    while (true) {
      int best = -1;
      Scalar best_n = Scalar::zero(bk);
      for (int j = 0; j < cand.cols(); ++j) {
        if (used[static_cast<size_t>(j)]) continue;
        Scalar n = norm_of(project(unit[static_cast<size_t>(j)]));
        if (best < 0 || n > best_n) {
          best = j;
          best_n = n;
        }
      }
      if (best < 0) break;
      Scalar rel = best_n;  // residual of a unit column
      if (rel > hi) {
        Mat v = project(unit[static_cast<size_t>(best)]);
        ortho.push_back(v.scaled(norm_of(v).inv()));
        picked.push_back(best);
        used[static_cast<size_t>(best)] = true;
        if (want >= 0 && static_cast<int>(picked.size()) == want) break;
      } else if (rel > lo && !noise_floor) {
        throw PrecisionExhausted("rank decision inside the tolerance band");
      } else {
        break;
      }
    }
    std::sort(picked.begin(), picked.end());
  }
  if (want >= 0 && static_cast<int>(picked.size()) > want)
    picked.resize(static_cast<size_t>(want));
  return picked;
}

}  // namespace

void validate_curve(const CurveSpec& c) {
  if (c.m <= 0 || c.frame.rows() != 2 * c.m || c.frame.cols() != c.m)
    throw BadFormat("frame must be 2m x m");
  Mat F0 = c.frame.coeff(0);
  Backend bk = c.frame.backend();
  if (bk == Backend::exact) {
    if (F0.rank() != c.m) throw RankDeficientFrame();
  } else {
    auto sv = F0.singular_values();
    Scalar scale = sv.empty() ? Scalar::one(bk) : sv[0];
    if (sv.back() <= float_tol() * scale) throw RankDeficientFrame();
  }
  Mat J = SymplecticModel::standard_J(c.m, bk);
  MatrixJet gram = c.frame.transpose() * MatrixJet::constant(J, c.t0(), c.frame.order()) * c.frame;
  Scalar tol = bk == Backend::exact
                   ? Scalar::exact(0)
                   : float_tol() * (Scalar::one(bk) + c.frame.max_abs_coeff());
  for (int i = 0; i < c.m; ++i)
    for (int j = 0; j < c.m; ++j) {
      Jet e = gram.entry(i, j);
      if (e.max_abs_coeff() > tol)
        throw NotLagrangian("sigma(col_" + std::to_string(i) + ", col_" + std::to_string(j) +
                            ") = " + e.coeff(0).str());
    }
}

Mat velocity_form(const CurveSpec& c, const Scalar& t) {
  Backend bk = c.frame.backend();
  Mat J = SymplecticModel::standard_J(c.m, bk);
  Mat F = c.frame.evaluate(t.to_backend(bk));
  Mat Fp = c.frame.derivative().evaluate(t.to_backend(bk));
  Mat q = Fp.transpose() * J * F;
  Scalar half(1, 2);
  return (q + q.transpose()).scaled(half.to_backend(bk));
}

namespace {

Monotone classify_inertia(const std::vector<Scalar>& ev, const Scalar& tol) {
  bool pos = false, neg = false;
  for (const auto& e : ev) {
    if (e > tol) pos = true;
    if (e < -tol) neg = true;
  }
  if (pos && neg) return Monotone::indefinite;
  if (pos) return Monotone::nondecreasing;
  if (neg) return Monotone::nonincreasing;
  return Monotone::degenerate;
}

}  // namespace

// Flags assume a curve validated at its own base point; sampled rebasings of
// truncated curves are only isotropic to jet order and skip revalidation.
FlagJets osculating_flag(const CurveSpec& c, const Scalar* noise_floor,
                         bool with_contractions) {
  FlagJets out;
  const int n = 2 * c.m;
  MatrixJet cur = c.frame;
  out.span[0] = cur;
  out.dims[0] = c.m;
  int depth = 0;
  while (out.dims[-depth] < n) {
    MatrixJet cand = cur.derivative();
    MatrixJet curt = cur.truncated(cand.order());
    std::vector<int> keep = pick_independent(curt.coeff(0), cand.coeff(0), -1, noise_floor);
    if (keep.empty()) break;  // spans stabilized short of the whole space
    MatrixJet nxt = MatrixJet::hcat(curt, cand.cols_selected(keep));
    ++depth;
    out.span[-depth] = nxt;
    out.dims[-depth] = nxt.cols();
    cur = nxt;
    if (depth > n) throw Error("flag construction failed to stabilize");
  }
  out.extension_depth = depth;
  out.ample = out.dims[-depth] == n;

  // Contractions as jet kernels of sigma(., extension columns).
  Backend bk = c.frame.backend();
  Mat J = SymplecticModel::standard_J(c.m, bk);
  for (int j = 1; with_contractions && j <= depth - 1; ++j) {
    const MatrixJet& S = out.span[-j];
    MatrixJet A = S.transpose() * MatrixJet::constant(J, S.t0(), S.order());
    MatrixJet K = matjet_kernel(A);
    out.span[j] = K;
    out.dims[j] = K.cols();
    if (out.dims[j] != n - out.dims[-j])
      throw PrecisionExhausted("contraction dimension drifts from duality");
  }
  return out;
}

RegularityReport regularity_report(const CurveSpec& c, const std::vector<Scalar>& samples) {
  validate_curve(c);
  RegularityReport rep;
  FlagJets base = osculating_flag(c);
  rep.ample = base.ample;
  rep.ample_witness_p = -base.extension_depth;

  auto dims_of = [&](const FlagJets& f) {
    std::vector<int> d;
    for (int j = 0; j <= f.extension_depth; ++j) d.push_back(f.dims.at(-j));
    return d;
  };
  std::vector<int> d0 = dims_of(base);
  rep.sampled_dims.emplace_back(c.t0().str(), d0);
  rep.equiregular = true;

  // Sampling a truncated curve away from its base point sees the truncation
  // tail; the isotropy defect of the shifted frame calibrates the noise floor
  // for rank and inertia decisions there.
  Backend bk = Backend::floating;
  Mat J = SymplecticModel::standard_J(c.m, bk);
  CurveSpec cf{c.m, c.frame.to_float(), c.name};
  Scalar tol = float_tol() * (Scalar::one(bk) + cf.frame.max_abs_coeff());
  auto noise_at = [&](const CurveSpec& shifted) {
    MatrixJet gram = shifted.frame.transpose() *
                     MatrixJet::constant(J, shifted.t0(), shifted.frame.order()) *
                     shifted.frame;
    Scalar n = gram.max_abs_coeff() + tol;
    return n;
  };
  std::vector<std::pair<CurveSpec, Scalar>> shifted_curves;
  for (const Scalar& s : samples) {
    CurveSpec shifted{c.m, cf.frame.rebased(s.to_float()), c.name};
    Scalar noise = noise_at(shifted);
    FlagJets f = osculating_flag(shifted, &noise, false);
    std::vector<int> d = dims_of(f);
    rep.sampled_dims.emplace_back(s.str(), d);
    if (d != d0) rep.equiregular = false;
    shifted_curves.emplace_back(std::move(shifted), noise);
  }

  // Velocity inertia at t0 and the samples.
  Mat q0 = velocity_form(cf, cf.t0());
  rep.velocity_eigenvalues = q0.symmetric_eigenvalues();
  Monotone verdict = classify_inertia(rep.velocity_eigenvalues, tol);
  for (const auto& [shifted, noise] : shifted_curves) {
    Mat q = velocity_form(shifted, shifted.t0());
    Scalar scale = Scalar::one(bk) + q.max_abs();
    Monotone ms = classify_inertia(q.symmetric_eigenvalues(), (noise * scale).sqrt());
    if (ms == Monotone::degenerate) continue;
    if (verdict == Monotone::degenerate) verdict = ms;
    else if (ms != verdict) verdict = Monotone::indefinite;
  }
  rep.monotone = verdict;

  // Young diagram from the dimension jumps of the extensions.
  std::vector<int> cols;
  for (int j = 1; j <= base.extension_depth; ++j)
    cols.push_back(base.dims.at(-j) - base.dims.at(-(j - 1)));
  if (!cols.empty()) rep.young_diagram = YoungDiagram::from_columns(cols);
  return rep;
}

namespace {

struct LiftBuild {
  std::shared_ptr<SymplecticModel> model;
  std::map<int, MatrixJet> tuples;  // box index -> 2m x r_i jet (std coordinates)
  Mat Jeff;                         // flipped standard form, float
  int s_flip = 1;
};

// Lower-triangular jet square root of a positive-definite Gram jet; all
// entries keep the input order (no truncation cascade across columns).
MatrixJet jet_cholesky(const MatrixJet& G, const Scalar& band_tol) {
  const int n = G.rows();
  MatrixJet L = MatrixJet::zero(n, n, G.t0(), G.order(), G.backend());
  for (int i = 0; i < n; ++i) {
    Jet s = G.entry(i, i);
    for (int k = 0; k < i; ++k) s = s - L.entry(i, k) * L.entry(i, k);
    if (s.coeff(0).sign() <= 0) {
      if (s.coeff(0).abs() <= band_tol)
        throw PrecisionExhausted("graded norm inside the tolerance band");
      throw NotMonotone("graded inner product loses positive definiteness");
    }
    Jet d = s.sqrt();
    L.set_entry(i, i, d);
    Jet dinv = d.invert();
    for (int r = i + 1; r < n; ++r) {
      Jet v = G.entry(r, i);
      for (int k = 0; k < i; ++k) v = v - L.entry(r, k) * L.entry(i, k);
      L.set_entry(r, i, v * dinv);
    }
  }
  return L;
}

MatrixJet lower_triangular_inverse(const MatrixJet& L) {
  const int n = L.rows();
  MatrixJet X = MatrixJet::zero(n, n, L.t0(), L.order(), L.backend());
  for (int j = 0; j < n; ++j) {
    Jet djj = L.entry(j, j).invert();
    X.set_entry(j, j, djj);
    for (int i = j + 1; i < n; ++i) {
      Jet s = Jet::zero(L.t0(), L.order(), L.backend());
      for (int k = j; k < i; ++k) s = s + L.entry(i, k) * X.entry(k, j);
      X.set_entry(i, j, -(L.entry(i, i).invert() * s));
    }
  }
  return X;
}

}  // namespace

AdaptedLift adapted_lift(const CurveSpec& curve_in) {
  CurveSpec c{curve_in.m, curve_in.frame.to_float(), curve_in.name};
  validate_curve(c);
  const int n = 2 * c.m;
  const Backend bk = Backend::floating;
  const Scalar t0 = c.t0();

  // Monotone sign; curves of the opposite sign run under the negated form.
  Scalar tol = float_tol() * (Scalar::one(bk) + c.frame.max_abs_coeff());
  Mat q0 = velocity_form(c, t0);
  Monotone mono = classify_inertia(q0.symmetric_eigenvalues(), tol);
  if (mono == Monotone::indefinite || mono == Monotone::degenerate)
    throw NotMonotone("velocity form is not semidefinite of a single sign");
  int s_c = mono == Monotone::nonincreasing ? -1 : 1;

  FlagJets flags = osculating_flag(c);
  if (!flags.ample)
    throw NotAmple("flag stabilizes at dimension " +
                   std::to_string(flags.dims.at(-flags.extension_depth)) +
                   " < " + std::to_string(n) +
                   "; reduce to the span of the stabilized flag first");

  std::vector<int> colcounts;
  for (int j = 1; j <= flags.extension_depth; ++j)
    colcounts.push_back(flags.dims.at(-j) - flags.dims.at(-(j - 1)));
  ReducedDiagram red = reduce_diagram(YoungDiagram::from_columns(colcounts));

  AdaptedLift out;
  out.reduced = red;
  out.model = std::make_shared<SymplecticModel>(build_double_diagram(red));
  out.ctx = std::make_shared<GradedContext>(*out.model);
  out.monotone_sign = s_c;
  const SymplecticModel& model = *out.model;
  const DoubleDiagram& dd = model.diagram();
  const int p1 = red.p1();
  const int model_sign = model.definiteness_sign();
  int s_flip = s_c * model_sign > 0 ? 1 : -1;  // effective form sign: flip iff s_c != s*
  Mat Jeff = SymplecticModel::standard_J(c.m, bk).scaled(Scalar::exact(s_flip).to_backend(bk));

  // Mirror tuples by degree, top down: push existing rows by differentiation,
  // complete new rows orthonormally under the graded inner product.
  std::map<int, MatrixJet> tuples;  // diagram box index -> columns
  for (int j = p1 - 1; j >= 0; --j) {
    std::vector<MatrixJet> prefix;
    std::vector<int> prefix_rows;
    for (int i = 1; i <= red.num_rows(); ++i) {
      if (red.p(i) <= j + 1) continue;  // introduced later (or new below)
      Box b{i, -(j + 2)};
      Box nb{i, -(j + 1)};
      MatrixJet pushed = tuples.at(dd.index_of(b)).derivative();
      tuples.emplace(dd.index_of(nb), pushed);
      prefix.push_back(pushed);
      prefix_rows.push_back(i);
    }
    // New row at this degree (row lengths are strict, so at most one).
    int new_row = 0;
    for (int i = 1; i <= red.num_rows(); ++i)
      if (red.p(i) == j + 1) new_row = i;
    if (!new_row) continue;
    int want = red.r(new_row);
    const MatrixJet& Sj = flags.span.at(j);
    // Pick candidates independent modulo the higher flag level plus prefix.
    Mat base0(n, 0, bk);
    if (flags.span.count(j + 1)) base0 = flags.span.at(j + 1).coeff(0);
    for (const auto& pf : prefix) base0 = Mat::hcat(base0, pf.coeff(0));
    std::vector<int> picked = pick_independent(base0, Sj.coeff(0), want);
    if (static_cast<int>(picked.size()) != want)
      throw PrecisionExhausted("cannot complete the graded basis at degree " +
                               std::to_string(j));
    MatrixJet cand = Sj.cols_selected(picked);

    // One Gram computation for [prefix | candidates]; the pushed part must
    // already be orthonormal, the new part is corrected by a triangular
    // square root so every column keeps the same jet order.
    int O = cand.order();
    for (const auto& pf : prefix) O = std::min(O, pf.order());
    MatrixJet W = cand.truncated(O);
    int p_cols = 0;
    for (const auto& pf : prefix) p_cols += pf.cols();
    if (p_cols) {
      MatrixJet P = prefix[0].truncated(O);
      for (size_t i = 1; i < prefix.size(); ++i)
        P = MatrixJet::hcat(P, prefix[i].truncated(O));
      W = MatrixJet::hcat(P, W);
    }
    MatrixJet D = W;
    for (int it = 0; it < 2 * j + 1; ++it) D = D.derivative();
    MatrixJet G =
        amul(amul(D.transpose(), MatrixJet::constant(Jeff, t0, W.order())), W)
            .scaled(Scalar::exact(model_sign * (j % 2 ? -1 : 1)).to_backend(bk));
    G = (G + G.transpose()).scaled(Scalar(1, 2).to_backend(bk));
    int Og = G.order();
    if (p_cols) {
      Mat gpp = G.coeff(0).block(0, 0, p_cols, p_cols) - Mat::identity(p_cols, bk);
      if (gpp.max_abs() > tol.sqrt())
        throw PrecisionExhausted("pushed tuples lose orthonormality at degree " +
                                 std::to_string(j));
    }
    MatrixJet B = G.block(0, p_cols, p_cols, want);
    MatrixJet M = G.block(p_cols, p_cols, want, want);
    if (p_cols) M = M - amul(B.transpose(), B);
    MatrixJet L = jet_cholesky(M, tol.sqrt());
    MatrixJet corr = cand.truncated(Og);
    if (p_cols) {
      MatrixJet P = W.block(0, 0, n, p_cols);
      corr = corr - amul(P, B);
    }
    MatrixJet tuple = amul(corr, lower_triangular_inverse(L).transpose());
    tuples.emplace(dd.index_of(Box{new_row, -(j + 1)}), tuple);
  }

  // Original-side tuples: F_{r(a)} = eps(a) F_a'.
  for (int i = 1; i <= red.num_rows(); ++i) {
    int p = red.p(i);
    for (int cc = 1; cc <= p; ++cc) {
      Box prev{i, cc == 1 ? -1 : cc - 1};
      Box cur{i, cc};
      MatrixJet d = tuples.at(dd.index_of(prev)).derivative();
      if (dd.eps(prev) < 0) d = -d;
      tuples.emplace(dd.index_of(cur), d);
    }
  }

  // Assemble at the common order.
  int ord = c.frame.order();
  for (const auto& [idx, tj] : tuples) ord = std::min(ord, tj.order());
  if (ord < 1)
    throw PrecisionExhausted("jet order exhausted while building the adapted frame");
  MatrixJet G = MatrixJet::zero(n, n, t0, ord, bk);
  for (const Box& b : dd.boxes())
    G.set_block(0, model.slot(b), tuples.at(dd.index_of(b)).truncated(ord));

  // Column index lists for the two sides, with the pairing pattern.
  std::vector<int> mcols, pcols;
  for (const Box& b : dd.boxes())
    for (int t = 0; t < model.block_size(b); ++t)
      (b.col < 0 ? mcols : pcols).push_back(model.slot(b) + t);
  Mat Wpat(c.m, c.m, bk);
  auto pos_of = [&](const std::vector<int>& v, int slot) {
    return static_cast<int>(std::find(v.begin(), v.end(), slot) - v.begin());
  };
  for (const Box& a : dd.boxes()) {
    if (a.col < 0) continue;
    Box ma = dd.mirror(a);
    for (int t = 0; t < model.block_size(a); ++t)
      Wpat.at(pos_of(mcols, model.slot(ma) + t), pos_of(pcols, model.slot(a) + t)) =
          Scalar::one(bk);
  }

  MatrixJet M = G.cols_selected(mcols);
  MatrixJet P = G.cols_selected(pcols);
  MatrixJet Jeff_jet = MatrixJet::constant(Jeff, t0, ord);
  // First correction: make the cross Gram exactly the pairing pattern.
  MatrixJet W = amul(amul(M.transpose(), Jeff_jet), P);
  MatrixJet D = W - MatrixJet::constant(Wpat, t0, W.order());
  MatrixJet Y = -amul(W.inverse(), D);
  P = aadd(P, amul(P, Y));
  // Second correction: cancel the skew defect inside the original side.
  MatrixJet B = amul(amul(P.transpose(), Jeff_jet.truncated(P.order())), P);
  MatrixJet Xi = amul(MatrixJet::constant(Wpat, t0, B.order()), B)
                     .scaled(Scalar(1, 2).to_backend(bk));
  P = aadd(P, amul(M, Xi));

  int ord2 = std::min(M.order(), P.order());
  MatrixJet Gc = MatrixJet::zero(n, n, t0, ord2, bk);
  for (int q = 0; q < c.m; ++q) {
    Gc.set_block(0, mcols[q], M.block(0, q, n, 1).truncated(ord2));
    Gc.set_block(0, pcols[q], P.block(0, q, n, 1).truncated(ord2));
  }

  // Exactness of the Gram and the leading structure-function degree.
  MatrixJet gram = amul(amul(Gc.transpose(), Jeff_jet.truncated(ord2)), Gc);
  MatrixJet gram_err = gram - MatrixJet::constant(model.J().to_float(), t0, gram.order());
  Scalar gtol = tol.sqrt();
  if (gram_err.max_abs_coeff() > gtol)
    throw PrecisionExhausted("adapted frame Gram matrix defect " +
                             gram_err.max_abs_coeff().str());
  MatrixJet C = amul(Gc.inverse(), Gc.derivative());
  Mat delta_f = delta_normal(model).dense().to_float();
  for (int q = 0; q <= C.order(); ++q) {
    Mat err = degree_component(model, C.coeff(q), -1) - (q == 0 ? delta_f : Mat(n, n, bk));
    Scalar e = err.max_abs();
    for (int k = -(2 * p1 - 1); k < -1; ++k) {
      Scalar v = degree_component(model, C.coeff(q), k).max_abs();
      if (v > e) e = v;
    }
    if (e > gtol)
      throw PrecisionExhausted("adapted frame structure function defect " + e.str());
  }

  out.gamma = Gc;
  return out;
}

SymbolResult symbol_at(const CurveSpec& curve_in, const Scalar& t) {
  CurveSpec c{curve_in.m, curve_in.frame.to_float().rebased(t.to_float()), curve_in.name};
  AdaptedLift lift = adapted_lift(c);
  const SymplecticModel& model = *lift.model;
  const DoubleDiagram& dd = model.diagram();
  const int n = 2 * c.m;
  const Backend bk = Backend::floating;
  const Scalar t0 = c.t0();
  Scalar tol = float_tol().sqrt() * (Scalar::one(bk) + c.frame.max_abs_coeff());

  SymbolResult res;
  res.diagram = lift.reduced;
  res.model = lift.model;
  res.monotone_sign = lift.monotone_sign;
  int s_flip = lift.monotone_sign * model.definiteness_sign() > 0 ? 1 : -1;
  Mat Jeff = SymplecticModel::standard_J(c.m, bk).scaled(Scalar::exact(s_flip).to_backend(bk));

  // Naive graded bases from the flag jets evaluated at the base point.
  FlagJets flags = osculating_flag(c);
  const int p1 = lift.reduced.p1();
  std::map<int, Mat> naive;        // degree -> point basis of V_j
  std::map<int, Mat> naive_deriv;  // degree -> derivative values of that basis
  std::map<int, Mat> higher;       // degree -> point basis of Lambda^{(j+1)}
  Mat stack(n, 0, bk);
  for (int j = p1 - 1; j >= -p1; --j) {
    Mat Sj = flags.span.count(j) ? flags.span.at(j).coeff(0) : Mat(n, 0, bk);
    higher[j] = stack;
    std::vector<int> picked = pick_independent(stack, Sj, -1);
    naive[j] = Sj.cols_selected(picked);
    naive_deriv[j] = Mat(n, 0, bk);
    if (!picked.empty()) {
      MatrixJet nj = flags.span.at(j).cols_selected(picked);
      naive_deriv[j] = nj.derivative().coeff(0);
    }
    stack = Mat::hcat(stack, naive[j]);
  }

  // Graded pieces of the symbol: derivative classes in the naive bases.
  for (int j = p1 - 1; j >= -p1 + 1; --j) {
    int w = naive[j].cols();
    int wd = naive[j - 1].cols();
    Mat blk(wd, w, bk);
    if (w && wd) {
      Mat dv = naive_deriv[j];
      // express the derivatives over [naive_{j-1} | Lambda^{(j)}]
      Mat A = Mat::hcat(naive[j - 1], Mat::hcat(naive[j], higher[j]));
      auto sol = A.solve(dv);
      if (!sol) throw PrecisionExhausted("derivative leaves the expected flag level");
      blk = sol->block(0, 0, wd, w);
    }
    res.delta_t[j] = blk;
  }

  // Conjugator: express naive basis vectors over the adapted tuple columns.
  Mat G0 = lift.gamma.coeff(0);
  Mat Q(n, n, bk);
  int col = 0;
  std::vector<int> naive_deg(static_cast<size_t>(n), 0);
  std::map<int, int> offset;
  for (int j = p1 - 1; j >= -p1; --j) {
    offset[j] = col;
    // model columns of degree j plus the higher stack
    std::vector<int> degcols;
    for (const Box& b : dd.boxes())
      if (dd.deg(b) == j)
        for (int tt = 0; tt < model.block_size(b); ++tt) degcols.push_back(model.slot(b) + tt);
    Mat F = G0.cols_selected(degcols);
    Mat A = Mat::hcat(F, higher[j]);
    if (naive[j].cols()) {
      auto sol = A.solve(naive[j]);
      if (!sol) throw PrecisionExhausted("naive basis outside the adapted span");
      Mat coefs = sol->block(0, 0, F.cols(), naive[j].cols());
      for (int cc = 0; cc < coefs.cols(); ++cc) {
        for (int rr = 0; rr < coefs.rows(); ++rr)
          Q.at(degcols[static_cast<size_t>(rr)], col + cc) = coefs.at(rr, cc);
        naive_deg[static_cast<size_t>(col + cc)] = j;
      }
    }
    col += naive[j].cols();
  }

  // Residual of the conjugation property in naive coordinates.
  Mat delta_naive(n, n, bk);
  for (int j = p1 - 1; j >= -p1 + 1; --j) {
    const Mat& blk = res.delta_t.at(j);
    for (int cc = 0; cc < blk.cols(); ++cc)
      for (int rr = 0; rr < blk.rows(); ++rr)
        delta_naive.at(offset[j - 1] + rr, offset[j] + cc) = blk.at(rr, cc);
  }
  Mat delta_f = delta_normal(model).dense().to_float();
  res.conjugation_residual = (Q * delta_naive - delta_f * Q).max_abs();

  // Pairing compatibility: Q^t J_model Q against the graded form of the flag.
  Mat gr_form(n, n, bk);
  Mat all_naive(n, 0, bk);
  for (int j = p1 - 1; j >= -p1; --j) all_naive = Mat::hcat(all_naive, naive[j]);
  Mat full_gram = all_naive.transpose() * Jeff * all_naive;
  for (int i = 0; i < n; ++i)
    for (int j2 = 0; j2 < n; ++j2)
      if (naive_deg[static_cast<size_t>(i)] + naive_deg[static_cast<size_t>(j2)] == -1)
        gr_form.at(i, j2) = full_gram.at(i, j2);
  res.symplectic_residual =
      (Q.transpose() * model.J().to_float() * Q - gr_form).max_abs();
  res.Q = Q;
  if (res.conjugation_residual > tol || res.symplectic_residual > tol)
    throw PrecisionExhausted("symbol conjugation residual too large");
  return res;
}

CurveSpec curve_from_model_lift(const SymplecticModel& model, const MatrixJet& gamma_model,
                                const std::string& name) {
  std::vector<int> mcols;
  for (const Box& b : model.diagram().boxes())
    if (b.col < 0)
      for (int t = 0; t < model.block_size(b); ++t) mcols.push_back(model.slot(b) + t);
  MatrixJet lag = gamma_model.cols_selected(mcols);
  Mat T = model.to_standard().to_backend(lag.backend());
  MatrixJet frame = MatrixJet::constant(T, lag.t0(), lag.order()) * lag;
  return CurveSpec{model.half_dim(), frame, name};
}

}  // namespace symcurve
