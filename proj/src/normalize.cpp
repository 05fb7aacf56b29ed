#include "symcurve/normalize.hpp"

#include <algorithm>
#include <set>

namespace symcurve {

namespace {

MatrixJet amul(MatrixJet a, MatrixJet b) {
  align(a, b);
  return a * b;
}

Scalar scale_tol(const MatrixJet& x, int extra_bits = 0) {
  if (x.backend() == Backend::exact) return Scalar::exact(0);
  Scalar t = Scalar(rank_tolerance());
  for (int i = 0; i < extra_bits; i += 16) t = t.sqrt();  // coarse loosening
  return t * (Scalar::one(Backend::floating) + x.max_abs_coeff());
}

// Half-strength tolerance, defined on both backends (exact stays zero).
Scalar loosened(const Scalar& tol) {
  return tol.backend() == Backend::exact ? tol : tol.sqrt();
}

}  // namespace

StructureFunction structure_function(const MatrixJet& gamma, const SymplecticModel& model) {
  StructureFunction sf;
  sf.model = &model;
  sf.C = amul(gamma.inverse(), gamma.derivative());
  Scalar tol = scale_tol(sf.C);
  for (int q = 0; q <= sf.C.order(); ++q) {
    BlockEndomorphism e(&model, sf.C.coeff(q));
    auto chk = sp_check(e, &tol);
    if (!chk.ok)
      throw Error("structure function leaves the symplectic algebra at coefficient " +
                  std::to_string(q) + " (block " + chk.b.str() + "x" + chk.a.str() + ")");
  }
  return sf;
}

namespace {

// Degree-k coordinates of each jet coefficient of C.
std::vector<Mat> degree_coords_jet(const GradedContext& ctx, const MatrixJet& C, int k) {
  std::vector<Mat> out;
  out.reserve(static_cast<size_t>(C.order()) + 1);
  for (int q = 0; q <= C.order(); ++q)
    out.push_back(ctx.to_coords(degree_component(ctx.model(), C.coeff(q), k), k));
  return out;
}

}  // namespace

CanonicalFrameResult normalize_lift(const MatrixJet& gamma0,
                                    std::shared_ptr<SymplecticModel> model,
                                    std::shared_ptr<GradedContext> ctx,
                                    std::shared_ptr<NormalizationSpace> nspace,
                                    const Mat* fiber_choice) {
  CanonicalFrameResult res;
  res.model = model;
  res.ctx = ctx;
  res.nspace = nspace;
  const SymplecticModel& M = *model;
  const Backend bk = gamma0.backend();
  const int n = M.dim();
  const int top = ctx->top_degree();
  const Scalar t0 = gamma0.t0();

  Mat fiber = fiber_choice ? fiber_choice->to_backend(bk) : Mat::identity(n, bk);
  res.fiber_choice = fiber;

  MatrixJet gamma = gamma0;
  if (!fiber.is_zero() && !(fiber == Mat::identity(n, bk)))
    gamma = amul(gamma, MatrixJet::constant(fiber, t0, gamma.order()));
  MatrixJet C = amul(gamma.inverse(), gamma.derivative());

  Mat delta_d = ctx->delta().dense().to_backend(bk);
  Scalar tol0 = scale_tol(C);
  // The lift must already realize the normal degree -1 generator.
  for (int q = 0; q <= C.order(); ++q) {
    Scalar err = Scalar::zero(bk);
    for (int k = -top; k <= -1; ++k) {
      Mat comp = degree_component(M, C.coeff(q), k);
      if (k == -1 && q == 0) comp -= delta_d;
      Scalar v = comp.max_abs();
      if (v > err) err = v;
    }
    if (err > loosened(tol0))
      throw StageResidualTooLarge("lift is not adapted: negative-degree defect " + err.str());
  }

  // Skip gauges that are pure numerical dust well below the final tolerances.
  Scalar skip_tol = Scalar::zero(bk);
  if (bk == Backend::floating) {
    Scalar t = Scalar(rank_tolerance());  // 2^-(p/2)
    skip_tol = t * t.sqrt() * (Scalar::one(bk) + C.max_abs_coeff());  // ~2^-(3p/4)
  }

  for (int k = 0; k <= top; ++k) {
    StageTrace tr;
    tr.k = k;
    tr.gauge_magnitude = Scalar::zero(bk);
    tr.ode_magnitude = Scalar::zero(bk);
    tr.split_residual = Scalar::zero(bk);
    // Cancel the [delta, g_{k+1}] part by a nilpotent right gauge.
    if (k + 1 <= top && ctx->dim_g(k + 1) > 0) {
      auto coords = degree_coords_jet(*ctx, C, k);
      MatrixJet xj = MatrixJet::zero(n, n, t0, C.order(), bk);
      Scalar mag = Scalar::zero(bk);
      for (int q = 0; q <= C.order(); ++q) {
        auto sp = nspace->split(coords[static_cast<size_t>(q)], k);
        if (sp.residual > tr.split_residual) tr.split_residual = sp.residual;
        if (sp.im_part.is_zero()) continue;
        BlockEndomorphism x = ctx->ad_preimage(k + 1, -sp.im_part);
        xj.coeff(q) = x.dense();
        Scalar v = x.dense().max_abs();
        if (v > mag) mag = v;
      }
      tr.gauge_magnitude = mag;
      if (mag > skip_tol) {
        MatrixJet E = matjet_exp_nilpotent(xj, 2 * M.diagram().p1() + 1);
        gamma = amul(gamma, E);
        C = amul(gamma.inverse(), gamma.derivative());
      }
    }
    // Cancel the stabilizer part at degree zero by the frame rotation ODE.
    if (k == 0) {
      auto coords = degree_coords_jet(*ctx, C, 0);
      MatrixJet U = MatrixJet::zero(n, n, t0, C.order(), bk);
      Scalar mag = Scalar::zero(bk);
      for (int q = 0; q <= C.order(); ++q) {
        auto sp = nspace->split(coords[static_cast<size_t>(q)], 0);
        if (sp.u_part.is_zero()) continue;
        U.coeff(q) = ctx->from_coords(sp.u_part, 0);
        Scalar v = U.coeff(q).max_abs();
        if (v > mag) mag = v;
      }
      tr.ode_magnitude = mag;
      if (mag > skip_tol) {
        auto rhs = [&U](const MatrixJet& A) {
          return -amul(U.truncated(A.order()), A);
        };
        MatrixJet A = jet_ode_solve(rhs, Mat::identity(n, bk), t0, C.order());
        gamma = amul(gamma, A);
        C = amul(gamma.inverse(), gamma.derivative());
      }
    }
    tr.residual_gauge_dim = nspace->u_space().dim(0);
    for (int i = k + 1; i <= top; ++i) tr.residual_gauge_dim += ctx->dim_g(i);
    res.trace.push_back(tr);
  }

  // Extract the normalized data and certify membership.
  Scalar worst = Scalar::zero(bk);
  for (int k = 0; k <= top; ++k) {
    auto coords = degree_coords_jet(*ctx, C, k);
    int dn = nspace->dim_n(k);
    MatrixJet free = MatrixJet::zero(dn, 1, t0, C.order(), bk);
    for (int q = 0; q <= C.order(); ++q) {
      auto sp = nspace->split(coords[static_cast<size_t>(q)], k);
      free.coeff(q) = sp.n_coeffs;
      for (const Scalar& r : {sp.residual, sp.u_part.max_abs(), sp.im_part.max_abs()})
        if (r > worst) worst = r;
    }
    res.n_free[k] = free;
  }
  for (int q = 0; q <= C.order(); ++q) {
    for (int k = -top; k <= -1; ++k) {
      Mat comp = degree_component(M, C.coeff(q), k);
      if (k == -1 && q == 0) comp -= delta_d;
      Scalar v = comp.max_abs();
      if (v > worst) worst = v;
    }
  }
  Scalar final_tol = loosened(scale_tol(C));
  if (worst > final_tol)
    throw StageResidualTooLarge("normalized structure function misses N by " + worst.str());
  res.membership_residual = worst;
  res.gamma = gamma;
  res.C = C;
  res.result_order = C.order();
  return res;
}

CanonicalFrameResult normalize_curve(const CurveSpec& curve, const Mat* fiber_choice) {
  AdaptedLift lift = adapted_lift(curve);
  auto nspace = std::make_shared<NormalizationSpace>(
      *lift.ctx, phi0_assignment(lift.model->diagram()));
  CanonicalFrameResult res =
      normalize_lift(lift.gamma, lift.model, lift.ctx, nspace, fiber_choice);
  res.monotone_sign = lift.monotone_sign;
  return res;
}

std::vector<CurvatureMap> curvature_maps(const CanonicalFrameResult& result) {
  const SymplecticModel& M = *result.model;
  const DoubleDiagram& dd = M.diagram();
  // Support of N: selected free positions and their transpose partners.
  std::set<std::pair<int, int>> support;
  for (const auto& fb : result.nspace->free_blocks()) {
    support.insert({dd.index_of(fb.pos_b), dd.index_of(fb.pos_a)});
    support.insert({dd.index_of(dd.mirror(fb.pos_a)), dd.index_of(dd.mirror(fb.pos_b))});
  }
  Scalar tol = scale_tol(result.C, 64);
  std::vector<CurvatureMap> out;
  for (const Box& b : dd.boxes())
    for (const Box& a : dd.boxes()) {
      MatrixJet blk = result.C.block(M.slot(b), M.slot(a), M.block_size(b), M.block_size(a));
      bool in_support =
          support.count({dd.index_of(b), dd.index_of(a)}) > 0;
      bool nonzero = blk.max_abs_coeff() > tol;
      if (dd.deg(b) - dd.deg(a) == -1) continue;  // the symbol itself
      if (!in_support && !nonzero) continue;
      CurvatureMap cm;
      cm.b = b;
      cm.a = a;
      cm.value = blk;
      cm.in_normalization_space = in_support;
      out.push_back(cm);
    }
  return out;
}

namespace {

std::string block_label(const Box& b, const Box& a) {
  return "(" + std::to_string(b.row) + "," + std::to_string(b.col) + ")x(" +
         std::to_string(a.row) + "," + std::to_string(a.col) + ")";
}

}  // namespace

std::vector<MatrixJet> normalized_block_jets(const NormalizationSpace& nspace,
                                             const std::map<int, MatrixJet>& n_free) {
  const auto& blocks = nspace.free_blocks();
  std::map<int, int> cursor;  // per-degree offset
  std::vector<MatrixJet> out;
  const DoubleDiagram& dd = nspace.ctx().model().diagram();
  for (const auto& fb : blocks) {
    const MatrixJet& free = n_free.at(fb.degree);
    int off = cursor[fb.degree];
    cursor[fb.degree] += fb.param_count;
    // Rebuild the block jet from its parameters.
    int rb = dd.block_size(fb.pos_b), ra = dd.block_size(fb.pos_a);
    MatrixJet blk = MatrixJet::zero(rb, ra, free.t0(), free.order(), free.backend());
    bool symmetric = fb.k_index % 2 == 1;
    int p = 0;
    if (fb.same_row) {
      for (int i = 0; i < rb; ++i)
        for (int j = symmetric ? i : i + 1; j < ra; ++j) {
          Jet v = free.entry(off + p, 0);
          blk.set_entry(i, j, v);
          if (i != j) blk.set_entry(j, i, symmetric ? v : -v);
          ++p;
        }
    } else {
      for (int i = 0; i < rb; ++i)
        for (int j = 0; j < ra; ++j) {
          blk.set_entry(i, j, free.entry(off + p, 0));
          ++p;
        }
    }
    out.push_back(blk);
  }
  return out;
}

namespace {

int first_nonzero_sign(const Jet& j, const Scalar& tol) {
  for (int q = 0; q <= j.order(); ++q) {
    if (j.coeff(q).abs() > tol) return j.coeff(q).sign();
  }
  return 0;
}

}  // namespace

InvariantFingerprint fingerprint_from_data(const NormalizationSpace& nspace,
                                           const std::map<int, MatrixJet>& n_free) {
  InvariantFingerprint fp;
  const auto& blocks = nspace.free_blocks();
  const DoubleDiagram& dd = nspace.ctx().model().diagram();
  bool mult_one = true;
  for (const auto& row : dd.reduced().rows)
    if (row.multiplicity > 1) mult_one = false;
  std::vector<MatrixJet> vals = normalized_block_jets(nspace, n_free);
  Scalar tol = Scalar::zero(Backend::exact);
  if (!vals.empty() && vals[0].backend() == Backend::floating) {
    Scalar scale = Scalar::one(Backend::floating);
    for (const auto& v : vals) scale += v.max_abs_coeff();
    tol = Scalar(rank_tolerance()) * scale;
  }

  if (mult_one) {
    fp.complete = true;
    // Canonical signs for the residual group {±1}^s: pin rows greedily by the
    // first nonzero cross-row block.
    int s = dd.reduced().num_rows();
    std::vector<int> sign(static_cast<size_t>(s) + 1, 0);
    sign[1] = 1;
    for (int pass = 0; pass < s; ++pass)
      for (size_t i = 0; i < blocks.size(); ++i) {
        if (blocks[i].same_row) continue;
        int rb = blocks[i].pos_b.row, ra = blocks[i].pos_a.row;
        int known = sign[static_cast<size_t>(rb)] ? rb : (sign[static_cast<size_t>(ra)] ? ra : 0);
        int unknown = known == rb ? ra : rb;
        if (!known || sign[static_cast<size_t>(unknown)]) continue;
        int c = first_nonzero_sign(vals[i].entry(0, 0), tol);
        if (c == 0) continue;
        sign[static_cast<size_t>(unknown)] = sign[static_cast<size_t>(known)] * c;
      }
    for (size_t r = 1; r < sign.size(); ++r)
      if (!sign[r]) sign[r] = 1;
    for (size_t i = 0; i < blocks.size(); ++i) {
      Jet v = vals[i].entry(0, 0);
      int s2 = sign[static_cast<size_t>(blocks[i].pos_b.row)] *
               sign[static_cast<size_t>(blocks[i].pos_a.row)];
      if (s2 < 0) v = -v;
      fp.entries.emplace_back(block_label(blocks[i].pos_b, blocks[i].pos_a), v);
    }
  } else {
    fp.complete = false;
    // Orthogonal-conjugation invariants: traces of short words.
    for (size_t i = 0; i < blocks.size(); ++i) {
      const MatrixJet& B = vals[i];
      if (B.rows() == B.cols() && blocks[i].same_row) {
        MatrixJet tr = MatrixJet::zero(1, 1, B.t0(), B.order(), B.backend());
        for (int d = 0; d < B.rows(); ++d)
          tr.set_entry(0, 0, tr.entry(0, 0) + B.entry(d, d));
        fp.entries.emplace_back("tr " + block_label(blocks[i].pos_b, blocks[i].pos_a),
                                tr.entry(0, 0));
      }
      MatrixJet BtB = amul(B.transpose(), B);
      Jet t2 = BtB.entry(0, 0);
      for (int d = 1; d < BtB.rows(); ++d) {
        Jet e = BtB.entry(d, d);
        align(t2, e);
        t2 = t2 + e;
      }
      fp.entries.emplace_back("tr^t " + block_label(blocks[i].pos_b, blocks[i].pos_a), t2);
      MatrixJet Q2 = amul(BtB, BtB);
      Jet t4 = Q2.entry(0, 0);
      for (int d = 1; d < Q2.rows(); ++d) {
        Jet e = Q2.entry(d, d);
        align(t4, e);
        t4 = t4 + e;
      }
      fp.entries.emplace_back("tr^t2 " + block_label(blocks[i].pos_b, blocks[i].pos_a), t4);
      // Cross pairings of blocks sharing the same row pair.
      for (size_t j2 = i + 1; j2 < blocks.size(); ++j2) {
        if (blocks[j2].pos_b.row != blocks[i].pos_b.row ||
            blocks[j2].pos_a.row != blocks[i].pos_a.row)
          continue;
        MatrixJet C2 = amul(B.transpose(), vals[j2]);
        Jet tc = C2.entry(0, 0);
        for (int d = 1; d < C2.rows(); ++d) {
          Jet e = C2.entry(d, d);
          align(tc, e);
          tc = tc + e;
        }
        fp.entries.emplace_back("tr^t " + block_label(blocks[i].pos_b, blocks[i].pos_a) +
                                    "*" + block_label(blocks[j2].pos_b, blocks[j2].pos_a),
                                tc);
      }
    }
  }
  return fp;
}

InvariantFingerprint invariant_fingerprint(const CanonicalFrameResult& result) {
  return fingerprint_from_data(*result.nspace, result.n_free);
}

namespace {

// Relative per-coefficient deviation: deep normalizations lose accuracy in
// proportion to the coefficient magnitudes, so the decision scale must too.
Scalar jet_distance(const Jet& a0, const Jet& b0) {
  Jet a = a0.backend() == Backend::exact ? a0.to_float() : a0;
  Jet b = b0.backend() == Backend::exact ? b0.to_float() : b0;
  int K = std::min(a.order(), b.order());
  Scalar d = Scalar::zero(Backend::floating);
  Scalar one = Scalar::one(Backend::floating);
  for (int q = 0; q <= K; ++q) {
    Scalar v = (a.coeff(q) - b.coeff(q)).abs() /
               (one + a.coeff(q).abs() + b.coeff(q).abs());
    if (v > d) d = v;
  }
  return d;
}

}  // namespace

EquivalenceResult equivalence_test(const CurveSpec& c1, const CurveSpec& c2) {
  EquivalenceResult out{EquivalenceVerdict::undecided_partial, "", Scalar::exact(0)};
  CanonicalFrameResult r1 = normalize_curve(c1);
  CanonicalFrameResult r2 = normalize_curve(c2);
  if (!(r1.model->diagram().reduced() == r2.model->diagram().reduced())) {
    out.verdict = EquivalenceVerdict::inequivalent;
    out.detail = "Young diagrams differ: " + r1.model->diagram().reduced().str() + " vs " +
                 r2.model->diagram().reduced().str();
    return out;
  }
  if (r1.monotone_sign != r2.monotone_sign) {
    out.verdict = EquivalenceVerdict::inequivalent;
    out.detail = "monotonicity signs differ";
    return out;
  }
  const DoubleDiagram& dd = r1.model->diagram();
  bool mult_one = true;
  for (const auto& row : dd.reduced().rows)
    if (row.multiplicity > 1) mult_one = false;

  // Decision scale: relative errors grow like (coefficient growth)^order under
  // fixed precision, so the threshold stays far below genuine differences
  // (~1e-1 relative) and far above the conditioning noise of bounded
  // transforms (~1e-14 at the default precision and depth).
  Scalar eq_tol = Scalar(mp::pow(FloatMP(2), -static_cast<int>(float_precision_bits() / 6)));

  if (mult_one) {
    const auto& blocks = r1.nspace->free_blocks();
    std::vector<MatrixJet> v1 = normalized_block_jets(*r1.nspace, r1.n_free);
    std::vector<MatrixJet> v2 = normalized_block_jets(*r2.nspace, r2.n_free);
    int s = dd.reduced().num_rows();
    Scalar best = Scalar::zero(Backend::floating);
    bool have_best = false;
    for (unsigned mask = 0; mask < (1u << s); ++mask) {
      Scalar worst = Scalar::zero(Backend::floating);
      for (size_t i = 0; i < blocks.size(); ++i) {
        int sb = (mask >> (blocks[i].pos_b.row - 1)) & 1 ? -1 : 1;
        int sa = (mask >> (blocks[i].pos_a.row - 1)) & 1 ? -1 : 1;
        Jet a = v2[i].entry(0, 0);
        if (sb * sa < 0) a = -a;
        Scalar d = jet_distance(v1[i].entry(0, 0), a);
        if (d > worst) worst = d;
      }
      if (!have_best || worst < best) {
        best = worst;
        have_best = true;
      }
    }
    out.distance = best;
    if (!have_best || best <= eq_tol) {
      out.verdict = EquivalenceVerdict::equivalent;
      out.detail = "normalized structure functions agree up to the residual sign group";
    } else {
      out.verdict = EquivalenceVerdict::inequivalent;
      out.detail = "normalized structure functions differ by " + best.str();
    }
    return out;
  }

  InvariantFingerprint f1 = invariant_fingerprint(r1);
  InvariantFingerprint f2 = invariant_fingerprint(r2);
  Scalar worst = Scalar::zero(Backend::floating);
  for (size_t i = 0; i < f1.entries.size() && i < f2.entries.size(); ++i) {
    Scalar d = jet_distance(f1.entries[i].second, f2.entries[i].second);
    if (d > worst) worst = d;
  }
  out.distance = worst;
  if (worst > eq_tol) {
    out.verdict = EquivalenceVerdict::inequivalent;
    out.detail = "trace invariants differ by " + worst.str();
  } else {
    out.verdict = EquivalenceVerdict::undecided_partial;
    out.detail = "partial trace invariants agree; completeness is not claimed for "
                 "multiplicities above one";
  }
  return out;
}

MatrixJet reconstruct_jet(const MatrixJet& C, const Mat& initial) {
  auto rhs = [&C](const MatrixJet& A) { return amul(A, C.truncated(A.order())); };
  return jet_ode_solve(rhs, initial, C.t0(), C.order() + 1);
}

SampledFrame reconstruct_sampled(const MatrixJet& C0, const Mat& initial, const Mat& J,
                                 const Scalar& t_end, int steps, double defect_budget) {
  SampledFrame out;
  const Backend bk = Backend::floating;
  MatrixJet C = C0.to_float();
  Scalar t = C.t0();
  Scalar h = (t_end.to_backend(bk) - t) / Scalar::exact(steps).to_backend(bk);
  Mat G = initial.to_backend(bk);
  Scalar budget = Scalar(FloatMP(defect_budget));
  out.max_symplectic_defect = Scalar::zero(bk);
  auto f = [&](const Scalar& tt, const Mat& g) { return g * C.evaluate(tt); };
  out.times.push_back(t);
  out.frames.push_back(G);
  Scalar half = Scalar(1, 2).to_backend(bk);
  Scalar sixth = Scalar(1, 6).to_backend(bk);
  Scalar two = Scalar::exact(2).to_backend(bk);
  for (int i = 0; i < steps; ++i) {
    Mat k1 = f(t, G);
    Mat k2 = f(t + h * half, G + k1.scaled(h * half));
    Mat k3 = f(t + h * half, G + k2.scaled(h * half));
    Mat k4 = f(t + h, G + k3.scaled(h));
    G = G + (k1 + k2.scaled(two) + k3.scaled(two) + k4).scaled(h * sixth);
    t = t + h;
    Mat defect = G.transpose() * J.to_backend(bk) * G - J.to_backend(bk);
    Scalar d = defect.max_abs();
    if (d > out.max_symplectic_defect) out.max_symplectic_defect = d;
    if (d > budget)
      throw StepSizeTooLarge("symplectic defect " + d.str() + " exceeds the budget");
    out.times.push_back(t);
    out.frames.push_back(G);
  }
  return out;
}

int recommended_jet_order(const ReducedDiagram& red, int poly_degree) {
  int p1 = red.p1();
  return std::max(2 * p1 + 4 + poly_degree, 7 * p1 + 3 + poly_degree);
}

namespace {

GeneratedCurve generate(const ReducedDiagram& red, int jet_order, int poly_degree,
                        Rng* rng) {
  GeneratedCurve g;
  g.model = std::make_shared<SymplecticModel>(build_double_diagram(red));
  g.ctx = std::make_shared<GradedContext>(*g.model);
  g.nspace = std::make_shared<NormalizationSpace>(*g.ctx,
                                                  phi0_assignment(g.model->diagram()));
  const int K = jet_order > 0 ? jet_order : recommended_jet_order(red, poly_degree);
  const int n = g.model->dim();
  const Scalar t0 = Scalar::exact(0);

  MatrixJet C = MatrixJet::constant(g.ctx->delta().dense(), t0, K - 1);
  for (int k = 0; k <= g.ctx->top_degree(); ++k) {
    int dn = g.nspace->dim_n(k);
    MatrixJet free = MatrixJet::zero(dn, 1, t0, K - 1, Backend::exact);
    if (rng && dn)
      for (int i = 0; i < dn; ++i)
        for (int q = 0; q <= std::min(poly_degree, K - 1); ++q)
          free.coeff(q).at(i, 0) = rng->rational(4, 3);
    g.n_free[k] = free;
    if (dn)
      for (int q = 0; q <= K - 1; ++q)
        C.coeff(q) += g.nspace->n_from_coeffs(free.coeff(q), k);
  }
  MatrixJet gamma = reconstruct_jet(C, Mat::identity(n));
  g.curve = curve_from_model_lift(*g.model, gamma, "generated " + red.str());
  return g;
}

}  // namespace

GeneratedCurve random_curve(const ReducedDiagram& red, std::uint64_t seed, int poly_degree,
                            int jet_order) {
  Rng rng(seed);
  return generate(red, jet_order, poly_degree, &rng);
}

GeneratedCurve flat_curve(const ReducedDiagram& red, int jet_order) {
  return generate(red, jet_order, 0, nullptr);
}

}  // namespace symcurve
