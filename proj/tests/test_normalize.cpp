#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "symcurve/io.hpp"

using namespace symcurve;

namespace {

struct PrecisionGuard {
  PrecisionGuard() { set_float_precision_bits(192); }
} guard;

Scalar tol30() { return Scalar(mp::pow(FloatMP(10), -30)); }
Scalar tol40() { return Scalar(mp::pow(FloatMP(10), -40)); }

// Largest deviation between drawn and recovered free data over the sign orbit.
Scalar best_recovery_error(const GeneratedCurve& g, const CanonicalFrameResult& res) {
  const auto& blocks = res.nspace->free_blocks();
  int s = res.model->diagram().reduced().num_rows();
  std::vector<MatrixJet> drawn = normalized_block_jets(*g.nspace, g.n_free);
  std::vector<MatrixJet> rec = normalized_block_jets(*res.nspace, res.n_free);
  Scalar best = Scalar::zero(Backend::floating);
  bool have = false;
  for (unsigned mask = 0; mask < (1u << s); ++mask) {
    Scalar worst = Scalar::zero(Backend::floating);
    for (size_t i = 0; i < blocks.size(); ++i) {
      int sb = (mask >> (blocks[i].pos_b.row - 1)) & 1 ? -1 : 1;
      int sa = (mask >> (blocks[i].pos_a.row - 1)) & 1 ? -1 : 1;
      int K = std::min(drawn[i].order(), rec[i].order());
      for (int q = 0; q <= K; ++q)
        for (int r = 0; r < drawn[i].rows(); ++r)
          for (int c = 0; c < drawn[i].cols(); ++c) {
            Scalar d = drawn[i].coeff(q).at(r, c).to_float();
            Scalar v = rec[i].coeff(q).at(r, c);
            if (sb * sa < 0) v = -v;
            Scalar e = (d - v).abs();
            if (e > worst) worst = e;
          }
    }
    if (!have || worst < best) {
      best = worst;
      have = true;
    }
  }
  return best;
}

}  // namespace

TEST_CASE("structure functions of simple lifts") {
  SymplecticModel model(build_double_diagram(reduce_diagram(YoungDiagram::from_rows({1}))));
  GradedContext ctx(model);

  // constant lift: zero structure function
  MatrixJet G = MatrixJet::constant(Mat::identity(2), Scalar::exact(0), 6);
  CHECK(structure_function(G, model).C.is_zero());

  // exponential of a constant algebra element: the element itself
  Rng rng(3);
  BlockEndomorphism X = ctx.random_gk(1, rng);
  MatrixJet xj = MatrixJet::zero(2, 2, Scalar::exact(0), 6, Backend::exact);
  for (int q = 0; q <= 6; ++q)
    if (q == 1) xj.coeff(q) = X.dense();
  // exp(tX) via the ode solver
  auto rhs = [&X](const MatrixJet& A) {
    return A * MatrixJet::constant(X.dense(), A.t0(), A.order());
  };
  MatrixJet exptX = jet_ode_solve(rhs, Mat::identity(2), Scalar::exact(0), 6);
  MatrixJet C = structure_function(exptX, model).C;
  MatrixJet expect = MatrixJet::constant(X.dense(), Scalar::exact(0), C.order());
  CHECK((C - expect).is_zero());

  // left translation by a constant group element leaves it unchanged, bit-exactly
  Mat A = random_symplectic(model, rng);
  MatrixJet AG = MatrixJet::constant(A, Scalar::exact(0), 6) * exptX;
  MatrixJet C2 = structure_function(AG, model).C;
  for (int q = 0; q <= C.order(); ++q) CHECK(C2.coeff(q) == C.coeff(q));

  CHECK_THROWS_AS(structure_function(
                      MatrixJet::zero(2, 2, Scalar::exact(0), 4, Backend::exact), model),
                  NonInvertibleJet);
}

TEST_CASE("flat curves normalize to the bare symbol") {
  for (auto rows : std::vector<std::vector<int>>{{1}, {2}, {1, 1}, {2, 1}}) {
    ReducedDiagram red = reduce_diagram(YoungDiagram::from_rows(rows));
    auto g = flat_curve(red);
    CanonicalFrameResult res = normalize_curve(g.curve);
    Scalar worst = Scalar::zero(Backend::floating);
    for (const auto& [k, jet] : res.n_free) {
      if (!jet.rows()) continue;
      Scalar v = jet.max_abs_coeff();
      if (v > worst) worst = v;
    }
    CHECK(worst < tol40());
    // gauge trace: residual dimensions decrease to dim u_0
    GradedContext& ctx = *res.ctx;
    int top = ctx.top_degree();
    for (const auto& st : res.trace) {
      int expect = res.nspace->u_space().dim(0);
      for (int i = st.k + 1; i <= top; ++i) expect += ctx.dim_g(i);
      CHECK(st.residual_gauge_dim == expect);
    }
    CHECK(res.trace.back().residual_gauge_dim == res.nspace->u_space().dim(0));
  }
}

TEST_CASE("generator roundtrip recovers the drawn data") {
  for (auto rows : std::vector<std::vector<int>>{{1}, {2}, {3}, {2, 1}}) {
    ReducedDiagram red = reduce_diagram(YoungDiagram::from_rows(rows));
    for (std::uint64_t seed : {5u, 6u}) {
      auto g = random_curve(red, seed, 2);
      CanonicalFrameResult res = normalize_curve(g.curve);
      CHECK(best_recovery_error(g, res) < tol30());
    }
  }
}

TEST_CASE("normalization is deterministic and gauge-independent") {
  ReducedDiagram red = reduce_diagram(YoungDiagram::from_rows({2}));
  auto g = random_curve(red, 12, 1);
  CanonicalFrameResult a = normalize_curve(g.curve);
  CanonicalFrameResult b = normalize_curve(g.curve);
  for (int q = 0; q <= std::min(a.C.order(), b.C.order()); ++q)
    CHECK((a.C.coeff(q) - b.C.coeff(q)).is_zero());

  // Feeding a randomly gauged exact lift recovers the same normalized data.
  auto model = g.model;
  auto ctx = g.ctx;
  auto nspace = g.nspace;
  MatrixJet C0 = MatrixJet::constant(ctx->delta().dense(), Scalar::exact(0), 14);
  for (int k = 0; k <= ctx->top_degree(); ++k) {
    if (!nspace->dim_n(k)) continue;
    const MatrixJet& free = g.n_free.at(k);
    for (int q = 0; q <= std::min(14, free.order()); ++q)
      C0.coeff(q) += nspace->n_from_coeffs(free.coeff(q), k);
  }
  MatrixJet gamma0 = reconstruct_jet(C0, Mat::identity(model->dim()));
  // gauge by a nilpotent jet and a constant stabilizer rotation
  Rng rng(77);
  MatrixJet xj = MatrixJet::zero(model->dim(), model->dim(), Scalar::exact(0),
                                 gamma0.order(), Backend::exact);
  for (int q = 0; q <= xj.order(); ++q) {
    BlockEndomorphism x = ctx->random_gk(1, rng);
    xj.coeff(q) = x.dense().scaled(Scalar(1, 3));
  }
  MatrixJet gauged = gamma0 * matjet_exp_nilpotent(xj, 2 * red.p1() + 1);
  CanonicalFrameResult direct = normalize_lift(gamma0, model, ctx, nspace);
  CanonicalFrameResult via = normalize_lift(gauged, model, ctx, nspace);
  int K = std::min(direct.C.order(), via.C.order());
  for (int q = 0; q <= K; ++q) CHECK((direct.C.coeff(q) - via.C.coeff(q)).is_zero());
  CHECK(direct.membership_residual.is_zero());

  // stage monotonicity: low-degree parts are settled once and never move
  for (const auto& [k, jet] : direct.n_free) {
    const MatrixJet& drawn = g.n_free.at(k);
    int KK = std::min(jet.order(), drawn.order());
    for (int q = 0; q <= KK; ++q) CHECK((jet.coeff(q) - drawn.coeff(q)).is_zero());
  }
}

TEST_CASE("curvature maps") {
  // flat: everything vanishes
  auto flat = flat_curve(reduce_diagram(YoungDiagram::from_rows({2})));
  auto res = normalize_curve(flat.curve);
  for (const auto& cm : curvature_maps(res))
    CHECK(cm.value.max_abs_coeff() < tol40());

  // oscillator span{f + tan(t) e}: single curvature, constant -1 under the
  // printed pairing conventions (value frozen from the sympy oracle
  // tools/oracles/sp2_oscillator_oracle.py).
  int K = 9;
  Jet tanj = Jet::variable(Scalar::exact(0), K);
  for (int it = 0; it < K; ++it)
    tanj = (Jet::constant(Scalar::exact(1), Scalar::exact(0), K) + tanj * tanj)
               .antiderivative()
               .truncated(K);
  MatrixJet f = MatrixJet::zero(2, 1, Scalar::exact(0), K, Backend::exact);
  f.set_entry(0, 0, tanj);
  f.set_entry(1, 0, Jet::constant(Scalar::exact(1), Scalar::exact(0), K));
  auto osc = normalize_curve(CurveSpec{1, f, "oscillator"});
  CHECK(osc.monotone_sign == 1);
  auto maps = curvature_maps(osc);
  int nonzero = 0;
  for (const auto& cm : maps) {
    if (cm.value.max_abs_coeff() < tol30()) continue;
    ++nonzero;
    CHECK(cm.b == Box{1, -1});
    CHECK(cm.a == Box{1, 1});
    Jet v = cm.value.entry(0, 0);
    CHECK((v.coeff(0) - Scalar::exact(-1).to_float()).abs() < tol30());
    for (int q = 1; q <= v.order(); ++q) CHECK(v.coeff(q).abs() < tol30());
  }
  CHECK(nonzero == 1);

  // rank-1 generated curve on one row p = 2: exactly the two scalar jets
  auto g = random_curve(reduce_diagram(YoungDiagram::from_rows({2})), 9, 1);
  auto r2 = normalize_curve(g.curve);
  int live = 0;
  for (const auto& cm : curvature_maps(r2))
    if (cm.value.max_abs_coeff() > tol30()) {
      ++live;
      CHECK(cm.in_normalization_space);
    }
  CHECK(live == 2);
}

TEST_CASE("fingerprints") {
  // flat: zero fingerprint
  auto flat = flat_curve(reduce_diagram(YoungDiagram::from_rows({2, 1})));
  auto res = normalize_curve(flat.curve);
  for (const auto& [label, jet] : invariant_fingerprint(res).entries)
    CHECK(jet.max_abs_coeff() < tol40());

  // the two normal frames of a rank-1 curve give the same fingerprint
  auto g = random_curve(reduce_diagram(YoungDiagram::from_rows({3})), 14, 1);
  AdaptedLift lift = adapted_lift(g.curve);
  auto ns = std::make_shared<NormalizationSpace>(*lift.ctx,
                                                 phi0_assignment(lift.model->diagram()));
  Mat plus = Mat::identity(lift.model->dim(), Backend::floating);
  Mat minus = plus.scaled(Scalar::exact(-1).to_float());
  auto r_plus = normalize_lift(lift.gamma, lift.model, lift.ctx, ns, &plus);
  auto r_minus = normalize_lift(lift.gamma, lift.model, lift.ctx, ns, &minus);
  auto f_plus = invariant_fingerprint(r_plus);
  auto f_minus = invariant_fingerprint(r_minus);
  REQUIRE(f_plus.entries.size() == f_minus.entries.size());
  for (size_t i = 0; i < f_plus.entries.size(); ++i) {
    const Jet& a = f_plus.entries[i].second;
    const Jet& b = f_minus.entries[i].second;
    int KK = std::min(a.order(), b.order());
    for (int q = 0; q <= KK; ++q) CHECK((a.coeff(q) - b.coeff(q)).abs() < tol30());
  }
  CHECK(f_plus.complete);

  // multiplicity two: trace invariants are unchanged by a residual rotation
  auto g2 = random_curve(reduce_diagram(YoungDiagram::from_rows({1, 1})), 15, 1);
  AdaptedLift lift2 = adapted_lift(g2.curve);
  auto ns2 = std::make_shared<NormalizationSpace>(*lift2.ctx,
                                                  phi0_assignment(lift2.model->diagram()));
  Rng rng(19);
  Mat U = random_residual_element(*lift2.model, rng).to_float();
  auto r_id = normalize_lift(lift2.gamma, lift2.model, lift2.ctx, ns2);
  auto r_rot = normalize_lift(lift2.gamma, lift2.model, lift2.ctx, ns2, &U);
  auto f_id = invariant_fingerprint(r_id);
  auto f_rot = invariant_fingerprint(r_rot);
  CHECK_FALSE(f_id.complete);
  REQUIRE(f_id.entries.size() == f_rot.entries.size());
  for (size_t i = 0; i < f_id.entries.size(); ++i) {
    const Jet& a = f_id.entries[i].second;
    const Jet& b = f_rot.entries[i].second;
    int KK = std::min(a.order(), b.order());
    for (int q = 0; q <= KK; ++q) CHECK((a.coeff(q) - b.coeff(q)).abs() < tol30());
  }
}

TEST_CASE("equivalence decisions") {
  ReducedDiagram red = reduce_diagram(YoungDiagram::from_rows({2}));
  auto g = random_curve(red, 31, 1);

  auto self = equivalence_test(g.curve, g.curve);
  CHECK(self.verdict == EquivalenceVerdict::equivalent);

  Rng rng(37);
  Mat A = random_symplectic_standard(g.curve.m, rng);
  MatrixJet tf = MatrixJet::constant(A, g.curve.t0(), g.curve.jet_order()) * g.curve.frame;
  auto moved = equivalence_test(g.curve, CurveSpec{g.curve.m, tf, ""});
  CHECK(moved.verdict == EquivalenceVerdict::equivalent);

  // flat vs perturbed flat: first coefficient of the fingerprint differs
  auto flat = flat_curve(red);
  auto pert = random_curve(red, 41, 1);
  auto diff = equivalence_test(flat.curve, pert.curve);
  CHECK(diff.verdict == EquivalenceVerdict::inequivalent);

  // diagram mismatch short-circuits
  auto other = flat_curve(reduce_diagram(YoungDiagram::from_rows({1, 1})));
  auto mism = equivalence_test(flat.curve, other.curve);
  CHECK(mism.verdict == EquivalenceVerdict::inequivalent);

  // multiplicities above one only claim partial verdicts on agreement
  auto m1 = random_curve(reduce_diagram(YoungDiagram::from_rows({1, 1})), 43, 1);
  auto partial = equivalence_test(m1.curve, m1.curve);
  CHECK(partial.verdict == EquivalenceVerdict::undecided_partial);
}

TEST_CASE("reconstruction") {
  SymplecticModel model(build_double_diagram(reduce_diagram(YoungDiagram::from_rows({2}))));
  GradedContext ctx(model);

  // constant symbol: polynomial exponential, exact
  MatrixJet C = MatrixJet::constant(ctx.delta().dense(), Scalar::exact(0), 8);
  MatrixJet G = reconstruct_jet(C, Mat::identity(4));
  MatrixJet xt = MatrixJet::zero(4, 4, Scalar::exact(0), 9, Backend::exact);
  xt.coeff(1) = ctx.delta().dense();
  MatrixJet expect = matjet_exp_nilpotent(xt, 5);
  for (int q = 0; q <= 9; ++q) CHECK(G.coeff(q) == expect.coeff(q));

  // zero: constant frame
  MatrixJet Z = MatrixJet::zero(4, 4, Scalar::exact(0), 6, Backend::exact);
  MatrixJet Gz = reconstruct_jet(Z, Mat::identity(4));
  CHECK(Gz.coeff(0) == Mat::identity(4));
  for (int q = 1; q <= 7; ++q) CHECK(Gz.coeff(q).is_zero());

  // jet roundtrip is exact on rationals
  auto g = random_curve(model.diagram().reduced(), 23, 2);
  MatrixJet C2 = MatrixJet::constant(ctx.delta().dense(), Scalar::exact(0), 10);
  for (int k = 0; k <= ctx.top_degree(); ++k)
    if (g.nspace->dim_n(k))
      for (int q = 0; q <= std::min(10, g.n_free.at(k).order()); ++q)
        C2.coeff(q) += g.nspace->n_from_coeffs(g.n_free.at(k).coeff(q), k);
  MatrixJet G2 = reconstruct_jet(C2, Mat::identity(4));
  MatrixJet back = structure_function(G2, model).C;
  for (int q = 0; q <= back.order(); ++q) CHECK(back.coeff(q) == C2.coeff(q));

  // sampled mode tracks the symplectic pairing within budget
  auto sampled = reconstruct_sampled(C.to_float(), Mat::identity(4, Backend::floating),
                                     model.J(), Scalar(1, 2), 32, 1e-6);
  CHECK(sampled.frames.size() == 33);
  CHECK(sampled.max_symplectic_defect.to_double() < 1e-6);
}

TEST_CASE("generated curves carry their diagram") {
  Rng seeds(1);
  for (auto rows : std::vector<std::vector<int>>{{2}, {1, 1}, {2, 1}}) {
    ReducedDiagram red = reduce_diagram(YoungDiagram::from_rows(rows));
    auto g = random_curve(red, 55, 1);
    std::vector<Scalar> samples = {Scalar(1, 8), Scalar(-1, 9)};
    RegularityReport rep = regularity_report(g.curve, samples);
    CHECK(reduce_diagram(rep.young_diagram) == red);
    CHECK(rep.monotone == Monotone::nonincreasing);
    CHECK(rep.equiregular);
    CHECK(rep.ample);
  }

  // distinct seeds: fingerprints differ (reported, not asserted in general)
  ReducedDiagram red = reduce_diagram(YoungDiagram::from_rows({2}));
  auto a = random_curve(red, 100, 1);
  auto b = random_curve(red, 101, 1);
  auto eq = equivalence_test(a.curve, b.curve);
  CHECK(eq.verdict == EquivalenceVerdict::inequivalent);
}
