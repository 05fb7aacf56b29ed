#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "symcurve/graded.hpp"

using namespace symcurve;

namespace {

struct Setup {
  SymplecticModel model;
  GradedContext ctx;
  explicit Setup(std::vector<int> rows)
      : model(build_double_diagram(reduce_diagram(YoungDiagram::from_rows(rows)))),
        ctx(model) {}
};

BlockEndomorphism random_g1plus(GradedContext& ctx, Rng& rng) {
  BlockEndomorphism x = BlockEndomorphism::zero(&ctx.model());
  for (int k = 1; k <= ctx.top_degree(); ++k) x = x + ctx.random_gk(k, rng);
  return x;
}

}  // namespace

TEST_CASE("blockwise commutator formula matches the dense bracket") {
  Setup one({1});
  CHECK(bracket_blocks(one.ctx.delta(), one.ctx.delta()).dense().is_zero());

  BlockEndomorphism h = BlockEndomorphism::zero(&one.model);
  h.dense().at(0, 0) = Scalar::exact(2);
  h.dense().at(1, 1) = Scalar::exact(-2);
  BlockEndomorphism y = bracket_blocks(one.ctx.delta(), h);
  CHECK(y.dense() == bracket(one.ctx.delta(), h).dense());
  CHECK(y.block(Box{1, 1}, Box{1, -1}).at(0, 0) == Scalar::exact(4));

  Setup s({2, 1});
  Rng rng(31);
  for (int t = 0; t < 25; ++t) {
    BlockEndomorphism x = BlockEndomorphism::zero(&s.model);
    for (int k = -s.ctx.top_degree(); k <= s.ctx.top_degree(); ++k)
      x = x + s.ctx.random_gk(k, rng);
    CHECK(bracket_blocks(s.ctx.delta(), x).dense() ==
          bracket(s.ctx.delta(), x).dense());
  }

  Setup other({3});
  CHECK_THROWS_AS(bracket_blocks(other.ctx.delta(), h), ModelMismatch);
}

TEST_CASE("prolongation dimensions against the closed form") {
  Setup rank1({4});
  CHECK(prolongation(rank1.ctx).u.total_dim() == 0);

  Setup regular({1, 1, 1});
  CHECK(prolongation(regular.ctx).u.total_dim() == 3);

  Setup mixed({3, 3, 1});
  CHECK(prolongation(mixed.ctx).u.total_dim() == 1);

  for (const auto& red : all_reduced_diagrams(7)) {
    SymplecticModel m(build_double_diagram(red));
    GradedContext ctx(m);
    Prolongation p = prolongation(ctx);
    int expected = 0;
    for (const auto& r : red.rows) expected += r.multiplicity * (r.multiplicity - 1) / 2;
    CHECK(p.u.total_dim() == expected);
    CHECK(p.u.dim(0) == expected);
    CHECK(p.closed_form_ok);
  }
}

TEST_CASE("unparametrized prolongation gains exactly a three-dimensional quotient") {
  Setup one({1});
  GradedSubspace ut = unparametrized_prolongation(one.ctx);
  CHECK(ut.dim(-1) == 1);
  CHECK(ut.total_dim() == 3);

  for (const auto& red : all_reduced_diagrams(7)) {
    SymplecticModel m(build_double_diagram(red));
    GradedContext ctx(m);
    CHECK(unparametrized_prolongation(ctx).total_dim() -
              prolongation(ctx).u.total_dim() ==
          3);
  }
}

TEST_CASE("flat-curve symmetry membership") {
  Setup s({1, 1});
  Prolongation p = prolongation(s.ctx);
  const Mat& U0 = p.u.coords.at(0);
  for (int j = 0; j < U0.cols(); ++j) {
    BlockEndomorphism y(&s.model, s.ctx.from_coords(U0.col(j), 0));
    CHECK(flat_symmetry_check(y, s.ctx));
  }
  CHECK_FALSE(flat_symmetry_check(s.ctx.delta(), s.ctx));

  // elements of positive degree outside the prolongation fail
  Setup r1({3});
  Rng rng(41);
  for (int t = 0; t < 10; ++t) {
    BlockEndomorphism y = r1.ctx.random_gk(1, rng);
    if (y.dense().is_zero()) continue;
    CHECK_FALSE(flat_symmetry_check(y, r1.ctx));  // u_1 = 0 on rank-1 diagrams
  }
}

TEST_CASE("chain sums of the coboundary operator") {
  Setup s({2});
  BlockEndomorphism Y = BlockEndomorphism::zero(&s.model);
  Mat three(1, 1);
  three.at(0, 0) = Scalar::exact(3);
  Y.set_block(Box{1, 1}, Box{1, 2}, three);
  CHECK(d_operator(Y, Box{1, 1}, Box{1, 2}).at(0, 0) == Scalar::exact(3));

  Y.set_block(Box{1, -1}, Box{1, 1}, three);
  CHECK(d_operator(Y, Box{1, 1}, Box{1, 2}).at(0, 0) == Scalar::exact(0));

  CHECK_THROWS_AS(d_operator(Y, Box{1, 5}, Box{1, 2}), BoxOutOfRange);

  // coboundaries annihilate every last-box chain sum
  Rng rng(53);
  for (const auto& red : all_reduced_diagrams(6)) {
    SymplecticModel m(build_double_diagram(red));
    GradedContext ctx(m);
    const DoubleDiagram& dd = m.diagram();
    for (int t = 0; t < 5; ++t) {
      BlockEndomorphism X = random_g1plus(ctx, rng);
      BlockEndomorphism Yb = bracket(ctx.delta(), X);
      for (int i = 1; i <= red.num_rows(); ++i) {
        Box rho = dd.last_box(i);
        for (const Box& b : dd.boxes()) {
          if (b.row < i) continue;
          CHECK(d_operator(Yb, b, rho).is_zero());
        }
      }
    }
  }
}

TEST_CASE("coboundary membership with preimage reconstruction") {
  Rng rng(67);
  for (const auto& red : all_reduced_diagrams(6)) {
    SymplecticModel m(build_double_diagram(red));
    GradedContext ctx(m);
    // roundtrips
    for (int t = 0; t < 5; ++t) {
      BlockEndomorphism X = random_g1plus(ctx, rng);
      BlockEndomorphism Y = bracket(ctx.delta(), X);
      auto cert = coboundary_test(Y, ctx);
      REQUIRE(cert.member);
      CHECK((bracket(ctx.delta(), cert.X) - Y).dense().is_zero());
    }
    // zero input
    auto zero = coboundary_test(BlockEndomorphism::zero(&m), ctx);
    CHECK(zero.member);
    CHECK(zero.X.dense().is_zero());
    // nonzero normalized elements are never coboundaries
    NormalizationSpace N(ctx, phi0_assignment(m.diagram()));
    for (int k = 0; k <= ctx.top_degree(); ++k) {
      const Mat& Nk = N.n_space().coords.at(k);
      for (int j = 0; j < Nk.cols(); ++j) {
        BlockEndomorphism y(&m, ctx.from_coords(Nk.col(j), k));
        auto cert = coboundary_test(y, ctx);
        CHECK_FALSE(cert.member);
        CHECK_FALSE(cert.witness_value.is_zero());
      }
    }
  }
}

TEST_CASE("parity of the chain sums") {
  Rng rng(71);
  for (const auto& red : all_reduced_diagrams(6)) {
    SymplecticModel m(build_double_diagram(red));
    GradedContext ctx(m);
    const DoubleDiagram& dd = m.diagram();
    for (int t = 0; t < 10; ++t) {
      BlockEndomorphism Y = ctx.random_g0plus(rng);
      for (int i = 1; i <= red.num_rows(); ++i) {
        Box rho = dd.last_box(i);
        for (const Box& b : dd.boxes()) {
          if (b.row != i || b == rho) continue;
          Mat D = d_operator(Y, b, rho);
          if (dd.left_index(b) % 2 == 1)
            CHECK(D == D.transpose());
          else
            CHECK(D == -D.transpose());
        }
      }
    }
  }
}

TEST_CASE("normalization space dimensions") {
  Setup one({1});
  NormalizationSpace n1(one.ctx, phi0_assignment(one.model.diagram()));
  CHECK(n1.dim_n(0) == 0);
  CHECK(n1.dim_n(1) == 1);
  CHECK(n1.n_space().total_dim() == 1);
  REQUIRE(n1.free_blocks().size() == 1);
  CHECK(n1.free_blocks()[0].pos_b == Box{1, -1});
  CHECK(n1.free_blocks()[0].pos_a == Box{1, 1});

  Setup two({2});
  NormalizationSpace n2(two.ctx, phi0_assignment(two.model.diagram()));
  CHECK(n2.n_space().total_dim() == 2);
  for (const auto& fb : n2.free_blocks()) {
    if (fb.param_count == 0) continue;
    CHECK(fb.pos_b == two.model.diagram().mirror(fb.pos_a));  // (m(e), e) shape
    CHECK(fb.k_index % 2 == 1);
  }

  // every diagram: dim N = dim g_0 - dim u_0
  for (const auto& red : all_reduced_diagrams(7)) {
    SymplecticModel m(build_double_diagram(red));
    GradedContext ctx(m);
    NormalizationSpace N(ctx, phi0_assignment(m.diagram()));
    Prolongation p = prolongation(ctx);
    CHECK(N.n_space().total_dim() == ctx.dim_g(0) - p.u.dim(0));
    CHECK(N.dim_n(0) == 0);
  }
}

TEST_CASE("complementarity audits") {
  Rng rng(83);
  for (const auto& red : all_reduced_diagrams(6)) {
    SymplecticModel m(build_double_diagram(red));
    GradedContext ctx(m);
    NormalizationSpace N(ctx, phi0_assignment(m.diagram()));
    auto rep = complementarity_audit(N, 3, 19);
    CHECK(rep.ok());
    for (const auto& row : rep.degrees)
      CHECK(row.dim_u + row.dim_im + row.dim_n == row.dim_g);

    // random assignments satisfy the same direct-sum property
    for (int t = 0; t < 3; ++t) {
      NormalizationSpace Nr(ctx, random_assignment(m.diagram(), rng));
      CHECK(complementarity_audit(Nr, 1, 23).ok());
    }
  }

  // a deliberately broken assignment (one chain used twice) overcounts
  Setup s({2});
  Assignment broken = phi0_assignment(s.model.diagram());
  broken.keys.push_back(broken.keys.front());
  int other = broken.choice.front() == 0 ? 1 : 0;
  auto chain = pair_chain(s.model.diagram(), broken.keys.front().first,
                          broken.keys.front().second);
  broken.choice.push_back(other < static_cast<int>(chain.size()) ? other : 0);
  CHECK_THROWS_AS(NormalizationSpace(s.ctx, broken), NotComplementary);
}

TEST_CASE("membership splits reconstruct their input") {
  Setup s({2, 1});
  NormalizationSpace N(s.ctx, phi0_assignment(s.model.diagram()));
  Rng rng(91);
  for (int k = 0; k <= s.ctx.top_degree(); ++k) {
    BlockEndomorphism y = s.ctx.random_gk(k, rng);
    Mat coords = s.ctx.to_coords(y.dense(), k);
    auto sp = N.split(coords, k);
    CHECK(sp.residual.is_zero());
    Mat sum = sp.u_part + sp.im_part + sp.n_part;
    CHECK(sum == coords);
  }
}

TEST_CASE("prolongation closes under the bracket") {
  for (const auto& red : all_reduced_diagrams(6)) {
    SymplecticModel m(build_double_diagram(red));
    GradedContext ctx(m);
    Prolongation p = prolongation(ctx);
    const Mat& U0 = p.u.coords.at(0);
    for (int i = 0; i < U0.cols(); ++i)
      for (int j = 0; j < U0.cols(); ++j) {
        BlockEndomorphism x(&m, ctx.from_coords(U0.col(i), 0));
        BlockEndomorphism y(&m, ctx.from_coords(U0.col(j), 0));
        Mat br = bracket(x, y).dense();
        CHECK(U0.solve(ctx.to_coords(br, 0)).has_value());
      }
  }
}
