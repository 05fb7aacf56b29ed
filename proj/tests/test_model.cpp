#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "symcurve/graded.hpp"

using namespace symcurve;

namespace {

SymplecticModel make_model(std::vector<int> rows) {
  return SymplecticModel(build_double_diagram(reduce_diagram(YoungDiagram::from_rows(rows))));
}

}  // namespace

TEST_CASE("pairing matrix of small models") {
  SymplecticModel m1 = make_model({1});
  CHECK(m1.J() == Mat::from_ints({{0, 1}, {-1, 0}}));

  SymplecticModel m2 = make_model({2});
  // slots: (1,-2) (1,-1) (1,1) (1,2); unit pairings between columns c and -c
  Mat J2 = m2.J();
  CHECK(J2.at(0, 3) == Scalar::exact(1));
  CHECK(J2.at(1, 2) == Scalar::exact(1));
  CHECK(J2.at(3, 0) == Scalar::exact(-1));
  CHECK(J2.at(2, 1) == Scalar::exact(-1));
  CHECK((J2 + J2.transpose()).is_zero());
  CHECK(J2.rank() == 4);

  SymplecticModel mr = make_model({1, 1});  // multiplicity 2
  Mat Jr = mr.J();
  CHECK(Jr.rank() == 4);
  int units = 0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      if (Jr.at(i, j) == Scalar::exact(1)) ++units;
  CHECK(units == 2);

  // Conversion to the standard basis respects both pairings.
  for (auto rows : std::vector<std::vector<int>>{{1}, {2}, {1, 1}, {2, 1}, {3, 2, 2}}) {
    SymplecticModel m = make_model(rows);
    Mat T = m.to_standard();
    CHECK(T.transpose() * SymplecticModel::standard_J(m.half_dim()) * T == m.J());
  }
}

TEST_CASE("membership test for the symplectic algebra") {
  SymplecticModel m = make_model({2, 1});
  GradedContext ctx(m);
  CHECK(sp_check(ctx.delta()).ok);
  CHECK_FALSE(sp_check(BlockEndomorphism(&m, Mat::identity(m.dim()))).ok);

  Rng rng(3);
  for (int t = 0; t < 20; ++t) {
    BlockEndomorphism x = BlockEndomorphism::zero(&m);
    for (int k = -ctx.top_degree(); k <= ctx.top_degree(); ++k)
      x = x + ctx.random_gk(k, rng);
    CHECK(sp_check(x).ok);  // the basis generator fills dependent blocks
  }
}

TEST_CASE("degree components") {
  SymplecticModel m1 = make_model({1});
  GradedContext ctx(m1);
  auto split = degree_split(ctx.delta());
  REQUIRE(split.size() == 1);
  CHECK(split.begin()->first == -1);

  BlockEndomorphism e = BlockEndomorphism::zero(&m1);
  Mat blk(1, 1);
  blk.at(0, 0) = Scalar::exact(1);
  e.set_block(Box{1, -1}, Box{1, 1}, blk);
  auto s2 = degree_split(e);
  REQUIRE(s2.size() == 1);
  CHECK(s2.begin()->first == 1);

  auto s3 = degree_split(BlockEndomorphism(&m1, Mat::identity(2)));
  REQUIRE(s3.size() == 1);
  CHECK(s3.begin()->first == 0);
}

TEST_CASE("normal form symbol") {
  SymplecticModel m1 = make_model({1});
  CHECK(delta_normal(m1).dense() == Mat::from_ints({{0, 0}, {1, 0}}));

  // one row p = 2: signs +1, +1, -1 along the shift chain
  SymplecticModel m2 = make_model({2});
  Mat d2 = delta_normal(m2).dense();
  CHECK(d2.at(1, 0) == Scalar::exact(1));
  CHECK(d2.at(2, 1) == Scalar::exact(1));
  CHECK(d2.at(3, 2) == Scalar::exact(-1));

  // multiplicity block: 2x2 identity with sign +1
  SymplecticModel mr = make_model({1, 1});
  BlockEndomorphism dr = delta_normal(mr);
  CHECK(dr.block(Box{1, 1}, Box{1, -1}) == Mat::identity(2));

  for (auto rows : std::vector<std::vector<int>>{{1}, {3}, {2, 2}, {3, 1}}) {
    SymplecticModel m = make_model(rows);
    BlockEndomorphism d = delta_normal(m);
    CHECK(sp_check(d).ok);
    auto split = degree_split(d);
    REQUIRE(split.size() == 1);
    CHECK(split.begin()->first == -1);
  }
}

TEST_CASE("skew-orthogonal complements") {
  SymplecticModel m1 = make_model({1});
  Mat whole = Mat::identity(2);
  CHECK(skew_complement(whole, m1).cols() == 0);

  Mat line(2, 1);
  line.at(0, 0) = Scalar::exact(1);
  Mat comp = skew_complement(line, m1);
  REQUIRE(comp.cols() == 1);
  CHECK(comp.at(0, 0) != Scalar::exact(0));
  CHECK(comp.at(1, 0) == Scalar::exact(0));  // the isotropic line is its own complement

  // random 2-dim subspace of a 6-dim model: complement of dim 4, involutive
  SymplecticModel m3 = make_model({2, 1});
  Rng rng(11);
  Mat S(6, 2);
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 2; ++j) S.at(i, j) = rng.rational();
  if (S.rank() == 2) {
    Mat c = skew_complement(S, m3);
    CHECK(c.cols() == 4);
    Mat cc = skew_complement(c, m3);
    // double complement spans the original space
    CHECK(Mat::hcat(S, cc).rank() == 2);
  }
  Mat dep(6, 2);
  for (int i = 0; i < 6; ++i) dep.at(i, 0) = dep.at(i, 1) = Scalar::exact(i);
  CHECK_THROWS_AS(skew_complement(dep, m3), RankDeficientInput);
}

TEST_CASE("bracket and grading properties") {
  Rng rng(23);
  for (const auto& red : all_reduced_diagrams(6)) {
    SymplecticModel m(build_double_diagram(red));
    GradedContext ctx(m);
    for (int t = 0; t < 3; ++t) {
      int top = ctx.top_degree();
      int k = static_cast<int>(rng.integer(-top, top));
      int l = static_cast<int>(rng.integer(-top, top));
      BlockEndomorphism x = ctx.random_gk(k, rng);
      BlockEndomorphism y = ctx.random_gk(l, rng);
      BlockEndomorphism br = bracket(x, y);
      CHECK(sp_check(br).ok);
      auto split = degree_split(br);
      for (const auto& [deg, comp] : split) CHECK(deg == k + l);
    }
  }
}

TEST_CASE("dimension bookkeeping of the graded algebra") {
  for (const auto& red : all_reduced_diagrams(6)) {
    SymplecticModel m(build_double_diagram(red));
    GradedContext ctx(m);
    int total = 0;
    for (int k = -ctx.top_degree(); k <= ctx.top_degree(); ++k) total += ctx.dim_g(k);
    int hm = m.half_dim();
    CHECK(total == hm * (2 * hm + 1));
  }
}
