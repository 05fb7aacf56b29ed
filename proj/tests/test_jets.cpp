#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "symcurve/matjet.hpp"

using namespace symcurve;

namespace {

Jet poly(std::vector<long> coeffs, int order) {
  std::vector<Scalar> c;
  for (long v : coeffs) c.push_back(Scalar::exact(v));
  while (static_cast<int>(c.size()) <= order) c.push_back(Scalar::exact(0));
  return Jet(Scalar::exact(0), c);
}

Jet random_jet(Rng& rng, int order) {
  std::vector<Scalar> c;
  for (int i = 0; i <= order; ++i) c.push_back(rng.rational());
  return Jet(Scalar::exact(0), c);
}

}  // namespace

TEST_CASE("field operations on polynomial jets") {
  Jet a = poly({1, 1}, 2), b = poly({1, -1}, 2);
  Jet prod = jet_field_ops("mul", a, &b);
  CHECK(prod.coeff(0) == Scalar::exact(1));
  CHECK(prod.coeff(1) == Scalar::exact(0));
  CHECK(prod.coeff(2) == Scalar::exact(-1));

  Jet inv = jet_field_ops("invert", poly({1, 1}, 3));
  CHECK(inv.coeff(0) == Scalar::exact(1));
  CHECK(inv.coeff(1) == Scalar::exact(-1));
  CHECK(inv.coeff(2) == Scalar::exact(1));
  CHECK(inv.coeff(3) == Scalar::exact(-1));

  Jet d = jet_field_ops("differentiate", poly({2, 3, 5}, 2));
  CHECK(d.order() == 1);
  CHECK(d.coeff(0) == Scalar::exact(3));
  CHECK(d.coeff(1) == Scalar::exact(10));
}

TEST_CASE("invert requires a unit constant term") {
  CHECK_THROWS_AS(poly({0, 1}, 3).invert(), NonInvertibleJet);
}

TEST_CASE("mismatched frames are rejected") {
  Jet a = poly({1}, 2), b = poly({1}, 3);
  CHECK_THROWS_AS(a + b, OrderMismatch);
  Jet c = Jet::constant(Scalar::exact(1), Scalar::exact(1), 2);
  CHECK_THROWS_AS(a * c, OrderMismatch);
  CHECK_THROWS_AS(Scalar::exact(1) + Scalar(FloatMP(1)), BackendMismatch);
}

TEST_CASE("ring axioms hold bit-exactly on random rational jets") {
  Rng rng(2024);
  for (int trial = 0; trial < 1000; ++trial) {
    int K = static_cast<int>(rng.integer(0, 12));
    Jet a = random_jet(rng, K), b = random_jet(rng, K), c = random_jet(rng, K);
    CHECK((a + b) * c == a * c + b * c);
    CHECK(a * b == b * a);
    CHECK((a * b) * c == a * (b * c));
    CHECK(a + (b + c) == (a + b) + c);
  }
}

TEST_CASE("inverse is a two-sided unit") {
  Rng rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    int K = static_cast<int>(rng.integer(0, 10));
    Jet a = random_jet(rng, K);
    if (a.coeff(0).is_zero()) a.coeff(0) = Scalar::exact(1);
    Jet one = Jet::constant(Scalar::exact(1), Scalar::exact(0), K);
    CHECK(a * a.invert() == one);
  }
}

TEST_CASE("composition, rebasing and reversion") {
  // (1+t)^2 composed with t = s + s^2 at matching base points
  Jet f = poly({1, 2, 1}, 4);
  Jet g = poly({0, 1, 1}, 4);
  Jet h = f.compose(g);
  // (1 + s + s^2)^2 = 1 + 2s + 3s^2 + 2s^3 + s^4
  CHECK(h.coeff(0) == Scalar::exact(1));
  CHECK(h.coeff(1) == Scalar::exact(2));
  CHECK(h.coeff(2) == Scalar::exact(3));
  CHECK(h.coeff(3) == Scalar::exact(2));
  CHECK(h.coeff(4) == Scalar::exact(1));

  Jet p = poly({3, 2, 1}, 5);
  Jet q = p.rebased(Scalar::exact(1));
  CHECK(q.evaluate(Scalar::exact(2)) == p.evaluate(Scalar::exact(2)));

  Jet r = poly({0, 2, 1, -3}, 6).reversion();
  Jet idn = poly({0, 2, 1, -3}, 6).compose(r);
  CHECK(idn.coeff(1) == Scalar::exact(1));
  for (int k = 2; k <= 6; ++k) CHECK(idn.coeff(k) == Scalar::exact(0));
}

TEST_CASE("nilpotent matrix exponential") {
  // strictly lower 2x2 with entry t, bound 2
  MatrixJet x = MatrixJet::zero(2, 2, Scalar::exact(0), 3, Backend::exact);
  x.set_entry(1, 0, poly({0, 1}, 3));
  MatrixJet e = matjet_exp_nilpotent(x, 2);
  CHECK(e.entry(0, 0) == Jet::constant(Scalar::exact(1), Scalar::exact(0), 3));
  CHECK(e.entry(1, 0) == poly({0, 1}, 3));
  CHECK(e.entry(0, 1).is_zero());

  MatrixJet z = MatrixJet::zero(2, 2, Scalar::exact(0), 3, Backend::exact);
  MatrixJet ez = matjet_exp_nilpotent(z, 2);
  CHECK(ez.entry(0, 0).coeff(0) == Scalar::exact(1));
  CHECK(ez.entry(0, 1).is_zero());

  // 3x3 single superdiagonal of constants, bound 3, against the term-by-term sum
  MatrixJet y = MatrixJet::zero(3, 3, Scalar::exact(0), 4, Backend::exact);
  y.set_entry(0, 1, poly({2}, 4));
  y.set_entry(1, 2, poly({3}, 4));
  MatrixJet ey = matjet_exp_nilpotent(y, 3);
  MatrixJet expect = MatrixJet::constant(Mat::identity(3), Scalar::exact(0), 4);
  MatrixJet pw = expect;
  Scalar fact(1, 1);
  for (int i = 1; i < 3; ++i) {
    pw = pw * y;
    fact *= Scalar::exact(i);
    expect = expect + pw.scaled(fact.inv());
  }
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) CHECK(ey.entry(i, j) == expect.entry(i, j));

  // exp(x) exp(-x) = identity for nilpotent arguments
  MatrixJet einv = matjet_exp_nilpotent(-y, 3);
  MatrixJet prod = ey * einv;
  CHECK(prod.entry(0, 0).coeff(0) == Scalar::exact(1));
  CHECK(prod.entry(0, 1).is_zero());
  CHECK(prod.entry(0, 2).is_zero());

  MatrixJet bad = MatrixJet::constant(Mat::identity(2), Scalar::exact(0), 2);
  CHECK_THROWS_AS(matjet_exp_nilpotent(bad, 2), NilpotencyViolated);
}

TEST_CASE("jet linear ode solving") {
  // A' = A c with scalar constant c: exponential series
  Scalar c(3, 2);
  auto rhs = [&c](const MatrixJet& A) { return A.scaled(c); };
  MatrixJet A = jet_ode_solve(rhs, Mat::identity(1), Scalar::exact(0), 6);
  Scalar fact(1, 1), pw(1, 1);
  for (int k = 0; k <= 6; ++k) {
    CHECK(A.entry(0, 0).coeff(k) == pw / fact);
    pw *= c;
    fact *= Scalar::exact(k + 1);
  }

  // A' = 0: constant
  Mat M = Mat::from_ints({{1, 2}, {3, 4}});
  auto rhs0 = [](const MatrixJet& a) {
    return MatrixJet::zero(a.rows(), a.cols(), a.t0(), a.order(), a.backend());
  };
  MatrixJet A0 = jet_ode_solve(rhs0, M, Scalar::exact(0), 4);
  CHECK(A0.coeff(0) == M);
  for (int k = 1; k <= 4; ++k) CHECK(A0.coeff(k).is_zero());

  // A' = A C with nilpotent constant C: closed form [[1,0],[t,1]]
  Mat C = Mat::from_ints({{0, 0}, {1, 0}});
  auto rhsn = [&C](const MatrixJet& a) {
    return a * MatrixJet::constant(C, a.t0(), a.order());
  };
  MatrixJet An = jet_ode_solve(rhsn, Mat::identity(2), Scalar::exact(0), 5);
  CHECK(An.entry(0, 0) == Jet::constant(Scalar::exact(1), Scalar::exact(0), 5));
  CHECK(An.entry(1, 0) == poly({0, 1}, 5));
  CHECK(An.entry(0, 1).is_zero());
  CHECK(An.entry(1, 1) == Jet::constant(Scalar::exact(1), Scalar::exact(0), 5));

  // differentiating and re-substituting reproduces the right-hand side
  Rng rng(5);
  Mat R = Mat(2, 2);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) R.at(i, j) = rng.rational();
  auto rhsr = [&R](const MatrixJet& a) {
    return a * MatrixJet::constant(R, a.t0(), a.order());
  };
  MatrixJet Ar = jet_ode_solve(rhsr, Mat::identity(2), Scalar::exact(0), 8);
  MatrixJet lhs = Ar.derivative();
  MatrixJet rhs_eval = rhsr(Ar).truncated(lhs.order());
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) CHECK(lhs.entry(i, j) == rhs_eval.entry(i, j));
}

TEST_CASE("jet kernel of a moving matrix") {
  // A(t) = [1, t] has kernel spanned by (-t, 1)
  MatrixJet A = MatrixJet::zero(1, 2, Scalar::exact(0), 4, Backend::exact);
  A.set_entry(0, 0, poly({1}, 4));
  A.set_entry(0, 1, poly({0, 1}, 4));
  MatrixJet K = matjet_kernel(A);
  REQUIRE(K.cols() == 1);
  MatrixJet prod = A * K;
  CHECK(prod.entry(0, 0).is_zero());
}

TEST_CASE("float backend square roots") {
  set_float_precision_bits(192);
  Jet a = poly({4, 4, 1}, 5).to_float();  // (2 + t)^2 truncated
  Jet s = a.sqrt();
  Jet back = s * s;
  Scalar err = Scalar::zero(Backend::floating);
  for (int k = 0; k <= 5; ++k) {
    Scalar v = (back.coeff(k) - a.coeff(k)).abs();
    if (v > err) err = v;
  }
  CHECK(err < Scalar(rank_tolerance()));
}
