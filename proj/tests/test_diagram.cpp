#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "symcurve/diagram.hpp"

using namespace symcurve;

TEST_CASE("diagram reduction") {
  // one column of m boxes: m rows of length 1
  ReducedDiagram r1 = reduce_diagram(YoungDiagram::from_columns({4}));
  REQUIRE(r1.num_rows() == 1);
  CHECK(r1.p(1) == 1);
  CHECK(r1.r(1) == 4);

  // a single row of n boxes
  ReducedDiagram r2 = reduce_diagram(YoungDiagram::from_rows({5}));
  REQUIRE(r2.num_rows() == 1);
  CHECK(r2.p(1) == 5);
  CHECK(r2.r(1) == 1);

  // rows of lengths 3, 3, 1
  ReducedDiagram r3 = reduce_diagram(YoungDiagram::from_rows({3, 3, 1}));
  REQUIRE(r3.num_rows() == 2);
  CHECK(r3.p(1) == 3);
  CHECK(r3.r(1) == 2);
  CHECK(r3.p(2) == 1);
  CHECK(r3.r(2) == 1);
  CHECK(r3.half_dim() == 7);

  CHECK_THROWS_AS(YoungDiagram::from_columns({}), EmptyDiagram);
  CHECK_THROWS_AS(YoungDiagram::from_columns({1, 2}), BadFormat);
}

TEST_CASE("double diagram tables") {
  // one row p = 1
  DoubleDiagram d1(reduce_diagram(YoungDiagram::from_rows({1})));
  REQUIRE(d1.num_boxes() == 2);
  Box m1{1, -1}, b1{1, 1};
  CHECK(d1.deg(m1) == 0);
  CHECK(d1.deg(b1) == -1);
  CHECK(d1.eps(m1) == 1);
  CHECK(d1.eps(b1) == -1);
  CHECK(d1.mirror(m1) == b1);
  CHECK(!d1.right(b1));
  CHECK(!d1.left(m1));
  CHECK(*d1.right(m1) == b1);

  // one row p = 2: degrees 1, 0, -1, -2 left to right
  DoubleDiagram d2(reduce_diagram(YoungDiagram::from_rows({2})));
  std::vector<int> degs;
  for (const Box& b : d2.boxes()) degs.push_back(d2.deg(b));
  CHECK(degs == std::vector<int>{1, 0, -1, -2});
  for (const Box& b : d2.boxes())
    if (d2.right(b)) CHECK(d2.deg(*d2.right(b)) == d2.deg(b) - 1);

  // rows (2, 1): 6 boxes; mirror of (1,2) is (1,-2)
  DoubleDiagram d3(reduce_diagram(YoungDiagram::from_rows({2, 1})));
  CHECK(d3.num_boxes() == 6);
  CHECK(d3.mirror(Box{1, 2}) == Box{1, -2});
}

TEST_CASE("degree and sign tables over all small diagrams") {
  for (const auto& red : all_reduced_diagrams(10)) {
    DoubleDiagram dd(red);
    int m = red.half_dim();
    int sum = 0;
    for (const Box& a : dd.boxes()) {
      CHECK(dd.deg(a) + dd.deg(dd.mirror(a)) == -1);
      CHECK(dd.eps(a) * dd.eps(dd.mirror(a)) == -1);
      CHECK(dd.mirror(dd.mirror(a)) == a);
      if (auto l = dd.left(a)) CHECK(*dd.right(*l) == a);
      CHECK(!dd.right(a) == (a.col == red.p(a.row)));
      CHECK(!dd.left(a) == (a.col == -red.p(a.row)));
      if (dd.deg(a) >= 0) sum += dd.block_size(a);
    }
    CHECK(sum == m);
  }
}

TEST_CASE("pair chains") {
  // The chain runs until either component falls off the left edge, so its
  // length equals the left index of b; for b = (1,1) on the p = 2 row that
  // is three simultaneous shifts.
  DoubleDiagram d2(reduce_diagram(YoungDiagram::from_rows({2})));
  auto chain = pair_chain(d2, Box{1, 1}, Box{1, 2});
  REQUIRE(chain.size() == 3);
  CHECK(chain[0] == std::make_pair(Box{1, 1}, Box{1, 2}));
  CHECK(chain[1] == std::make_pair(Box{1, -1}, Box{1, 1}));
  CHECK(chain[2] == std::make_pair(Box{1, -2}, Box{1, -1}));

  DoubleDiagram d1(reduce_diagram(YoungDiagram::from_rows({1})));
  auto single = pair_chain(d1, Box{1, -1}, Box{1, 1});
  REQUIRE(single.size() == 1);
  CHECK(single[0] == std::make_pair(Box{1, -1}, Box{1, 1}));

  DoubleDiagram d3(reduce_diagram(YoungDiagram::from_rows({2, 1})));
  auto cross = pair_chain(d3, Box{2, 1}, Box{1, 2});
  CHECK(cross.size() == 2);

  CHECK_THROWS_AS(pair_chain(d2, Box{1, 2}, Box{1, 2}), RowOrderViolated);
  CHECK_THROWS_AS(pair_chain(d2, Box{1, -1}, Box{1, 1}), NotLastBox);
  CHECK_THROWS_AS(pair_chain(d3, Box{1, 1}, Box{2, 1}), RowOrderViolated);
}

TEST_CASE("classical assignment on the p=2 row") {
  DoubleDiagram d2(reduce_diagram(YoungDiagram::from_rows({2})));
  // k = 1 (odd): the (m(e), e) pair
  auto p1 = phi0(d2, Box{1, -2}, Box{1, 2});
  CHECK(p1 == std::make_pair(Box{1, -2}, Box{1, 2}));
  // k = 2 (even): the (m(r(e)), e) pair
  auto p2 = phi0(d2, Box{1, -1}, Box{1, 2});
  CHECK(p2 == std::make_pair(Box{1, -2}, Box{1, 1}));
  // k = 3 (odd)
  auto p3 = phi0(d2, Box{1, 1}, Box{1, 2});
  CHECK(p3 == std::make_pair(Box{1, -1}, Box{1, 1}));

  DoubleDiagram d1(reduce_diagram(YoungDiagram::from_rows({1})));
  auto p0 = phi0(d1, Box{1, -1}, Box{1, 1});
  CHECK(p0 == std::make_pair(Box{1, -1}, Box{1, 1}));
}

TEST_CASE("same-row chains carry the expected selection shapes") {
  // Exhaustively: each same-row chain has exactly one (m(e), e)-shaped pair
  // for odd left index and exactly one (m(r(e)), e)-shaped pair for even.
  for (const auto& red : all_reduced_diagrams(10)) {
    DoubleDiagram dd(red);
    for (int i = 1; i <= red.num_rows(); ++i) {
      Box rho = dd.last_box(i);
      for (const Box& b : dd.boxes()) {
        if (b.row != i || b == rho) continue;
        auto chain = pair_chain(dd, b, rho);
        int mirror_pairs = 0, shifted_pairs = 0;
        for (const auto& [x, y] : chain) {
          if (dd.mirror(y) == x) ++mirror_pairs;
          if (auto ry = dd.right(y); ry && dd.mirror(*ry) == x) ++shifted_pairs;
        }
        int k = dd.left_index(b);
        CHECK(mirror_pairs == (k % 2 == 1 ? 1 : 0));
        CHECK(shifted_pairs <= 1);
        if (k % 2 == 0) CHECK(shifted_pairs == 1);
        // The full assignment must select exactly one pair without throwing.
        CHECK_NOTHROW(phi0(dd, b, rho));
      }
    }
  }
}

TEST_CASE("assignments select one pair per admissible chain") {
  for (const auto& red : all_reduced_diagrams(8)) {
    DoubleDiagram dd(red);
    Assignment a = phi0_assignment(dd);
    CHECK(a.keys.size() == admissible_chain_keys(dd).size());
    Rng rng(17);
    Assignment r = random_assignment(dd, rng);
    for (size_t i = 0; i < r.keys.size(); ++i) {
      auto chain = pair_chain(dd, r.keys[i].first, r.keys[i].second);
      CHECK(r.choice[i] >= 0);
      CHECK(r.choice[i] < static_cast<int>(chain.size()));
    }
  }
}
