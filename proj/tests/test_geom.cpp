#include "cusp/geom.hpp"

#include <random>

#include "doctest.h"
#include "support/oracles.hpp"

using namespace cusp;

TEST_CASE("integer helpers") {
  CHECK(floor_div(Int(7), Int(2)) == 3);
  CHECK(floor_div(Int(-7), Int(2)) == -4);
  CHECK(floor_div(Int(7), Int(-2)) == -4);
  CHECK(floor_div(Int(-7), Int(-2)) == 3);
  CHECK(rat_floor(Rat(-3, 2)) == -2);
  CHECK(rat_round(Rat(5, 2)) == 3);   // ties toward +inf
  CHECK(rat_round(Rat(-5, 2)) == -2);

  auto g = ext_gcd(Int(240), Int(46));
  CHECK(g.g == 2);
  CHECK(240 * g.x + 46 * g.y == 2);
  auto g2 = ext_gcd(Int(-15), Int(0));
  CHECK(g2.g == 15);
  CHECK(-15 * g2.x == 15);

  CHECK(isqrt(Int(10)) == 3);
  CHECK(is_perfect_square(Int(49)));
  CHECK_FALSE(is_perfect_square(Int(50)));
}

TEST_CASE("matrix product matches long-hand oracle") {
  Mat2 m{1, 2, 3, 4}, n{5, 6, 7, 8};
  auto o = cusp::testing::mul2x2({1, 2, 3, 4}, {5, 6, 7, 8});
  Mat2 p = m * n;
  CHECK(p.a == o[0]);
  CHECK(p.b == o[1]);
  CHECK(p.c == o[2]);
  CHECK(p.d == o[3]);

  // Chain of three, against iterated oracle.
  Mat2 k{0, 1, -1, 5};
  auto o2 = cusp::testing::mul2x2(o, {0, 1, -1, 5});
  Mat2 p2 = mat_product({m, n, k});
  CHECK(p2.a == o2[0]);
  CHECK(p2.b == o2[1]);
  CHECK(p2.c == o2[2]);
  CHECK(p2.d == o2[3]);

  CHECK(mat_product({}) == Mat2::identity());
  CHECK(det2(Mat2{3, 1, 2, 1}) == 1);
  CHECK(trace(Mat2{3, 1, 2, 1}) == 4);
}

TEST_CASE("unimodular inverse and powers") {
  Mat2 m{2, 1, 1, 1};
  CHECK(m * inverse_unimodular(m) == Mat2::identity());
  Mat2 f{0, 1, 1, 0};  // det -1
  CHECK(f * inverse_unimodular(f) == Mat2::identity());
  CHECK(mat_pow(m, Int(0)) == Mat2::identity());
  CHECK(mat_pow(m, Int(3)) == m * m * m);
  CHECK(mat_pow(m, Int(-2)) * (m * m) == Mat2::identity());
}

TEST_CASE("affine maps compose and invert") {
  AffineMap f{{2, 1, 1, 1}, {3, -2}};
  AffineMap g{{1, 1, 0, 1}, {Rat(1, 2), 5}};
  Vec2 p{7, -9};
  CHECK(compose(f, g)(p) == f(g(p)));
  AffineMap finv = affine_inverse(f);
  CHECK(finv(f(p)) == p);
  CHECK(compose(finv, f) == AffineMap::identity());
}

TEST_CASE("orientation and segment predicates") {
  CHECK(orient({0, 0}, {1, 0}, {0, 1}) == 1);
  CHECK(orient({0, 0}, {0, 1}, {1, 0}) == -1);
  CHECK(orient({0, 0}, {2, 2}, {5, 5}) == 0);

  CHECK(on_segment({1, 1}, {0, 0}, {2, 2}));
  CHECK(on_segment({0, 0}, {0, 0}, {2, 2}));
  CHECK_FALSE(on_segment({3, 3}, {0, 0}, {2, 2}));
  CHECK_FALSE(on_segment({1, 0}, {0, 0}, {2, 2}));

  // Proper crossing with rational intersection point.
  SegHit h = seg_intersect({0, 0}, {2, 2}, {0, 2}, {2, 0});
  CHECK(h.kind == SegX::Point);
  CHECK(h.point == Vec2{1, 1});

  h = seg_intersect({0, 0}, {1, 0}, {0, 1}, {1, 1});
  CHECK(h.kind == SegX::None);

  // Endpoint touch.
  h = seg_intersect({0, 0}, {1, 1}, {1, 1}, {2, 0});
  CHECK(h.kind == SegX::Point);
  CHECK(h.point == Vec2{1, 1});

  // T-touch in the middle of the first segment.
  h = seg_intersect({0, 0}, {2, 0}, {1, 0}, {1, 5});
  CHECK(h.kind == SegX::Point);
  CHECK(h.point == Vec2{1, 0});

  // Collinear overlap / disjoint / point cases.
  CHECK(seg_intersect({0, 0}, {3, 0}, {1, 0}, {5, 0}).kind == SegX::Overlap);
  CHECK(seg_intersect({0, 0}, {1, 0}, {2, 0}, {3, 0}).kind == SegX::None);
  h = seg_intersect({0, 0}, {1, 0}, {1, 0}, {3, 0});
  CHECK(h.kind == SegX::Point);
  CHECK(h.point == Vec2{1, 0});
}

TEST_CASE("point in polygon, including nonconvex") {
  std::vector<Vec2> square{{0, 0}, {4, 0}, {4, 4}, {0, 4}};
  CHECK(point_in_polygon({2, 2}, square) == PolyLoc::Inside);
  CHECK(point_in_polygon({0, 2}, square) == PolyLoc::Boundary);
  CHECK(point_in_polygon({4, 4}, square) == PolyLoc::Boundary);
  CHECK(point_in_polygon({5, 2}, square) == PolyLoc::Outside);
  CHECK(point_in_polygon({Rat(1, 3), Rat(1, 3)}, square) == PolyLoc::Inside);

  // L-shape: notch at the top right.
  std::vector<Vec2> ell{{0, 0}, {4, 0}, {4, 2}, {2, 2}, {2, 4}, {0, 4}};
  CHECK(point_in_polygon({3, 3}, ell) == PolyLoc::Outside);
  CHECK(point_in_polygon({1, 3}, ell) == PolyLoc::Inside);
  CHECK(point_in_polygon({3, 1}, ell) == PolyLoc::Inside);
  CHECK(point_in_polygon({2, 3}, ell) == PolyLoc::Boundary);
}

TEST_CASE("polygon area, simplicity, validation") {
  LatticePolygon square{{{0, 0}, {4, 0}, {4, 4}, {0, 4}}};
  CHECK(polygon_area2(square) == 32);
  CHECK(polygon_is_simple(square.v));
  validate_lattice_polygon(square);

  // Clockwise fails validation.
  LatticePolygon cw{{{0, 0}, {0, 4}, {4, 4}, {4, 0}}};
  CHECK(polygon_area2(cw) == -32);
  CHECK_THROWS_AS(validate_lattice_polygon(cw), Error);

  // Self-intersecting bow tie is not simple.
  CHECK_FALSE(polygon_is_simple({{0, 0}, {2, 2}, {2, 0}, {0, 2}}));

  // Half-integral vertex fails validation.
  LatticePolygon frac{{{0, 0}, {Rat(1, 2), 0}, {0, 1}}};
  CHECK_THROWS_AS(validate_lattice_polygon(frac), Error);
}

TEST_CASE("lattice point enumeration satisfies Pick's identity") {
  // 2*Area = 2*Interior + Boundary - 2 for simple lattice polygons.
  auto pick_check = [](const LatticePolygon& poly) {
    auto pts = lattice_points(poly);
    Int interior = 0, boundary = 0;
    for (const Vec2& p : pts) {
      PolyLoc loc = point_in_polygon(p, poly.v);
      if (loc == PolyLoc::Inside) ++interior;
      if (loc == PolyLoc::Boundary) ++boundary;
    }
    CHECK(polygon_area2(poly) == 2 * interior + boundary - 2);
  };
  pick_check(LatticePolygon{{{0, 0}, {1, 0}, {0, 1}}});
  pick_check(LatticePolygon{{{0, 0}, {4, 0}, {4, 4}, {0, 4}}});
  pick_check(LatticePolygon{{{0, 0}, {7, 3}, {2, 9}}});
  pick_check(LatticePolygon{{{0, 0}, {4, 0}, {4, 2}, {2, 2}, {2, 4}, {0, 4}}});
  pick_check(LatticePolygon{{{0, 0}, {-2, -1}, {-1, -3}}});

  // Counts for the unit square, by hand.
  auto pts = lattice_points(LatticePolygon{{{0, 0}, {1, 0}, {1, 1}, {0, 1}}});
  CHECK(pts.size() == 4);
}

TEST_CASE("primitive vectors and content") {
  CHECK(primitive({6, -9}) == Vec2{2, -3});
  CHECK(content({6, -9}) == 3);
  CHECK(primitive({0, -7}) == Vec2{0, -1});
  CHECK_THROWS_AS(content({0, 0}), Error);
  CHECK_THROWS_AS(content({Rat(1, 2), 1}), Error);
}
