#include "cusp/surgery.hpp"

#include <utility>
#include <vector>

#include "cusp/cycles.hpp"
#include "cusp/error.hpp"
#include "cusp/geom.hpp"
#include "doctest.h"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace cusp;
using cusp::testing::charge3_base;
using cusp::testing::error_code_of;
using cusp::testing::figure6_base;
using cusp::testing::random_toric_polygon;
using cusp::testing::Rng;

namespace {

// 2x3 rectangle (lengths 2,3,2,3 around the quadric fan).
AlmostToricBase small_rect() {
  return moment_polygon(fan_from_toric_cycle(Cycle{{0, 0, 0, 0}}),
                        {2, 3, 2, 3});
}

AlmostToricBase big_rect() {
  return moment_polygon(fan_from_toric_cycle(Cycle{{0, 0, 0, 0}}),
                        {7, 7, 7, 7});
}

}  // namespace

TEST_CASE("fans of standard toric cycles") {
  auto p2 = fan_from_toric_cycle(Cycle{{-1, -1, -1}});
  REQUIRE(p2.size() == 3);
  CHECK(p2[0] == Vec2(1, 0));
  CHECK(p2[1] == Vec2(0, 1));
  CHECK(p2[2] == Vec2(-1, -1));

  auto quad = fan_from_toric_cycle(Cycle{{0, 0, 0, 0}});
  REQUIRE(quad.size() == 4);
  CHECK(quad[2] == Vec2(-1, 0));
  CHECK(quad[3] == Vec2(0, -1));

  // One corner blow-up of the projective plane.
  auto f1 = fan_from_toric_cycle(Cycle{{0, 1, 0, -1}});
  REQUIRE(f1.size() == 4);
  CHECK(f1[2] == Vec2(-1, 1));
  CHECK(f1[3] == Vec2(0, -1));
}

TEST_CASE("non-toric cycles are rejected with a reason") {
  CHECK(error_code_of([] { fan_from_toric_cycle(Cycle{{3, 3}}); }) ==
        Err::NotToric);
  CHECK(error_code_of([] { fan_from_toric_cycle(Cycle{{4, 6, 5}}); }) ==
        Err::NotToric);
  // d = -1 everywhere closes up, but only after two turns.
  try {
    fan_from_toric_cycle(Cycle{{-1, -1, -1, -1, -1, -1}});
    FAIL("expected a throw");
  } catch (const Error& e) {
    CHECK(e.code() == Err::NotToric);
    CHECK(std::string(e.what()).find("winding 2") != std::string::npos);
  }
}

TEST_CASE("edge directions are rays rotated a quarter turn") {
  CHECK(edge_direction(Vec2(1, 0)) == Vec2(0, 1));
  CHECK(edge_direction(Vec2(0, 1)) == Vec2(-1, 0));
  CHECK(edge_direction(Vec2(-2, -1)) == Vec2(1, -2));
}

TEST_CASE("edge lengths from a support") {
  auto quad = fan_from_toric_cycle(Cycle{{0, 0, 0, 0}});
  CHECK(solve_lengths(quad, {0, 1, 2, 3}) ==
        std::vector<Int>{1, 1, 1, 1});
  CHECK(solve_lengths(quad, {0, 2}) == std::vector<Int>{1, 0, 1, 0});
  CHECK(error_code_of([&] { solve_lengths(quad, {0, 1}); }) ==
        Err::NoSolution);
  CHECK(error_code_of([&] { solve_lengths(quad, {0}); }) == Err::NoSolution);
  CHECK(error_code_of([&] { solve_lengths(quad, {}); }) == Err::BadInput);
  CHECK(error_code_of([&] { solve_lengths(quad, {4}); }) ==
        Err::IndexOutOfRange);

  auto p2 = fan_from_toric_cycle(Cycle{{-1, -1, -1}});
  CHECK(solve_lengths(p2, {0, 1, 2}) == std::vector<Int>{1, 1, 1});

  // Four rays with a two-dimensional kernel: minimal total length wins.
  auto f1 = fan_from_toric_cycle(Cycle{{0, 1, 0, -1}});
  CHECK(solve_lengths(f1, {0, 1, 2, 3}) == std::vector<Int>{1, 1, 1, 2});
}

TEST_CASE("moment polygons of toric cycles") {
  auto quad = fan_from_toric_cycle(Cycle{{0, 0, 0, 0}});
  AlmostToricBase b = moment_polygon(quad, {7, 5, 7, 5});
  CHECK(b.outline.v ==
        std::vector<Vec2>{Vec2(0, 0), Vec2(0, 7), Vec2(-5, 7), Vec2(-5, 0)});
  CHECK(b.cycle == Cycle{{0, 0, 0, 0}});
  CHECK(b.lengths == std::vector<Int>{7, 5, 7, 5});
  CHECK(b.components() == 4);
  CHECK(b.cuts.empty());
  CHECK(b.singular_points.empty());
  auto edges = b.boundary();
  REQUIRE(edges.size() == 4);
  CHECK(edges[0].direction == Vec2(0, 1));
  CHECK(edges[1].direction == Vec2(-1, 0));
  CHECK(edges[0].length == 7);
  CHECK(boundary_d_values(b) == b.cycle);

  AlmostToricBase tri =
      moment_polygon(fan_from_toric_cycle(Cycle{{-1, -1, -1}}), {1, 1, 1});
  CHECK(tri.outline.v ==
        std::vector<Vec2>{Vec2(0, 0), Vec2(0, 1), Vec2(-1, 1)});

  CHECK(error_code_of([&] { moment_polygon(quad, {1, 1, 1, 2}); }) ==
        Err::NonClosing);
  CHECK(error_code_of([&] { moment_polygon(quad, {1, 0, 1, 0}); }) ==
        Err::Degenerate);
  CHECK(error_code_of([&] { moment_polygon(quad, {-1, 1, -1, 1}); }) ==
        Err::BadInput);
  CHECK(error_code_of([&] { moment_polygon(quad, {1, 1, 1}); }) ==
        Err::BadInput);
  CHECK(error_code_of([&] {
          moment_polygon({Vec2(2, 0), Vec2(0, 1), Vec2(-1, -1)}, {1, 1, 1});
        }) == Err::BadInput);
  CHECK(error_code_of([&] {
          moment_polygon({Vec2(1, 0), Vec2(0, 1), Vec2(-1, -2)}, {1, 1, 1});
        }) == Err::BadInput);
}

TEST_CASE("moment polygon with zero-length components") {
  Cycle c{{3, 2, 1, 2, 3, 1, 2, 2, 2, 2, 1}};
  auto rays = fan_from_toric_cycle(c);
  auto lengths = solve_lengths(rays, {2, 5, 10});
  std::vector<Int> expect(11, 0);
  expect[2] = expect[5] = expect[10] = 1;
  CHECK(lengths == expect);

  AlmostToricBase b = moment_polygon(rays, lengths);
  CHECK(b.outline.v ==
        std::vector<Vec2>{Vec2(0, 0), Vec2(-2, -1), Vec2(-1, -3)});
  CHECK(b.components() == 11);
  CHECK(b.cycle == c);
  // Zero-length components still report their directions and d-values.
  CHECK(boundary_d_values(b) == c);
  auto edges = b.boundary();
  REQUIRE(edges.size() == 11);
  CHECK(edges[0].length == 0);
  CHECK(edges[2].length == 1);
  CHECK(edges[2].direction == Vec2(-2, -1));
}

TEST_CASE("a unit blow-up notches the polygon and tracks the cycle") {
  AlmostToricBase b = internal_blowup(small_rect(), 3, 1, 1);
  CHECK(b.cycle == Cycle{{0, 0, 0, 1}});
  CHECK(b.lengths == std::vector<Int>{2, 3, 2, 2});
  REQUIRE(b.cuts.size() == 1);
  const Cut& cut = b.cuts[0];
  CHECK(cut.kind == Cut::Kind::Blowup);
  CHECK(cut.apex == Vec2(-2, 1));
  CHECK(cut.base_a == Vec2(-2, 0));
  CHECK(cut.base_b == Vec2(-1, 0));
  CHECK(cut.glue.lin == (Mat2{1, 1, 0, 1}));
  CHECK(cut.glue.tr == Vec2(-1, 0));
  CHECK(cut.glue(cut.base_b) == cut.base_a);
  CHECK(b.singular_points == std::vector<Vec2>{Vec2(-2, 1)});
  CHECK(b.outline.v ==
        std::vector<Vec2>{Vec2(0, 0), Vec2(0, 2), Vec2(-3, 2), Vec2(-3, 0),
                          Vec2(-2, 0), Vec2(-2, 1), Vec2(-1, 0)});
  CHECK(boundary_d_values(b) == b.cycle);

  auto dev = develop_boundary(b);
  CHECK(dev.monodromy.lin == cut.glue.lin);
  CHECK(dev.monodromy.tr == cut.glue.tr);
  CHECK(trace(dev.monodromy.lin) == trace(monodromy(b.cycle)));
  REQUIRE(dev.comps.size() == 4);
  CHECK(dev.comps[3].len == 2);  // both halves develop into one straight run
  REQUIRE(dev.pieces.size() == 5);
  CHECK(dev.pieces[4].chart == cut.glue);
  CHECK(error_code_of([&] { develop_boundary(b, 4); }) == Err::AnchorInvalid);
}

TEST_CASE("blow-ups of larger size consume length but add one to d") {
  AlmostToricBase b = internal_blowup(big_rect(), 0, 2, 1);
  CHECK(b.cycle == Cycle{{1, 0, 0, 0}});
  CHECK(b.lengths == std::vector<Int>{5, 7, 7, 7});
  CHECK(b.cuts[0].apex == Vec2(-2, 1));
  CHECK(b.outline.v.size() == 7);
  CHECK(trace(develop_boundary(b).monodromy.lin) ==
        trace(monodromy(b.cycle)));

  // The base may end exactly at a corner.
  AlmostToricBase tail = internal_blowup(big_rect(), 0, 3, 4);
  CHECK(tail.cuts[0].apex == Vec2(-3, 4));
  CHECK(tail.lengths[0] == 4);
}

TEST_CASE("blow-up input validation") {
  AlmostToricBase b = small_rect();
  CHECK(error_code_of([&] { internal_blowup(b, 4, 1, 0); }) ==
        Err::IndexOutOfRange);
  CHECK(error_code_of([&] { internal_blowup(b, 0, 0, 0); }) == Err::BadInput);
  CHECK(error_code_of([&] { internal_blowup(b, 0, 1, -1); }) == Err::BadInput);
  CHECK(error_code_of([&] { internal_blowup(b, 0, 3, 0); }) ==
        Err::EdgeTooShort);
  CHECK(error_code_of([&] { internal_blowup(b, 0, 1, 2); }) ==
        Err::EdgeTooShort);

  // No interior room on a minimal triangle.
  AlmostToricBase tri =
      moment_polygon(fan_from_toric_cycle(Cycle{{-1, -1, -1}}), {1, 1, 1});
  CHECK(error_code_of([&] { internal_blowup(tri, 0, 1, 0); }) ==
        Err::DoesNotFit);

  // A base interval may not span an existing cut anchor.
  AlmostToricBase notched = internal_blowup(small_rect(), 3, 1, 1);
  CHECK(error_code_of([&] { internal_blowup(notched, 3, 2, 0); }) ==
        Err::DoesNotFit);
}

TEST_CASE("node smoothing merges two components across a slit") {
  AlmostToricBase b = node_smoothing(small_rect(), 0, 1);
  CHECK(b.components() == 3);
  CHECK(b.cycle == Cycle{{-2, 0, 0}});
  CHECK(b.lengths == std::vector<Int>{5, 2, 3});
  REQUIRE(b.cuts.size() == 1);
  const Cut& cut = b.cuts[0];
  CHECK(cut.kind == Cut::Kind::Smoothing);
  CHECK(cut.base_a == Vec2(0, 2));   // the old corner
  CHECK(cut.apex == Vec2(-1, 1));    // the slit tip
  CHECK(cut.glue.lin == (Mat2{0, 1, -1, 2}));
  CHECK(cut.glue(Vec2(0, 2)) == Vec2(0, 2));
  CHECK(cut.glue(Vec2(-1, 1)) == Vec2(-1, 1));
  CHECK(b.singular_points == std::vector<Vec2>{Vec2(-1, 1)});
  // The slit bounds no area, so the outline is still the rectangle.
  CHECK(b.outline.v.size() == 4);
  CHECK(boundary_d_values(b) == b.cycle);
  CHECK(trace(develop_boundary(b).monodromy.lin) ==
        trace(monodromy(b.cycle)));
}

TEST_CASE("node smoothing input validation and collisions") {
  AlmostToricBase b = small_rect();
  CHECK(error_code_of([&] { node_smoothing(b, 4, 1); }) ==
        Err::IndexOutOfRange);
  CHECK(error_code_of([&] { node_smoothing(b, 0, 0); }) == Err::BadInput);
  // Slit tip escapes the rectangle.
  CHECK(error_code_of([&] { node_smoothing(b, 0, 3); }) == Err::CutCollision);

  // A blow-up base placed on the corner consumes it.
  AlmostToricBase eaten = internal_blowup(small_rect(), 1, 1, 0);
  CHECK(error_code_of([&] { node_smoothing(eaten, 0, 1); }) ==
        Err::CutCollision);

  // The slit may not pass through a singular point...
  AlmostToricBase notched = internal_blowup(small_rect(), 3, 1, 1);
  CHECK(error_code_of([&] { node_smoothing(notched, 2, 1); }) ==
        Err::CutCollision);
  CHECK(error_code_of([&] { node_smoothing(notched, 2, 2); }) ==
        Err::CutCollision);

  // ...nor touch an existing slit.
  AlmostToricBase once = node_smoothing(small_rect(), 0, 1);
  CHECK(error_code_of([&] { node_smoothing(once, 2, 1); }) ==
        Err::CutCollision);

  // A zero-length side cannot be smoothed.
  AlmostToricBase flat = charge3_base(0);
  CHECK(flat.lengths[0] == 0);
  CHECK(error_code_of([&] { node_smoothing(flat, 0, 1); }) ==
        Err::CutCollision);
}

TEST_CASE("the rectangle recipe reaches the (4, 6, 5) boundary") {
  AlmostToricBase b = figure6_base();
  CHECK(b.cycle == Cycle{{4, 6, 5}});
  CHECK(b.lengths == std::vector<Int>{8, 1, 2});
  CHECK(b.components() == 3);
  CHECK(b.cuts.size() == 18);
  CHECK(b.singular_points.size() == 18);
  CHECK(charge(b.cycle) == 18);
  CHECK(boundary_d_values(b) == Cycle{{4, 6, 5}});

  auto dev = develop_boundary(b);
  REQUIRE(dev.comps.size() == 3);
  CHECK(dev.comps[0].len == 8);
  CHECK(dev.comps[1].len == 1);
  CHECK(dev.comps[2].len == 2);
  CHECK(trace(dev.monodromy.lin) == 105);
  CHECK(trace(monodromy(b.cycle)) == 105);
  // The trace is independent of where the development is anchored.
  CHECK(trace(develop_boundary(b, 1).monodromy.lin) == 105);
  CHECK(trace(develop_boundary(b, 2).monodromy.lin) == 105);

  // The construction is deterministic.
  AlmostToricBase again = figure6_base();
  CHECK(again.singular_points == b.singular_points);
  CHECK(again.outline.v == b.outline.v);
}

TEST_CASE("full-length blow-ups drive every length to zero") {
  for (int which : {0, 1}) {
    CAPTURE(which);
    AlmostToricBase b = charge3_base(which);
    CHECK(b.cycle == Cycle{{3, 2, 2, 2, 3, 2, 2, 2, 2, 2, 2}});
    CHECK(cycles_equal(b.cycle, dual_cycle(Cycle{{6, 9}})));
    CHECK(charge(b.cycle) == 3);
    CHECK(b.cuts.size() == 3);
    for (const Int& m : b.lengths) CHECK(m == 0);
    CHECK(error_code_of([&] { boundary_d_values(b); }) == Err::EmptyBoundary);
  }

  // The first recipe shares one apex between two cuts; the second rests an
  // apex on an earlier leg instead.
  AlmostToricBase b = charge3_base(0);
  CHECK(b.singular_points == std::vector<Vec2>{Vec2(-1, -1), Vec2(-1, -2)});
  CHECK(b.outline.v.size() == 6);  // the shared apex pinches the outline
  AlmostToricBase b2 = charge3_base(1);
  CHECK(b2.singular_points ==
        std::vector<Vec2>{Vec2(-4, -4), Vec2(-5, -8), Vec2(-5, -10)});

  // Partial progress leaves a component with zero length but a crossing.
  Cycle c{{3, 2, 1, 2, 3, 1, 2, 2, 2, 2, 1}};
  auto rays = fan_from_toric_cycle(c);
  AlmostToricBase mid = moment_polygon(rays, solve_lengths(rays, {2, 5, 10}));
  mid.relaxed_cuts = true;
  mid = internal_blowup(mid, 2, 1, 0);
  CHECK(error_code_of([&] { boundary_d_values(mid); }) == Err::Unsupported);

  // Without relaxed cuts the third blow-up has nowhere to go.
  AlmostToricBase strict =
      moment_polygon(rays, solve_lengths(rays, {2, 5, 10}));
  strict = internal_blowup(strict, 2, 1, 0);
  strict = internal_blowup(strict, 5, 1, 0);
  try {
    internal_blowup(strict, 10, 1, 0);
    FAIL("expected a throw");
  } catch (const Error& e) {
    CHECK(e.code() == Err::DoesNotFit);
    CHECK(std::string(e.what()).find("relaxed") != std::string::npos);
  }

  // Same for the second recipe: its last cut must rest on an earlier leg.
  Cycle c2{{3, 2, 2, 1, 3, 2, 1, 2, 2, 2, 1}};
  auto rays2 = fan_from_toric_cycle(c2);
  AlmostToricBase strict2 =
      moment_polygon(rays2, solve_lengths(rays2, {3, 6, 10}));
  strict2 = internal_blowup(strict2, 3, strict2.lengths[3], 0);
  strict2 = internal_blowup(strict2, 6, strict2.lengths[6], 0);
  CHECK(error_code_of([&] {
          internal_blowup(strict2, 10, strict2.lengths[10], 0);
        }) == Err::DoesNotFit);
}

TEST_CASE("random toric polygons develop with trivial monodromy") {
  Rng rng(20260813u);
  int blown = 0;
  for (int iter = 0; iter < 60; ++iter) {
    auto [c, m] = random_toric_polygon(rng, iter % 9);
    CAPTURE(format_cycle(c));
    AlmostToricBase b = moment_polygon(fan_from_toric_cycle(c), m);
    REQUIRE(b.cycle == c);
    CHECK(charge(b.cycle) == 0);
    auto dev = develop_boundary(b);
    CHECK(dev.monodromy.lin == Mat2::identity());
    CHECK(dev.monodromy.tr == Vec2(0, 0));

    // Sprinkle unit blow-ups wherever they fit.
    for (int k = 0; k < 6; ++k) {
      const std::size_t e = std::uniform_int_distribution<std::size_t>(
          0, b.components() - 1)(rng);
      const long len = to_i64(b.lengths[e]);
      if (len < 1) continue;
      const long off =
          std::uniform_int_distribution<long>(0, len - 1)(rng);
      try {
        AlmostToricBase nb = internal_blowup(b, e, 1, off);
        CHECK(charge(nb.cycle) == charge(b.cycle) + 1);
        CHECK(nb.singular_points.size() ==
              static_cast<std::size_t>(to_i64(charge(nb.cycle))));
        CHECK(trace(develop_boundary(nb).monodromy.lin) ==
              trace(monodromy(nb.cycle)));
        b = std::move(nb);
        ++blown;
      } catch (const Error& err) {
        if (err.code() != Err::DoesNotFit && err.code() != Err::EdgeTooShort)
          throw;
      }
    }
  }
  CHECK(blown > 120);
}
