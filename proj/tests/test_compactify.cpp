#include "cusp/compactify.hpp"

#include <cstddef>
#include <vector>

#include "cusp/cycles.hpp"
#include "cusp/error.hpp"
#include "cusp/geom.hpp"
#include "cusp/surgery.hpp"
#include "doctest.h"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace cusp;
using cusp::testing::charge3_base;
using cusp::testing::error_code_of;
using cusp::testing::figure6_base;
using cusp::testing::trace2_base;

namespace {

AlmostToricBase rect_7x5() {
  return moment_polygon(fan_from_toric_cycle(Cycle{{0, 0, 0, 0}}),
                        {7, 5, 7, 5});
}

// The figure-6 base refined until the monodromy fixed point is integral,
// together with that fixed point.
struct RefinedCollar {
  AlmostToricBase base;
  AffineMap monodromy;
  Vec2 v0;
  Int k;
};

RefinedCollar refined_figure6() {
  AlmostToricBase b = figure6_base();
  const Vec2 coarse = fixed_point(collar_monodromy(b));
  const Int k = choose_refinement(coarse);
  AlmostToricBase fine = refine(b, k);
  const AffineMap m = collar_monodromy(fine);
  const Vec2 v0 = fixed_point(m);
  return {std::move(fine), m, v0, k};
}

}  // namespace

TEST_CASE("collar monodromy of a fresh toric polygon is the identity") {
  CHECK(collar_monodromy(rect_7x5()) == AffineMap::identity());
  const auto p2 =
      moment_polygon(fan_from_toric_cycle(Cycle{{-1, -1, -1}}), {3, 3, 3});
  CHECK(collar_monodromy(p2) == AffineMap::identity());
}

TEST_CASE("collar monodromy requires a positive-length boundary") {
  // Fully blown-up bases have no boundary left: the collar degenerates.
  CHECK(error_code_of([] { collar_monodromy(charge3_base(0)); }) ==
        Err::EmptyBoundary);
}

TEST_CASE("collar monodromy of the figure-6 base matches the cycle word") {
  const AffineMap m = collar_monodromy(figure6_base());
  CHECK(trace(m.lin) == 105);
  CHECK(trace(m.lin) == trace(monodromy(Cycle{{4, 6, 5}})));
  CHECK(det2(m.lin) == 1);
}

TEST_CASE("boundary cycle (2,2,2) develops to a trace-2 collar") {
  const AlmostToricBase b = trace2_base();
  CHECK(boundary_d_values(b).d == std::vector<Int>{2, 2, 2});
  const AffineMap m = collar_monodromy(b);
  CHECK(trace(m.lin) == 2);
  CHECK(error_code_of([&] { fixed_point(m); }) == Err::NotHyperbolic);
}

TEST_CASE("fixed point of an affine map") {
  CHECK(fixed_point(AffineMap::identity()) == Vec2(0, 0));

  AffineMap m;
  m.lin = Mat2{2, 1, 1, 1};
  m.tr = Vec2(1, 0);
  const Vec2 v = fixed_point(m);
  CHECK(v == Vec2(0, -1));
  CHECK(m(v) == v);

  AffineMap shear;
  shear.lin = Mat2{1, 1, 0, 1};
  shear.tr = Vec2(5, -3);
  CHECK(error_code_of([&] { fixed_point(shear); }) == Err::NotHyperbolic);

  // The figure-6 collar fixed point is genuinely fixed, exactly.
  const AffineMap collar = collar_monodromy(figure6_base());
  const Vec2 v0 = fixed_point(collar);
  CHECK(collar(v0) == v0);
}

TEST_CASE("direction recurrence seeded like the hand computation") {
  // z3 = 6*z2 - z1 from the seed pair, then around the (4,6,5) cycle: every
  // consecutive pair must stay an oriented lattice basis.
  const std::vector<Int> d{4, 6, 5};
  std::vector<Vec2> z{{1, 0}, {0, 1}};
  CHECK(Int(6) * z[1] - z[0] == Vec2(-1, 6));
  for (std::size_t i = 1; i + 1 < 13; ++i)
    z.push_back(d[i % 3] * z[i] - z[i - 1]);
  CHECK(z[2] == Vec2(-1, 6));
  for (std::size_t i = 0; i + 1 < z.size(); ++i)
    CHECK(cross(z[i], z[i + 1]) == 1);
}

TEST_CASE("discrete hyperbola of the figure-6 boundary") {
  const AlmostToricBase b = figure6_base();
  const DiscreteHyperbola h = discrete_hyperbola(b, 2);
  CHECK(h.period == 3);
  CHECK(h.vertices.size() == 13);
  CHECK(h.anchor_index() == 6);
  CHECK(h.refinement == 1);
  for (std::size_t j = 0; j + 3 < h.vertices.size(); ++j)
    CHECK(h.monodromy(h.vertices[j]) == h.vertices[j + 3]);
  const std::vector<Int> lens{8, 1, 2};
  for (std::size_t j = 0; j + 1 < h.vertices.size(); ++j)
    CHECK(content(h.vertices[j + 1] - h.vertices[j]) == lens[j % 3]);

  // Requesting more periods extends the same vertex list on both sides.
  const DiscreteHyperbola wide = discrete_hyperbola(b, 3);
  CHECK(wide.vertices.size() == 19);
  for (std::size_t j = 0; j < h.vertices.size(); ++j)
    CHECK(wide.vertices[j + 3] == h.vertices[j]);
}

TEST_CASE("discrete hyperbola of a toric boundary repeats in place") {
  const DiscreteHyperbola h = discrete_hyperbola(rect_7x5(), 2);
  CHECK(h.period == 4);
  CHECK(h.monodromy == AffineMap::identity());
  for (std::size_t j = 0; j + 4 < h.vertices.size(); ++j)
    CHECK(h.vertices[j] == h.vertices[j + 4]);
}

TEST_CASE("discrete hyperbola input validation") {
  CHECK(error_code_of([] { discrete_hyperbola(rect_7x5(), 0); }) ==
        Err::BadInput);
  CHECK(error_code_of([] { discrete_hyperbola(charge3_base(1), 1); }) ==
        Err::EmptyBoundary);
  // One collapsed component among positive ones: corner data is undefined.
  const Cycle c{{3, 2, 1, 2, 3, 1, 2, 2, 2, 2, 1}};
  const auto rays = fan_from_toric_cycle(c);
  AlmostToricBase b = moment_polygon(rays, solve_lengths(rays, {2, 5, 10}));
  b.relaxed_cuts = true;
  b = internal_blowup(b, 2, b.lengths[2], 0);
  REQUIRE(b.lengths[2] == 0);
  CHECK(error_code_of([&] { discrete_hyperbola(b, 1); }) == Err::Unsupported);
  // The collar monodromy itself is still well-defined from a positive anchor
  // and sees the collapsed component's cut through its crossing.
  const Cycle after{{3, 2, 2, 2, 3, 1, 2, 2, 2, 2, 1}};
  CHECK(trace(collar_monodromy(b).lin) == trace(monodromy(after)));
}

TEST_CASE("refinement level for a rational fixed point") {
  CHECK(choose_refinement(Vec2(0, -1)) == 1);
  CHECK(choose_refinement(Vec2(Rat(1, 2), Rat(3, 4))) == 4);
  CHECK(choose_refinement(Vec2(Rat(5, 3), Rat(1, 2))) == 6);
}

TEST_CASE("refining a toric rectangle scales lengths and fixes d-values") {
  const AlmostToricBase b = rect_7x5();
  const AlmostToricBase r = refine(b, 2);
  CHECK(r.refinement == 2);
  CHECK(r.lengths == std::vector<Int>{14, 10, 14, 10});
  const std::vector<Vec2> want{{0, 0}, {0, 14}, {-10, 14}, {-10, 0}};
  CHECK(r.outline.v == want);
  CHECK(boundary_d_values(r).d == std::vector<Int>{0, 0, 0, 0});

  const AlmostToricBase same = refine(b, 1);
  CHECK(same.outline.v == b.outline.v);
  CHECK(same.lengths == b.lengths);
  CHECK(same.refinement == b.refinement);

  CHECK(error_code_of([&] { refine(b, 0); }) == Err::BadInput);
}

TEST_CASE("refining the figure-6 base preserves its combinatorics") {
  const AlmostToricBase b = figure6_base();
  const AlmostToricBase r = refine(b, 3);
  CHECK(r.refinement == 3);
  CHECK(r.lengths == std::vector<Int>{24, 3, 6});
  CHECK(boundary_d_values(r).d == std::vector<Int>{4, 6, 5});
  CHECK(r.singular_points.size() == b.singular_points.size());
  CHECK(r.cuts.size() == b.cuts.size());
  for (std::size_t i = 0; i < r.cuts.size(); ++i) {
    CHECK(r.cuts[i].size == b.cuts[i].size * 3);
    CHECK(Int(r.cuts[i].chain_to.size()) == r.cuts[i].size + 1);
    CHECK(r.cuts[i].glue.lin == b.cuts[i].glue.lin);
  }
  // The collar conjugates by the scaling, so its trace is unchanged and its
  // fixed point scales along.
  CHECK(trace(collar_monodromy(r).lin) == 105);
  CHECK(fixed_point(collar_monodromy(r)) ==
        Int(3) * fixed_point(collar_monodromy(b)));
  // Refining twice composes multiplicatively.
  const AlmostToricBase r6 = refine(refine(b, 2), 3);
  const AlmostToricBase r6b = refine(b, 6);
  CHECK(r6.outline.v == r6b.outline.v);
  CHECK(r6.lengths == r6b.lengths);
  CHECK(r6.singular_points == r6b.singular_points);
  CHECK(r6.refinement == r6b.refinement);
}

TEST_CASE("cone over the figure-6 boundary") {
  const RefinedCollar rc = refined_figure6();
  CAPTURE(rc.k);
  CHECK(is_lattice(rc.v0));
  CHECK(rc.base.refinement == rc.k);

  const DiscreteHyperbola h = discrete_hyperbola(rc.base, 2);
  CHECK(h.refinement == rc.k);
  // Every anchor with a full period in range works: the complement of the
  // hyperbola is star-shaped at the fixed point.
  for (std::size_t anchor = 0; anchor + 3 < h.vertices.size(); ++anchor) {
    const ConeDomain c = build_cone(h, rc.v0, anchor);
    CHECK(c.period() == 3);
    CHECK(c.fundamental.v.size() == 5);
    CHECK(c.v0() == rc.v0);
    CHECK(polygon_is_simple(c.fundamental.v));
    CHECK(c.identification(c.fundamental.v[1]) == c.fundamental.v.back());
    CHECK(content(c.fundamental.v[1] - rc.v0) ==
          content(c.fundamental.v.back() - rc.v0));
    CHECK(c.refinement == rc.k);
  }

  CHECK(error_code_of([&] { build_cone(h, rc.v0, 10); }) ==
        Err::IndexOutOfRange);
  CHECK(error_code_of([&] { build_cone(h, rc.v0 + Vec2(1, 0), 6); }) ==
        Err::BadInput);
  CHECK(error_code_of([&] {
          build_cone(h, Vec2(Rat(1, 2), Rat(0)), 6);
        }) == Err::BadInput);
}

TEST_CASE("cone building rejects degenerate monodromy and anchors") {
  // Toric boundary: identity monodromy is not hyperbolic.
  const DiscreteHyperbola flat = discrete_hyperbola(rect_7x5(), 1);
  CHECK(error_code_of([&] { build_cone(flat, Vec2(0, 0), 0); }) ==
        Err::NotHyperbolic);

  // Synthetic hyperbolic monodromy fixing the origin.
  DiscreteHyperbola h;
  h.monodromy.lin = Mat2{2, 1, 1, 1};
  h.monodromy.tr = Vec2(0, 0);

  // Apex on the edge line through (1,0) and (2,0).
  h.period = 1;
  h.vertices = {Vec2(1, 0), Vec2(2, 0)};
  CHECK(error_code_of([&] { build_cone(h, Vec2(0, 0), 0); }) ==
        Err::AnchorInvalid);

  // Fan orientation flips: the region is not star-shaped at the apex.
  h.period = 2;
  h.vertices = {Vec2(1, 0), Vec2(1, 1), Vec2(-1, -3)};
  CHECK(error_code_of([&] { build_cone(h, Vec2(0, 0), 0); }) ==
        Err::AnchorInvalid);
}

TEST_CASE("assembling the sphere matches chains edge-by-edge") {
  const RefinedCollar rc = refined_figure6();
  const DiscreteHyperbola h = discrete_hyperbola(rc.base, 1);
  const ConeDomain cone = build_cone(h, rc.v0, h.anchor_index());

  const ClosedSurface s = assemble_sphere(rc.base, cone);
  REQUIRE(s.boundary_matching.size() == 3);
  const std::vector<Vec2> arc = cone.arc();
  for (std::size_t i = 0; i < 3; ++i)
    CHECK(content(arc[i + 1] - arc[i]) ==
          s.base.lengths[s.boundary_matching[i]]);
  // 18 surgery points plus the cone apex close the count at 19.
  CHECK(s.base.singular_points.size() + 1 == 19);

  // Mismatched refinements are rejected in either direction.
  CHECK(error_code_of([&] { assemble_sphere(rc.base, refine(cone, 2)); }) ==
        Err::ChainMismatch);
  CHECK(error_code_of([&] {
          assemble_sphere(refine(rc.base, 2), cone);
        }) == Err::ChainMismatch);
}

TEST_CASE("assembly rejects chains that do not match the boundary") {
  // A synthetic period-1 cone against a three-component boundary.
  DiscreteHyperbola h1;
  h1.monodromy.lin = Mat2{2, 1, 1, 1};
  h1.monodromy.tr = Vec2(0, 0);
  h1.period = 1;
  h1.vertices = {Vec2(1, 0), Vec2(2, 1)};
  const ConeDomain narrow = build_cone(h1, Vec2(0, 0), 0);
  CHECK(error_code_of([&] { assemble_sphere(figure6_base(), narrow); }) ==
        Err::ChainMismatch);

  // Right period but wrong lattice lengths.
  DiscreteHyperbola h3;
  h3.monodromy.lin = Mat2{-1, -5, 1, 4};
  h3.monodromy.tr = Vec2(0, 0);
  h3.period = 3;
  h3.vertices = {Vec2(1, 0), Vec2(1, 1), Vec2(0, 1), Vec2(-1, 1)};
  const ConeDomain unit = build_cone(h3, Vec2(0, 0), 0);
  CHECK(error_code_of([&] { assemble_sphere(figure6_base(), unit); }) ==
        Err::ChainMismatch);
}
