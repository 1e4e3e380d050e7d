// Closing an almost-toric base into a sphere: develop a collar of the
// boundary into a single chart, locate the fixed point of its monodromy,
// refine coordinates until that point is integral, and cap the boundary with
// the cone over the developed boundary curve (a "discrete hyperbola").
//
// All constructions are exact. The eigenlines of a hyperbolic monodromy are
// irrational and are never materialized; star-shapedness of the cone region
// is certified with integer orientation predicates on one period of the
// hyperbola, which suffices because the monodromy fixes the cone apex and
// preserves orientation.
#pragma once

#include <cstddef>
#include <vector>

#include "cusp/geom.hpp"
#include "cusp/surgery.hpp"

namespace cusp {

// Monodromy of a counterclockwise loop just inside the boundary: the chart
// transition accumulated by developing the boundary once around, anchored at
// the first positive-length component. Its linear part is conjugate to the
// product of the boundary d-value factors, so the trace exceeds 2 exactly
// when the boundary cycle is negative-definite.
// Throws EmptyBoundary when every component has length zero.
AffineMap collar_monodromy(const AlmostToricBase& b);

// The unique fixed point of m, with rational coordinates: the solution of
// (I - lin) v = tr. For det(lin) = 1 the system is solvable exactly when
// trace(lin) != 2, because det(I - lin) = 2 - trace(lin). The identity map
// fixes every point; by convention it reports the origin.
// Throws NotHyperbolic when there is no unique fixed point.
Vec2 fixed_point(const AffineMap& m);

// Developed images of the boundary corners over a number of monodromy
// periods in both directions: vertices[anchor_index() + j] is the developed
// corner preceding component j mod period, transported by the appropriate
// monodromy power. Consecutive edge directions form oriented lattice bases
// (the curve always turns by an interior angle below a half turn) and edge
// j has the lattice length of component j mod period.
struct DiscreteHyperbola {
  std::vector<Vec2> vertices;  // 2 * periods * period + 1 corners
  std::size_t period{};        // boundary components per monodromy period
  AffineMap monodromy;         // maps vertices[j] onto vertices[j + period]
  Int refinement{1};           // refinement level of the source base

  // Index of the developed start corner of component 0.
  std::size_t anchor_index() const { return (vertices.size() - 1) / 2; }
};

// Develops `periods` boundary periods in both directions from the start
// corner of component 0. Requires every component length positive: the
// corner conditions at collapsed components are not defined.
// Throws BadInput (periods = 0), EmptyBoundary, Unsupported (some but not
// all lengths zero).
DiscreteHyperbola discrete_hyperbola(const AlmostToricBase& b,
                                     std::size_t periods);

// Smallest k for which k * v0 is integral: the lcm of the two coordinate
// denominators.
Int choose_refinement(const Vec2& v0);

// Order-k refinement: every chart coordinate (and affine translation part)
// is scaled by k, so lattice lengths and cut sizes multiply by k while
// linear parts of gluings and all d-values are unchanged. Identified cut
// chains are rebuilt at the finer scale. Throws BadInput if k < 1.
AlmostToricBase refine(const AlmostToricBase& b, const Int& k);

// One period of the region between the discrete hyperbola and the fixed
// point of its monodromy, glued into a cone. The fundamental polygon lists
// the apex v0 first, then the hyperbola arc w_anchor, ..., w_{anchor+n} in
// boundary order (n = period); the identification maps the opening seam
// [v0, w_anchor] onto the closing seam [v0, w_{anchor+n}].
struct ConeDomain {
  LatticePolygon fundamental;  // v0, w_anchor, ..., w_{anchor+period}
  AffineMap identification;    // the monodromy; fixes v0
  Int refinement{1};

  Vec2 v0() const { return fundamental.v.front(); }
  std::size_t period() const { return fundamental.v.size() - 2; }
  // The hyperbola arc in boundary order (fundamental vertices 1..end).
  std::vector<Vec2> arc() const {
    return {fundamental.v.begin() + 1, fundamental.v.end()};
  }
};

// Order-k refinement of a cone domain (same scaling rule as for bases).
ConeDomain refine(const ConeDomain& c, const Int& k);

// Cone over one hyperbola period with the seam through vertex `anchor`.
// Certifies that the region beyond the hyperbola is star-shaped at v0 by
// checking that every fan triangle (v0, w_i, w_{i+1}) in the anchored period
// has one strict orientation; the signs are period-periodic because the
// monodromy fixes v0, so one period certifies the whole curve.
// Throws BadInput (v0 not integral or not fixed by the monodromy),
// NotHyperbolic (trace <= 2), IndexOutOfRange (anchor leaves less than one
// period), AnchorInvalid (v0 on an edge line, fan orientation flips, or the
// fundamental polygon self-intersects).
ConeDomain build_cone(const DiscreteHyperbola& h, const Vec2& v0,
                      std::size_t anchor);

// The closed sphere: a refined base whose boundary is capped by the cone.
// Arc edge i of the cone (fundamental vertices 1+i -> 2+i) is glued onto
// boundary component boundary_matching[i] of the base with the opposite
// orientation; matched edges have equal lattice length.
struct ClosedSurface {
  AlmostToricBase base;
  ConeDomain cone;
  std::vector<std::size_t> boundary_matching;  // cone arc edge -> component
};

// Matches the cone arc against the boundary of b edge-by-edge (lattice
// lengths and interior corner d-values, which are chart-independent) and
// assembles the closed surface. The singular set of the result is the base's
// singular set plus the cone apex. Throws ChainMismatch when the refinement
// levels differ or no cyclic alignment of the chains matches.
ClosedSurface assemble_sphere(const AlmostToricBase& b, const ConeDomain& c);

}  // namespace cusp
