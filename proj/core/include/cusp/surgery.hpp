// Almost-toric bases: moment polygons of toric cycles plus the two surgeries
// (internal blow-up, node smoothing) that turn them into the base of an
// anticanonical pair, kept as one planar lattice region with identified cuts.
//
// Geometry conventions (shared with the rest of the library):
//   * the boundary is walked counterclockwise, interior on the left;
//   * z_i denotes the forward (ccw) primitive direction of component i, so at
//     a corner det(z_i, z_{i+1}) = +1 and the d-values satisfy
//     d_i * z_i = z_{i-1} + z_{i+1} in a chart around component i;
//   * each cut stores the affine gluing applied when the ccw walk crosses its
//     boundary anchor: charts after the crossing are pulled back through it.
#pragma once

#include <cstddef>
#include <variant>
#include <vector>

#include "cusp/cycles.hpp"
#include "cusp/geom.hpp"

namespace cusp {

// --------------------------------------------------------------------------
// Fans and moment polygons.

// Rays w_0=(1,0), w_1=(0,1), w_{i+1} = d_i*w_i - w_{i-1}; requires the
// recurrence to close up cyclically with winding number exactly 1.
// Throws NotToric otherwise.
std::vector<Vec2> fan_from_toric_cycle(const Cycle& c);

// Boundary edge direction of the moment polygon: the ray rotated +90 degrees.
Vec2 edge_direction(const Vec2& ray);

// Minimal positive integer lengths supported exactly on `support` with
// Sum m_i * edge_direction(rays[i]) = 0. Throws NoSolution if none exists.
std::vector<Int> solve_lengths(const std::vector<Vec2>& rays,
                               const std::vector<std::size_t>& support);

// --------------------------------------------------------------------------
// The base and its boundary walk.

struct BoundaryEdge {
  Vec2 direction;  // planar direction of the component's first piece
  Int length;      // total lattice length (0 allowed)
  int component;
};

struct Cut {
  enum class Kind { Blowup, Smoothing };
  Kind kind{};
  Vec2 apex;    // the singular point introduced by the surgery
  Vec2 base_a;  // blow-up: base corner reached first on the ccw walk;
                // smoothing: the boundary anchor corner (== base_b)
  Vec2 base_b;
  Vec2 e1, e2;  // blow-up: primitive leg directions with apex + size*e1 =
                // base_a and e2 = e1 + edge dir; smoothing: e1 = primitive
                // direction apex -> anchor and e2 = -y (the reversed incoming
                // component direction), the basis expressing the gluing
  Int size;     // blow-up: lattice size of the removed triangle;
                // smoothing: lattice length n of the slit
  int component{};  // component index at creation time
  AffineMap glue;   // chart transition for a ccw crossing of the anchor
  // Identified chains: glue maps chain_from[t] onto chain_to[t] exactly.
  // Blow-up: chain_from = apex..base_b leg, chain_to = apex..base_a leg.
  // Smoothing: both equal the slit anchor..apex (fixed pointwise).
  std::vector<Vec2> chain_from, chain_to;
};

struct WalkPiece {  // straight positive-length run on one boundary component
  Vec2 start;
  Vec2 dir;  // primitive
  Int len;   // > 0
  int component;
};
struct WalkCross {  // the walk passes the anchor of a cut
  std::size_t cut;
  int component;
};
struct WalkZero {  // marker carrying the structural direction of a
  Vec2 at;         // zero-length component
  Vec2 dir;
  int component;
};
using WalkItem = std::variant<WalkPiece, WalkCross, WalkZero>;

struct AlmostToricBase {
  LatticePolygon outline;           // planar region incl. blow-up notches
  std::vector<WalkItem> walk;       // cyclic ccw boundary walk
  std::vector<Cut> cuts;
  std::vector<Vec2> singular_points;
  Cycle cycle;                      // boundary d-values (cycle bookkeeping)
  std::vector<Int> lengths;         // per-component lattice lengths
  Int refinement{1};
  bool relaxed_cuts{false};  // cuts may lean on earlier cut legs and apexes

  std::size_t components() const { return cycle.d.size(); }
  std::vector<BoundaryEdge> boundary() const;
};

// Counterclockwise lattice polygon with edge i in direction
// edge_direction(rays[i]) of lattice length lengths[i].
// Throws NonClosing / Degenerate.
AlmostToricBase moment_polygon(const std::vector<Vec2>& rays,
                               const std::vector<Int>& lengths);

// Remove a triangle of the given lattice size resting on component `edge`
// at `offset` (lattice units from the component's walk start) and glue its
// legs; d-value of the component increases by 1, its length drops by size.
// The interior apex is searched deterministically; throws EdgeTooShort /
// DoesNotFit. Pure: returns the new base.
AlmostToricBase internal_blowup(const AlmostToricBase& b, std::size_t edge,
                                const Int& size, const Int& offset);

// Slit from the corner between components `vertex` and `vertex`+1 to the
// interior point corner + n*(x+y) and glue the banks; the two components
// merge into one straight component of length m_i + m_{i+1} and d-value
// d_i + d_{i+1} - 2. Throws CutCollision. Pure: returns the new base.
AlmostToricBase node_smoothing(const AlmostToricBase& b, std::size_t vertex,
                               const Int& n);

// Boundary d-values measured geometrically by developing the boundary once
// around (crossing cuts through their gluings). Throws EmptyBoundary if all
// lengths are zero; Unsupported if a zero-length component carries crossings.
Cycle boundary_d_values(const AlmostToricBase& b);

// --------------------------------------------------------------------------
// Development of the quotient boundary into a single chart.

struct DevPiece {
  std::size_t walk_index;  // index into AlmostToricBase::walk (a WalkPiece)
  AffineMap chart;         // planar coordinates -> developed chart
};
struct DevComponent {
  int component;
  Vec2 start;  // developed start corner
  Vec2 dir;    // developed primitive direction
  Int len;     // total lattice length
};
struct Development {
  AffineMap monodromy;              // full ccw loop from the anchor corner
  std::vector<DevComponent> comps;  // one entry per component, walk order
  std::vector<DevPiece> pieces;     // chart of every piece, walk order
  std::size_t anchor_component{};
};

// Develops the boundary starting at the walk-start corner of the given
// component with the identity chart. Throws AnchorInvalid.
Development develop_boundary(const AlmostToricBase& b,
                             std::size_t anchor_component = 0);

}  // namespace cusp
