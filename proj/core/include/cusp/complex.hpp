// Unimodular triangulations of assembled surfaces, vertex stars, the local
// flip rewrite, and the final verification report.
//
// A TriComplex is an oriented triangulated surface built from at most two
// planar charts: the surgered base region and (when present) the cone over
// the developed boundary. Every face is a counterclockwise lattice triangle
// of twice-area 1 in its chart. Wherever two faces meet across an identified
// curve -- blow-up cut legs, node-smoothing slits, the cone seam, or the
// base/cone boundary -- the halfedge pair carries the exact affine transition
// that maps the twin's chart into this one, so neighbour positions can always
// be pulled into a common chart.
//
// Coordinates in a complex are plain 64-bit integers: triangulations are by
// far the largest objects in the library (a refined sphere can run to a
// million faces) and every chart stays in a tiny coordinate range. The
// conversion from the arbitrary-precision inputs is checked, never truncated.
#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "cusp/compactify.hpp"
#include "cusp/cycles.hpp"
#include "cusp/error.hpp"
#include "cusp/geom.hpp"
#include "cusp/surgery.hpp"

namespace cusp {

// ---------------------------------------------------------------------------
// Exact 64-bit planar primitives (the triangulation fast path).

struct P64 {
  std::int64_t x{0}, y{0};

  friend P64 operator+(P64 u, P64 v) { return {u.x + v.x, u.y + v.y}; }
  friend P64 operator-(P64 u, P64 v) { return {u.x - v.x, u.y - v.y}; }
  friend P64 operator*(std::int64_t s, P64 v) { return {s * v.x, s * v.y}; }
  friend bool operator==(P64 u, P64 v) { return u.x == v.x && u.y == v.y; }
  friend bool operator!=(P64 u, P64 v) { return !(u == v); }
  friend bool operator<(P64 u, P64 v) {
    return u.x != v.x ? u.x < v.x : u.y < v.y;
  }
};

inline std::int64_t cross64(P64 u, P64 v) { return u.x * v.y - u.y * v.x; }

// Affine map p |-> [[a,b],[c,d]] p + (tx,ty) with integer entries.
struct Aff64 {
  std::int64_t a{1}, b{0}, c{0}, d{1}, tx{0}, ty{0};

  static Aff64 identity() { return {}; }
  P64 operator()(P64 p) const {
    return {a * p.x + b * p.y + tx, c * p.x + d * p.y + ty};
  }
  bool is_identity() const {
    return a == 1 && b == 0 && c == 0 && d == 1 && tx == 0 && ty == 0;
  }
  friend bool operator==(const Aff64& f, const Aff64& g) {
    return f.a == g.a && f.b == g.b && f.c == g.c && f.d == g.d &&
           f.tx == g.tx && f.ty == g.ty;
  }
};

// compose64(f, g) = f after g. Inverse requires det = +-1.
Aff64 compose64(const Aff64& f, const Aff64& g);
Aff64 inverse64(const Aff64& f);

// Checked conversions to and from the arbitrary-precision types.
P64 to_p64(const Vec2& v);          // requires a lattice point in i64 range
Vec2 to_vec2(P64 p);
Aff64 to_aff64(const AffineMap& m);  // requires integral entries
AffineMap to_affine(const Aff64& m);

// ---------------------------------------------------------------------------
// The complex.

enum class Chart : std::uint8_t { Base = 0, Cone = 1 };

// A corner is one chart position. Several corners can name the same surface
// vertex (the two banks of a cut, the two sides of the cone seam, a pinched
// boundary point); `vertex` is the identified surface-vertex id.
struct TriCorner {
  P64 pos;
  Chart chart{Chart::Base};
  bool singular{false};
  std::int32_t vertex{-1};
};

// Sentinel for "d-value not computed / free boundary edge".
inline constexpr std::int64_t kNoD = std::numeric_limits<std::int64_t>::min();

struct TriComplex {
  std::vector<TriCorner> corners;
  // Counterclockwise faces as corner-id triples. Halfedge h = 3*f + k runs
  // from faces[f][k] to faces[f][(k+1)%3]; the opposite corner is
  // faces[f][(k+2)%3].
  std::vector<std::array<std::int32_t, 3>> faces;
  std::vector<std::int32_t> twin;  // per halfedge; -1 on a free boundary
  // Chart transitions on identified halfedges: transition[h] maps the twin
  // face's chart into h's chart. Absent means the identity (same chart).
  std::unordered_map<std::int32_t, Aff64> transition;
  std::vector<std::int64_t> d;  // per-halfedge d-value; kNoD until computed
  std::int32_t vertex_count{0};
  std::optional<std::int32_t> v0;  // the cusp vertex, when the surface closes
  Int refinement{1};

  // -- halfedge helpers -----------------------------------------------------
  static std::int32_t face_of(std::int32_t h) { return h / 3; }
  static std::int32_t next(std::int32_t h) { return h - h % 3 + (h + 1) % 3; }
  static std::int32_t prev(std::int32_t h) { return h - h % 3 + (h + 2) % 3; }
  std::int32_t corner_from(std::int32_t h) const {
    return faces[h / 3][h % 3];
  }
  std::int32_t corner_to(std::int32_t h) const {
    return faces[h / 3][(h + 1) % 3];
  }
  std::int32_t corner_opp(std::int32_t h) const {
    return faces[h / 3][(h + 2) % 3];
  }
  std::int32_t from(std::int32_t h) const {
    return corners[corner_from(h)].vertex;
  }
  std::int32_t to(std::int32_t h) const { return corners[corner_to(h)].vertex; }
  P64 pos(std::int32_t corner) const { return corners[corner].pos; }
  Aff64 cross_map(std::int32_t h) const {
    auto it = transition.find(h);
    return it == transition.end() ? Aff64::identity() : it->second;
  }

  std::size_t face_count() const { return faces.size(); }
  std::size_t halfedge_count() const { return 3 * faces.size(); }
  // Twinned pairs count once; free boundary halfedges count once each.
  std::size_t edge_count() const;
  bool closed() const;  // every halfedge twinned

  // First outgoing halfedge of each surface vertex (computed on demand).
  std::vector<std::int32_t> first_out() const;
};

// The star of a vertex: its emanating edges' d-values in counterclockwise
// rotation order (a cycle, so defined up to rotation).
struct Star {
  std::int32_t center{-1};
  bool singular{false};
  Cycle cycle;
  Int charge{};          // 12 + sum(d_i - 3); 0 for a nonsingular vertex
  Mat2 local_monodromy;  // product of [[0,1],[-1,d_i]]; conjugacy-class data
};

struct TypeIIIReport {
  bool closed{false};
  bool triple_point_ok{false};  // d_ij + d_ji == 2 on every edge
  bool sphere_ok{false};        // connected and V - E + F == 2
  bool charges_ok{false};       // total 24 and every nonsingular vertex 0
  bool v0_negative_definite{false};
  bool v0_matches_dual{false};
  bool v0_word_ok{false};  // R/L word of the star monodromy matches the
                           // product of [[0,-1],[1,d'_i]] over the dual
  Int charge_total{};
  Cycle v0_cycle;
  std::size_t vertex_count{0}, edge_count{0}, face_count{0};
  std::size_t v0_edge_count{0};  // as reached by the rewrite; not minimal
  std::vector<Star> stars;       // v0 first (when present), then the other
                                 // singular vertices in vertex-id order
  std::vector<std::string> failures;  // human-readable failed checks

  bool ok() const {
    return closed && triple_point_ok && sphere_ok && charges_ok &&
           v0_negative_definite && v0_matches_dual && v0_word_ok;
  }
};

// ---------------------------------------------------------------------------
// Construction.

// Unimodular triangulation of one simple counterclockwise lattice polygon.
// `marks` are extra lattice points of the closed region forced to appear as
// vertices. Every boundary lattice point becomes a vertex. Throws
// NonIntegralInput for non-lattice input, BadInput for a non-simple polygon.
TriComplex triangulate_region(const LatticePolygon& poly,
                              const std::vector<Vec2>& marks = {});

// Triangulates the surgered base region alone. Cut identifications become
// twinned halfedges with their gluing transitions; boundary pieces stay free.
// When every component length is zero the result is already a closed surface
// and v0 is the vertex the collapsed boundary merges into. `marks` as above.
TriComplex triangulate(const AlmostToricBase& b,
                       const std::vector<Vec2>& marks = {});

// Triangulates the assembled sphere: base region plus cone, glued along the
// developed boundary, seam identified by the cone monodromy. All distinguished
// points must be integral (the surface must be refined); v0 is the cone apex.
TriComplex triangulate(const ClosedSurface& s);

// ---------------------------------------------------------------------------
// Operations.

// Fills d on every twinned halfedge: d * e_ik = e_ij + e_il where j, l are
// the opposite corners of the two faces at the edge, the far one pulled
// through the transition. Free boundary halfedges keep kNoD.
TriComplex edge_d_values(TriComplex t);

// Star of a surface vertex; requires d computed and a full rotation (interior
// or closed-surface vertex). Throws Unsupported at a free-boundary vertex.
Star star(const TriComplex& t, std::int32_t v);

// Flips edges at v with d = 1 (their two faces form a unit square) until none
// remain. Each flip drops the edge count at v by one. Requires d computed;
// maintains d-values locally.
TriComplex minimize_star(TriComplex t, std::int32_t v);

// Cycle-level shadow of surgeries on a star: an internal blow-up in the base
// merges two adjacent star entries (node smoothing on the star, index i and
// i+1 -> d_i + d_{i+1} - 2); a node smoothing in the base increments one
// entry (blow-up on the star). Throws IndexOutOfRange.
Cycle expected_star_cycle(const Cycle& toric_star,
                          const std::vector<CycleSurgery>& incident);

// Runs every check on a complex that should be a closed type III surface:
// triple point formula on all edges, Euler characteristic and connectivity,
// charge total 24 with nonsingular vertices at 0, and the three v0 checks
// against the expected dual cycle. Never throws on a failed check -- the
// report carries the failures.
TypeIIIReport verify_type_iii(const TriComplex& t, const Cycle& expected_dual);

}  // namespace cusp
