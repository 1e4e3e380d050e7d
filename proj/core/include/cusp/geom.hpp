// Exact planar lattice geometry: vectors, 2x2 integer matrices, affine maps,
// and the exact predicates the surgery/triangulation code relies on.
//
// Conventions used throughout the library:
//   * cross(u, v) = u.x*v.y - u.y*v.x ("det of the 2x2 with columns u,v");
//     cross > 0 means v lies counterclockwise of u.
//   * polygons are simple and listed counterclockwise unless stated otherwise
//     (polygon_area2 > 0).
//   * a "lattice" point/vector has integral coordinates; a primitive vector
//     has coprime integral coordinates.
#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "cusp/error.hpp"
#include "cusp/numeric.hpp"

namespace cusp {

struct Vec2 {
  Rat x{}, y{};

  Vec2() = default;
  Vec2(Rat xx, Rat yy) : x(std::move(xx)), y(std::move(yy)) {}
  Vec2(int xx, int yy) : x(xx), y(yy) {}
  Vec2(const Int& xx, const Int& yy) : x(Rat(xx)), y(Rat(yy)) {}

  friend Vec2 operator+(const Vec2& u, const Vec2& v) {
    return {u.x + v.x, u.y + v.y};
  }
  friend Vec2 operator-(const Vec2& u, const Vec2& v) {
    return {u.x - v.x, u.y - v.y};
  }
  friend Vec2 operator-(const Vec2& u) { return {-u.x, -u.y}; }
  friend Vec2 operator*(const Rat& s, const Vec2& v) {
    return {s * v.x, s * v.y};
  }
  friend Vec2 operator*(const Int& s, const Vec2& v) {
    return {Rat(s) * v.x, Rat(s) * v.y};
  }
  friend bool operator==(const Vec2& u, const Vec2& v) {
    return u.x == v.x && u.y == v.y;
  }
  friend bool operator!=(const Vec2& u, const Vec2& v) { return !(u == v); }
  // Lexicographic; used only to make set-like outputs deterministic.
  friend bool operator<(const Vec2& u, const Vec2& v) {
    if (u.x != v.x) return u.x < v.x;
    return u.y < v.y;
  }
};

inline Rat cross(const Vec2& u, const Vec2& v) { return u.x * v.y - u.y * v.x; }
inline Rat dot(const Vec2& u, const Vec2& v) { return u.x * v.x + u.y * v.y; }
inline bool is_lattice(const Vec2& v) {
  return is_integral(v.x) && is_integral(v.y);
}

// Integral vector content and primitive direction. Requires v lattice, v != 0.
Int content(const Vec2& v);
Vec2 primitive(const Vec2& v);

// Row-major 2x2 integer matrix [[a, b], [c, d]].
struct Mat2 {
  Int a{1}, b{0}, c{0}, d{1};

  static Mat2 identity() { return {}; }

  friend Mat2 operator*(const Mat2& m, const Mat2& n) {
    return {m.a * n.a + m.b * n.c, m.a * n.b + m.b * n.d,
            m.c * n.a + m.d * n.c, m.c * n.b + m.d * n.d};
  }
  friend Vec2 operator*(const Mat2& m, const Vec2& v) {
    return {Rat(m.a) * v.x + Rat(m.b) * v.y, Rat(m.c) * v.x + Rat(m.d) * v.y};
  }
  friend bool operator==(const Mat2& m, const Mat2& n) {
    return m.a == n.a && m.b == n.b && m.c == n.c && m.d == n.d;
  }
  friend bool operator!=(const Mat2& m, const Mat2& n) { return !(m == n); }
};

inline Int det2(const Mat2& m) { return m.a * m.d - m.b * m.c; }
inline Int trace(const Mat2& m) { return m.a + m.d; }

// Inverse of a matrix with det = +-1 (the only invertible case over Z).
Mat2 inverse_unimodular(const Mat2& m);

// Left-to-right product m[0] * m[1] * ... * m[k-1]. Empty product = identity.
Mat2 mat_product(const std::vector<Mat2>& ms);

Mat2 mat_pow(const Mat2& m, const Int& k);  // integer k, negative needs |det|=1

// Affine map p |-> lin * p + tr. 'tr' may be rational: fixed points of
// integral maps are genuinely rational.
struct AffineMap {
  Mat2 lin{};
  Vec2 tr{};

  static AffineMap identity() { return {}; }
  Vec2 operator()(const Vec2& p) const { return lin * p + tr; }
  friend bool operator==(const AffineMap& f, const AffineMap& g) {
    return f.lin == g.lin && f.tr == g.tr;
  }
};

// compose(f, g) = f after g:  (f o g)(p) = f(g(p)).
AffineMap compose(const AffineMap& f, const AffineMap& g);
AffineMap affine_inverse(const AffineMap& f);

// ---------------------------------------------------------------------------
// Exact predicates (all arguments rational; no tolerances anywhere).

// Sign of cross(b - a, c - a): +1 if a,b,c counterclockwise, 0 collinear.
int orient(const Vec2& a, const Vec2& b, const Vec2& c);

// Closed segment membership.
bool on_segment(const Vec2& p, const Vec2& a, const Vec2& b);

// Exact segment intersection classification for closed segments [a,b], [c,d].
enum class SegX { None, Point, Overlap };
struct SegHit {
  SegX kind = SegX::None;
  Vec2 point{};  // set when kind == Point
};
SegHit seg_intersect(const Vec2& a, const Vec2& b, const Vec2& c,
                     const Vec2& d);

// Point-vs-simple-polygon location (polygon in either orientation).
enum class PolyLoc { Outside, Boundary, Inside };
PolyLoc point_in_polygon(const Vec2& p, const std::vector<Vec2>& poly);

// ---------------------------------------------------------------------------
// Lattice polygons.

// Simple polygon with integral vertices, counterclockwise.
struct LatticePolygon {
  std::vector<Vec2> v;
};

// Signed twice-area (shoelace). Integral for lattice polygons.
Rat polygon_area2_rat(const std::vector<Vec2>& poly);
Int polygon_area2(const LatticePolygon& poly);

bool polygon_is_simple(const std::vector<Vec2>& poly);

// Throws BadInput unless poly is simple, counterclockwise and integral.
void validate_lattice_polygon(const LatticePolygon& poly);

// All lattice points in the closed polygon, sorted lexicographically.
std::vector<Vec2> lattice_points(const LatticePolygon& poly);

}  // namespace cusp
