#include "cusp/geom.hpp"

#include <algorithm>

namespace cusp {

Int content(const Vec2& v) {
  ensure(is_lattice(v), Err::BadInput, "content of non-lattice vector");
  Int g = int_gcd(num(v.x), num(v.y));
  ensure(g != 0, Err::BadInput, "content of zero vector");
  return g;
}

Vec2 primitive(const Vec2& v) {
  Int g = content(v);
  return {Rat(num(v.x) / g), Rat(num(v.y) / g)};
}

Mat2 inverse_unimodular(const Mat2& m) {
  Int det = det2(m);
  ensure(det == 1 || det == -1, Err::Internal,
         "inverse of non-unimodular matrix");
  // adj(m) / det; det = -1 flips all signs of the adjugate.
  if (det == 1) return {m.d, -m.b, -m.c, m.a};
  return {-m.d, m.b, m.c, -m.a};
}

Mat2 mat_product(const std::vector<Mat2>& ms) {
  Mat2 p = Mat2::identity();
  for (const Mat2& m : ms) p = p * m;
  return p;
}

Mat2 mat_pow(const Mat2& m, const Int& k) {
  if (k < 0) return mat_pow(inverse_unimodular(m), -k);
  Mat2 base = m, acc = Mat2::identity();
  Int e = k;
  while (e > 0) {
    if ((e & 1) != 0) acc = acc * base;
    base = base * base;
    e >>= 1;
  }
  return acc;
}

AffineMap compose(const AffineMap& f, const AffineMap& g) {
  // (f o g)(p) = f.lin * (g.lin * p + g.tr) + f.tr
  return {f.lin * g.lin, f.lin * g.tr + f.tr};
}

AffineMap affine_inverse(const AffineMap& f) {
  Mat2 inv = inverse_unimodular(f.lin);
  return {inv, -(inv * f.tr)};
}

int orient(const Vec2& a, const Vec2& b, const Vec2& c) {
  Rat x = cross(b - a, c - a);
  if (x > 0) return 1;
  if (x < 0) return -1;
  return 0;
}

bool on_segment(const Vec2& p, const Vec2& a, const Vec2& b) {
  if (orient(a, b, p) != 0) return false;
  // Collinear: box test suffices.
  return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) &&
         std::min(a.y, b.y) <= p.y && p.y <= std::max(a.y, b.y);
}

SegHit seg_intersect(const Vec2& a, const Vec2& b, const Vec2& c,
                     const Vec2& d) {
  int o1 = orient(a, b, c), o2 = orient(a, b, d);
  int o3 = orient(c, d, a), o4 = orient(c, d, b);

  if (o1 == 0 && o2 == 0) {
    // All four points collinear: the intersection is a (possibly empty,
    // possibly degenerate) sub-segment.
    Vec2 dir = (b != a) ? b - a : ((d != c) ? d - c : Vec2(1, 0));
    auto key = [&](const Vec2& p) { return dot(p - a, dir); };
    Rat lo1 = std::min(key(a), key(b)), hi1 = std::max(key(a), key(b));
    Rat lo2 = std::min(key(c), key(d)), hi2 = std::max(key(c), key(d));
    Rat lo = std::max(lo1, lo2), hi = std::min(hi1, hi2);
    if (lo > hi) return {SegX::None, {}};
    if (lo == hi) {
      // Single shared point; recover it.
      for (const Vec2& p : {a, b, c, d})
        if (key(p) == lo) return {SegX::Point, p};
      fail(Err::Internal, "collinear intersection bookkeeping");
    }
    return {SegX::Overlap, {}};
  }

  // General position: proper or endpoint intersection.
  if (o1 != o2 && o3 != o4 && (o1 != 0 || o2 != 0) && (o3 != 0 || o4 != 0)) {
    if (o1 == 0) return {SegX::Point, c};
    if (o2 == 0) return {SegX::Point, d};
    if (o3 == 0) return {SegX::Point, a};
    if (o4 == 0) return {SegX::Point, b};
    // Proper crossing: solve a + t(b-a) = c + s(d-c) exactly.
    Vec2 r = b - a, s = d - c;
    Rat denom = cross(r, s);
    Rat t = cross(c - a, s) / denom;
    return {SegX::Point, a + t * r};
  }
  // Touching cases where one endpoint lies on the other segment.
  if (o1 == 0 && on_segment(c, a, b)) return {SegX::Point, c};
  if (o2 == 0 && on_segment(d, a, b)) return {SegX::Point, d};
  if (o3 == 0 && on_segment(a, c, d)) return {SegX::Point, a};
  if (o4 == 0 && on_segment(b, c, d)) return {SegX::Point, b};
  return {SegX::None, {}};
}

PolyLoc point_in_polygon(const Vec2& p, const std::vector<Vec2>& poly) {
  ensure(poly.size() >= 3, Err::BadInput, "point_in_polygon: degenerate");
  std::size_t n = poly.size();
  // Boundary first (exact).
  for (std::size_t i = 0; i < n; ++i)
    if (on_segment(p, poly[i], poly[(i + 1) % n])) return PolyLoc::Boundary;
  // Crossing-number against the upward ray from p.
  int crossings = 0;
  for (std::size_t i = 0; i < n; ++i) {
    Vec2 a = poly[i], b = poly[(i + 1) % n];
    // Half-open in x to count each crossing exactly once.
    bool a_right = a.x > p.x, b_right = b.x > p.x;
    if (a_right == b_right) continue;
    // Edge spans the vertical line x = p.x; exact y at the crossing vs p.y.
    // sign of (y_cross - p.y) = sign of cross(b-a, p-a) corrected by x-order.
    Rat side = cross(b - a, p - a);
    if (a.x < b.x ? side < 0 : side > 0) ++crossings;
  }
  return (crossings % 2 == 1) ? PolyLoc::Inside : PolyLoc::Outside;
}

Rat polygon_area2_rat(const std::vector<Vec2>& poly) {
  Rat s = 0;
  std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) s += cross(poly[i], poly[(i + 1) % n]);
  return s;
}

Int polygon_area2(const LatticePolygon& poly) {
  Rat a = polygon_area2_rat(poly.v);
  ensure(is_integral(a), Err::Internal, "lattice polygon with fractional area");
  return num(a);
}

bool polygon_is_simple(const std::vector<Vec2>& poly) {
  std::size_t n = poly.size();
  if (n < 3) return false;
  for (std::size_t i = 0; i < n; ++i)
    if (poly[i] == poly[(i + 1) % n]) return false;  // zero-length edge
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      bool adjacent = (j == i + 1) || (i == 0 && j == n - 1);
      SegHit h = seg_intersect(poly[i], poly[(i + 1) % n], poly[j],
                               poly[(j + 1) % n]);
      if (adjacent) {
        // Adjacent edges must meet exactly in their shared vertex.
        if (h.kind == SegX::Overlap) return false;
        continue;
      }
      if (h.kind != SegX::None) return false;
    }
  }
  return true;
}

void validate_lattice_polygon(const LatticePolygon& poly) {
  ensure(poly.v.size() >= 3, Err::BadInput, "polygon needs >= 3 vertices");
  for (const Vec2& p : poly.v)
    ensure(is_lattice(p), Err::BadInput, "polygon vertex not on the lattice");
  ensure(polygon_is_simple(poly.v), Err::BadInput, "polygon not simple");
  ensure(polygon_area2_rat(poly.v) > 0, Err::BadInput,
         "polygon not counterclockwise");
}

std::vector<Vec2> lattice_points(const LatticePolygon& poly) {
  validate_lattice_polygon(poly);
  Int xmin = num(poly.v[0].x), xmax = xmin;
  Int ymin = num(poly.v[0].y), ymax = ymin;
  for (const Vec2& p : poly.v) {
    xmin = std::min(xmin, num(p.x));
    xmax = std::max(xmax, num(p.x));
    ymin = std::min(ymin, num(p.y));
    ymax = std::max(ymax, num(p.y));
  }
  std::vector<Vec2> pts;
  for (Int x = xmin; x <= xmax; ++x)
    for (Int y = ymin; y <= ymax; ++y) {
      Vec2 p{x, y};
      if (point_in_polygon(p, poly.v) != PolyLoc::Outside) pts.push_back(p);
    }
  return pts;  // loop order is already lexicographic
}

const char* err_name(Err e) {
  switch (e) {
    case Err::BadInput: return "BadInput";
    case Err::NotToric: return "NotToric";
    case Err::NonClosing: return "NonClosing";
    case Err::NoSolution: return "NoSolution";
    case Err::Degenerate: return "Degenerate";
    case Err::EdgeTooShort: return "EdgeTooShort";
    case Err::DoesNotFit: return "DoesNotFit";
    case Err::CutCollision: return "CutCollision";
    case Err::EmptyBoundary: return "EmptyBoundary";
    case Err::NotHyperbolic: return "NotHyperbolic";
    case Err::AnchorInvalid: return "AnchorInvalid";
    case Err::ChainMismatch: return "ChainMismatch";
    case Err::NonIntegralInput: return "NonIntegralInput";
    case Err::IndexOutOfRange: return "IndexOutOfRange";
    case Err::Unsupported: return "Unsupported";
    case Err::VerifyFailed: return "VerifyFailed";
    case Err::Internal: return "Internal";
  }
  return "Unknown";
}

}  // namespace cusp
