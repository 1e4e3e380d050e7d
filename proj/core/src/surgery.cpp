// The base is kept as a planar lattice region whose counterclockwise boundary
// walk is stored explicitly. Every surgery edits the walk, records the affine
// gluing of its cut, and all measured quantities (boundary d-values, collar
// monodromies) are read off afterwards by developing the walk through those
// gluings. Surgeries are pure: they validate, then return a new base.
#include "cusp/surgery.hpp"

#include <algorithm>
#include <array>
#include <sstream>
#include <string>
#include <utility>

#include "cusp/error.hpp"

namespace cusp {
namespace {

Int ivec(const Rat& q, const char* what) {
  ensure(is_integral(q), Err::Internal,
         std::string(what) + " is not an integer");
  return num(q);
}

Int latt_cross(const Vec2& u, const Vec2& v) {
  return ivec(cross(u, v), "lattice cross product");
}

// Matrix with columns u, v (both lattice vectors).
Mat2 mat_cols(const Vec2& u, const Vec2& v) {
  return {ivec(u.x, "matrix column"), ivec(v.x, "matrix column"),
          ivec(u.y, "matrix column"), ivec(v.y, "matrix column")};
}

// Conjugate `m` (written in the basis (u, v)) into standard coordinates.
Mat2 in_basis(const Vec2& u, const Vec2& v, const Mat2& m) {
  Mat2 p = mat_cols(u, v);
  return p * m * inverse_unimodular(p);
}

// Some lattice vector e with det(e, z) = 1; requires z primitive.
Vec2 perp_vec(const Vec2& z) {
  Int zx = ivec(z.x, "direction"), zy = ivec(z.y, "direction");
  ExtGcd eg = ext_gcd(zy, -zx);
  ensure(eg.g == 1, Err::Internal, "direction is not primitive");
  return {eg.x, eg.y};
}

int comp_of(const WalkItem& it) {
  return std::visit([](const auto& x) { return x.component; }, it);
}

std::string fmt_int(const Int& v) { return v.str(); }

// ---------------------------------------------------------------------------
// Outline derivation: the walk is the single source of truth; the outline
// polygon is the walk's trace with blow-up notches included and zero-width
// smoothing slits omitted.

LatticePolygon derive_outline(const std::vector<WalkItem>& walk,
                              const std::vector<Cut>& cuts) {
  std::vector<Vec2> pts;
  auto push = [&pts](const Vec2& p) {
    if (pts.empty() || !(pts.back() == p)) pts.push_back(p);
  };
  for (const WalkItem& it : walk) {
    if (const auto* p = std::get_if<WalkPiece>(&it)) {
      push(p->start);
    } else if (const auto* c = std::get_if<WalkCross>(&it)) {
      const Cut& cut = cuts[c->cut];
      if (cut.kind == Cut::Kind::Blowup) {
        push(cut.base_a);
        push(cut.apex);
        push(cut.base_b);
      }
      // smoothing slits bound no area and are not part of the outline
    }
  }
  if (pts.size() >= 2 && pts.back() == pts.front()) pts.pop_back();
  return LatticePolygon{std::move(pts)};
}

// Rebuild the derived outline and re-check the construction invariants that
// are cheap enough to run after every surgery.
void finalize_base(AlmostToricBase& b) {
  b.outline = derive_outline(b.walk, b.cuts);
  if (!b.relaxed_cuts) {
    // With relaxed cuts the outline may be only weakly simple (shared apexes
    // are pinch vertices), which is handled downstream; otherwise insist.
    validate_lattice_polygon(b.outline);
  }
  bool any_positive = false, zero_with_cross = false;
  std::vector<bool> crossed(b.components(), false);
  for (const WalkItem& it : b.walk)
    if (std::holds_alternative<WalkCross>(it))
      crossed[static_cast<std::size_t>(comp_of(it))] = true;
  for (std::size_t i = 0; i < b.components(); ++i) {
    if (b.lengths[i] > 0) any_positive = true;
    if (b.lengths[i] == 0 && crossed[i]) zero_with_cross = true;
  }
  if (any_positive && !zero_with_cross) {
    Cycle measured = boundary_d_values(b);
    ensure(measured == b.cycle, Err::Internal,
           "measured boundary d-values diverge from the cycle bookkeeping");
  }
}

// ---------------------------------------------------------------------------
// Obstacle tests shared by the surgeries. The obstacle set of a base is its
// outline (pieces plus blow-up notch legs) together with all smoothing slits;
// singular points are point obstacles.

struct Seg {
  Vec2 a, b;
};

std::vector<Seg> outline_edges(const LatticePolygon& poly) {
  std::vector<Seg> out;
  const std::size_t n = poly.v.size();
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i)
    out.push_back({poly.v[i], poly.v[(i + 1) % n]});
  return out;
}

std::vector<Seg> slit_segments(const std::vector<Cut>& cuts) {
  std::vector<Seg> out;
  for (const Cut& c : cuts)
    if (c.kind == Cut::Kind::Smoothing) out.push_back({c.base_a, c.apex});
  return out;
}

// Boundary material that is still available (positive-length walk pieces).
std::vector<Seg> piece_segments(const std::vector<WalkItem>& walk) {
  std::vector<Seg> out;
  for (const WalkItem& it : walk)
    if (const auto* p = std::get_if<WalkPiece>(&it))
      if (p->len > 0) out.push_back({p->start, p->start + p->len * p->dir});
  return out;
}

// Legs of the already removed blow-up triangles.
std::vector<Seg> leg_segments(const std::vector<Cut>& cuts) {
  std::vector<Seg> out;
  for (const Cut& c : cuts)
    if (c.kind == Cut::Kind::Blowup) {
      out.push_back({c.apex, c.base_a});
      out.push_back({c.apex, c.base_b});
    }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------

std::vector<Vec2> fan_from_toric_cycle(const Cycle& c) {
  const std::size_t n = c.size();
  ensure(n >= 1, Err::BadInput, "cycle must be nonempty");
  std::vector<Vec2> w;
  w.reserve(n + 2);
  w.emplace_back(1, 0);
  w.emplace_back(0, 1);
  for (std::size_t i = 1; i <= n; ++i)
    w.push_back(c.d[i % n] * w[i] - w[i - 1]);
  if (!(w[n] == w[0] && w[n + 1] == w[1]))
    fail(Err::NotToric, "cycle " + format_cycle(c) +
                            " does not close up into a smooth complete fan");
  w.resize(n);
  // The rays must pass the positive x-axis exactly once: count entries into
  // the half-plane H = {y > 0} u {y = 0, x < 0}.
  auto in_h = [](const Vec2& v) {
    return v.y > 0 || (v.y == 0 && v.x < 0);
  };
  int winding = 0;
  for (std::size_t i = 0; i < n; ++i)
    if (!in_h(w[i]) && in_h(w[(i + 1) % n])) ++winding;
  if (winding != 1)
    fail(Err::NotToric, "cycle " + format_cycle(c) +
                            " closes up only after winding " +
                            std::to_string(winding) + " times");
  return w;
}

Vec2 edge_direction(const Vec2& ray) { return {-ray.y, ray.x}; }

std::vector<Int> solve_lengths(const std::vector<Vec2>& rays,
                               const std::vector<std::size_t>& support) {
  const std::size_t n = rays.size();
  ensure(n >= 1, Err::BadInput, "fan must have at least one ray");
  ensure(!support.empty(), Err::BadInput, "support must be nonempty");
  std::vector<std::size_t> sup(support);
  std::sort(sup.begin(), sup.end());
  sup.erase(std::unique(sup.begin(), sup.end()), sup.end());
  for (std::size_t i : sup)
    ensure(i < n, Err::IndexOutOfRange, "support index out of range");
  const std::size_t s = sup.size();

  std::vector<Vec2> z;
  z.reserve(s);
  for (std::size_t i : sup) z.push_back(edge_direction(rays[i]));

  std::vector<Int> m(s, 0);
  bool solved = false;
  if (s == 1) {
    // a single nonzero direction has no positive multiple summing to zero
  } else if (s == 2) {
    if (z[0] == -z[1]) {
      m = {1, 1};
      solved = true;
    }
  } else if (s == 3) {
    // Cramer: the kernel of (z0 | z1 | z2) is spanned by the 2x2 minors.
    Int c0 = latt_cross(z[1], z[2]);
    Int c1 = latt_cross(z[2], z[0]);
    Int c2 = latt_cross(z[0], z[1]);
    if (c0 != 0 && c1 != 0 && c2 != 0 &&
        ((c0 > 0) == (c1 > 0) && (c1 > 0) == (c2 > 0))) {
      if (c0 < 0) {
        c0 = -c0;
        c1 = -c1;
        c2 = -c2;
      }
      Int g = int_gcd(int_gcd(c0, c1), c2);
      m = {c0 / g, c1 / g, c2 / g};
      solved = true;
    }
  } else {
    // Integer kernel of the 2 x s matrix via unimodular column operations,
    // then a bounded search for the minimal positive combination.
    std::vector<std::array<Int, 2>> a(s);
    for (std::size_t j = 0; j < s; ++j)
      a[j] = {ivec(z[j].x, "edge direction"), ivec(z[j].y, "edge direction")};
    std::vector<std::vector<Int>> u(s, std::vector<Int>(s, 0));
    for (std::size_t j = 0; j < s; ++j) u[j][j] = 1;
    std::size_t pos = 0;
    for (int row = 0; row < 2 && pos < s; ++row) {
      while (true) {
        std::size_t pivot = s;
        for (std::size_t j = pos; j < s; ++j)
          if (a[j][row] != 0 &&
              (pivot == s || abs(a[j][row]) < abs(a[pivot][row])))
            pivot = j;
        if (pivot == s) break;  // row already zero beyond pos
        std::swap(a[pos], a[pivot]);
        std::swap(u[pos], u[pivot]);
        bool reduced = true;
        for (std::size_t j = pos + 1; j < s; ++j) {
          if (a[j][row] == 0) continue;
          Int q = floor_div(a[j][row], a[pos][row]);
          for (int r = 0; r < 2; ++r) a[j][r] -= q * a[pos][r];
          for (std::size_t r = 0; r < s; ++r) u[j][r] -= q * u[pos][r];
          if (a[j][row] != 0) reduced = false;
        }
        if (reduced) {
          ++pos;
          break;
        }
      }
    }
    const std::size_t rank = pos, dim = s - rank;
    long bound = 0;
    if (dim <= 2)
      bound = 256;
    else if (dim == 3)
      bound = 32;
    else if (dim == 4)
      bound = 12;
    else
      fail(Err::Unsupported,
           "support leaves a kernel of rank " + std::to_string(dim) +
               "; the bounded search handles rank at most 4");
    std::vector<Int> best, coeff(dim, 0);
    Int best_sum = 0;
    auto consider = [&]() {
      std::vector<Int> cand(s, 0);
      for (std::size_t k = 0; k < dim; ++k)
        for (std::size_t j = 0; j < s; ++j)
          cand[j] += coeff[k] * u[rank + k][j];
      for (const Int& v : cand)
        if (v <= 0) return;
      Int sum = 0;
      for (const Int& v : cand) sum += v;
      if (best.empty() || sum < best_sum ||
          (sum == best_sum && cand < best)) {
        best = cand;
        best_sum = sum;
      }
    };
    std::vector<long> c(dim, -bound);
    while (true) {
      for (std::size_t k = 0; k < dim; ++k) coeff[k] = c[k];
      consider();
      std::size_t k = 0;
      while (k < dim && c[k] == bound) c[k++] = -bound;
      if (k == dim) break;
      ++c[k];
    }
    if (!best.empty()) {
      m = best;
      solved = true;
    }
  }
  if (!solved)
    fail(Err::NoSolution,
         "no positive integer lengths supported exactly on the given edges");
  // Verify and expand to the full fan.
  Vec2 total(0, 0);
  std::vector<Int> lengths(n, 0);
  for (std::size_t k = 0; k < s; ++k) {
    ensure(m[k] > 0, Err::Internal, "solver produced a non-positive length");
    lengths[sup[k]] = m[k];
    total = total + m[k] * z[k];
  }
  ensure(total == Vec2(0, 0), Err::Internal, "solver output does not close up");
  return lengths;
}

// ---------------------------------------------------------------------------

std::vector<BoundaryEdge> AlmostToricBase::boundary() const {
  std::vector<BoundaryEdge> out(components());
  std::vector<bool> seen(components(), false);
  for (const WalkItem& it : walk) {
    const auto comp = static_cast<std::size_t>(comp_of(it));
    if (seen[comp]) continue;
    if (const auto* p = std::get_if<WalkPiece>(&it)) {
      out[comp] = {p->dir, lengths[comp], p->component};
      seen[comp] = true;
    } else if (const auto* zz = std::get_if<WalkZero>(&it)) {
      out[comp] = {zz->dir, 0, zz->component};
      seen[comp] = true;
    }
  }
  for (bool b : seen)
    ensure(b, Err::Internal, "walk is missing a component");
  return out;
}

AlmostToricBase moment_polygon(const std::vector<Vec2>& rays,
                               const std::vector<Int>& lengths) {
  const std::size_t n = rays.size();
  ensure(n >= 3, Err::BadInput, "a fan needs at least three rays");
  ensure(lengths.size() == n, Err::BadInput,
         "need exactly one length per ray");
  for (const Int& m : lengths)
    ensure(m >= 0, Err::BadInput, "lengths must be nonnegative");
  for (const Vec2& w : rays) {
    ensure(is_lattice(w) && !(w == Vec2(0, 0)), Err::BadInput,
           "rays must be nonzero lattice vectors");
    ensure(primitive(w) == w, Err::BadInput, "rays must be primitive");
  }
  for (std::size_t i = 0; i < n; ++i)
    ensure(latt_cross(rays[i], rays[(i + 1) % n]) == 1, Err::BadInput,
           "consecutive rays must span the lattice positively");

  AlmostToricBase b;
  b.cycle.d.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    b.cycle.d[i] = latt_cross(rays[(i + n - 1) % n], rays[(i + 1) % n]);
  b.lengths = lengths;

  Vec2 total(0, 0);
  std::size_t positive = 0;
  for (std::size_t i = 0; i < n; ++i) {
    total = total + lengths[i] * edge_direction(rays[i]);
    if (lengths[i] > 0) ++positive;
  }
  if (!(total == Vec2(0, 0)))
    fail(Err::NonClosing, "edge vectors sum to (" + fmt_int(num(total.x)) +
                              ", " + fmt_int(num(total.y)) +
                              "), not to zero");
  if (positive < 3)
    fail(Err::Degenerate,
         "fewer than three edges have positive length; the polygon is flat");

  Vec2 corner(0, 0);
  for (std::size_t i = 0; i < n; ++i) {
    Vec2 dir = edge_direction(rays[i]);
    if (lengths[i] > 0)
      b.walk.push_back(WalkPiece{corner, dir, lengths[i], static_cast<int>(i)});
    else
      b.walk.push_back(WalkZero{corner, dir, static_cast<int>(i)});
    corner = corner + lengths[i] * dir;
  }
  ensure(corner == Vec2(0, 0), Err::Internal, "walk failed to close");

  try {
    finalize_base(b);
  } catch (const Error& e) {
    if (e.code() == Err::BadInput)
      fail(Err::Degenerate,
           std::string("edge directions do not bound a polygon: ") + e.what());
    throw;
  }
  return b;
}

// ---------------------------------------------------------------------------

Development develop_boundary(const AlmostToricBase& b,
                             std::size_t anchor_component) {
  const std::size_t n = b.components();
  ensure(anchor_component < n, Err::AnchorInvalid,
         "anchor component out of range");
  const std::size_t w = b.walk.size();
  ensure(w > 0, Err::Internal, "base has an empty walk");
  const int anchor = static_cast<int>(anchor_component);
  std::size_t start = w;
  for (std::size_t k = 0; k < w; ++k)
    if (comp_of(b.walk[k]) == anchor &&
        comp_of(b.walk[(k + w - 1) % w]) != anchor) {
      start = k;
      break;
    }
  if (start == w) {
    // single-component walk: anchor at the stored front
    ensure(n == 1 && comp_of(b.walk[0]) == anchor, Err::AnchorInvalid,
           "anchor component is not on the walk");
    start = 0;
  }

  Development dev;
  dev.anchor_component = anchor_component;
  AffineMap t = AffineMap::identity();
  for (std::size_t k = 0; k < w; ++k) {
    const std::size_t idx = (start + k) % w;
    const WalkItem& it = b.walk[idx];
    if (const auto* p = std::get_if<WalkPiece>(&it)) {
      dev.pieces.push_back({idx, t});
      Vec2 s = t(p->start);
      Vec2 dir = t.lin * p->dir;
      if (!dev.comps.empty() && dev.comps.back().component == p->component) {
        DevComponent& back = dev.comps.back();
        ensure(back.dir == dir, Err::Internal,
               "development is not straight across a cut");
        ensure(back.start + back.len * back.dir == s, Err::Internal,
               "development is not contiguous across a cut");
        back.len += p->len;
      } else {
        dev.comps.push_back({p->component, s, dir, p->len});
      }
    } else if (const auto* zz = std::get_if<WalkZero>(&it)) {
      if (dev.comps.empty() || dev.comps.back().component != zz->component)
        dev.comps.push_back({zz->component, t(zz->at), t.lin * zz->dir, 0});
    } else {
      const auto& c = std::get<WalkCross>(it);
      t = compose(t, b.cuts[c.cut].glue);
    }
  }
  dev.monodromy = t;
  ensure(dev.comps.size() == n, Err::Internal,
         "walk does not visit every component exactly once");
  return dev;
}

Cycle boundary_d_values(const AlmostToricBase& b) {
  const std::size_t n = b.components();
  ensure(n >= 1, Err::BadInput, "base has no boundary components");
  bool any_positive = false;
  for (const Int& m : b.lengths)
    if (m > 0) any_positive = true;
  if (!any_positive)
    fail(Err::EmptyBoundary, "every boundary component has length zero");
  std::vector<bool> crossed(n, false);
  for (const WalkItem& it : b.walk)
    if (std::holds_alternative<WalkCross>(it))
      crossed[static_cast<std::size_t>(comp_of(it))] = true;
  for (std::size_t i = 0; i < n; ++i)
    if (b.lengths[i] == 0 && crossed[i])
      fail(Err::Unsupported,
           "component " + std::to_string(i) +
               " has length zero but carries cuts; its direction is not "
               "visible in the development");

  Development dev = develop_boundary(b, 0);
  // Corner chain: each component must end where the next one starts, and the
  // full loop must close up through the monodromy.
  for (std::size_t j = 0; j < n; ++j) {
    const DevComponent& cur = dev.comps[j];
    Vec2 end = cur.start + cur.len * cur.dir;
    Vec2 next = (j + 1 < n) ? dev.comps[j + 1].start
                            : dev.monodromy(dev.comps[0].start);
    ensure(end == next, Err::Internal,
           "developed boundary components do not chain");
  }
  // d_j is determined by three consecutive developed directions; the
  // monodromy transports directions across the seam.
  auto dir_at = [&](long j) -> Vec2 {
    if (j >= 0 && j < static_cast<long>(n)) return dev.comps[j].dir;
    if (j < 0) {
      Mat2 inv = inverse_unimodular(dev.monodromy.lin);
      return inv * dev.comps[j + static_cast<long>(n)].dir;
    }
    return dev.monodromy.lin * dev.comps[j - static_cast<long>(n)].dir;
  };
  Cycle out;
  out.d.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    Vec2 prev = dir_at(static_cast<long>(j) - 1);
    Vec2 cur = dev.comps[j].dir;
    Vec2 next = dir_at(static_cast<long>(j) + 1);
    ensure(latt_cross(prev, cur) == 1 && latt_cross(cur, next) == 1,
           Err::Internal,
           "developed directions do not form consecutive oriented bases");
    Int d = latt_cross(prev, next);
    ensure(prev + next == d * cur, Err::Internal,
           "developed directions violate the d-value relation");
    out.d[static_cast<std::size_t>(dev.comps[j].component)] = d;
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

// Admissibility of a blow-up triangle (base_a, apex, base_b): the apex must
// be interior, the legs must meet the boundary material only at their own
// base points, and no singular point may lie in the closed triangle. With
// relaxed cuts the triangle may additionally lean against existing blow-up
// triangles, whose interiors are already outside the region: the apex may
// rest on an existing leg (in particular coincide with an existing apex) and
// the legs may run along existing legs.
bool apex_fits(const AlmostToricBase& b, const std::vector<Seg>& pieces,
               const std::vector<Seg>& legs, const std::vector<Seg>& slits,
               const Vec2& a, const Vec2& bp, const Vec2& v) {
  for (const Seg& s : pieces)
    if (on_segment(v, s.a, s.b)) return false;
  for (const Seg& s : slits)
    if (on_segment(v, s.a, s.b)) return false;
  bool on_leg = false;
  for (const Seg& s : legs)
    if (on_segment(v, s.a, s.b)) on_leg = true;
  if (on_leg) {
    if (!b.relaxed_cuts) return false;
  } else if (point_in_polygon(v, b.outline.v) != PolyLoc::Inside) {
    return false;
  }

  const std::array<std::pair<Vec2, Vec2>, 2> tri_legs{
      {{v, a}, {v, bp}}};  // (apex, boundary endpoint)
  for (const auto& [apex, end] : tri_legs) {
    for (const Seg& s : pieces) {
      SegHit hit = seg_intersect(apex, end, s.a, s.b);
      if (hit.kind == SegX::None) continue;
      if (hit.kind == SegX::Point && hit.point == end)
        continue;  // touching our own base point
      return false;
    }
    for (const Seg& s : legs) {
      SegHit hit = seg_intersect(apex, end, s.a, s.b);
      if (hit.kind == SegX::None) continue;
      if (hit.kind == SegX::Overlap) {
        if (b.relaxed_cuts) continue;  // running along an existing leg
        return false;
      }
      if (hit.point == end) continue;  // touching our own base point
      if (b.relaxed_cuts && hit.point == v) continue;  // leaning on a leg
      return false;
    }
    for (const Seg& s : slits) {
      SegHit hit = seg_intersect(apex, end, s.a, s.b);
      if (hit.kind == SegX::None) continue;
      if (hit.kind == SegX::Point && hit.point == end && end == s.a)
        continue;  // leg anchored at the slit's boundary anchor
      return false;
    }
  }
  const std::vector<Vec2> tri{a, v, bp};
  for (const Vec2& sp : b.singular_points) {
    if (sp == v) {
      if (b.relaxed_cuts) continue;  // apex shared with an earlier cut
      return false;
    }
    if (point_in_polygon(sp, tri) != PolyLoc::Outside) return false;
  }
  return true;
}

}  // namespace

AlmostToricBase internal_blowup(const AlmostToricBase& b0, std::size_t edge,
                                const Int& size, const Int& offset) {
  ensure(edge < b0.components(), Err::IndexOutOfRange,
         "edge index out of range");
  ensure(size >= 1, Err::BadInput, "blow-up size must be at least 1");
  ensure(offset >= 0, Err::BadInput, "offset must be nonnegative");
  const Int m = b0.lengths[edge];
  if (offset + size > m)
    fail(Err::EdgeTooShort,
         "blow-up needs length " + fmt_int(offset + size) + " but component " +
             std::to_string(edge) + " has length " + fmt_int(m) +
             "; scale all lengths by a positive integer to make room");

  // Locate the base interval inside a single straight walk piece.
  const std::size_t w = b0.walk.size();
  std::size_t piece_idx = w;
  Vec2 a, bp, z;
  Int local = 0, acc = 0;
  for (std::size_t k = 0; k < w; ++k) {
    const auto* p = std::get_if<WalkPiece>(&b0.walk[k]);
    if (!p || p->component != static_cast<int>(edge)) continue;
    if (offset >= acc && offset + size <= acc + p->len) {
      piece_idx = k;
      local = offset - acc;
      a = p->start + local * p->dir;
      bp = a + size * p->dir;
      z = p->dir;
      break;
    }
    acc += p->len;
  }
  if (piece_idx == w)
    fail(Err::DoesNotFit,
         "the base interval would overlap an existing cut anchor on "
         "component " +
             std::to_string(edge));

  // Deterministic apex search along the family apex(t) = a - size*(e0 + t*z).
  const Vec2 e0 = perp_vec(z);
  Rat minx = b0.outline.v[0].x, maxx = minx;
  Rat miny = b0.outline.v[0].y, maxy = miny;
  for (const Vec2& p : b0.outline.v) {
    minx = std::min(minx, p.x);
    maxx = std::max(maxx, p.x);
    miny = std::min(miny, p.y);
    maxy = std::max(maxy, p.y);
  }
  const Int tcap = num(maxx - minx + maxy - miny) / size + 8;
  const std::vector<Seg> pieces = piece_segments(b0.walk);
  const std::vector<Seg> legs = leg_segments(b0.cuts);
  const std::vector<Seg> slits = slit_segments(b0.cuts);
  Vec2 apex, e1;
  bool found = false;
  for (Int k = 0; k / 2 <= tcap && !found; ++k) {
    Int t = (k % 2 == 0) ? Int(k / 2) : Int(-(k / 2) - 1);
    Vec2 cand_e1 = e0 + t * z;
    Vec2 cand = a - size * cand_e1;
    if (apex_fits(b0, pieces, legs, slits, a, bp, cand)) {
      apex = cand;
      e1 = cand_e1;
      found = true;
    }
  }
  if (!found)
    fail(Err::DoesNotFit,
         "no admissible apex for a size-" + fmt_int(size) +
             " blow-up on component " + std::to_string(edge) +
             "; scaling all lengths by a positive integer may create room" +
             (b0.relaxed_cuts ? "" : " (or allow relaxed cuts)"));

  AlmostToricBase b = b0;
  Cut cut;
  cut.kind = Cut::Kind::Blowup;
  cut.apex = apex;
  cut.base_a = a;
  cut.base_b = bp;
  cut.e1 = e1;
  cut.e2 = e1 + z;
  cut.size = size;
  cut.component = static_cast<int>(edge);
  cut.glue.lin = in_basis(cut.e1, cut.e2, Mat2{2, 1, -1, 0});
  cut.glue.tr = apex - cut.glue.lin * apex;
  for (Int tt = 0; tt <= size; ++tt) {
    cut.chain_to.push_back(apex + tt * cut.e1);
    cut.chain_from.push_back(apex + tt * cut.e2);
  }
  ensure(det2(cut.glue.lin) == 1, Err::Internal, "gluing must be unimodular");
  ensure(cut.glue(bp) == a, Err::Internal,
         "gluing must carry one leg onto the other");
  ensure(cut.glue.lin * z == z, Err::Internal,
         "gluing must fix the edge direction");

  const std::size_t cut_idx = b.cuts.size();
  const auto piece = std::get<WalkPiece>(b0.walk[piece_idx]);
  ensure(local >= 0 && local + size <= piece.len, Err::Internal,
         "base interval must sit inside its piece");
  std::vector<WalkItem> nw;
  nw.reserve(w + 2);
  for (std::size_t k = 0; k < w; ++k) {
    if (k != piece_idx) {
      nw.push_back(b0.walk[k]);
      continue;
    }
    if (local > 0)
      nw.push_back(WalkPiece{piece.start, z, local, piece.component});
    nw.push_back(WalkCross{cut_idx, piece.component});
    if (b0.lengths[edge] - size == 0)
      nw.push_back(WalkZero{bp, z, piece.component});
    Int rest = piece.len - local - size;
    if (rest > 0) nw.push_back(WalkPiece{bp, z, rest, piece.component});
  }
  b.walk = std::move(nw);
  b.cuts.push_back(std::move(cut));
  b.lengths[edge] -= size;
  b.cycle = apply_surgery(b.cycle, {SurgeryKind::InternalBlowup, edge});
  if (std::find(b.singular_points.begin(), b.singular_points.end(), apex) ==
      b.singular_points.end())
    b.singular_points.push_back(apex);
  finalize_base(b);
  return b;
}

AlmostToricBase node_smoothing(const AlmostToricBase& b0, std::size_t vertex,
                               const Int& n) {
  const std::size_t nc = b0.components();
  ensure(vertex < nc, Err::IndexOutOfRange, "vertex index out of range");
  ensure(n >= 1, Err::BadInput, "slit length must be at least 1");
  ensure(nc >= 2, Err::Unsupported,
         "smoothing a component against itself is not supported");
  const std::size_t i = vertex, j = (vertex + 1) % nc;
  if (b0.lengths[i] == 0 || b0.lengths[j] == 0)
    fail(Err::CutCollision,
         "the corner between components " + std::to_string(i) + " and " +
             std::to_string(j) + " has a zero-length side");

  // The corner must still be flanked by straight pieces on both sides.
  const std::size_t w = b0.walk.size();
  std::size_t last_i = w;
  for (std::size_t k = 0; k < w; ++k)
    if (comp_of(b0.walk[k]) == static_cast<int>(i) &&
        comp_of(b0.walk[(k + 1) % w]) != static_cast<int>(i))
      last_i = k;
  ensure(last_i < w, Err::Internal, "component missing from the walk");
  const std::size_t first_j = (last_i + 1) % w;
  ensure(comp_of(b0.walk[first_j]) == static_cast<int>(j), Err::Internal,
         "boundary components are out of order in the walk");
  const auto* pi = std::get_if<WalkPiece>(&b0.walk[last_i]);
  const auto* pj = std::get_if<WalkPiece>(&b0.walk[first_j]);
  if (!pi || !pj)
    fail(Err::CutCollision,
         "a cut already consumes the corner between components " +
             std::to_string(i) + " and " + std::to_string(j));

  const Vec2 c = pi->start + pi->len * pi->dir;
  ensure(c == pj->start, Err::Internal, "walk corners do not chain");
  const Vec2 x = pj->dir, y = -pi->dir;
  ensure(latt_cross(x, y) == 1, Err::Internal,
         "corner directions do not form an oriented basis");
  const Vec2 u = c + n * (x + y);

  // The open slit (c, u] must stay strictly inside and clear of everything.
  if (point_in_polygon(u, b0.outline.v) != PolyLoc::Inside)
    fail(Err::CutCollision, "slit tip is not strictly inside the region");
  for (const Seg& s : outline_edges(b0.outline)) {
    SegHit hit = seg_intersect(c, u, s.a, s.b);
    if (hit.kind == SegX::None) continue;
    if (hit.kind == SegX::Point && hit.point == c) continue;
    fail(Err::CutCollision, "slit crosses the region boundary");
  }
  for (const Seg& s : slit_segments(b0.cuts)) {
    if (seg_intersect(c, u, s.a, s.b).kind != SegX::None)
      fail(Err::CutCollision, "slit meets an existing slit");
  }
  for (const Vec2& sp : b0.singular_points)
    if (on_segment(sp, c, u))
      fail(Err::CutCollision, "slit passes through a singular point");

  AlmostToricBase b = b0;
  Cut cut;
  cut.kind = Cut::Kind::Smoothing;
  cut.apex = u;
  cut.base_a = c;
  cut.base_b = c;
  cut.e1 = -(x + y);
  cut.e2 = -y;
  cut.size = n;
  cut.glue.lin = in_basis(cut.e1, cut.e2, Mat2{1, 1, 0, 1});
  cut.glue.tr = c - cut.glue.lin * c;
  for (Int tt = 0; tt <= n; ++tt) {
    cut.chain_from.push_back(c + tt * (x + y));
    cut.chain_to.push_back(c + tt * (x + y));
  }
  ensure(det2(cut.glue.lin) == 1, Err::Internal, "gluing must be unimodular");
  ensure(cut.glue(u) == u && cut.glue(c) == c, Err::Internal,
         "gluing must fix the slit pointwise");
  ensure(cut.glue.lin * x == -y, Err::Internal,
         "gluing must straighten the corner");

  // Components i and j merge; j's slot disappears and later indices shift.
  std::vector<int> comp_map(nc);
  for (std::size_t old = 0; old < nc; ++old)
    comp_map[old] = static_cast<int>(old > j ? old - 1 : old);
  comp_map[j] = comp_map[i];
  cut.component = comp_map[i];

  const std::size_t cut_idx = b.cuts.size();
  std::vector<WalkItem> nw;
  nw.reserve(w + 1);
  for (std::size_t k = 0; k < w; ++k) {
    nw.push_back(b0.walk[k]);
    if (k == last_i)
      nw.push_back(WalkCross{cut_idx, static_cast<int>(i)});
  }
  for (WalkItem& it : nw)
    std::visit(
        [&](auto& item) {
          item.component = comp_map[static_cast<std::size_t>(item.component)];
        },
        it);
  b.walk = std::move(nw);
  for (Cut& cc : b.cuts)
    cc.component = comp_map[static_cast<std::size_t>(cc.component)];
  b.cuts.push_back(std::move(cut));

  b.lengths[i] += b.lengths[j];
  b.lengths.erase(b.lengths.begin() + static_cast<long>(j));
  b.cycle = apply_surgery(b.cycle, {SurgeryKind::NodeSmoothing, vertex});
  ensure(std::find(b.singular_points.begin(), b.singular_points.end(), u) ==
             b.singular_points.end(),
         Err::Internal, "slit tip collides with an existing singular point");
  b.singular_points.push_back(u);
  finalize_base(b);
  return b;
}

}  // namespace cusp
