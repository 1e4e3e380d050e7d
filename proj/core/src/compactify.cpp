#include "cusp/compactify.hpp"

#include <algorithm>
#include <cstddef>
#include <string>
#include <variant>
#include <vector>

#include "cusp/error.hpp"

namespace cusp {
namespace {

bool any_positive_length(const AlmostToricBase& b) {
  return std::any_of(b.lengths.begin(), b.lengths.end(),
                     [](const Int& m) { return m > 0; });
}

std::size_t first_positive_component(const AlmostToricBase& b) {
  for (std::size_t i = 0; i < b.lengths.size(); ++i)
    if (b.lengths[i] > 0) return i;
  fail(Err::EmptyBoundary, "every boundary component has length zero");
}

}  // namespace

AffineMap collar_monodromy(const AlmostToricBase& b) {
  return develop_boundary(b, first_positive_component(b)).monodromy;
}

Vec2 fixed_point(const AffineMap& m) {
  if (m == AffineMap::identity()) return {0, 0};
  // Solve (I - lin) v = tr by Cramer's rule; for det(lin) = 1 the system
  // degenerates exactly at trace(lin) = 2.
  const Mat2 a{1 - m.lin.a, -m.lin.b, -m.lin.c, 1 - m.lin.d};
  const Int det = det2(a);
  ensure(det != 0, Err::NotHyperbolic,
         "monodromy has trace 2: no unique fixed point");
  const Rat d{det};
  return {(Rat(a.d) * m.tr.x - Rat(a.b) * m.tr.y) / d,
          (Rat(a.a) * m.tr.y - Rat(a.c) * m.tr.x) / d};
}

DiscreteHyperbola discrete_hyperbola(const AlmostToricBase& b,
                                     std::size_t periods) {
  ensure(periods >= 1, Err::BadInput, "periods must be positive");
  ensure(any_positive_length(b), Err::EmptyBoundary,
         "every boundary component has length zero");
  const std::size_t n = b.components();
  for (std::size_t i = 0; i < n; ++i)
    ensure(b.lengths[i] > 0, Err::Unsupported,
           "component " + std::to_string(i) +
               " has length zero; corner conditions at collapsed components "
               "are undefined, so the hyperbola needs every length positive");

  const Development dev = develop_boundary(b, 0);
  std::vector<Vec2> corners(n);
  for (std::size_t r = 0; r < n; ++r) {
    ensure(dev.comps[r].component == static_cast<int>(r), Err::Internal,
           "development visits components out of order");
    corners[r] = dev.comps[r].start;
  }
  const AffineMap m = dev.monodromy;
  const AffineMap minv = affine_inverse(m);

  DiscreteHyperbola h;
  h.period = n;
  h.monodromy = m;
  h.refinement = b.refinement;
  const std::size_t mid = periods * n;
  h.vertices.assign(2 * mid + 1, Vec2{});
  AffineMap fwd = AffineMap::identity();
  for (std::size_t q = 0; q < periods; ++q) {
    for (std::size_t r = 0; r < n; ++r)
      h.vertices[mid + q * n + r] = fwd(corners[r]);
    fwd = compose(m, fwd);
  }
  h.vertices[2 * mid] = fwd(corners[0]);
  AffineMap bwd = AffineMap::identity();
  for (std::size_t q = 1; q <= periods; ++q) {
    bwd = compose(minv, bwd);
    for (std::size_t r = 0; r < n; ++r)
      h.vertices[mid - q * n + r] = bwd(corners[r]);
  }

  // Invariants: integrality, one-period monodromy shifts, edge contents,
  // unit corner turns, and the d-value recurrence against the cycle.
  const std::size_t total = h.vertices.size();
  for (const Vec2& v : h.vertices)
    ensure(is_lattice(v), Err::Internal, "hyperbola vertex is not integral");
  for (std::size_t j = 0; j + n < total; ++j)
    ensure(m(h.vertices[j]) == h.vertices[j + n], Err::Internal,
           "monodromy does not shift the hyperbola by one period");
  std::vector<Vec2> dirs(total - 1);
  for (std::size_t j = 0; j + 1 < total; ++j) {
    const Vec2 e = h.vertices[j + 1] - h.vertices[j];
    ensure(content(e) == b.lengths[j % n], Err::Internal,
           "hyperbola edge length disagrees with the boundary");
    dirs[j] = primitive(e);
  }
  for (std::size_t j = 0; j + 1 < dirs.size(); ++j)
    ensure(cross(dirs[j], dirs[j + 1]) == 1, Err::Internal,
           "consecutive hyperbola edges are not an oriented lattice basis");
  for (std::size_t j = 1; j + 1 < dirs.size(); ++j)
    ensure(Rat(b.cycle.d[j % n]) * dirs[j] == dirs[j - 1] + dirs[j + 1],
           Err::Internal, "hyperbola directions violate the d-recurrence");
  return h;
}

Int choose_refinement(const Vec2& v0) {
  return int_lcm(den(v0.x), den(v0.y));
}

AlmostToricBase refine(const AlmostToricBase& b, const Int& k) {
  ensure(k >= 1, Err::BadInput, "refinement must be a positive integer");
  if (k == 1) return b;
  const Rat s{k};
  AlmostToricBase r = b;
  r.refinement = b.refinement * k;
  for (Vec2& v : r.outline.v) v = s * v;
  for (Vec2& v : r.singular_points) v = s * v;
  for (Int& m : r.lengths) m *= k;
  for (WalkItem& item : r.walk) {
    if (auto* p = std::get_if<WalkPiece>(&item)) {
      p->start = s * p->start;
      p->len *= k;
    } else if (auto* z = std::get_if<WalkZero>(&item)) {
      z->at = s * z->at;
    }
  }
  for (Cut& cut : r.cuts) {
    cut.apex = s * cut.apex;
    cut.base_a = s * cut.base_a;
    cut.base_b = s * cut.base_b;
    cut.size *= k;
    cut.glue.tr = s * cut.glue.tr;
    // Rebuild the identified chains at the finer scale: the old chain points
    // survive at every k-th index and the gaps fill with new lattice points.
    cut.chain_to.clear();
    cut.chain_from.clear();
    for (Int t = 0; t <= cut.size; ++t) {
      if (cut.kind == Cut::Kind::Blowup) {
        cut.chain_to.push_back(cut.apex + t * cut.e1);
        cut.chain_from.push_back(cut.apex + t * cut.e2);
      } else {
        const Vec2 p = cut.base_a - t * cut.e1;
        cut.chain_to.push_back(p);
        cut.chain_from.push_back(p);
      }
    }
    ensure(cut.kind == Cut::Kind::Blowup
               ? (cut.chain_to.back() == cut.base_a &&
                  cut.chain_from.back() == cut.base_b)
               : cut.chain_to.back() == cut.apex,
           Err::Internal, "refined cut chain misses its endpoint");
    for (std::size_t t = 0; t < cut.chain_from.size(); ++t)
      ensure(cut.glue(cut.chain_from[t]) == cut.chain_to[t], Err::Internal,
             "refined gluing no longer identifies the cut chains");
  }
  if (std::none_of(r.lengths.begin(), r.lengths.end(),
                   [](const Int& m) { return m == 0; })) {
    const Cycle measured = boundary_d_values(r);
    ensure(measured.d == r.cycle.d, Err::Internal,
           "refinement changed the boundary d-values");
  }
  return r;
}

ConeDomain refine(const ConeDomain& c, const Int& k) {
  ensure(k >= 1, Err::BadInput, "refinement must be a positive integer");
  if (k == 1) return c;
  const Rat s{k};
  ConeDomain r = c;
  r.refinement = c.refinement * k;
  for (Vec2& v : r.fundamental.v) v = s * v;
  r.identification.tr = s * r.identification.tr;
  return r;
}

ConeDomain build_cone(const DiscreteHyperbola& h, const Vec2& v0,
                      std::size_t anchor) {
  ensure(is_lattice(v0), Err::BadInput,
         "cone apex must be an integral point; refine the base first");
  ensure(trace(h.monodromy.lin) > 2, Err::NotHyperbolic,
         "cone construction needs a hyperbolic boundary monodromy");
  const std::size_t n = h.period;
  ensure(n >= 1 && h.vertices.size() > n, Err::BadInput,
         "hyperbola holds less than one period");
  ensure(anchor + n < h.vertices.size(), Err::IndexOutOfRange,
         "anchor leaves less than one period of hyperbola");
  ensure(h.monodromy(v0) == v0, Err::BadInput,
         "apex is not the fixed point of the hyperbola monodromy");

  // Star-shapedness of the region beyond the hyperbola, certified on one
  // period: every fan triangle at v0 must keep one strict orientation. The
  // orientations are period-periodic because the monodromy fixes v0 and has
  // determinant one, so this certifies the whole curve.
  const int s0 = orient(v0, h.vertices[anchor], h.vertices[anchor + 1]);
  ensure(s0 != 0, Err::AnchorInvalid, "apex lies on a hyperbola edge line");
  for (std::size_t i = anchor; i < anchor + n; ++i)
    ensure(orient(v0, h.vertices[i], h.vertices[i + 1]) == s0,
           Err::AnchorInvalid,
           "hyperbola complement is not star-shaped at the apex");

  ConeDomain c;
  c.fundamental.v.reserve(n + 2);
  c.fundamental.v.push_back(v0);
  for (std::size_t i = anchor; i <= anchor + n; ++i)
    c.fundamental.v.push_back(h.vertices[i]);
  ensure(polygon_is_simple(c.fundamental.v), Err::AnchorInvalid,
         "cone fundamental polygon self-intersects");
  c.identification = h.monodromy;
  c.refinement = h.refinement;
  ensure(c.identification(c.fundamental.v[1]) == c.fundamental.v.back(),
         Err::Internal, "identification misses the closing seam");
  ensure(content(c.fundamental.v[1] - v0) ==
             content(c.fundamental.v.back() - v0),
         Err::Internal, "identified seams have different lattice lengths");
  return c;
}

ClosedSurface assemble_sphere(const AlmostToricBase& b, const ConeDomain& c) {
  ensure(b.refinement == c.refinement, Err::ChainMismatch,
         "base and cone were refined by different factors");
  const std::size_t n = b.components();
  ensure(c.period() == n, Err::ChainMismatch,
         "cone period differs from the boundary component count");

  const std::vector<Vec2> arc = c.arc();
  std::vector<Int> contents(n);
  std::vector<Vec2> dirs(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 e = arc[i + 1] - arc[i];
    ensure(e != Vec2(0, 0), Err::ChainMismatch, "cone arc has an empty edge");
    contents[i] = content(e);
    dirs[i] = primitive(e);
  }
  for (std::size_t i = 0; i + 1 < n; ++i)
    ensure(cross(dirs[i], dirs[i + 1]) == 1, Err::ChainMismatch,
           "cone arc corners do not turn like a developed boundary");

  // Cyclic alignment: lattice lengths edge-by-edge plus the d-values at the
  // arc's interior corners (both are chart-independent). First match wins.
  std::size_t s = n;
  for (std::size_t cand = 0; cand < n && s == n; ++cand) {
    bool ok = true;
    for (std::size_t i = 0; i < n && ok; ++i)
      ok = contents[i] == b.lengths[(cand + i) % n];
    for (std::size_t i = 1; i + 1 < n && ok; ++i)
      ok = cross(dirs[i - 1], dirs[i + 1]) ==
           Rat(b.cycle.d[(cand + i) % n]);
    if (ok) s = cand;
  }
  ensure(s < n, Err::ChainMismatch,
         "no cyclic alignment matches the cone arc to the boundary chain");

  ClosedSurface out;
  out.base = b;
  out.cone = c;
  out.boundary_matching.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.boundary_matching[i] = (s + i) % n;
  return out;
}

}  // namespace cusp
