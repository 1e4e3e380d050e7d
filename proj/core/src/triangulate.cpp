// Triangulating lattice regions, almost-toric bases, and closed surfaces
// into unimodular complexes with exact chart transitions.
//
// Strategy: mesh the base region at the coarse (unrefined) scale — boundary
// walk to region loop, ear clipping, constrained insertion of slits and
// marks, canonical subdivision into unimodular faces — then refine every
// coarse face with the k^2 lattice grid. The cone over the hyperbola arc is
// star-shaped, so it is fanned from the apex directly at the refined scale.
// Identified boundary pieces (cut legs, the cone seam, arc-to-boundary) are
// declared as links between directed edge keys and resolved after stitching;
// zero-width channels (fully collapsed cut legs) forward through their link
// chain while composing the chart transitions.
#include <algorithm>
#include <array>
#include <cstdint>
#include <cstdlib>
#include <numeric>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <variant>
#include <vector>

#include "cusp/compactify.hpp"
#include "cusp/complex.hpp"

namespace cusp {
namespace {

using Tri = std::array<P64, 3>;

int orient64(P64 a, P64 b, P64 c) {
  const std::int64_t x = cross64(b - a, c - a);
  return x > 0 ? 1 : x < 0 ? -1 : 0;
}

std::int64_t dot64(P64 u, P64 v) { return u.x * v.x + u.y * v.y; }

std::int64_t content64(P64 d) { return std::gcd(std::abs(d.x), std::abs(d.y)); }

P64 primitive64(P64 d) {
  const std::int64_t g = content64(d);
  ensure(g > 0, Err::Internal, "primitive direction of a zero vector");
  return {d.x / g, d.y / g};
}

std::int64_t floor_div64(std::int64_t a, std::int64_t b) {
  const std::int64_t q = a / b, r = a % b;
  return r != 0 && ((r < 0) != (b < 0)) ? q - 1 : q;
}
std::int64_t ceil_div64(std::int64_t a, std::int64_t b) {
  return -floor_div64(-a, b);
}

// ---------------------------------------------------------------------------
// Keys: packed chart positions and directed edges between them.

constexpr std::int64_t kPosOff = std::int64_t(1) << 30;

std::uint64_t pos_key(Chart ch, P64 p) {
  ensure(p.x > -kPosOff && p.x < kPosOff && p.y > -kPosOff && p.y < kPosOff,
         Err::Internal, "chart coordinate out of indexable range");
  return (std::uint64_t(ch == Chart::Cone) << 62) |
         (std::uint64_t(p.x + kPosOff) << 31) | std::uint64_t(p.y + kPosOff);
}

using DKey = std::pair<std::uint64_t, std::uint64_t>;

struct DKeyHash {
  std::size_t operator()(const DKey& k) const noexcept {
    return std::hash<std::uint64_t>{}(k.first * 0x9e3779b97f4a7c15ULL ^
                                      k.second);
  }
};

DKey dkey(Chart ch, P64 a, P64 b) { return {pos_key(ch, a), pos_key(ch, b)}; }
DKey reversed_key(const DKey& k) { return {k.second, k.first}; }

// ---------------------------------------------------------------------------
// Mesh accumulation: memoized corners, unimodular ccw faces.

struct MeshBuild {
  TriComplex t;
  std::unordered_map<std::uint64_t, std::int32_t> corner_of;

  std::int32_t corner(Chart ch, P64 p) {
    const std::uint64_t k = pos_key(ch, p);
    auto it = corner_of.find(k);
    if (it != corner_of.end()) return it->second;
    const auto id = static_cast<std::int32_t>(t.corners.size());
    t.corners.push_back(TriCorner{p, ch, false, -1});
    corner_of.emplace(k, id);
    return id;
  }

  void emit(Chart ch, P64 a, P64 b, P64 c) {
    ensure(cross64(b - a, c - a) == 1, Err::Internal,
           "triangulation must emit unimodular ccw faces");
    t.faces.push_back({corner(ch, a), corner(ch, b), corner(ch, c)});
    t.twin.insert(t.twin.end(), 3, -1);
  }

  std::optional<std::int32_t> find_corner(Chart ch, P64 p) const {
    auto it = corner_of.find(pos_key(ch, p));
    if (it == corner_of.end()) return std::nullopt;
    return it->second;
  }
};

// ---------------------------------------------------------------------------
// Canonical subdivision of a lattice triangle into unimodular faces.
//
// The rule depends only on the vertex set of the current face, so two faces
// sharing an edge always split that edge at the same point and no T-junction
// can appear: the longest edge (by lattice content) splits at its canonical
// midpoint; a face with all edges primitive but area2 > 1 splits at its
// lexicographically smallest interior lattice point.

P64 canonical_mid(P64 u, P64 v) {
  const P64 lo = v < u ? v : u;
  const P64 hi = v < u ? u : v;
  const P64 d = hi - lo;
  const std::int64_t g = content64(d);
  return lo + (g / 2) * P64{d.x / g, d.y / g};
}

P64 lexmin_interior(P64 a, P64 b, P64 c) {
  const Tri tri{a, b, c};
  const std::int64_t xmin = std::min({a.x, b.x, c.x});
  const std::int64_t xmax = std::max({a.x, b.x, c.x});
  for (std::int64_t x = xmin; x <= xmax; ++x) {
    std::int64_t lo = std::numeric_limits<std::int64_t>::min() / 4;
    std::int64_t hi = std::numeric_limits<std::int64_t>::max() / 4;
    bool empty = false;
    for (int k = 0; k < 3 && !empty; ++k) {
      const P64 u = tri[k], v = tri[(k + 1) % 3];
      // Strict interior: cross(v - u, P - u) > 0 for every ccw edge.
      const std::int64_t coef = v.x - u.x;  // coefficient of (y - u.y)
      const std::int64_t rhs = (v.y - u.y) * (x - u.x);
      if (coef > 0)
        lo = std::max(lo, u.y + floor_div64(rhs, coef) + 1);
      else if (coef < 0)
        hi = std::min(hi, u.y + ceil_div64(rhs, coef) - 1);
      else if (rhs >= 0)  // constraint -(v.y-u.y)(x-u.x) > 0 fails
        empty = true;
    }
    if (!empty && lo <= hi) return {x, lo};
  }
  fail(Err::Internal, "non-unimodular primitive face without interior point");
}

template <typename Sink>
void subdivide_canonical(P64 a, P64 b, P64 c, Sink&& sink) {
  std::vector<Tri> work{{a, b, c}};
  while (!work.empty()) {
    const Tri f = work.back();
    work.pop_back();
    const std::int64_t area2 = cross64(f[1] - f[0], f[2] - f[0]);
    ensure(area2 >= 1, Err::Internal, "subdivision face must be ccw");
    if (area2 == 1) {
      sink(f[0], f[1], f[2]);
      continue;
    }
    // Pick the edge to split by content, ties by the smaller endpoint pair:
    // a purely geometric rule, so the face on the other side of an edge
    // eventually splits it at the same canonical midpoint.
    std::int64_t best = -1;
    int pick = -1;
    std::pair<P64, P64> pick_key{};
    for (int k = 0; k < 3; ++k) {
      const P64 u = f[k], v = f[(k + 1) % 3];
      const std::int64_t g = content64(v - u);
      if (g < 2) continue;
      const std::pair<P64, P64> key = std::minmax(u, v);
      if (pick < 0 || g > best || (g == best && key < pick_key)) {
        best = g;
        pick = k;
        pick_key = key;
      }
    }
    if (pick >= 0) {
      const P64 u = f[pick], v = f[(pick + 1) % 3], w = f[(pick + 2) % 3];
      const P64 m = canonical_mid(u, v);
      work.push_back({u, m, w});
      work.push_back({m, v, w});
    } else {
      const P64 p = lexmin_interior(f[0], f[1], f[2]);
      work.push_back({f[0], f[1], p});
      work.push_back({f[1], f[2], p});
      work.push_back({f[2], f[0], p});
    }
  }
}

// Refines one coarse unimodular face into k^2 unimodular faces on the
// k-times-finer lattice and emits them.
void emit_refined(MeshBuild& mb, Chart ch, P64 a, P64 b, P64 c,
                  std::int64_t k) {
  if (k == 1) {
    mb.emit(ch, a, b, c);
    return;
  }
  const P64 base = k * a;
  const P64 u = b - a, v = c - a;
  auto at = [&](std::int64_t i, std::int64_t j) {
    return base + i * u + j * v;
  };
  for (std::int64_t i = 0; i < k; ++i)
    for (std::int64_t j = 0; j + i < k; ++j) {
      mb.emit(ch, at(i, j), at(i + 1, j), at(i, j + 1));
      if (j + i < k - 1)
        mb.emit(ch, at(i + 1, j), at(i + 1, j + 1), at(i, j + 1));
    }
}

// ---------------------------------------------------------------------------
// Coarse triangulation: ear clipping plus constrained edges.

bool in_closed_tri(P64 p, P64 a, P64 b, P64 c) {
  return orient64(a, b, p) >= 0 && orient64(b, c, p) >= 0 &&
         orient64(c, a, p) >= 0;
}

std::vector<Tri> ear_clip(std::vector<P64> poly) {
  const std::size_t n = poly.size();
  ensure(n >= 3, Err::Internal, "region loop needs >= 3 vertices");
  std::int64_t total = 0;
  for (std::size_t i = 0; i < n; ++i)
    total += cross64(poly[i], poly[(i + 1) % n]);
  ensure(total > 0, Err::Internal, "region loop must be counterclockwise");

  std::vector<std::size_t> next(n), prev(n);
  for (std::size_t i = 0; i < n; ++i) {
    next[i] = (i + 1) % n;
    prev[i] = (i + n - 1) % n;
  }
  std::vector<Tri> tris;
  tris.reserve(n - 2);
  std::size_t alive = n, cur = 0;
  std::int64_t clipped = 0;
  while (alive > 3) {
    bool found = false;
    std::size_t cand = cur;
    for (std::size_t tries = 0; tries < alive; ++tries, cand = next[cand]) {
      const P64 p = poly[prev[cand]], q = poly[cand], r = poly[next[cand]];
      if (orient64(p, q, r) <= 0) continue;  // reflex or straight corner
      bool blocked = false;
      for (std::size_t v = next[next[cand]]; v != prev[cand]; v = next[v])
        if (in_closed_tri(poly[v], p, q, r)) {
          blocked = true;
          break;
        }
      if (blocked) continue;
      tris.push_back({p, q, r});
      clipped += cross64(q - p, r - p);
      next[prev[cand]] = next[cand];
      prev[next[cand]] = prev[cand];
      cur = prev[cand];
      --alive;
      found = true;
      break;
    }
    ensure(found, Err::Internal, "ear clipping found no ear");
  }
  const P64 p = poly[cur], q = poly[next[cur]], r = poly[next[next[cur]]];
  ensure(orient64(p, q, r) > 0, Err::Internal,
         "ear clipping left a degenerate triangle");
  tris.push_back({p, q, r});
  clipped += cross64(q - p, r - p);
  ensure(clipped == total, Err::Internal,
         "ear clipping did not cover the region");
  return tris;
}

bool strictly_on_open_segment(P64 p, P64 u, P64 v) {
  if (orient64(u, v, p) != 0) return false;
  const std::int64_t t = dot64(p - u, v - u);
  return t > 0 && t < dot64(v - u, v - u);
}

// Adds p as a triangulation vertex (no-op when p already is one).
void insert_point(std::vector<Tri>& tris, P64 p) {
  for (const Tri& f : tris)
    if (f[0] == p || f[1] == p || f[2] == p) return;
  // On an edge? Split every face carrying that edge (one or two).
  for (std::size_t i = 0; i < tris.size(); ++i)
    for (int k = 0; k < 3; ++k) {
      const P64 u = tris[i][k], v = tris[i][(k + 1) % 3];
      if (!strictly_on_open_segment(p, u, v)) continue;
      std::vector<Tri> out;
      out.reserve(tris.size() + 2);
      for (const Tri& f : tris) {
        int e = -1;
        for (int j = 0; j < 3; ++j) {
          const P64 a = f[j], b = f[(j + 1) % 3];
          if ((a == u && b == v) || (a == v && b == u)) e = j;
        }
        if (e < 0) {
          out.push_back(f);
          continue;
        }
        const P64 a = f[e], b = f[(e + 1) % 3], w = f[(e + 2) % 3];
        out.push_back({a, p, w});
        out.push_back({p, b, w});
      }
      tris = std::move(out);
      return;
    }
  // Interior of a face.
  for (std::size_t i = 0; i < tris.size(); ++i) {
    const Tri f = tris[i];
    if (orient64(f[0], f[1], p) > 0 && orient64(f[1], f[2], p) > 0 &&
        orient64(f[2], f[0], p) > 0) {
      tris[i] = {f[0], f[1], p};
      tris.push_back({f[1], f[2], p});
      tris.push_back({f[2], f[0], p});
      return;
    }
  }
  fail(Err::BadInput, "point constraint outside the region");
}

// Forces segment (p, q) to be an edge by flipping the edges crossing it.
// p and q must already be vertices and no vertex may lie strictly inside
// the segment (callers insert unit-step chains, so this holds).
void force_edge(std::vector<Tri>& tris, P64 p, P64 q) {
  for (std::size_t guard = 0; guard < 4096; ++guard) {
    for (const Tri& f : tris) {
      const bool has_p = f[0] == p || f[1] == p || f[2] == p;
      const bool has_q = f[0] == q || f[1] == q || f[2] == q;
      if (has_p && has_q) return;
    }
    bool flipped = false;
    for (std::size_t i = 0; i < tris.size() && !flipped; ++i)
      for (int k = 0; k < 3 && !flipped; ++k) {
        const P64 u = tris[i][k], v = tris[i][(k + 1) % 3];
        // Proper crossing of the open segments (p,q) and (u,v)?
        if (orient64(p, q, u) * orient64(p, q, v) >= 0) continue;
        if (orient64(u, v, p) * orient64(u, v, q) >= 0) continue;
        // Locate both faces at the edge (u, v).
        std::size_t i2 = tris.size();
        P64 a1{}, a2{};
        for (std::size_t j = 0; j < tris.size(); ++j)
          for (int m = 0; m < 3; ++m) {
            if (tris[j][m] == u && tris[j][(m + 1) % 3] == v)
              a1 = tris[j][(m + 2) % 3];
            if (tris[j][m] == v && tris[j][(m + 1) % 3] == u) {
              i2 = j;
              a2 = tris[j][(m + 2) % 3];
            }
          }
        ensure(i2 < tris.size(), Err::Internal,
               "constraint crosses a boundary edge");
        // Flip (u,v) -> (a1,a2) when the quad a1,u,a2,v is strictly convex.
        if (orient64(a1, u, a2) <= 0 || orient64(a2, v, a1) <= 0) continue;
        tris[i] = {u, a2, a1};
        tris[i2] = {v, a1, a2};
        flipped = true;
      }
    ensure(flipped, Err::Internal, "constraint edge cannot be recovered");
  }
  fail(Err::Internal, "constraint edge insertion did not terminate");
}

// ---------------------------------------------------------------------------
// Coarsening a refined base back to scale 1 (meshing happens there).

Vec2 scale_down(const Vec2& v, const Int& k) {
  const Vec2 w{v.x / Rat(k), v.y / Rat(k)};
  ensure(is_lattice(w), Err::Internal,
         "base data is not divisible by its refinement");
  return w;
}

Int exact_div_int(const Int& a, const Int& k) {
  ensure(a % k == 0, Err::Internal,
         "base data is not divisible by its refinement");
  return a / k;
}

AlmostToricBase coarsen(const AlmostToricBase& b) {
  const Int k = b.refinement;
  ensure(k >= 1, Err::BadInput, "refinement must be a positive integer");
  if (k == 1) return b;
  AlmostToricBase r = b;
  r.refinement = 1;
  for (Vec2& v : r.outline.v) v = scale_down(v, k);
  for (Vec2& v : r.singular_points) v = scale_down(v, k);
  for (Int& m : r.lengths) m = exact_div_int(m, k);
  for (WalkItem& item : r.walk) {
    if (auto* p = std::get_if<WalkPiece>(&item)) {
      p->start = scale_down(p->start, k);
      p->len = exact_div_int(p->len, k);
    } else if (auto* z = std::get_if<WalkZero>(&item)) {
      z->at = scale_down(z->at, k);
    }
  }
  for (Cut& cut : r.cuts) {
    cut.apex = scale_down(cut.apex, k);
    cut.base_a = scale_down(cut.base_a, k);
    cut.base_b = scale_down(cut.base_b, k);
    cut.size = exact_div_int(cut.size, k);
    cut.glue.tr = scale_down(cut.glue.tr, k);
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
  }
  return r;
}

// ---------------------------------------------------------------------------
// The region loop of a base at scale 1: boundary pieces in unit steps with
// blow-up cuts detoured through their legs; smoothing slits stay interior.

struct LoopStep {
  P64 a, b;
  bool leg;
};

std::vector<P64> region_loop(const AlmostToricBase& b) {
  std::vector<LoopStep> steps;
  for (const WalkItem& item : b.walk) {
    if (const auto* p = std::get_if<WalkPiece>(&item)) {
      const P64 s = to_p64(p->start), d = to_p64(p->dir);
      const std::int64_t len = to_i64(p->len);
      for (std::int64_t t = 0; t < len; ++t)
        steps.push_back({s + t * d, s + (t + 1) * d, false});
    } else if (const auto* x = std::get_if<WalkCross>(&item)) {
      const Cut& cut = b.cuts[x->cut];
      if (cut.kind != Cut::Kind::Blowup) continue;  // slits stay interior
      const std::int64_t size = to_i64(cut.size);
      std::vector<P64> to(size + 1), from(size + 1);
      for (std::int64_t t = 0; t <= size; ++t) {
        to[t] = to_p64(cut.chain_to[static_cast<std::size_t>(t)]);
        from[t] = to_p64(cut.chain_from[static_cast<std::size_t>(t)]);
      }
      for (std::int64_t t = size; t > 0; --t)
        steps.push_back({to[t], to[t - 1], true});
      for (std::int64_t t = 0; t < size; ++t)
        steps.push_back({from[t], from[t + 1], true});
    }
  }
  ensure(!steps.empty(), Err::EmptyBoundary, "base has no boundary to walk");

  // Cancel zero-width channels: adjacent reversed leg steps (a cut leg lying
  // on another cut's leg) bound no material and vanish from the loop.
  std::vector<LoopStep> stack;
  for (const LoopStep& s : steps) {
    if (!stack.empty() && stack.back().leg && s.leg &&
        stack.back().a == s.b && stack.back().b == s.a)
      stack.pop_back();
    else
      stack.push_back(s);
  }
  while (stack.size() >= 2 && stack.front().leg && stack.back().leg &&
         stack.front().a == stack.back().b && stack.front().b == stack.back().a) {
    stack.erase(stack.begin());
    stack.pop_back();
  }
  ensure(stack.size() >= 3, Err::Internal, "region loop collapsed");
  for (std::size_t i = 0; i < stack.size(); ++i)
    ensure(stack[i].b == stack[(i + 1) % stack.size()].a, Err::Internal,
           "boundary walk does not close");

  std::vector<P64> loop;
  loop.reserve(stack.size());
  for (const LoopStep& s : stack) loop.push_back(s.a);
  std::vector<Vec2> probe;
  probe.reserve(loop.size());
  for (P64 p : loop) probe.push_back(to_vec2(p));
  ensure(polygon_is_simple(probe), Err::Internal,
         "region loop is not a simple polygon");
  return loop;
}

// ---------------------------------------------------------------------------
// Identification links between directed boundary keys.

struct Link {
  DKey a, b;
  Aff64 into_a;  // chart transition mapping b-side charts into a-side charts
};

struct Claims {
  std::vector<Link> links;
  std::unordered_map<DKey, std::size_t, DKeyHash> at;

  void add(DKey a, DKey b, const Aff64& into_a) {
    const std::size_t id = links.size();
    links.push_back({a, b, into_a});
    ensure(at.emplace(a, id).second && at.emplace(b, id).second, Err::Internal,
           "two identifications claim one boundary edge");
  }
};

void claim_cut_legs(Claims& claims, const AlmostToricBase& b) {
  for (const Cut& cut : b.cuts) {
    if (cut.kind != Cut::Kind::Blowup) continue;
    const Aff64 glue = to_aff64(cut.glue);  // maps chain_from onto chain_to
    const std::int64_t size = to_i64(cut.size);
    for (std::int64_t t = 0; t < size; ++t) {
      const P64 to0 = to_p64(cut.chain_to[static_cast<std::size_t>(t)]);
      const P64 to1 = to_p64(cut.chain_to[static_cast<std::size_t>(t + 1)]);
      const P64 fr0 = to_p64(cut.chain_from[static_cast<std::size_t>(t)]);
      const P64 fr1 = to_p64(cut.chain_from[static_cast<std::size_t>(t + 1)]);
      claims.add(dkey(Chart::Base, to1, to0), dkey(Chart::Base, fr0, fr1),
                 glue);
    }
  }
}

void claim_seam(Claims& claims, const ConeDomain& cone) {
  const Aff64 m = to_aff64(cone.identification);
  const P64 v0 = to_p64(cone.v0());
  const P64 open_end = to_p64(cone.fundamental.v[1]);
  const P64 close_end = to_p64(cone.fundamental.v.back());
  const std::int64_t c_open = content64(open_end - v0);
  const std::int64_t c_close = content64(close_end - v0);
  ensure(c_open == c_close, Err::Internal, "cone seams have unequal length");
  const P64 d_open = primitive64(open_end - v0);
  const P64 d_close = primitive64(close_end - v0);
  const Aff64 m_inv = inverse64(m);
  for (std::int64_t t = 0; t < c_open; ++t) {
    const P64 o0 = v0 + t * d_open, o1 = v0 + (t + 1) * d_open;
    const P64 c0 = v0 + t * d_close, c1 = v0 + (t + 1) * d_close;
    ensure(m(o0) == c0 && m(o1) == c1, Err::Internal,
           "cone identification does not match its seams");
    claims.add(dkey(Chart::Cone, o1, o0), dkey(Chart::Cone, c0, c1), m_inv);
  }
}

AffineMap affine_power(const AffineMap& m, std::int64_t e) {
  AffineMap r = AffineMap::identity();
  const AffineMap step = e >= 0 ? m : affine_inverse(m);
  for (std::int64_t i = 0; i < std::abs(e); ++i) r = compose(step, r);
  return r;
}

// Links every base boundary piece onto the cone arc. The developed boundary
// (anchored like the hyperbola, at component 0) reproduces the arc corners up
// to a monodromy power, which is searched exactly.
void claim_arc(Claims& claims, const ClosedSurface& s) {
  const Development dev = develop_boundary(s.base, 0);
  ensure(dev.monodromy == s.cone.identification, Err::Internal,
         "cone identification differs from the boundary monodromy");
  const std::size_t n = s.cone.period();
  ensure(dev.comps.size() == n, Err::Internal,
         "cone period differs from the boundary component count");

  std::vector<Vec2> corner(n + 1);
  for (std::size_t r = 0; r < n; ++r) corner[r] = dev.comps[r].start;
  corner[n] = dev.monodromy(corner[0]);

  // Arc edge i spans fundamental vertices 1+i -> 2+i.
  const std::vector<Vec2> arc = s.cone.arc();
  auto power = [&](std::int64_t e) {
    return affine_power(dev.monodromy, e);
  };
  std::vector<std::optional<std::int64_t>> comp_exp(n);
  for (std::size_t i = 0; i < n; ++i) {
    bool found = false;
    for (std::int64_t mag = 0; mag <= 8 && !found; ++mag)
      for (const std::int64_t e : {mag, -mag}) {
        const AffineMap me = power(e);
        for (std::size_t r = 0; r < n && !found; ++r)
          if (me(corner[r]) == arc[i] && me(corner[r + 1]) == arc[i + 1]) {
            const int comp = dev.comps[r].component;
            ensure(comp >= 0 && static_cast<std::size_t>(comp) < n &&
                       !comp_exp[static_cast<std::size_t>(comp)],
                   Err::Internal, "arc edge matched twice");
            comp_exp[static_cast<std::size_t>(comp)] = e;
            found = true;
          }
        if (found || mag == 0) break;
      }
    ensure(found, Err::Internal,
           "cone arc edge does not match any developed boundary component");
  }

  for (const DevPiece& piece : dev.pieces) {
    const auto& wp = std::get<WalkPiece>(s.base.walk[piece.walk_index]);
    const auto comp = static_cast<std::size_t>(wp.component);
    ensure(comp < n && comp_exp[comp].has_value(), Err::Internal,
           "boundary piece on an unmatched component");
    const AffineMap t_aff = compose(power(*comp_exp[comp]), piece.chart);
    const Aff64 t64 = to_aff64(t_aff);
    const Aff64 t_inv = inverse64(t64);
    const P64 start = to_p64(wp.start), dir = to_p64(wp.dir);
    const std::int64_t len = to_i64(wp.len);
    for (std::int64_t j = 0; j < len; ++j) {
      const P64 q = start + j * dir, q2 = q + dir;
      claims.add(dkey(Chart::Base, q, q2),
                 dkey(Chart::Cone, t64(q2), t64(q)), t_inv);
    }
  }
}

// ---------------------------------------------------------------------------
// Stitching and resolution.

// Pairs halfedges sharing an undirected in-chart edge; returns the directed
// keys of the remaining boundary slots.
std::unordered_map<DKey, std::int32_t, DKeyHash> stitch(TriComplex& t) {
  struct Ent {
    std::uint64_t lo, hi;
    std::int32_t h;
  };
  std::vector<Ent> ents;
  ents.reserve(t.halfedge_count());
  for (std::int32_t h = 0; h < static_cast<std::int32_t>(t.halfedge_count());
       ++h) {
    const TriCorner& cf = t.corners[t.corner_from(h)];
    const TriCorner& ct = t.corners[t.corner_to(h)];
    const std::uint64_t a = pos_key(cf.chart, cf.pos);
    const std::uint64_t b = pos_key(ct.chart, ct.pos);
    ents.push_back({std::min(a, b), std::max(a, b), h});
  }
  std::sort(ents.begin(), ents.end(), [](const Ent& x, const Ent& y) {
    return x.lo != y.lo ? x.lo < y.lo : x.hi < y.hi;
  });
  std::unordered_map<DKey, std::int32_t, DKeyHash> slots;
  for (std::size_t i = 0; i < ents.size();) {
    std::size_t j = i + 1;
    while (j < ents.size() && ents[j].lo == ents[i].lo &&
           ents[j].hi == ents[i].hi)
      ++j;
    if (j - i == 1) {
      const std::int32_t h = ents[i].h;
      const TriCorner& cf = t.corners[t.corner_from(h)];
      const TriCorner& ct = t.corners[t.corner_to(h)];
      const bool fresh =
          slots.emplace(dkey(cf.chart, cf.pos, ct.pos), h).second;
      ensure(fresh, Err::Internal, "duplicate boundary slot");
    } else if (j - i == 2) {
      const std::int32_t h1 = ents[i].h, h2 = ents[i + 1].h;
      ensure(t.corner_from(h1) != t.corner_from(h2), Err::Internal,
             "two faces trace one directed edge");
      t.twin[h1] = h2;
      t.twin[h2] = h1;
    } else {
      fail(Err::Internal, "edge shared by more than two faces");
    }
    i = j;
  }
  return slots;
}

// Twins the remaining boundary slots through the identification links,
// forwarding across zero-width channels while composing chart transitions.
void resolve_claims(TriComplex& t,
                    const std::unordered_map<DKey, std::int32_t, DKeyHash>& slots,
                    const Claims& claims, bool require_all) {
  for (const auto& [key, h] : slots) {
    if (t.twin[h] >= 0) continue;  // already resolved from the partner side
    DKey cur = key;
    Aff64 acc = Aff64::identity();
    bool first = true;
    for (int hops = 0;; ++hops) {
      ensure(hops < 64, Err::Internal, "identification chain does not close");
      auto it = claims.at.find(cur);
      if (it == claims.at.end()) {
        ensure(first && !require_all, Err::Internal,
               "boundary edge left unidentified");
        break;  // genuine free boundary (base-only mode)
      }
      first = false;
      const Link& link = claims.links[it->second];
      DKey partner;
      Aff64 g;
      if (cur == link.a) {
        partner = link.b;
        g = link.into_a;
      } else {
        partner = link.a;
        g = inverse64(link.into_a);
      }
      acc = compose64(acc, g);
      auto sl = slots.find(partner);
      if (sl != slots.end()) {
        const std::int32_t h2 = sl->second;
        ensure(t.twin[h2] < 0, Err::Internal,
               "identification chain reuses a boundary edge");
        t.twin[h] = h2;
        t.twin[h2] = h;
        if (!acc.is_identity()) {
          t.transition.emplace(h, acc);
          t.transition.emplace(h2, inverse64(acc));
        }
        break;
      }
      cur = reversed_key(partner);  // cross a zero-width channel
    }
  }
  if (require_all)
    ensure(t.closed(), Err::Internal, "surface did not close up");
}

// Installs the chart transitions across node-smoothing slits: for an edge on
// the slit the side left of anchor->apex continues through the glue, the
// right side through its inverse.
void mark_slits(TriComplex& t, const AlmostToricBase& b) {
  for (const Cut& cut : b.cuts) {
    if (cut.kind != Cut::Kind::Smoothing) continue;
    const P64 c = to_p64(cut.base_a);
    const P64 u = to_p64(cut.apex);
    const P64 seg = u - c;
    const std::int64_t len2 = dot64(seg, seg);
    const Aff64 glue = to_aff64(cut.glue);
    const Aff64 glue_inv = inverse64(glue);
    std::int64_t marked = 0;
    for (std::int32_t h = 0; h < static_cast<std::int32_t>(t.halfedge_count());
         ++h) {
      const TriCorner& cf = t.corners[t.corner_from(h)];
      const TriCorner& ct = t.corners[t.corner_to(h)];
      if (cf.chart != Chart::Base || ct.chart != Chart::Base) continue;
      const P64 p = cf.pos, q = ct.pos;
      if (cross64(seg, p - c) != 0 || cross64(seg, q - c) != 0) continue;
      const std::int64_t tp = dot64(p - c, seg), tq = dot64(q - c, seg);
      if (tp < 0 || tp > len2 || tq < 0 || tq > len2) continue;
      ensure(t.twin[h] >= 0, Err::Internal, "slit edge on a free boundary");
      const std::int64_t side = cross64(seg, t.pos(t.corner_opp(h)) - c);
      ensure(side != 0, Err::Internal, "degenerate face on a slit");
      t.transition[h] = side > 0 ? glue : glue_inv;
      ++marked;
    }
    ensure(marked == 2 * to_i64(cut.size), Err::Internal,
           "slit does not lie along mesh edges");
  }
}

// ---------------------------------------------------------------------------
// Vertex identification and decoration.

struct UnionFind {
  std::vector<std::int32_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  std::int32_t find(std::int32_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::int32_t a, std::int32_t b) { parent[find(a)] = find(b); }
};

void assign_vertices(TriComplex& t) {
  UnionFind uf(t.corners.size());
  for (std::int32_t h = 0; h < static_cast<std::int32_t>(t.halfedge_count());
       ++h) {
    const std::int32_t w = t.twin[h];
    if (w < 0 || w < h) continue;
    uf.unite(t.corner_from(h), t.corner_to(w));
    uf.unite(t.corner_to(h), t.corner_from(w));
  }
  std::unordered_map<std::int32_t, std::int32_t> dense;
  dense.reserve(t.corners.size());
  for (std::size_t i = 0; i < t.corners.size(); ++i) {
    const std::int32_t root = uf.find(static_cast<std::int32_t>(i));
    auto [it, fresh] =
        dense.emplace(root, static_cast<std::int32_t>(dense.size()));
    t.corners[i].vertex = it->second;
    (void)fresh;
  }
  t.vertex_count = static_cast<std::int32_t>(dense.size());
}

void mark_singular(TriComplex& t, MeshBuild& mb,
                   const std::vector<Vec2>& points, Chart chart) {
  for (const Vec2& sp : points) {
    const auto corner = mb.find_corner(chart, to_p64(sp));
    ensure(corner.has_value(), Err::Internal,
           "singular point is not a triangulation vertex");
    t.corners[static_cast<std::size_t>(*corner)].singular = true;
  }
}

// For a base with fully collapsed boundary the cusp vertex is the common
// image of the zero-length component markers (those that survive as corners;
// markers inside cancelled channels leave no material).
void pick_v0_collapsed(TriComplex& t, MeshBuild& mb,
                       const AlmostToricBase& b) {
  for (const Int& len : b.lengths)
    if (len != 0) return;
  std::optional<std::int32_t> v0;
  for (const WalkItem& item : b.walk) {
    const auto* z = std::get_if<WalkZero>(&item);
    if (!z) continue;
    const auto corner = mb.find_corner(Chart::Base, to_p64(z->at));
    if (!corner) continue;
    const std::int32_t v = t.corners[static_cast<std::size_t>(*corner)].vertex;
    ensure(!v0 || *v0 == v, Err::Internal,
           "collapsed boundary markers name different vertices");
    v0 = v;
  }
  ensure(v0.has_value(), Err::Internal,
         "collapsed boundary left no marker vertex");
  t.v0 = v0;
}

// ---------------------------------------------------------------------------
// Base meshing shared by the public entry points.

void build_base_mesh(MeshBuild& mb, const AlmostToricBase& refined,
                     const std::vector<Vec2>& marks) {
  const AlmostToricBase coarse = coarsen(refined);
  const std::int64_t k = to_i64(refined.refinement);
  std::vector<Tri> tris = ear_clip(region_loop(coarse));
  for (const Cut& cut : coarse.cuts) {
    if (cut.kind != Cut::Kind::Smoothing) continue;
    for (std::size_t i = 1; i < cut.chain_to.size(); ++i)
      insert_point(tris, to_p64(cut.chain_to[i]));
    for (std::size_t i = 0; i + 1 < cut.chain_to.size(); ++i)
      force_edge(tris, to_p64(cut.chain_to[i]), to_p64(cut.chain_to[i + 1]));
  }
  for (const Vec2& mark : marks)
    insert_point(tris, to_p64(scale_down(mark, refined.refinement)));
  for (const Tri& f : tris)
    subdivide_canonical(f[0], f[1], f[2], [&](P64 a, P64 b, P64 c) {
      emit_refined(mb, Chart::Base, a, b, c, k);
    });
}

void build_cone_mesh(MeshBuild& mb, const ConeDomain& cone) {
  const P64 v0 = to_p64(cone.v0());
  const std::vector<Vec2> arc_rat = cone.arc();
  std::vector<P64> arc;
  arc.reserve(arc_rat.size());
  for (const Vec2& p : arc_rat) arc.push_back(to_p64(p));
  for (std::size_t i = 0; i + 1 < arc.size(); ++i)
    ensure(orient64(v0, arc[i], arc[i + 1]) == -1, Err::Internal,
           "cone arc must wind clockwise seen from the apex");
  // Counterclockwise around the cone region: traverse the arc reversed in
  // unit steps and fan from the apex.
  std::vector<P64> rim;
  for (std::size_t i = arc.size(); i-- > 1;) {
    const P64 from = arc[i], to = arc[i - 1];
    const P64 step = primitive64(to - from);
    const std::int64_t c = content64(to - from);
    for (std::int64_t t = 0; t < c; ++t) rim.push_back(from + t * step);
  }
  rim.push_back(arc.front());
  for (std::size_t i = 0; i + 1 < rim.size(); ++i) {
    ensure(cross64(rim[i] - v0, rim[i + 1] - v0) > 0, Err::Internal,
           "cone wedge is not counterclockwise");
    subdivide_canonical(v0, rim[i], rim[i + 1], [&](P64 a, P64 b, P64 c) {
      mb.emit(Chart::Cone, a, b, c);
    });
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// Public entry points.

TriComplex triangulate_region(const LatticePolygon& poly,
                              const std::vector<Vec2>& marks) {
  validate_lattice_polygon(poly);
  std::vector<P64> loop;
  const std::size_t n = poly.v.size();
  for (std::size_t i = 0; i < n; ++i) {
    const P64 a = to_p64(poly.v[i]), b = to_p64(poly.v[(i + 1) % n]);
    const P64 step = primitive64(b - a);
    const std::int64_t c = content64(b - a);
    for (std::int64_t t = 0; t < c; ++t) loop.push_back(a + t * step);
  }
  MeshBuild mb;
  std::vector<Tri> tris = ear_clip(loop);
  for (const Vec2& mark : marks) insert_point(tris, to_p64(mark));
  for (const Tri& f : tris)
    subdivide_canonical(f[0], f[1], f[2], [&](P64 a, P64 b, P64 c) {
      mb.emit(Chart::Base, a, b, c);
    });
  TriComplex t = std::move(mb.t);
  stitch(t);
  assign_vertices(t);
  return t;
}

TriComplex triangulate(const AlmostToricBase& b,
                       const std::vector<Vec2>& marks) {
  MeshBuild mb;
  build_base_mesh(mb, b, marks);
  TriComplex t = std::move(mb.t);
  t.refinement = b.refinement;
  const auto slots = stitch(t);
  Claims claims;
  claim_cut_legs(claims, b);
  resolve_claims(t, slots, claims, /*require_all=*/false);
  mark_slits(t, b);
  assign_vertices(t);
  mark_singular(t, mb, b.singular_points, Chart::Base);
  pick_v0_collapsed(t, mb, b);
  return t;
}

TriComplex triangulate(const ClosedSurface& s) {
  ensure(s.base.refinement == s.cone.refinement, Err::ChainMismatch,
         "base and cone have different refinement levels");
  MeshBuild mb;
  build_base_mesh(mb, s.base, {});
  build_cone_mesh(mb, s.cone);
  TriComplex t = std::move(mb.t);
  t.refinement = s.base.refinement;
  const auto slots = stitch(t);
  Claims claims;
  claim_cut_legs(claims, s.base);
  claim_seam(claims, s.cone);
  claim_arc(claims, s);
  resolve_claims(t, slots, claims, /*require_all=*/true);
  mark_slits(t, s.base);
  assign_vertices(t);
  mark_singular(t, mb, s.base.singular_points, Chart::Base);
  const auto apex = mb.find_corner(Chart::Cone, to_p64(s.cone.v0()));
  ensure(apex.has_value(), Err::Internal, "cone apex vanished from the mesh");
  t.corners[static_cast<std::size_t>(*apex)].singular = true;
  t.v0 = t.corners[static_cast<std::size_t>(*apex)].vertex;
  return t;
}

}  // namespace cusp
