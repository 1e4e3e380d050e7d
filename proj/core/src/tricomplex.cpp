// Operations on triangulated complexes: exact 64-bit chart arithmetic,
// d-value computation, vertex stars, the flip rewrite at a vertex, the
// cycle-level surgery shadow, and the type III verification report.
#include <algorithm>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "cusp/complex.hpp"

namespace cusp {

namespace {

std::int64_t exact_div(std::int64_t a, std::int64_t b) {
  ensure(b != 0 && a % b == 0, Err::Internal, "non-integral chart division");
  return a / b;
}

// d * (b - a) = (c - a) + (e - a) for the two opposite corners c, e of the
// faces at edge a->b, all in one chart.
std::int64_t solve_d(P64 a, P64 b, P64 c, P64 e) {
  const P64 ex = b - a;
  const P64 s = (c - a) + (e - a);
  ensure(cross64(ex, s) == 0, Err::Internal,
         "opposite corners of an edge are not balanced");
  return ex.x != 0 ? exact_div(s.x, ex.x) : exact_div(s.y, ex.y);
}

int orient64(P64 a, P64 b, P64 c) {
  const std::int64_t x = cross64(b - a, c - a);
  return x > 0 ? 1 : x < 0 ? -1 : 0;
}

// Recomputes d on a halfedge and its twin (kNoD across a free boundary).
void refresh_d(TriComplex& t, std::int32_t h) {
  const std::int32_t w = t.twin[h];
  if (w < 0) {
    t.d[h] = kNoD;
    return;
  }
  const P64 a = t.pos(t.corner_from(h));
  const P64 b = t.pos(t.corner_to(h));
  const P64 c = t.pos(t.corner_opp(h));
  const P64 e = t.cross_map(h)(t.pos(t.corner_opp(w)));
  t.d[h] = solve_d(a, b, c, e);
}

Mat2 star_step(const Int& d) { return Mat2{0, 1, -1, d}; }

// Collects the counterclockwise rotation of outgoing halfedges at v.
std::vector<std::int32_t> rotation(const TriComplex& t, std::int32_t v,
                                   std::int32_t h0) {
  std::vector<std::int32_t> out;
  std::int32_t h = h0;
  do {
    ensure(t.from(h) == v, Err::Internal, "vertex rotation left its vertex");
    out.push_back(h);
    const std::int32_t w = t.twin[TriComplex::prev(h)];
    ensure(w >= 0, Err::Unsupported, "star at a free-boundary vertex");
    h = w;
    ensure(out.size() <= t.halfedge_count(), Err::Internal,
           "vertex rotation does not close");
  } while (h != h0);
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// Exact conversions and 64-bit affine algebra.

Aff64 compose64(const Aff64& f, const Aff64& g) {
  Aff64 r;
  r.a = f.a * g.a + f.b * g.c;
  r.b = f.a * g.b + f.b * g.d;
  r.c = f.c * g.a + f.d * g.c;
  r.d = f.c * g.b + f.d * g.d;
  r.tx = f.a * g.tx + f.b * g.ty + f.tx;
  r.ty = f.c * g.tx + f.d * g.ty + f.ty;
  return r;
}

Aff64 inverse64(const Aff64& f) {
  const std::int64_t det = f.a * f.d - f.b * f.c;
  ensure(det == 1 || det == -1, Err::Internal,
         "chart transition is not unimodular");
  Aff64 r;
  r.a = det * f.d;
  r.b = -det * f.b;
  r.c = -det * f.c;
  r.d = det * f.a;
  r.tx = -(r.a * f.tx + r.b * f.ty);
  r.ty = -(r.c * f.tx + r.d * f.ty);
  return r;
}

P64 to_p64(const Vec2& v) {
  ensure(is_lattice(v), Err::NonIntegralInput,
         "expected a lattice point in the triangulation");
  return {to_i64(num(v.x)), to_i64(num(v.y))};
}

Vec2 to_vec2(P64 p) { return {Int(p.x), Int(p.y)}; }

Aff64 to_aff64(const AffineMap& m) {
  ensure(is_lattice(m.tr), Err::NonIntegralInput,
         "expected an integral affine transition");
  return {to_i64(m.lin.a), to_i64(m.lin.b),  to_i64(m.lin.c),
          to_i64(m.lin.d), to_i64(num(m.tr.x)), to_i64(num(m.tr.y))};
}

AffineMap to_affine(const Aff64& m) {
  return {Mat2{m.a, m.b, m.c, m.d}, Vec2{Int(m.tx), Int(m.ty)}};
}

// ---------------------------------------------------------------------------
// TriComplex helpers.

std::size_t TriComplex::edge_count() const {
  std::size_t twinned = 0, free_boundary = 0;
  for (std::int32_t w : twin) (w >= 0 ? twinned : free_boundary) += 1;
  return twinned / 2 + free_boundary;
}

bool TriComplex::closed() const {
  for (std::int32_t w : twin)
    if (w < 0) return false;
  return true;
}

std::vector<std::int32_t> TriComplex::first_out() const {
  std::vector<std::int32_t> first(vertex_count, -1);
  for (std::int32_t h = 0; h < static_cast<std::int32_t>(halfedge_count());
       ++h) {
    const std::int32_t v = from(h);
    if (first[v] < 0) first[v] = h;
  }
  return first;
}

// ---------------------------------------------------------------------------
// d-values.

TriComplex edge_d_values(TriComplex t) {
  t.d.assign(t.halfedge_count(), kNoD);
  for (std::int32_t h = 0; h < static_cast<std::int32_t>(t.halfedge_count());
       ++h)
    refresh_d(t, h);
  return t;
}

// ---------------------------------------------------------------------------
// Stars.

Star star(const TriComplex& t, std::int32_t v) {
  ensure(v >= 0 && v < t.vertex_count, Err::IndexOutOfRange,
         "no such vertex in the complex");
  ensure(t.d.size() == t.halfedge_count(), Err::BadInput,
         "star needs d-values; run edge_d_values first");
  std::int32_t h0 = -1;
  for (std::int32_t h = 0; h < static_cast<std::int32_t>(t.halfedge_count());
       ++h)
    if (t.from(h) == v) {
      h0 = h;
      break;
    }
  ensure(h0 >= 0, Err::Internal, "vertex without halfedges");

  Star s;
  s.center = v;
  for (std::int32_t h : rotation(t, v, h0)) {
    ensure(t.d[h] != kNoD, Err::BadInput,
           "star needs d-values; run edge_d_values first");
    s.cycle.d.emplace_back(t.d[h]);
    if (t.corners[t.corner_from(h)].singular) s.singular = true;
  }
  s.charge = charge(s.cycle);
  s.local_monodromy = monodromy(s.cycle);
  return s;
}

// ---------------------------------------------------------------------------
// Edge flips and the star rewrite.

namespace {

// Corner lookup/insertion shared by the flips of one rewrite run.
struct CornerIndex {
  std::unordered_map<std::uint64_t, std::int32_t> by_pos;

  static std::uint64_t key(Chart ch, P64 p) {
    constexpr std::int64_t kOff = std::int64_t(1) << 30;
    ensure(p.x > -kOff && p.x < kOff && p.y > -kOff && p.y < kOff,
           Err::Internal, "chart coordinate out of indexable range");
    return (std::uint64_t(ch == Chart::Cone) << 62) |
           (std::uint64_t(p.x + kOff) << 31) | std::uint64_t(p.y + kOff);
  }

  explicit CornerIndex(const TriComplex& t) {
    by_pos.reserve(2 * t.corners.size());
    for (std::size_t i = 0; i < t.corners.size(); ++i)
      by_pos.emplace(key(t.corners[i].chart, t.corners[i].pos),
                     static_cast<std::int32_t>(i));
  }

  std::int32_t get_or_add(TriComplex& t, Chart ch, P64 p,
                          std::int32_t vertex_id, bool singular) {
    const std::uint64_t k = key(ch, p);
    auto it = by_pos.find(k);
    if (it != by_pos.end()) {
      ensure(t.corners[it->second].vertex == vertex_id, Err::Internal,
             "transported corner collides with a different vertex");
      return it->second;
    }
    const auto id = static_cast<std::int32_t>(t.corners.size());
    t.corners.push_back(TriCorner{p, ch, singular, vertex_id});
    by_pos.emplace(k, id);
    return id;
  }
};

// Flips the edge of halfedge h (twinned, faces distinct). The two faces are
// recharted into h's face's chart; all twin links and transitions of the
// four outer edges are rewired, and d is refreshed locally.
void flip_edge(TriComplex& t, CornerIndex& index, std::int32_t h) {
  const std::int32_t h2 = t.twin[h];
  ensure(h2 >= 0, Err::Internal, "cannot flip a free-boundary edge");
  const std::int32_t f1 = TriComplex::face_of(h);
  const std::int32_t f2 = TriComplex::face_of(h2);
  ensure(f1 != f2, Err::Internal, "cannot flip an edge inside one face");
  const Aff64 g = t.cross_map(h);  // f2 chart -> f1 chart

  // f1 = (a, b, c) with h = a->b; f2 = (b2, a2, e2) with h2 = b2->a2.
  const std::int32_t ca = t.corner_from(h), cb = t.corner_to(h),
                     cc = t.corner_opp(h), ce2 = t.corner_opp(h2);
  const P64 A = t.pos(ca), B = t.pos(cb), C = t.pos(cc);
  const P64 E = g(t.pos(ce2));
  ensure(orient64(A, E, C) > 0 && orient64(E, B, C) > 0, Err::Internal,
         "flip needs a strictly convex quad");

  const Chart chart1 = t.corners[ca].chart;
  const std::int32_t ce = index.get_or_add(t, chart1, E, t.corners[ce2].vertex,
                                           t.corners[ce2].singular);

  // Surviving outer sides, their new ids, and the chart adjustment applied to
  // each (old-side chart -> new-side chart).
  const std::int32_t o_bc = TriComplex::next(h), o_ca = TriComplex::prev(h);
  const std::int32_t o_ae = TriComplex::next(h2), o_eb = TriComplex::prev(h2);
  const std::int32_t n_ae = 3 * f1 + 0, n_ec = 3 * f1 + 1, n_ca = 3 * f1 + 2;
  const std::int32_t m_eb = 3 * f2 + 0, m_bc = 3 * f2 + 1, m_ce = 3 * f2 + 2;
  struct Side {
    std::int32_t old_id, new_id;
    Aff64 adj;
  };
  const Side sides[4] = {{o_bc, m_bc, Aff64::identity()},
                         {o_ca, n_ca, Aff64::identity()},
                         {o_ae, n_ae, g},
                         {o_eb, m_eb, g}};
  auto remap = [&](std::int32_t old_id) -> const Side* {
    for (const Side& s : sides)
      if (s.old_id == old_id) return &s;
    return nullptr;
  };

  struct OldSide {
    std::int32_t twin;
    bool has_trans;
    Aff64 trans;
  };
  OldSide old_state[4];
  for (int i = 0; i < 4; ++i) {
    auto it = t.transition.find(sides[i].old_id);
    old_state[i] = {t.twin[sides[i].old_id], it != t.transition.end(),
                    it == t.transition.end() ? Aff64::identity() : it->second};
  }
  for (std::int32_t dying : {h, h2, o_bc, o_ca, o_ae, o_eb})
    t.transition.erase(dying);

  t.faces[f1] = {ca, ce, cc};
  t.faces[f2] = {ce, cb, cc};
  ensure(cross64(E - A, C - A) == 1 && cross64(B - E, C - E) == 1,
         Err::Internal, "flip must produce unimodular faces");

  for (int i = 0; i < 4; ++i) {
    const Side& s = sides[i];
    const std::int32_t old_twin = old_state[i].twin;
    const Side* tw = old_twin >= 0 ? remap(old_twin) : nullptr;
    const std::int32_t new_twin = tw ? tw->new_id : old_twin;
    t.twin[s.new_id] = new_twin;
    if (old_twin < 0) continue;
    // new transition: new-twin chart -> new-side chart.
    Aff64 tr = old_state[i].trans;                       // twin -> old side
    tr = compose64(s.adj, tr);                           // -> new side
    if (tw) tr = compose64(tr, inverse64(tw->adj));      // from new twin chart
    if (!tr.is_identity()) t.transition.emplace(s.new_id, tr);
    if (!tw) {  // external twin: update its back link and reverse transition
      t.twin[old_twin] = s.new_id;
      t.transition.erase(old_twin);
      const Aff64 back = inverse64(tr);
      if (!back.is_identity()) t.transition.emplace(old_twin, back);
    }
  }
  // The new diagonal.
  t.twin[n_ec] = m_ce;
  t.twin[m_ce] = n_ec;

  if (t.d.size() == t.halfedge_count()) {
    for (std::int32_t e : {n_ae, n_ec, n_ca, m_eb, m_bc, m_ce}) {
      refresh_d(t, e);
      if (t.twin[e] >= 0) refresh_d(t, t.twin[e]);
    }
  }
}

}  // namespace

TriComplex minimize_star(TriComplex t, std::int32_t v) {
  ensure(v >= 0 && v < t.vertex_count, Err::IndexOutOfRange,
         "no such vertex in the complex");
  ensure(t.d.size() == t.halfedge_count(), Err::BadInput,
         "minimize_star needs d-values; run edge_d_values first");
  CornerIndex index(t);
  std::int32_t h0 = -1;
  for (std::int32_t h = 0; h < static_cast<std::int32_t>(t.halfedge_count());
       ++h)
    if (t.from(h) == v) {
      h0 = h;
      break;
    }
  ensure(h0 >= 0, Err::Internal, "vertex without halfedges");
  std::size_t flips = 0;
  const std::size_t guard = t.halfedge_count() + 16;
  for (;;) {
    std::int32_t pick = -1;
    for (std::int32_t h : rotation(t, v, h0))
      if (t.d[h] == 1) {
        pick = h;
        break;
      }
    if (pick < 0) break;
    flip_edge(t, index, pick);
    // The flipped face f1 = (a, e, c) keeps v at its first corner, so its
    // first halfedge still leaves v.
    h0 = 3 * TriComplex::face_of(pick);
    ensure(t.from(h0) == v, Err::Internal, "flip rewrite lost its vertex");
    ensure(++flips < guard, Err::Internal, "flip rewrite does not terminate");
  }
  return t;
}

// ---------------------------------------------------------------------------
// Cycle-level surgery shadow.

Cycle expected_star_cycle(const Cycle& toric_star,
                          const std::vector<CycleSurgery>& incident) {
  Cycle c = toric_star;
  for (const CycleSurgery& s : incident) {
    ensure(s.index < c.size(), Err::IndexOutOfRange,
           "surgery index outside the star cycle");
    switch (s.kind) {
      case SurgeryKind::InternalBlowup: {
        // A blow-up in the base smooths a node of the star: two adjacent
        // entries merge.
        ensure(c.size() >= 2, Err::IndexOutOfRange,
               "cannot merge entries of a 1-cycle");
        const std::size_t j = (s.index + 1) % c.size();
        c.d[s.index] = c.d[s.index] + c.d[j] - 2;
        c.d.erase(c.d.begin() + static_cast<std::ptrdiff_t>(j));
        break;
      }
      case SurgeryKind::NodeSmoothing:
        // A node smoothing in the base blows up the star: one entry grows.
        c.d[s.index] += 1;
        break;
      case SurgeryKind::CornerBlowup:
        fail(Err::Unsupported,
             "corner blow-ups do not act on the star of an interior point");
    }
  }
  return c;
}

// ---------------------------------------------------------------------------
// Verification.

TypeIIIReport verify_type_iii(const TriComplex& t_in,
                              const Cycle& expected_dual) {
  const TriComplex* tp = &t_in;
  TriComplex owned;
  if (t_in.d.size() != t_in.halfedge_count()) {
    owned = edge_d_values(t_in);
    tp = &owned;
  }
  const TriComplex& t = *tp;

  TypeIIIReport r;
  r.face_count = t.face_count();
  r.edge_count = t.edge_count();
  r.vertex_count = static_cast<std::size_t>(t.vertex_count);
  r.closed = t.closed();
  if (!r.closed) r.failures.push_back("surface has a free boundary");

  // (a) triple point formula on every edge.
  r.triple_point_ok = r.closed;
  for (std::int32_t h = 0;
       h < static_cast<std::int32_t>(t.halfedge_count()) && r.triple_point_ok;
       ++h) {
    const std::int32_t w = t.twin[h];
    if (w < 0) continue;
    if (t.d[h] == kNoD || t.d[w] == kNoD || t.d[h] + t.d[w] != 2) {
      r.triple_point_ok = false;
      r.failures.push_back("triple point formula fails on an edge");
    }
  }

  // (b) connected sphere.
  bool connected = true;
  if (!t.faces.empty()) {
    std::vector<char> seen(t.faces.size(), 0);
    std::vector<std::int32_t> queue{0};
    seen[0] = 1;
    std::size_t reached = 1;
    while (!queue.empty()) {
      const std::int32_t f = queue.back();
      queue.pop_back();
      for (int k = 0; k < 3; ++k) {
        const std::int32_t w = t.twin[3 * f + k];
        if (w < 0) continue;
        const std::int32_t g = TriComplex::face_of(w);
        if (!seen[g]) {
          seen[g] = 1;
          ++reached;
          queue.push_back(g);
        }
      }
    }
    connected = reached == t.faces.size();
  }
  const auto euler = static_cast<std::ptrdiff_t>(r.vertex_count) -
                     static_cast<std::ptrdiff_t>(r.edge_count) +
                     static_cast<std::ptrdiff_t>(r.face_count);
  r.sphere_ok = r.closed && connected && euler == 2;
  if (!r.sphere_ok)
    r.failures.push_back("not a connected sphere (V-E+F = " +
                         std::to_string(euler) + ")");

  // (c) charges: total 24, nonsingular vertices contribute 0.
  std::vector<char> singular(static_cast<std::size_t>(t.vertex_count), 0);
  for (const TriCorner& c : t.corners)
    if (c.singular) singular[static_cast<std::size_t>(c.vertex)] = 1;
  if (t.v0) singular[static_cast<std::size_t>(*t.v0)] = 1;
  r.charges_ok = r.closed;
  if (r.closed) {
    std::vector<std::int64_t> acc(static_cast<std::size_t>(t.vertex_count), 0);
    for (std::int32_t h = 0; h < static_cast<std::int32_t>(t.halfedge_count());
         ++h)
      acc[static_cast<std::size_t>(t.from(h))] += t.d[h] - 3;
    Int total = 0;
    for (std::size_t v = 0; v < acc.size(); ++v) {
      const Int q = 12 + Int(acc[v]);
      total += q;
      if (!singular[v] && q != 0) {
        r.charges_ok = false;
        r.failures.push_back("nonsingular vertex " + std::to_string(v) +
                             " has charge " + q.str());
      }
    }
    r.charge_total = total;
    if (total != 24) {
      r.charges_ok = false;
      r.failures.push_back("total charge is " + total.str() + ", expected 24");
    }
  }

  // (d)-(f) the distinguished vertex against the expected dual cycle.
  if (t.v0 && r.closed) {
    const Star s0 = star(t, *t.v0);
    r.v0_cycle = s0.cycle;
    r.v0_edge_count = s0.cycle.size();
    r.v0_negative_definite = is_negative_definite(s0.cycle);
    if (!r.v0_negative_definite)
      r.failures.push_back("star of v0 is not negative definite");
    r.v0_matches_dual = cycles_equal(s0.cycle, expected_dual);
    if (!r.v0_matches_dual)
      r.failures.push_back("star of v0 is " + format_cycle(s0.cycle) +
                           ", expected " + format_cycle(expected_dual));
    // Both cycles are read through the same product form; the two results
    // are conjugate exactly when the words agree cyclically.  The star is
    // read in the mesh's rotation order while the dual is written in the
    // boundary cycle's orientation, so accept the dual in either direction.
    Mat2 star_prod = Mat2::identity();
    for (const Int& dp : s0.cycle.d) star_prod = star_prod * Mat2{0, -1, 1, dp};
    Mat2 dual_fwd = Mat2::identity();
    Mat2 dual_rev = Mat2::identity();
    for (const Int& dp : expected_dual.d) {
      dual_fwd = dual_fwd * Mat2{0, -1, 1, dp};
      dual_rev = Mat2{0, -1, 1, dp} * dual_rev;
    }
    if (trace(star_prod) > 2 && trace(dual_fwd) > 2) {
      const std::string star_word = sl2z_word(star_prod);
      r.v0_word_ok = star_word == sl2z_word(dual_fwd) ||
                     star_word == sl2z_word(dual_rev);
    } else {
      r.v0_word_ok = false;
    }
    if (!r.v0_word_ok)
      r.failures.push_back("monodromy word of v0 does not match the dual");

    r.stars.push_back(s0);
  } else if (!t.v0) {
    r.failures.push_back("complex has no distinguished vertex v0");
  }

  if (r.closed) {
    for (std::int32_t v = 0; v < t.vertex_count; ++v) {
      if (!singular[static_cast<std::size_t>(v)]) continue;
      if (t.v0 && v == *t.v0) continue;
      r.stars.push_back(star(t, v));
    }
  }
  return r;
}

}  // namespace cusp
