// Shared almost-toric fixtures reused across test suites.
#pragma once

#include <cstddef>
#include <random>
#include <utility>
#include <vector>

#include "cusp/cycles.hpp"
#include "cusp/numeric.hpp"
#include "cusp/surgery.hpp"
#include "support/oracles.hpp"

namespace cusp::testing {

// 7x7 rectangle with 6+5+4+2 unit blow-ups and one node smoothing between
// components 0 and 1.  The boundary ends up with d-values (4, 6, 5) and
// lengths (8, 1, 2).
inline AlmostToricBase figure6_base() {
  AlmostToricBase b =
      moment_polygon(fan_from_toric_cycle(Cycle{{0, 0, 0, 0}}), {7, 7, 7, 7});
  for (int k = 0; k < 6; ++k) b = internal_blowup(b, 2, 1, 0);
  for (int k = 0; k < 5; ++k) b = internal_blowup(b, 3, 1, 0);
  for (int k = 0; k < 4; ++k) b = internal_blowup(b, 0, 1, 0);
  for (int k = 0; k < 2; ++k) b = internal_blowup(b, 1, 1, 2);
  return node_smoothing(b, 0, 1);
}

// Charge-3 bases: a fan triangle supported on the three shortest edges,
// each of which is blown up to its full length so every boundary length
// drops to zero.  Cuts are allowed to share apexes and leg segments.
inline AlmostToricBase charge3_base(int which) {
  const Cycle c = (which == 0) ? Cycle{{3, 2, 1, 2, 3, 1, 2, 2, 2, 2, 1}}
                               : Cycle{{3, 2, 2, 1, 3, 2, 1, 2, 2, 2, 1}};
  const std::vector<std::size_t> support =
      (which == 0) ? std::vector<std::size_t>{2, 5, 10}
                   : std::vector<std::size_t>{3, 6, 10};
  auto rays = fan_from_toric_cycle(c);
  AlmostToricBase b = moment_polygon(rays, solve_lengths(rays, support));
  b.relaxed_cuts = true;
  for (std::size_t i : support) b = internal_blowup(b, i, b.lengths[i], 0);
  return b;
}

// Projective-plane triangle scaled by 6 with three unit blow-ups per
// component.  The boundary cycle becomes (2, 2, 2), whose collar monodromy
// has trace exactly 2: the threshold case that is not hyperbolic.  The
// diagonal component is cut first because its apex candidates all lie on a
// single lattice line and must not be crowded out.
inline AlmostToricBase trace2_base() {
  const Cycle c{{-1, -1, -1}};
  const auto rays = fan_from_toric_cycle(c);
  std::vector<Int> lens;
  for (const Int& m : solve_lengths(rays, {0, 1, 2})) lens.push_back(m * 6);
  AlmostToricBase b = moment_polygon(rays, lens);
  // Offsets count remaining material, so 0,1,2 hit original spots 0,2,4.
  for (std::size_t i : {2, 0, 1})
    for (Int off : {0, 1, 2}) b = internal_blowup(b, i, 1, off);
  return b;
}

// Random convex lattice polygon built by chopping corners off a big square.
// Each chop mirrors the corner blow-up bookkeeping on the cycle, so the
// returned (cycle, lengths) pair is a valid moment-polygon input by
// construction.
inline std::pair<Cycle, std::vector<Int>> random_toric_polygon(Rng& rng,
                                                               int chops) {
  Cycle c{{0, 0, 0, 0}};
  std::vector<Int> m{12, 12, 12, 12};
  for (int k = 0; k < chops; ++k) {
    const std::size_t n = c.size();
    const std::size_t i =
        std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
    const std::size_t j = (i + 1) % n;
    if (m[i] < 2 || m[j] < 2) continue;
    const long cap = static_cast<long>(
        std::min(to_i64(m[i]), to_i64(m[j])) - 1);
    const Int depth = std::uniform_int_distribution<long>(1, cap)(rng);
    c = apply_surgery(c, {SurgeryKind::CornerBlowup, i});
    // The new edge lands right after i, matching the cycle's new entry.
    m[i] -= depth;
    m.insert(m.begin() + static_cast<std::ptrdiff_t>(i) + 1, depth);
    m[(i + 1 < n) ? i + 2 : 0] -= depth;
  }
  return {c, m};
}

}  // namespace cusp::testing
