// The recipe-driven construction pipeline.
#include <algorithm>
#include <string>
#include <utility>

#include "cusp/error.hpp"
#include "cusp/pipeline.hpp"

namespace cusp {

namespace {

// Run one pipeline stage; on failure, prepend the stage name so errors read
// "internal_blowup[4] (edge 1, size 2, offset 0): DoesNotFit: ...".
template <class F>
auto stage(const std::string& name, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Error& e) {
    fail(e.code(), name + ": " + e.what());
  }
}

std::string surgery_label(std::size_t i, const RecipeSurgery& s) {
  std::string label;
  if (s.kind == SurgeryKind::NodeSmoothing) {
    label = "node_smoothing[" + std::to_string(i) + "] (vertex " +
            std::to_string(s.index) + ", n " + s.size.str() + ")";
  } else {
    label = "internal_blowup[" + std::to_string(i) + "] (edge " +
            std::to_string(s.index) + ", size " +
            (s.full_size ? std::string("full") : s.size.str()) + ", offset " +
            s.offset.str() + ")";
  }
  return label;
}

}  // namespace

RunResult run_construct(const Recipe& r) {
  const std::vector<Vec2> rays =
      stage("fan_from_toric_cycle", [&] { return fan_from_toric_cycle(r.toric_cycle); });

  std::vector<Int> lengths;
  if (r.lengths_given) {
    lengths = r.lengths;
  } else {
    lengths =
        stage("solve_lengths", [&] { return solve_lengths(rays, r.support); });
  }

  AlmostToricBase b =
      stage("moment_polygon", [&] { return moment_polygon(rays, lengths); });
  b.relaxed_cuts = r.relaxed_cuts;

  for (std::size_t i = 0; i < r.surgeries.size(); ++i) {
    const RecipeSurgery& s = r.surgeries[i];
    const std::string label = surgery_label(i, s);
    if (s.kind == SurgeryKind::NodeSmoothing) {
      b = stage(label, [&] { return node_smoothing(b, s.index, s.size); });
    } else {
      ensure(s.kind == SurgeryKind::InternalBlowup, Err::BadInput,
             label + ": unsupported surgery kind");
      Int size = s.size;
      if (s.full_size) {
        ensure(s.index < b.lengths.size(), Err::IndexOutOfRange,
               label + ": edge index out of range");
        size = b.lengths[s.index];
        ensure(size >= 1, Err::EdgeTooShort,
               label + ": component already has length zero");
      }
      b = stage(label, [&] { return internal_blowup(b, s.index, size, s.offset); });
    }
  }

  RunResult rr;
  rr.expected_dual = stage("dual_cycle", [&] { return dual_cycle(b.cycle); });

  const bool collapsed =
      std::all_of(b.lengths.begin(), b.lengths.end(),
                  [](const Int& m) { return m == 0; });

  TriComplex t;
  if (collapsed) {
    // Every boundary component has shrunk to zero length: the cut gluings
    // already close the surface and no cone cap is needed.
    t = stage("triangulate", [&] { return triangulate(b); });
  } else {
    const AffineMap coarse =
        stage("collar_monodromy", [&] { return collar_monodromy(b); });
    const Vec2 fix = stage("fixed_point", [&] { return fixed_point(coarse); });
    const Int k = r.refinement ? *r.refinement : choose_refinement(fix);
    const AlmostToricBase fine = stage("refine", [&] { return refine(b, k); });
    const Vec2 v0 = stage("fixed_point", [&] {
      return fixed_point(collar_monodromy(fine));
    });
    const DiscreteHyperbola h = stage("discrete_hyperbola", [&] {
      return discrete_hyperbola(fine, r.periods);
    });
    const std::size_t anchor = r.anchor ? *r.anchor : h.anchor_index();
    const ConeDomain cone =
        stage("build_cone", [&] { return build_cone(h, v0, anchor); });
    rr.surface = stage("assemble_sphere", [&] {
      return assemble_sphere(fine, cone);
    });
    t = stage("triangulate", [&] { return triangulate(*rr.surface); });
  }

  t = stage("edge_d_values", [&] { return edge_d_values(std::move(t)); });
  ensure(t.v0.has_value(), Err::Internal,
         "triangulation of a closed surface has no distinguished vertex");
  t = stage("minimize_star", [&] { return minimize_star(std::move(t), *t.v0); });

  rr.report = verify_type_iii(t, rr.expected_dual);
  rr.complex = std::move(t);
  rr.base = std::move(b);
  return rr;
}

}  // namespace cusp
