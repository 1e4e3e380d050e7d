// Recipe-driven pipeline: parse a JSON recipe, apply its surgeries to a
// moment polygon, close the surface, triangulate, verify, and serialize
// every stage. Serialization is deterministic down to the byte: identical
// inputs produce identical artifacts, and the verification report carries a
// content hash of the complex it audited.
//
// JSON conventions: coordinates are [numerator, denominator] pairs (never
// floats); counts, d-values and matrix entries are plain integers; integers
// outside the 64-bit range are emitted as decimal strings and accepted in
// either form on input.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cusp/compactify.hpp"
#include "cusp/complex.hpp"
#include "cusp/cycles.hpp"
#include "cusp/surgery.hpp"

namespace cusp {

// ---------------------------------------------------------------------------
// Recipes.

// One surgery request. Blow-ups read `index` as the boundary component,
// `size` as the removed triangle's lattice size (the whole remaining
// component length when `full_size` is set) and `offset` as lattice units
// from the component's walk start. Smoothings read `index` as the boundary
// vertex (corner between components index and index+1) and `size` as the
// slit length n.
struct RecipeSurgery {
  SurgeryKind kind{SurgeryKind::InternalBlowup};
  std::size_t index{0};
  Int size{1};
  Int offset{0};
  bool full_size{false};
};

struct Recipe {
  Cycle toric_cycle;
  // Exactly one of the two is used: explicit per-edge lengths, or the
  // support set handed to solve_lengths for minimal closing lengths.
  std::vector<Int> lengths;
  std::vector<std::size_t> support;
  bool lengths_given{false};
  std::vector<RecipeSurgery> surgeries;
  bool relaxed_cuts{false};
  // Options, overridable from the command line.
  std::optional<Int> refinement;       // override choose_refinement
  std::optional<std::size_t> anchor;   // override the cone seam anchor
  std::size_t periods{1};              // hyperbola periods to develop
};

// Parses the JSON recipe format:
//   { "toric_cycle": [ints],
//     "lengths": [ints] | {"support": [ints]},
//     "surgeries": [ {"op":"blowup","edge":i,"size":s|"full","offset":o}
//                  | {"op":"smooth","vertex":i,"n":n} ],
//     "relaxed_cuts": bool?,
//     "options": {"refinement":k?, "anchor":i?, "periods":n?}? }
// Throws BadInput on malformed text or schema violations.
Recipe parse_recipe(const std::string& json_text);

// ---------------------------------------------------------------------------
// The pipeline.

struct RunResult {
  AlmostToricBase base;                  // after all surgeries, input scale
  std::optional<ClosedSurface> surface;  // absent on the collapsed path
  TriComplex complex;                    // triangulated, star-minimized
  Cycle expected_dual;                   // dual of the boundary cycle
  TypeIIIReport report;
};

// Runs recipe -> surgeries -> compactification (skipped when every boundary
// length reaches zero and the base is already closed) -> triangulation ->
// star minimization -> verification. Errors from a pipeline stage are
// rethrown with the stage (and surgery number) prepended to the message.
// A failed verification does not throw; the report carries the failures.
RunResult run_construct(const Recipe& r);

// ---------------------------------------------------------------------------
// Artifacts.

std::string to_json(const AlmostToricBase& b);
std::string to_json(const ClosedSurface& s);
std::string to_json(const TriComplex& t);
// The report references the audited complex by content hash (pass the exact
// bytes of its serialized form).
std::string report_to_json(const TypeIIIReport& r, const Cycle& expected_dual,
                           const std::string& complex_hash);

// Inverse of to_json(TriComplex). Throws BadInput on malformed or
// inconsistent input.
TriComplex complex_from_json(const std::string& text);

// FNV-1a 64-bit content hash, rendered as "fnv1a64:" + 16 hex digits.
std::string content_hash(const std::string& bytes);

// ---------------------------------------------------------------------------
// Rendering.

struct RenderOptions {
  bool grid{false};  // draw the input-scale lattice grid
};

// The surgered base region: outline, dashed cuts, singular points.
std::string render_base_svg(const AlmostToricBase& b,
                            const RenderOptions& opt = {});

// The triangulated result. Two panels (base and cone fundamental domains)
// when the surface was closed by a cone; one panel on the collapsed path.
// The distinguished vertex is highlighted.
std::string render_complex_svg(const RunResult& rr,
                               const RenderOptions& opt = {});

}  // namespace cusp
