// Deterministic JSON artifact serialization and the matching readers.
//
// Writing is hand-rolled: field order, whitespace and number formatting are
// fixed so identical inputs give byte-identical files (the determinism
// contract and the content hash both depend on it). Reading uses nlohmann
// JSON; integers are accepted as JSON numbers or as decimal strings, the
// latter carrying values outside the 64-bit range.
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "json.hpp"

#include "cusp/error.hpp"
#include "cusp/pipeline.hpp"

namespace cusp {

namespace {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Writer helpers.

bool fits_i64(const Int& v) {
  return v >= std::numeric_limits<std::int64_t>::min() &&
         v <= std::numeric_limits<std::int64_t>::max();
}

void put_int(std::string& out, const Int& v) {
  if (fits_i64(v)) {
    out += v.str();
  } else {
    out += '"';
    out += v.str();
    out += '"';
  }
}

void put_int(std::string& out, std::int64_t v) { out += std::to_string(v); }

void put_bool(std::string& out, bool b) { out += b ? "true" : "false"; }

// JSON string escaping for the small label/failure strings we emit. The
// library never produces control characters or non-ASCII text.
void put_str(std::string& out, const std::string& s) {
  out += '"';
  for (char ch : s) {
    switch (ch) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out += ch;
    }
  }
  out += '"';
}

// A rational as [numerator, denominator], denominator > 0.
void put_rat(std::string& out, const Rat& q) {
  out += '[';
  put_int(out, num(q));
  out += ',';
  put_int(out, den(q));
  out += ']';
}

void put_vec2(std::string& out, const Vec2& v) {
  out += '[';
  put_rat(out, v.x);
  out += ',';
  put_rat(out, v.y);
  out += ']';
}

void put_vec2_list(std::string& out, const std::vector<Vec2>& vs) {
  out += '[';
  for (std::size_t i = 0; i < vs.size(); ++i) {
    if (i) out += ',';
    put_vec2(out, vs[i]);
  }
  out += ']';
}

void put_mat2(std::string& out, const Mat2& m) {
  out += "[[";
  put_int(out, m.a);
  out += ',';
  put_int(out, m.b);
  out += "],[";
  put_int(out, m.c);
  out += ',';
  put_int(out, m.d);
  out += "]]";
}

void put_affine(std::string& out, const AffineMap& m) {
  out += "{\"matrix\":";
  put_mat2(out, m.lin);
  out += ",\"translation\":";
  put_vec2(out, m.tr);
  out += '}';
}

void put_cycle(std::string& out, const Cycle& c) {
  out += '[';
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (i) out += ',';
    put_int(out, c.d[i]);
  }
  out += ']';
}

void put_base_body(std::string& out, const AlmostToricBase& b) {
  out += "{\n\"refinement\":";
  put_int(out, b.refinement);
  out += ",\n\"relaxed_cuts\":";
  put_bool(out, b.relaxed_cuts);
  out += ",\n\"cycle\":";
  put_cycle(out, b.cycle);
  out += ",\n\"charge\":";
  put_int(out, charge(b.cycle));
  out += ",\n\"lengths\":[";
  for (std::size_t i = 0; i < b.lengths.size(); ++i) {
    if (i) out += ',';
    put_int(out, b.lengths[i]);
  }
  out += "],\n\"outline\":";
  put_vec2_list(out, b.outline.v);
  out += ",\n\"singular_points\":";
  put_vec2_list(out, b.singular_points);
  out += ",\n\"cuts\":[";
  for (std::size_t i = 0; i < b.cuts.size(); ++i) {
    const Cut& c = b.cuts[i];
    out += i ? ",\n" : "\n";
    out += "{\"kind\":";
    put_str(out, c.kind == Cut::Kind::Blowup ? "blowup" : "smoothing");
    out += ",\"component\":";
    put_int(out, static_cast<std::int64_t>(c.component));
    out += ",\"size\":";
    put_int(out, c.size);
    out += ",\"apex\":";
    put_vec2(out, c.apex);
    out += ",\"base_a\":";
    put_vec2(out, c.base_a);
    out += ",\"base_b\":";
    put_vec2(out, c.base_b);
    out += ",\"e1\":";
    put_vec2(out, c.e1);
    out += ",\"e2\":";
    put_vec2(out, c.e2);
    out += ",\"glue\":";
    put_affine(out, c.glue);
    out += ",\"chain_from\":";
    put_vec2_list(out, c.chain_from);
    out += ",\"chain_to\":";
    put_vec2_list(out, c.chain_to);
    out += '}';
  }
  out += "]\n}";
}

// ---------------------------------------------------------------------------
// Reader helpers.

[[noreturn]] void bad(const std::string& msg) { fail(Err::BadInput, msg); }

Int to_int(const json& j, const char* what) {
  if (j.is_number_integer()) return Int(j.get<std::int64_t>());
  if (j.is_number_unsigned()) return Int(j.get<std::uint64_t>());
  if (j.is_string()) {
    try {
      return Int(j.get<std::string>());
    } catch (const std::exception&) {
      bad(std::string(what) + ": bad integer string");
    }
  }
  bad(std::string(what) + ": expected an integer");
}

std::int64_t to_i64_field(const json& j, const char* what) {
  Int v = to_int(j, what);
  ensure(fits_i64(v), Err::BadInput, std::string(what) + ": out of range");
  return static_cast<std::int64_t>(v);
}

Rat to_rat(const json& j, const char* what) {
  if (!j.is_array() || j.size() != 2)
    bad(std::string(what) + ": expected [numerator, denominator]");
  Int n = to_int(j[0], what), d = to_int(j[1], what);
  ensure(d > 0, Err::BadInput, std::string(what) + ": denominator must be positive");
  return Rat(n, d);
}

Vec2 to_vec2_json(const json& j, const char* what) {
  if (!j.is_array() || j.size() != 2)
    bad(std::string(what) + ": expected a coordinate pair");
  return Vec2{to_rat(j[0], what), to_rat(j[1], what)};
}

const json& need(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) bad(std::string("missing field \"") + key + "\"");
  return *it;
}

json parse_text(const std::string& text) {
  json j = json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded()) bad("not valid JSON");
  return j;
}

}  // namespace

// ---------------------------------------------------------------------------
// Artifact writers.

std::string to_json(const AlmostToricBase& b) {
  std::string out;
  out.reserve(4096);
  out += "{\n\"format\":\"cusp-base/1\",\n";
  // Splice the body's fields into this object.
  std::string body;
  put_base_body(body, b);
  out.append(body, 2, body.size() - 2);
  out += '\n';
  return out;
}

std::string to_json(const ClosedSurface& s) {
  std::string out;
  out.reserve(8192);
  out += "{\n\"format\":\"cusp-surface/1\",\n\"refinement\":";
  put_int(out, s.base.refinement);
  out += ",\n\"apex\":";
  put_vec2(out, s.cone.v0());
  // The fixed point at input scale (before refinement).
  out += ",\n\"fixed_point\":";
  const Rat k(s.base.refinement);
  put_vec2(out, Vec2{s.cone.v0().x / k, s.cone.v0().y / k});
  out += ",\n\"base\":";
  put_base_body(out, s.base);
  out += ",\n\"cone\":{\"fundamental\":";
  put_vec2_list(out, s.cone.fundamental.v);
  out += ",\"identification\":";
  put_affine(out, s.cone.identification);
  out += ",\"refinement\":";
  put_int(out, s.cone.refinement);
  out += "},\n\"boundary_matching\":[";
  for (std::size_t i = 0; i < s.boundary_matching.size(); ++i) {
    if (i) out += ',';
    put_int(out, static_cast<std::int64_t>(s.boundary_matching[i]));
  }
  out += "]\n}\n";
  return out;
}

std::string to_json(const TriComplex& t) {
  std::string out;
  out.reserve(64 * t.faces.size() + 96 * t.corners.size() + 1024);
  out += "{\n\"format\":\"cusp-complex/1\",\n\"refinement\":";
  put_int(out, t.refinement);
  out += ",\n\"vertex_count\":";
  put_int(out, static_cast<std::int64_t>(t.vertex_count));
  out += ",\n\"v0\":";
  if (t.v0)
    put_int(out, static_cast<std::int64_t>(*t.v0));
  else
    out += "null";
  out += ",\n\"vertices\":[";
  for (std::size_t i = 0; i < t.corners.size(); ++i) {
    const TriCorner& c = t.corners[i];
    out += i ? ",\n" : "\n";
    out += "{\"id\":";
    put_int(out, static_cast<std::int64_t>(c.vertex));
    out += ",\"chart\":";
    out += c.chart == Chart::Base ? '0' : '1';
    out += ",\"singular\":";
    put_bool(out, c.singular);
    out += ",\"pos\":[[";
    put_int(out, c.pos.x);
    out += ",1],[";
    put_int(out, c.pos.y);
    out += ",1]]}";
  }
  out += "],\n\"faces\":[";
  for (std::size_t f = 0; f < t.faces.size(); ++f) {
    out += f ? ",\n" : "\n";
    out += '[';
    put_int(out, static_cast<std::int64_t>(t.faces[f][0]));
    out += ',';
    put_int(out, static_cast<std::int64_t>(t.faces[f][1]));
    out += ',';
    put_int(out, static_cast<std::int64_t>(t.faces[f][2]));
    out += ']';
  }
  out += "],\n\"edges\":[";
  for (std::size_t h = 0; h < t.twin.size(); ++h) {
    out += h ? ",\n" : "\n";
    out += "{\"twin\":";
    put_int(out, static_cast<std::int64_t>(t.twin[h]));
    out += ",\"d\":";
    if (t.d[h] == kNoD)
      out += "null";
    else
      put_int(out, t.d[h]);
    out += '}';
  }
  out += "],\n\"identifications\":[";
  bool first = true;
  for (std::size_t h = 0; h < t.twin.size(); ++h) {
    auto it = t.transition.find(static_cast<std::int32_t>(h));
    if (it == t.transition.end()) continue;
    const Aff64& m = it->second;
    out += first ? "\n" : ",\n";
    first = false;
    out += "{\"edge\":";
    put_int(out, static_cast<std::int64_t>(h));
    out += ",\"matrix\":[[";
    put_int(out, m.a);
    out += ',';
    put_int(out, m.b);
    out += "],[";
    put_int(out, m.c);
    out += ',';
    put_int(out, m.d);
    out += "]],\"translation\":[[";
    put_int(out, m.tx);
    out += ",1],[";
    put_int(out, m.ty);
    out += ",1]]}";
  }
  out += "]\n}\n";
  return out;
}

std::string report_to_json(const TypeIIIReport& r, const Cycle& expected_dual,
                           const std::string& complex_hash) {
  std::string out;
  out.reserve(4096);
  out += "{\n\"format\":\"cusp-report/1\",\n\"complex_hash\":";
  put_str(out, complex_hash);
  out += ",\n\"expected_dual\":";
  put_cycle(out, expected_dual);
  out += ",\n\"ok\":";
  put_bool(out, r.ok());
  out += ",\n\"checks\":{\"closed\":";
  put_bool(out, r.closed);
  out += ",\"triple_point_formula\":";
  put_bool(out, r.triple_point_ok);
  out += ",\"sphere\":";
  put_bool(out, r.sphere_ok);
  out += ",\"charges\":";
  put_bool(out, r.charges_ok);
  out += ",\"v0_negative_definite\":";
  put_bool(out, r.v0_negative_definite);
  out += ",\"v0_matches_dual\":";
  put_bool(out, r.v0_matches_dual);
  out += ",\"v0_word\":";
  put_bool(out, r.v0_word_ok);
  out += "},\n\"charge_total\":";
  put_int(out, r.charge_total);
  out += ",\n\"counts\":{\"vertices\":";
  put_int(out, static_cast<std::int64_t>(r.vertex_count));
  out += ",\"edges\":";
  put_int(out, static_cast<std::int64_t>(r.edge_count));
  out += ",\"faces\":";
  put_int(out, static_cast<std::int64_t>(r.face_count));
  out += ",\"v0_edges\":";
  put_int(out, static_cast<std::int64_t>(r.v0_edge_count));
  out += "},\n\"v0_cycle\":";
  put_cycle(out, r.v0_cycle);
  out += ",\n\"stars\":[";
  for (std::size_t i = 0; i < r.stars.size(); ++i) {
    const Star& s = r.stars[i];
    out += i ? ",\n" : "\n";
    out += "{\"center\":";
    put_int(out, static_cast<std::int64_t>(s.center));
    out += ",\"singular\":";
    put_bool(out, s.singular);
    out += ",\"cycle\":";
    put_cycle(out, s.cycle);
    out += ",\"charge\":";
    put_int(out, s.charge);
    out += ",\"monodromy\":";
    put_mat2(out, s.local_monodromy);
    out += '}';
  }
  out += "],\n\"failures\":[";
  for (std::size_t i = 0; i < r.failures.size(); ++i) {
    if (i) out += ',';
    put_str(out, r.failures[i]);
  }
  out += "]\n}\n";
  return out;
}

// ---------------------------------------------------------------------------
// Readers.

TriComplex complex_from_json(const std::string& text) {
  const json j = parse_text(text);
  if (!j.is_object()) bad("complex: expected a JSON object");
  if (need(j, "format").get<std::string>() != "cusp-complex/1")
    bad("complex: unknown format tag");

  TriComplex t;
  t.refinement = to_int(need(j, "refinement"), "refinement");
  t.vertex_count =
      static_cast<std::int32_t>(to_i64_field(need(j, "vertex_count"), "vertex_count"));
  const json& v0 = need(j, "v0");
  if (!v0.is_null())
    t.v0 = static_cast<std::int32_t>(to_i64_field(v0, "v0"));

  const json& verts = need(j, "vertices");
  if (!verts.is_array()) bad("complex: vertices must be an array");
  t.corners.reserve(verts.size());
  for (const json& row : verts) {
    TriCorner c;
    c.vertex = static_cast<std::int32_t>(to_i64_field(need(row, "id"), "vertex id"));
    const std::int64_t chart = to_i64_field(need(row, "chart"), "chart");
    ensure(chart == 0 || chart == 1, Err::BadInput, "chart must be 0 or 1");
    c.chart = chart == 0 ? Chart::Base : Chart::Cone;
    c.singular = need(row, "singular").get<bool>();
    const Vec2 p = to_vec2_json(need(row, "pos"), "pos");
    ensure(is_integral(p.x) && is_integral(p.y), Err::BadInput,
           "complex positions must be integral");
    c.pos = P64{to_i64(num(p.x)), to_i64(num(p.y))};
    ensure(c.vertex >= 0 && c.vertex < t.vertex_count, Err::BadInput,
           "vertex id out of range");
    t.corners.push_back(c);
  }

  const json& faces = need(j, "faces");
  if (!faces.is_array()) bad("complex: faces must be an array");
  t.faces.reserve(faces.size());
  const std::int64_t ncorners = static_cast<std::int64_t>(t.corners.size());
  for (const json& row : faces) {
    if (!row.is_array() || row.size() != 3) bad("face rows must be triples");
    std::array<std::int32_t, 3> f{};
    for (int k = 0; k < 3; ++k) {
      const std::int64_t c = to_i64_field(row[static_cast<std::size_t>(k)], "face corner");
      ensure(c >= 0 && c < ncorners, Err::BadInput, "face corner out of range");
      f[static_cast<std::size_t>(k)] = static_cast<std::int32_t>(c);
    }
    t.faces.push_back(f);
  }

  const json& edges = need(j, "edges");
  if (!edges.is_array() || edges.size() != 3 * t.faces.size())
    bad("complex: edges must list exactly 3 rows per face");
  const std::int64_t nhalf = static_cast<std::int64_t>(edges.size());
  t.twin.reserve(edges.size());
  t.d.reserve(edges.size());
  for (const json& row : edges) {
    const std::int64_t tw = to_i64_field(need(row, "twin"), "twin");
    ensure(tw >= -1 && tw < nhalf, Err::BadInput, "twin out of range");
    t.twin.push_back(static_cast<std::int32_t>(tw));
    const json& d = need(row, "d");
    t.d.push_back(d.is_null() ? kNoD : to_i64_field(d, "d"));
  }
  for (std::size_t h = 0; h < t.twin.size(); ++h) {
    const std::int32_t tw = t.twin[h];
    if (tw >= 0)
      ensure(t.twin[static_cast<std::size_t>(tw)] == static_cast<std::int32_t>(h),
             Err::BadInput, "twin pairing is not symmetric");
  }

  const json& idents = need(j, "identifications");
  if (!idents.is_array()) bad("complex: identifications must be an array");
  for (const json& row : idents) {
    const std::int64_t h = to_i64_field(need(row, "edge"), "identification edge");
    ensure(h >= 0 && h < nhalf, Err::BadInput, "identification edge out of range");
    const json& m = need(row, "matrix");
    if (!m.is_array() || m.size() != 2 || !m[0].is_array() || m[0].size() != 2 ||
        !m[1].is_array() || m[1].size() != 2)
      bad("identification matrix must be 2x2");
    const Vec2 tr = to_vec2_json(need(row, "translation"), "translation");
    ensure(is_integral(tr.x) && is_integral(tr.y), Err::BadInput,
           "identification translation must be integral");
    Aff64 a;
    a.a = to_i64_field(m[0][0], "matrix entry");
    a.b = to_i64_field(m[0][1], "matrix entry");
    a.c = to_i64_field(m[1][0], "matrix entry");
    a.d = to_i64_field(m[1][1], "matrix entry");
    a.tx = to_i64(num(tr.x));
    a.ty = to_i64(num(tr.y));
    t.transition[static_cast<std::int32_t>(h)] = a;
  }

  ensure(!t.faces.empty(), Err::BadInput, "complex has no faces");
  return t;
}

// ---------------------------------------------------------------------------
// Recipe parsing.

namespace {

void check_keys(const json& j, std::initializer_list<const char*> allowed,
                const char* where) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* k : allowed)
      if (it.key() == k) {
        ok = true;
        break;
      }
    if (!ok) bad(std::string(where) + ": unknown field \"" + it.key() + "\"");
  }
}

}  // namespace

Recipe parse_recipe(const std::string& json_text) {
  const json j = parse_text(json_text);
  if (!j.is_object()) bad("recipe: expected a JSON object");
  check_keys(j, {"toric_cycle", "lengths", "surgeries", "relaxed_cuts", "options"},
             "recipe");

  Recipe r;
  const json& tc = need(j, "toric_cycle");
  if (!tc.is_array() || tc.empty()) bad("toric_cycle must be a nonempty array");
  for (const json& e : tc) r.toric_cycle.d.push_back(to_int(e, "toric_cycle"));

  const json& lens = need(j, "lengths");
  if (lens.is_array()) {
    r.lengths_given = true;
    for (const json& e : lens) {
      Int m = to_int(e, "lengths");
      ensure(m >= 0, Err::BadInput, "lengths must be nonnegative");
      r.lengths.push_back(m);
    }
    ensure(r.lengths.size() == r.toric_cycle.size(), Err::BadInput,
           "lengths must match toric_cycle in size");
  } else if (lens.is_object()) {
    check_keys(lens, {"support"}, "lengths");
    const json& sup = need(lens, "support");
    if (!sup.is_array() || sup.empty()) bad("support must be a nonempty array");
    for (const json& e : sup) {
      const std::int64_t i = to_i64_field(e, "support");
      ensure(i >= 0 && i < static_cast<std::int64_t>(r.toric_cycle.size()),
             Err::BadInput, "support index out of range");
      r.support.push_back(static_cast<std::size_t>(i));
    }
  } else {
    bad("lengths must be an array or {\"support\": [...]}");
  }

  if (j.contains("surgeries")) {
    const json& surs = j["surgeries"];
    if (!surs.is_array()) bad("surgeries must be an array");
    for (const json& row : surs) {
      if (!row.is_object()) bad("surgery entries must be objects");
      RecipeSurgery s;
      const std::string op = need(row, "op").get<std::string>();
      if (op == "blowup") {
        check_keys(row, {"op", "edge", "size", "offset"}, "blowup");
        s.kind = SurgeryKind::InternalBlowup;
        s.index = static_cast<std::size_t>(to_i64_field(need(row, "edge"), "edge"));
        if (row.contains("size")) {
          if (row["size"].is_string() && row["size"].get<std::string>() == "full") {
            s.full_size = true;
          } else {
            s.size = to_int(row["size"], "size");
            ensure(s.size >= 1, Err::BadInput, "blowup size must be >= 1");
          }
        }
        if (row.contains("offset")) {
          s.offset = to_int(row["offset"], "offset");
          ensure(s.offset >= 0, Err::BadInput, "offset must be >= 0");
        }
      } else if (op == "smooth") {
        check_keys(row, {"op", "vertex", "n"}, "smooth");
        s.kind = SurgeryKind::NodeSmoothing;
        s.index = static_cast<std::size_t>(to_i64_field(need(row, "vertex"), "vertex"));
        if (row.contains("n")) {
          s.size = to_int(row["n"], "n");
          ensure(s.size >= 1, Err::BadInput, "slit length must be >= 1");
        }
      } else {
        bad("surgery op must be \"blowup\" or \"smooth\"");
      }
      r.surgeries.push_back(s);
    }
  }

  if (j.contains("relaxed_cuts")) {
    const json& rc = j["relaxed_cuts"];
    if (!rc.is_boolean()) bad("relaxed_cuts must be a boolean");
    r.relaxed_cuts = rc.get<bool>();
  }

  if (j.contains("options")) {
    const json& opt = j["options"];
    if (!opt.is_object()) bad("options must be an object");
    check_keys(opt, {"refinement", "anchor", "periods"}, "options");
    if (opt.contains("refinement")) {
      Int k = to_int(opt["refinement"], "refinement");
      ensure(k >= 1, Err::BadInput, "refinement must be >= 1");
      r.refinement = k;
    }
    if (opt.contains("anchor"))
      r.anchor = static_cast<std::size_t>(to_i64_field(opt["anchor"], "anchor"));
    if (opt.contains("periods")) {
      const std::int64_t p = to_i64_field(opt["periods"], "periods");
      ensure(p >= 1, Err::BadInput, "periods must be >= 1");
      r.periods = static_cast<std::size_t>(p);
    }
  }

  return r;
}

// ---------------------------------------------------------------------------
// Content hash.

std::string content_hash(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char ch : bytes) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  static const char* hexd = "0123456789abcdef";
  std::string out = "fnv1a64:";
  for (int shift = 60; shift >= 0; shift -= 4)
    out += hexd[(h >> shift) & 0xf];
  return out;
}

}  // namespace cusp
