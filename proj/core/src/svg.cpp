// SVG rendering of bases and triangulated complexes.
//
// Rendering is deterministic: coordinates are mapped with exact rational
// arithmetic and printed as decimals by long division (at most six
// fractional digits, trailing zeros trimmed), so the same input always
// yields the same bytes.
#include <string>
#include <utility>
#include <vector>

#include "cusp/error.hpp"
#include "cusp/pipeline.hpp"

namespace cusp {

namespace {

// Exact decimal rendering of a rational, truncated to six fractional digits.
std::string dec(const Rat& q) {
  Int n = num(q), d = den(q);
  std::string out;
  if (n < 0) {
    out += '-';
    n = -n;
  }
  out += Int(n / d).str();
  Int r = n % d;
  if (r != 0) {
    std::string frac;
    for (int i = 0; i < 6 && r != 0; ++i) {
      r *= 10;
      frac += static_cast<char>('0' + static_cast<int>(Int(r / d)));
      r %= d;
    }
    while (!frac.empty() && frac.back() == '0') frac.pop_back();
    if (!frac.empty()) {
      out += '.';
      out += frac;
    }
  }
  return out;
}

struct Box {
  Rat minx{0}, miny{0}, maxx{0}, maxy{0};
  bool empty{true};
  void add(const Vec2& p) {
    if (empty) {
      minx = maxx = p.x;
      miny = maxy = p.y;
      empty = false;
      return;
    }
    if (p.x < minx) minx = p.x;
    if (p.x > maxx) maxx = p.x;
    if (p.y < miny) miny = p.y;
    if (p.y > maxy) maxy = p.y;
  }
  Rat width() const { return maxx - minx; }
  Rat height() const { return maxy - miny; }
};

// Maps model coordinates into one SVG panel, flipping y so the lattice
// y-axis points up.
struct Panel {
  Box box;
  Rat scale{1};
  Rat ox{0}, oy{0};  // SVG position of the model point (minx, maxy)

  Rat sx(const Vec2& p) const { return ox + scale * (p.x - box.minx); }
  Rat sy(const Vec2& p) const { return oy + scale * (box.maxy - p.y); }
  std::string at(const Vec2& p) const { return dec(sx(p)) + "," + dec(sy(p)); }
};

void put_line(std::string& out, const Panel& pn, const Vec2& a, const Vec2& b,
              const char* style) {
  out += "<line x1=\"" + dec(pn.sx(a)) + "\" y1=\"" + dec(pn.sy(a)) +
         "\" x2=\"" + dec(pn.sx(b)) + "\" y2=\"" + dec(pn.sy(b)) + "\" " +
         style + "/>\n";
}

void put_polyline(std::string& out, const Panel& pn,
                  const std::vector<Vec2>& pts, const char* style) {
  if (pts.size() < 2) return;
  out += "<polyline points=\"";
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (i) out += ' ';
    out += pn.at(pts[i]);
  }
  out += "\" ";
  out += style;
  out += "/>\n";
}

void put_polygon(std::string& out, const Panel& pn,
                 const std::vector<Vec2>& pts, const char* style) {
  out += "<polygon points=\"";
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (i) out += ' ';
    out += pn.at(pts[i]);
  }
  out += "\" ";
  out += style;
  out += "/>\n";
}

void put_circle(std::string& out, const Panel& pn, const Vec2& c, const char* r,
                const char* style) {
  out += "<circle cx=\"" + dec(pn.sx(c)) + "\" cy=\"" + dec(pn.sy(c)) +
         "\" r=\"" + r + "\" " + style + "/>\n";
}

// Lattice grid at the given pitch across the panel's box.
void put_grid(std::string& out, const Panel& pn, const Int& pitch) {
  const char* style = "stroke=\"#d8d8d8\" stroke-width=\"0.5\"";
  const Rat p(pitch);
  for (Int x = rat_floor(pn.box.minx / p); Rat(x) * p <= pn.box.maxx; ++x) {
    const Rat gx = Rat(x) * p;
    if (gx < pn.box.minx) continue;
    put_line(out, pn, Vec2{gx, pn.box.miny}, Vec2{gx, pn.box.maxy}, style);
  }
  for (Int y = rat_floor(pn.box.miny / p); Rat(y) * p <= pn.box.maxy; ++y) {
    const Rat gy = Rat(y) * p;
    if (gy < pn.box.miny) continue;
    put_line(out, pn, Vec2{pn.box.minx, gy}, Vec2{pn.box.maxx, gy}, style);
  }
}

std::string svg_document(const Rat& w, const Rat& h, std::string body) {
  std::string out = "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " +
                    dec(w) + " " + dec(h) + "\">\n";
  out += "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";
  out += body;
  out += "</svg>\n";
  return out;
}

// Scale so the larger dimension of (w, h) maps to `target` SVG units.
Rat fit_scale(const Rat& w, const Rat& h, int target) {
  Rat m = w > h ? w : h;
  if (m <= 0) m = 1;
  return Rat(target) / m;
}

constexpr int kPad = 30;

void draw_base(std::string& out, const Panel& pn, const AlmostToricBase& b,
               bool grid) {
  if (grid) put_grid(out, pn, b.refinement);
  put_polygon(out, pn, b.outline.v,
              "fill=\"#fbfaf3\" stroke=\"#333333\" stroke-width=\"1.5\"");
  for (const Cut& c : b.cuts) {
    const char* style =
        "fill=\"none\" stroke=\"#b03060\" stroke-width=\"1\" "
        "stroke-dasharray=\"6 4\"";
    put_polyline(out, pn, c.chain_from, style);
    put_polyline(out, pn, c.chain_to, style);
  }
  for (const Vec2& p : b.singular_points)
    put_circle(out, pn, p, "4", "fill=\"#c22020\"");
}

}  // namespace

std::string render_base_svg(const AlmostToricBase& b,
                            const RenderOptions& opt) {
  ensure(!b.outline.v.empty(), Err::BadInput, "cannot render an empty base");
  Panel pn;
  for (const Vec2& p : b.outline.v) pn.box.add(p);
  for (const Cut& c : b.cuts) {
    for (const Vec2& p : c.chain_from) pn.box.add(p);
    for (const Vec2& p : c.chain_to) pn.box.add(p);
  }
  for (const Vec2& p : b.singular_points) pn.box.add(p);
  pn.scale = fit_scale(pn.box.width(), pn.box.height(), 900);
  pn.ox = pn.oy = kPad;

  std::string body;
  draw_base(body, pn, b, opt.grid);
  return svg_document(pn.scale * pn.box.width() + 2 * kPad,
                      pn.scale * pn.box.height() + 2 * kPad, std::move(body));
}

std::string render_complex_svg(const RunResult& rr, const RenderOptions& opt) {
  const TriComplex& t = rr.complex;
  ensure(!t.faces.empty(), Err::BadInput, "cannot render an empty complex");

  const auto pos = [&](std::int32_t c) {
    const P64& p = t.corners[static_cast<std::size_t>(c)].pos;
    return Vec2{Rat(p.x), Rat(p.y)};
  };

  Panel base, cone;
  bool has_cone = false;
  for (const TriCorner& c : t.corners) {
    const Vec2 p{Rat(c.pos.x), Rat(c.pos.y)};
    if (c.chart == Chart::Base) {
      base.box.add(p);
    } else {
      cone.box.add(p);
      has_cone = true;
    }
  }

  const Rat total_w = base.box.width() + (has_cone ? cone.box.width() : Rat(0));
  const Rat max_h = has_cone && cone.box.height() > base.box.height()
                        ? cone.box.height()
                        : base.box.height();
  const Rat s = fit_scale(total_w, max_h, 1100);
  base.scale = cone.scale = s;
  base.ox = base.oy = kPad;
  cone.oy = kPad;
  cone.ox = kPad + s * base.box.width() + (has_cone ? Rat(40) : Rat(0));

  std::string body;
  if (opt.grid) {
    put_grid(body, base, t.refinement);
    if (has_cone) put_grid(body, cone, t.refinement);
  }

  for (const auto& f : t.faces) {
    const Chart chart = t.corners[static_cast<std::size_t>(f[0])].chart;
    const Panel& pn = chart == Chart::Base ? base : cone;
    const char* style = chart == Chart::Base
                            ? "fill=\"#eef2f7\" stroke=\"#55617a\" "
                              "stroke-width=\"0.7\""
                            : "fill=\"#f7efe2\" stroke=\"#8a6d4a\" "
                              "stroke-width=\"0.7\"";
    put_polygon(body, pn, {pos(f[0]), pos(f[1]), pos(f[2])}, style);
  }

  // Singular vertices, deduplicated per chart position.
  std::vector<std::pair<Chart, P64>> seen;
  const auto mark_once = [&](const TriCorner& c, const char* r,
                             const char* style) {
    for (const auto& s0 : seen)
      if (s0.first == c.chart && s0.second.x == c.pos.x &&
          s0.second.y == c.pos.y)
        return;
    seen.push_back({c.chart, c.pos});
    const Panel& pn = c.chart == Chart::Base ? base : cone;
    put_circle(body, pn, Vec2{Rat(c.pos.x), Rat(c.pos.y)}, r, style);
  };
  for (const TriCorner& c : t.corners)
    if (c.singular) mark_once(c, "3.5", "fill=\"#c22020\"");

  // The distinguished vertex: a double ring at every chart position.
  if (t.v0) {
    seen.clear();
    for (const TriCorner& c : t.corners) {
      if (c.vertex != *t.v0) continue;
      bool dup = false;
      for (const auto& s0 : seen)
        if (s0.first == c.chart && s0.second.x == c.pos.x &&
            s0.second.y == c.pos.y)
          dup = true;
      if (dup) continue;
      seen.push_back({c.chart, c.pos});
      const Panel& pn = c.chart == Chart::Base ? base : cone;
      const Vec2 p{Rat(c.pos.x), Rat(c.pos.y)};
      put_circle(body, pn, p, "7",
                 "fill=\"none\" stroke=\"#c22020\" stroke-width=\"1.5\"");
      put_circle(body, pn, p, "2.5", "fill=\"#c22020\"");
    }
  }

  const Rat w = s * total_w + 2 * kPad + (has_cone ? Rat(40) : Rat(0));
  return svg_document(w, s * max_h + 2 * kPad, std::move(body));
}

}  // namespace cusp
