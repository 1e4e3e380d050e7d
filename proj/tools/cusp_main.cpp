// cusp — exact pipeline from anticanonical-pair recipes to verified
// triangulated integral-affine spheres.
//
// Subcommands:
//   dual       dual cycle of a negative-definite cycle
//   charge     charge of a cycle
//   monodromy  boundary monodromy matrix (and R/L word if hyperbolic)
//   construct  run a recipe end to end, writing artifacts
//   verify     re-check a constructed complex from its JSON artifact
//   render     deterministic SVG snapshots of construction stages
//
// Exit codes: 0 success, 2 invalid input, 3 construction failure,
// 4 verification failure.
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "cusp/cycles.hpp"
#include "cusp/error.hpp"
#include "cusp/pipeline.hpp"

namespace {

int exit_code_for(cusp::Err e) {
  switch (e) {
    case cusp::Err::BadInput:
    case cusp::Err::NotToric:
    case cusp::Err::NonClosing:
    case cusp::Err::NoSolution:
    case cusp::Err::Degenerate:
    case cusp::Err::NotHyperbolic:
    case cusp::Err::AnchorInvalid:
    case cusp::Err::IndexOutOfRange:
      return 2;
    case cusp::Err::EdgeTooShort:
    case cusp::Err::DoesNotFit:
    case cusp::Err::CutCollision:
    case cusp::Err::EmptyBoundary:
    case cusp::Err::ChainMismatch:
    case cusp::Err::NonIntegralInput:
    case cusp::Err::Unsupported:
      return 3;
    case cusp::Err::VerifyFailed:
      return 4;
    case cusp::Err::Internal:
      return 3;
  }
  return 3;
}

std::string mat_str(const cusp::Mat2& m) {
  return "[[" + m.a.str() + "," + m.b.str() + "],[" + m.c.str() + "," +
         m.d.str() + "]]";
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  cusp::ensure(static_cast<bool>(in), cusp::Err::BadInput,
               "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  cusp::ensure(static_cast<bool>(out), cusp::Err::BadInput,
               "cannot write " + path.string());
  out << bytes;
  cusp::ensure(static_cast<bool>(out), cusp::Err::BadInput,
               "failed writing " + path.string());
}

// Recipe options overridable from the command line.
struct RecipeOverrides {
  std::int64_t refine{0};   // 0 = keep recipe/default
  std::int64_t anchor{-1};  // -1 = keep recipe/default
  std::int64_t periods{0};  // 0 = keep recipe/default
  bool relaxed_cuts{false};

  void apply(cusp::Recipe& r) const {
    if (refine > 0) r.refinement = cusp::Int(refine);
    if (anchor >= 0) r.anchor = static_cast<std::size_t>(anchor);
    if (periods > 0) r.periods = static_cast<std::size_t>(periods);
    if (relaxed_cuts) r.relaxed_cuts = true;
  }
};

void print_report_summary(const cusp::RunResult& rr) {
  const cusp::TypeIIIReport& rep = rr.report;
  std::cout << "boundary " << cusp::format_cycle(rr.base.cycle) << ", charge "
            << cusp::charge(rr.base.cycle).str() << ", "
            << rr.base.singular_points.size() << " singular points\n";
  std::cout << "complex: refinement " << rr.complex.refinement.str() << ", V="
            << rep.vertex_count << " E=" << rep.edge_count << " F="
            << rep.face_count << "\n";
  std::cout << "star of v0: " << cusp::format_cycle(rep.v0_cycle)
            << ", total charge " << rep.charge_total.str() << "\n";
  if (rep.ok()) {
    std::cout << "verify: ok\n";
  } else {
    for (const std::string& f : rep.failures)
      std::cout << "verify: FAIL: " << f << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact anticanonical-pair surgery pipeline"};
  app.require_subcommand(1);

  std::string cycle_text;

  auto* cmd_dual = app.add_subcommand("dual", "dual of a negative-definite cycle");
  cmd_dual->add_option("cycle", cycle_text, "comma-separated entries, e.g. 6,9")
      ->required();

  auto* cmd_charge = app.add_subcommand("charge", "charge of a cycle");
  cmd_charge->add_option("cycle", cycle_text, "comma-separated entries")
      ->required();

  auto* cmd_mono =
      app.add_subcommand("monodromy", "boundary monodromy of a cycle");
  cmd_mono->add_option("cycle", cycle_text, "comma-separated entries")
      ->required();

  std::string mat_text;
  auto* cmd_word = app.add_subcommand(
      "word", "canonical R/L conjugacy word of a hyperbolic matrix");
  cmd_word->add_option("matrix", mat_text, "entries a,b,c,d (row-major)")
      ->required();

  std::string recipe_path;
  std::string out_dir = ".";
  RecipeOverrides ov;
  bool with_svg = false;
  auto* cmd_construct = app.add_subcommand(
      "construct", "run a recipe end to end and write artifacts");
  cmd_construct->add_option("--recipe", recipe_path, "recipe JSON file")
      ->required();
  cmd_construct->add_option("--out", out_dir, "output directory (default .)");
  cmd_construct->add_option("--refine", ov.refine,
                            "override the refinement order (>= 1)");
  cmd_construct->add_option("--anchor", ov.anchor,
                            "override the cone seam anchor index");
  cmd_construct->add_option("--periods", ov.periods,
                            "hyperbola periods to develop (>= 1)");
  cmd_construct->add_flag("--relaxed-cuts", ov.relaxed_cuts,
                          "allow cuts leaning on earlier cut legs");
  cmd_construct->add_flag("--svg", with_svg, "also write SVG snapshots");

  std::string complex_path;
  std::string dual_text;
  std::string report_out;
  auto* cmd_verify = app.add_subcommand(
      "verify", "re-check a constructed complex from its JSON artifact");
  cmd_verify->add_option("complex", complex_path, "complex JSON artifact")
      ->required();
  cmd_verify
      ->add_option("--dual", dual_text,
                   "expected dual cycle, comma-separated entries")
      ->required();
  cmd_verify->add_option("--out", report_out,
                         "write the report here instead of stdout");

  bool with_grid = false;
  auto* cmd_render = app.add_subcommand(
      "render", "write deterministic SVG snapshots of a recipe's stages");
  cmd_render->add_option("--recipe", recipe_path, "recipe JSON file")
      ->required();
  cmd_render->add_option("--out", out_dir, "output directory (default .)");
  cmd_render->add_flag("--grid", with_grid, "draw the lattice grid");

  CLI11_PARSE(app, argc, argv);

  try {
    if (cmd_dual->parsed()) {
      cusp::Cycle c = cusp::parse_cycle(cycle_text);
      cusp::Cycle d = cusp::dual_cycle(c);
      std::cout << cusp::format_cycle(d) << "\n";
      std::cout << "Q=" << cusp::charge(c).str()
                << " Q'=" << cusp::charge(d).str() << "\n";
    } else if (cmd_charge->parsed()) {
      std::cout << cusp::charge(cusp::parse_cycle(cycle_text)).str() << "\n";
    } else if (cmd_mono->parsed()) {
      cusp::Mat2 m = cusp::monodromy(cusp::parse_cycle(cycle_text));
      std::cout << mat_str(m) << "\n";
      std::cout << "trace " << cusp::trace(m).str() << ", det "
                << cusp::det2(m).str() << "\n";
      if (cusp::det2(m) == 1 && cusp::trace(m) > 2)
        std::cout << "word " << cusp::sl2z_word(m) << "\n";
    } else if (cmd_word->parsed()) {
      cusp::Cycle entries = cusp::parse_cycle(mat_text);
      cusp::ensure(entries.d.size() == 4, cusp::Err::BadInput,
                   "matrix needs exactly four entries a,b,c,d");
      cusp::Mat2 m{entries.d[0], entries.d[1], entries.d[2], entries.d[3]};
      std::cout << cusp::sl2z_word(m) << "\n";
    } else if (cmd_construct->parsed()) {
      cusp::Recipe r = cusp::parse_recipe(read_file(recipe_path));
      ov.apply(r);
      cusp::RunResult rr = cusp::run_construct(r);

      const std::filesystem::path dir(out_dir);
      std::filesystem::create_directories(dir);
      write_file(dir / "base.json", cusp::to_json(rr.base));
      if (rr.surface)
        write_file(dir / "surface.json", cusp::to_json(*rr.surface));
      const std::string complex_json = cusp::to_json(rr.complex);
      write_file(dir / "complex.json", complex_json);
      write_file(dir / "report.json",
                 cusp::report_to_json(rr.report, rr.expected_dual,
                                      cusp::content_hash(complex_json)));
      if (with_svg) {
        write_file(dir / "base.svg", cusp::render_base_svg(rr.base));
        write_file(dir / "complex.svg", cusp::render_complex_svg(rr));
      }
      print_report_summary(rr);
      return rr.report.ok() ? 0 : 4;
    } else if (cmd_verify->parsed()) {
      const std::string bytes = read_file(complex_path);
      const cusp::TriComplex t = cusp::complex_from_json(bytes);
      const cusp::Cycle expected = cusp::parse_cycle(dual_text);
      const cusp::TypeIIIReport rep = cusp::verify_type_iii(t, expected);
      const std::string report =
          cusp::report_to_json(rep, expected, cusp::content_hash(bytes));
      if (report_out.empty())
        std::cout << report;
      else
        write_file(report_out, report);
      return rep.ok() ? 0 : 4;
    } else if (cmd_render->parsed()) {
      cusp::Recipe r = cusp::parse_recipe(read_file(recipe_path));
      cusp::RunResult rr = cusp::run_construct(r);
      const std::filesystem::path dir(out_dir);
      std::filesystem::create_directories(dir);
      const cusp::RenderOptions opt{with_grid};
      write_file(dir / "base.svg", cusp::render_base_svg(rr.base, opt));
      write_file(dir / "complex.svg", cusp::render_complex_svg(rr, opt));
      std::cout << "wrote " << (dir / "base.svg").string() << " and "
                << (dir / "complex.svg").string() << "\n";
    }
    return 0;
  } catch (const cusp::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
