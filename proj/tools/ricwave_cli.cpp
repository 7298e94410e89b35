// ricwave: travelling-wave computation and Riccati-Evans spectral analysis
// for a haptotaxis reaction-diffusion model. Batch tool: every run writes
// deterministic CSV/SVG/report files derived only from its configuration.

#include <CLI11.hpp>
#include <cxxabi.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ricwave/evans.hpp"
#include "ricwave/io/config.hpp"
#include "ricwave/io/csv.hpp"
#include "ricwave/io/svg.hpp"
#include "ricwave/io/version.hpp"

namespace {

using namespace ricwave;

std::string demangled(const std::exception& e) {
  int status = 0;
  char* name = abi::__cxa_demangle(typeid(e).name(), nullptr, nullptr, &status);
  std::string s = status == 0 && name ? name : typeid(e).name();
  std::free(name);
  const auto pos = s.rfind("::");
  if (pos != std::string::npos) s = s.substr(pos + 2);
  return s;
}

struct Cli {
  RunConfig cfg;
  std::string out_dir = ".";
  std::string profile_path;
  std::string config_path;

  void apply_flag(const std::string& key, const std::optional<double>& v) {
    if (v) cfg.set(key, *v);
  }

  ModelParams params() const {
    ModelParams p;
    p.c = cfg.get_double("model.c", 1.0);
    p.epsilon = cfg.get_double("model.epsilon", 0.01);
    p.u_inf = cfg.get_double("model.u_inf", 1.0);
    return p;
  }

  SolverConfig solver() const {
    SolverConfig s;
    s.tol_newton = cfg.get_double("solver.tol_newton", s.tol_newton);
    s.tol_bc = cfg.get_double("solver.tol_bc", s.tol_bc);
    s.tol_resid = cfg.get_double("solver.tol_resid", s.tol_resid);
    return s;
  }

  Chart chart() const {
    const std::string name = cfg.get("analysis.chart", "paper");
    if (name == "paper") return default_chart();
    if (name == "identity") return identity_chart();
    throw UsageError("unknown chart '" + name + "' (expected paper or identity)");
  }

  WaveProfile wave() const {
    if (!profile_path.empty()) return load_profile(profile_path);
    return compute_wave(params(), cfg.get_double("solver.domain_half_length", 50.0),
                        solver());
  }

  std::string canon() const { return cfg.serialize(); }

  std::filesystem::path out(const std::string& name) const {
    std::filesystem::create_directories(out_dir);
    return std::filesystem::path(out_dir) / name;
  }

  void write_file(const std::string& name, const std::string& content) const {
    std::ofstream os(out(name), std::ios::binary);
    if (!os) throw UsageError("cannot write " + (out(name)).string());
    os << content;
  }
};

std::vector<double> parse_numbers(const std::string& s, std::size_t n,
                                  const std::string& what) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    char* end = nullptr;
    out.push_back(std::strtod(tok.c_str(), &end));
    if (end == tok.c_str() || *end != '\0')
      throw UsageError(what + ": bad number '" + tok + "'");
  }
  if (out.size() != n)
    throw UsageError(what + ": expected " + std::to_string(n) +
                     " comma-separated numbers, got " + std::to_string(out.size()));
  return out;
}

std::string wave_summary(const WaveProfile& w) {
  std::ostringstream os;
  os << "wave: type " << wave_type_name(w.type) << "  c = " << g17(w.params.c)
     << "  epsilon = " << g17(w.params.epsilon)
     << "  u_inf = " << g17(w.params.u_inf)
     << "  residual = " << g17(w.bvp_residual) << "  nodes = " << w.z.size();
  return os.str();
}

void emit_profile_outputs(const Cli& cli, const WaveProfile& w,
                          const std::string& stem) {
  std::ofstream pf(cli.out(stem + ".txt"), std::ios::binary);
  pf << profile_to_string(w);
  std::ofstream cf(cli.out(stem + ".csv"), std::ios::binary);
  CsvWriter csv(cf, cli.canon(), {"z", "u", "y", "v", "w"});
  for (std::size_t i = 0; i < w.z.size(); ++i)
    csv.row() << w.z[i] << w.x[i][0] << w.x[i][1] << w.x[i][2] << w.x[i][3];
  SvgFigure fig;
  fig.set_title("travelling wave profile");
  fig.set_xlabel("z");
  std::vector<std::pair<double, double>> pu, pw;
  for (std::size_t i = 0; i < w.z.size(); ++i) {
    pu.emplace_back(w.z[i], w.x[i][0]);
    pw.emplace_back(w.z[i], w.x[i][3]);
  }
  fig.add_polyline(pu, "#1f77b4", "u");
  fig.add_polyline(pw, "#d62728", "w");
  cli.write_file(stem + ".svg", fig.render(cli.canon()));
}

int cmd_compute_wave(Cli& cli) {
  const WaveProfile w = cli.wave();
  emit_profile_outputs(cli, w, "profile");
  std::cout << wave_summary(w) << "\n";
  return 0;
}

int cmd_continue(Cli& cli, double c_target, int steps) {
  if (cli.profile_path.empty())
    throw UsageError("continue: --profile is required");
  const WaveProfile start = load_profile(cli.profile_path);
  const auto seq = continue_in_c(start, c_target, steps, cli.solver());
  const WaveProfile& w = seq.back();
  emit_profile_outputs(cli, w, "profile");
  std::cout << wave_summary(w) << "\n";
  return 0;
}

int cmd_classify(Cli& cli) {
  if (cli.profile_path.empty())
    throw UsageError("classify: --profile is required");
  const WaveProfile w = load_profile(cli.profile_path);
  ClassifyOptions co;
  co.tol_w = cli.cfg.get_double("classify.tol_w", co.tol_w);
  co.kappa = cli.cfg.get_double("classify.kappa", co.kappa);
  std::cout << "type " << wave_type_name(classify_wave(w, co)) << "\n";
  return 0;
}

int cmd_spectrum(Cli& cli) {
  const ModelParams p = cli.params();
  const double k_min = cli.cfg.get_double("spectrum.k_min", -20.0);
  const double k_max = cli.cfg.get_double("spectrum.k_max", 20.0);
  const int n = cli.cfg.get_int("spectrum.samples", 1001);
  if (!(k_min < k_max) || n < 2)
    throw UsageError("spectrum: empty k-range (need k_min < k_max, samples >= 2)");
  std::vector<double> ks(n);
  for (int i = 0; i < n; ++i) ks[i] = k_min + (k_max - k_min) * i / (n - 1.0);
  const bool type3 = cli.cfg.get("spectrum.type3", "0") == "1";
  const auto curves = dispersion_curves(p, ks, type3);

  std::ofstream cf(cli.out("dispersion.csv"), std::ios::binary);
  CsvWriter csv(cf, cli.canon(), {"k", "re_lambda", "im_lambda", "curve_label"});
  for (const auto& c : curves)
    for (const auto& s : c.pts)
      csv.row() << s.k << s.lambda.real() << s.lambda.imag() << c.label;

  SvgFigure fig;
  fig.set_title("essential spectrum dispersion curves");
  fig.set_xlabel("Re lambda");
  fig.set_ylabel("Im lambda");
  const char* colors[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728"};
  int ci = 0;
  for (const auto& c : curves) {
    std::vector<std::pair<double, double>> pts;
    for (const auto& s : c.pts) pts.emplace_back(s.lambda.real(), s.lambda.imag());
    fig.add_polyline(pts, colors[ci++ % 4], c.label);
  }
  const double edge = absolute_spectrum_edge(p);
  fig.add_marker(edge, 0.0, "#000000");
  cli.write_file("spectrum.svg", fig.render(cli.canon()));

  std::ostringstream rep;
  rep << version_comment() << "\n" << hash_comment(cli.canon()) << "\n";
  rep << "absolute-spectrum edge: " << g17(edge) << "\n";
  try {
    const auto [wl, wh] = weight_interval(p);
    rep << "stabilising weight interval: (" << g17(wl) << ", " << g17(wh) << ")\n";
  } catch (const NoStabilisingWeight& e) {
    rep << "stabilising weight interval: none (" << e.what() << ")\n";
  }
  cli.write_file("spectrum.txt", rep.str());
  std::cout << "absolute-spectrum edge: " << g17(edge) << "\n";
  return 0;
}

int cmd_evans_sweep(Cli& cli, const std::string& region, int steps) {
  const auto ab = parse_numbers(region, 2, "--region");
  if (!(ab[0] < ab[1]) || steps < 2)
    throw UsageError("evans-sweep: need region lo < hi and steps >= 2");
  const WaveProfile w = cli.wave();
  const Chart ch = cli.chart();
  const EvansFn f = make_evans(w, ch);
  const SweepResult sw = sweep_real(ab[0], ab[1], steps, f);

  std::ofstream cf(cli.out("sweep.csv"), std::ios::binary);
  CsvWriter csv(cf, cli.canon(),
                {"re_lambda", "im_lambda", "re_E", "im_E", "chart_label", "status"});
  for (const auto& s : sw.samples)
    csv.row() << s.lambda.real() << s.lambda.imag() << s.E.real() << s.E.imag()
              << ch.label << s.status;

  SvgFigure fig;
  fig.set_title("Riccati-Evans function on the real axis");
  fig.set_xlabel("lambda");
  std::vector<std::pair<double, double>> re, im;
  for (const auto& s : sw.samples)
    if (s.status == "ok") {
      re.emplace_back(s.lambda.real(), s.E.real());
      im.emplace_back(s.lambda.real(), s.E.imag());
    }
  fig.add_polyline(re, "#1f77b4", "Re E");
  fig.add_polyline(im, "#d62728", "Im E");
  cli.write_file("sweep.svg", fig.render(cli.canon()));

  for (const auto& [a, b] : sw.brackets)
    std::cout << "bracket: [" << g17(a) << ", " << g17(b) << "]\n";
  std::cout << "samples: " << sw.samples.size()
            << "  brackets: " << sw.brackets.size() << "\n";
  return 0;
}

int cmd_winding(Cli& cli, const std::optional<double>& radius,
                const std::string& region) {
  const WaveProfile w = cli.wave();
  const EvansFn f = make_evans(w, cli.chart());
  Contour contour;
  if (radius) {
    if (*radius <= 0) throw UsageError("winding: --radius must be > 0");
    contour = quarter_circle_contour(*radius);
  } else if (!region.empty()) {
    const auto r = parse_numbers(region, 4, "--region");
    contour = rectangle_contour(Complex(r[0], r[1]), Complex(r[2], r[3]));
  } else {
    throw UsageError("winding: give --radius or --region re_lo,im_lo,re_hi,im_hi");
  }
  const WindingResult res = winding_number(f, contour);
  std::ostringstream rep;
  rep << version_comment() << "\n" << hash_comment(cli.canon()) << "\n";
  rep << "contour: " << res.contour << "\n";
  rep << "samples: " << res.n_samples << "\n";
  rep << "winding: " << res.winding << "\n";
  rep << "residual: " << g17(res.residual) << "\n";
  cli.write_file("winding.txt", rep.str());
  std::cout << "winding: " << res.winding << " (residual " << g17(res.residual)
            << ", " << res.n_samples << " samples)\n";
  return 0;
}

int cmd_locate_roots(Cli& cli, const std::string& region) {
  const auto r = parse_numbers(region, 4, "--region");
  const WaveProfile w = cli.wave();
  const EvansFn f = make_evans(w, cli.chart());
  LocateOptions lo;
  lo.coarse_tol = cli.cfg.get_double("analysis.coarse_tol", lo.coarse_tol);
  const RootSearchResult res =
      locate_roots(f, Complex(r[0], r[1]), Complex(r[2], r[3]), lo);

  std::ofstream cf(cli.out("roots.csv"), std::ios::binary);
  CsvWriter csv(cf, cli.canon(), {"re_lambda", "im_lambda", "residual", "kind"});
  for (const auto& x : res.roots)
    csv.row() << x.lambda_root.real() << x.lambda_root.imag() << x.residual
              << "root";
  for (const auto& x : res.poles)
    csv.row() << x.lambda_root.real() << x.lambda_root.imag() << x.residual
              << "pole";
  for (const auto& x : res.roots)
    std::cout << "root: " << g17(x.lambda_root.real()) << " + "
              << g17(x.lambda_root.imag()) << "i  (|E| = " << g17(x.residual)
              << ")\n";
  for (const auto& x : res.poles)
    std::cout << "pole: " << g17(x.lambda_root.real()) << " + "
              << g17(x.lambda_root.imag()) << "i\n";
  std::cout << "roots: " << res.roots.size() << "  poles: " << res.poles.size()
            << "\n";
  return 0;
}

int cmd_track_root(Cli& cli, double c_target, int steps, double seed_re,
                   double seed_im) {
  const WaveProfile start = cli.wave();
  const RootPath path =
      track_root_in_c(start, c_target, steps, Complex(seed_re, seed_im),
                      cli.chart(), cli.solver());

  std::ofstream cf(cli.out("rootpath.csv"), std::ios::binary);
  CsvWriter csv(cf, cli.canon(), {"c", "re_lambda", "im_lambda", "residual"});
  for (const auto& p : path.points)
    csv.row() << p.c << p.lambda_root.real() << p.lambda_root.imag()
              << p.residual;

  std::ostringstream rep;
  rep << version_comment() << "\n" << hash_comment(cli.canon()) << "\n";
  if (path.crossed)
    rep << "crossing bracket: [" << g17(std::min(path.c_before, path.c_after))
        << ", " << g17(std::max(path.c_before, path.c_after)) << "]\n";
  else
    rep << "crossing bracket: none\n";
  cli.write_file("crossing.txt", rep.str());
  std::cout << rep.str().substr(rep.str().find("crossing"));
  return 0;
}

int cmd_argument_field(Cli& cli, const std::string& region, int steps) {
  const auto r = parse_numbers(region, 4, "--region");
  if (steps < 1) throw UsageError("argument-field: --steps must be >= 1");
  const WaveProfile w = cli.wave();
  const EvansFn f = make_evans(w, cli.chart());
  const ArgumentField af =
      argument_field(f, Complex(r[0], r[1]), Complex(r[2], r[3]), steps, steps);

  std::ofstream cf(cli.out("argfield.csv"), std::ios::binary);
  CsvWriter csv(cf, cli.canon(), {"re_lambda", "im_lambda", "arg_E", "status"});
  for (std::size_t i = 0; i < af.lambda.size(); ++i)
    csv.row() << af.lambda[i].real() << af.lambda[i].imag() << af.arg[i]
              << af.status[i];

  // colour cells by hue = principal argument; failed samples are grey
  std::ostringstream os;
  const int cell = std::max(1, 640 / std::max(af.nx, af.ny));
  const int W = cell * af.nx, H = cell * af.ny;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W
     << "\" height=\"" << H << "\">\n";
  os << "<!-- " << version_comment().substr(2) << " -->\n";
  os << "<!-- " << hash_comment(cli.canon()).substr(2) << " -->\n";
  for (int j = 0; j < af.ny; ++j)
    for (int i = 0; i < af.nx; ++i) {
      const std::size_t k = static_cast<std::size_t>(j) * af.nx + i;
      std::string fill = "rgb(128,128,128)";
      if (af.status[k] == "ok") {
        const int hue = static_cast<int>(
            std::lround((af.arg[k] + 3.14159265358979323846) /
                        (2 * 3.14159265358979323846) * 359.0));
        fill = "hsl(" + std::to_string(hue) + ",80%,50%)";
      }
      os << "<rect x=\"" << i * cell << "\" y=\"" << (af.ny - 1 - j) * cell
         << "\" width=\"" << cell << "\" height=\"" << cell << "\" fill=\""
         << fill << "\"/>\n";
    }
  os << "</svg>\n";
  cli.write_file("argfield.svg", os.str());
  std::cout << "samples: " << af.lambda.size() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"travelling-wave and Riccati-Evans spectral analysis"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand

  Cli cli;
  std::optional<double> f_c, f_eps, f_uinf, f_tol_newton, f_tol_bc, f_tol_resid;
  std::optional<double> f_radius;
  std::string f_chart, f_region;
  double c_target = 0.0, seed_re = 0.0, seed_im = 0.0;
  int steps = 10;

  app.add_option("--config", cli.config_path, "configuration file (key = value)");
  app.add_option("--out", cli.out_dir, "output directory");
  app.add_option("--c", f_c, "wave speed");
  app.add_option("--epsilon", f_eps, "singular perturbation parameter");
  app.add_option("--u-inf", f_uinf, "right background state u");
  app.add_option("--profile", cli.profile_path, "wave profile file");
  app.add_option("--chart", f_chart, "Grassmannian chart: paper | identity");
  app.add_option("--tol-newton", f_tol_newton, "BVP Newton tolerance");
  app.add_option("--tol-bc", f_tol_bc, "boundary-condition tolerance");
  app.add_option("--tol-resid", f_tol_resid, "collocation defect tolerance");

  auto* sc_wave = app.add_subcommand("compute-wave", "solve for a travelling wave");
  auto* sc_cont = app.add_subcommand("continue", "continue a wave in c");
  sc_cont->add_option("--c-target", c_target, "target wave speed")->required();
  sc_cont->add_option("--steps", steps, "continuation steps");
  auto* sc_class = app.add_subcommand("classify", "classify a wave profile");
  auto* sc_spec = app.add_subcommand("spectrum", "dispersion curves and edges");
  auto* sc_sweep = app.add_subcommand("evans-sweep", "Evans function on a real interval");
  sc_sweep->add_option("--region", f_region, "lo,hi real interval")->required();
  sc_sweep->add_option("--steps", steps, "number of samples");
  auto* sc_wind = app.add_subcommand("winding", "argument-principle winding number");
  sc_wind->add_option("--radius", f_radius, "quarter-circle radius");
  sc_wind->add_option("--region", f_region, "re_lo,im_lo,re_hi,im_hi rectangle");
  auto* sc_loc = app.add_subcommand("locate-roots", "find roots and poles in a region");
  sc_loc->add_option("--region", f_region, "re_lo,im_lo,re_hi,im_hi")->required();
  auto* sc_track = app.add_subcommand("track-root", "continue a root in c");
  sc_track->add_option("--c-target", c_target, "final wave speed")->required();
  sc_track->add_option("--steps", steps, "number of c steps");
  sc_track->add_option("--lambda-re", seed_re, "seed root, real part")->required();
  sc_track->add_option("--lambda-im", seed_im, "seed root, imaginary part");
  auto* sc_arg = app.add_subcommand("argument-field", "grid of Arg E over a region");
  sc_arg->add_option("--region", f_region, "re_lo,im_lo,re_hi,im_hi")->required();
  sc_arg->add_option("--steps", steps, "grid points per axis");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (!cli.config_path.empty()) cli.cfg = RunConfig::load(cli.config_path);
    cli.apply_flag("model.c", f_c);
    cli.apply_flag("model.epsilon", f_eps);
    cli.apply_flag("model.u_inf", f_uinf);
    cli.apply_flag("solver.tol_newton", f_tol_newton);
    cli.apply_flag("solver.tol_bc", f_tol_bc);
    cli.apply_flag("solver.tol_resid", f_tol_resid);
    if (!f_chart.empty()) cli.cfg.set("analysis.chart", f_chart);

    if (sc_wave->parsed()) return cmd_compute_wave(cli);
    if (sc_cont->parsed()) return cmd_continue(cli, c_target, steps);
    if (sc_class->parsed()) return cmd_classify(cli);
    if (sc_spec->parsed()) return cmd_spectrum(cli);
    if (sc_sweep->parsed()) return cmd_evans_sweep(cli, f_region, steps);
    if (sc_wind->parsed()) return cmd_winding(cli, f_radius, f_region);
    if (sc_loc->parsed()) return cmd_locate_roots(cli, f_region);
    if (sc_track->parsed()) return cmd_track_root(cli, c_target, steps, seed_re, seed_im);
    if (sc_arg->parsed()) return cmd_argument_field(cli, f_region, steps);
    std::cerr << "error: no subcommand\n";
    return 1;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 1;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure (" << demangled(e) << "): " << e.what()
              << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error (" << demangled(e) << "): " << e.what() << "\n";
    return 2;
  }
}
