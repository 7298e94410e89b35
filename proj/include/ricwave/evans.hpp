#ifndef RICWAVE_EVANS_HPP
#define RICWAVE_EVANS_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "ricwave/collocation.hpp"
#include "ricwave/grassmann.hpp"

// Eigenvalue detection and tracking on top of the Riccati-Evans function:
// real-line sweeps, argument-principle winding numbers, root localisation by
// contour subdivision with Newton polish, and continuation of roots in the
// wave speed. Everything here works on a generic complex evaluator, so the
// winding machinery can be exercised on analytic test functions as well.

namespace ricwave {

using EvansFn = std::function<Complex(Complex)>;

inline EvansFn make_evans(const WaveProfile& wave, const Chart& chart, double z0 = 0.0,
                          const RiccatiOptions& opt = {}) {
  return [&wave, chart, z0, opt](Complex lambda) {
    return riccati_evans(lambda, wave, chart, z0, opt);
  };
}

struct EvansSample {
  Complex lambda;
  Complex E;
  std::string status;  // "ok" or the error type observed at this sample
};

struct SweepResult {
  std::vector<EvansSample> samples;
  std::vector<std::pair<double, double>> brackets;  // candidate root intervals
};

// Sample E on a real interval; flag dips of |E| (and sign changes of the
// dominant real part) as root brackets. Per-sample failures are recorded in
// the status column and the sweep continues.
inline SweepResult sweep_real(double lo, double hi, int n, const EvansFn& f) {
  if (n < 3) throw NumericalError("sweep_real: need at least 3 samples");
  SweepResult out;
  std::vector<double> mags;
  for (int i = 0; i < n; ++i) {
    const Complex lam(lo + (hi - lo) * i / (n - 1), 0.0);
    EvansSample s{lam, Complex(0, 0), "ok"};
    try {
      s.E = f(lam);
      mags.push_back(std::abs(s.E));
    } catch (const NumericalError& e) {
      s.status = e.what();
    }
    out.samples.push_back(s);
  }
  if (mags.empty()) return out;
  std::vector<double> sorted = mags;
  std::sort(sorted.begin(), sorted.end());
  const double median = sorted[sorted.size() / 2];

  // A candidate is a local dip of |E|; it is confirmed as a bracket only if a
  // 10x finer local re-sample drives |E| towards 0 (near a root the magnitude
  // is locally linear, so a true root deepens sharply; benign dips do not).
  for (std::size_t i = 1; i + 1 < out.samples.size(); ++i) {
    const auto &a = out.samples[i - 1], &b = out.samples[i], &c = out.samples[i + 1];
    if (a.status != "ok" || b.status != "ok" || c.status != "ok") continue;
    const double ma = std::abs(a.E), mb = std::abs(b.E), mc = std::abs(c.E);
    if (!(mb <= ma && mb <= mc && mb < 0.5 * median)) continue;
    double fine_min = mb;
    const double la = a.lambda.real(), lc = c.lambda.real();
    for (int j = 1; j < 20; ++j) {
      const Complex lam(la + (lc - la) * j / 20.0, 0.0);
      try {
        fine_min = std::min(fine_min, std::abs(f(lam)));
      } catch (const NumericalError&) {
      }
    }
    // Near a simple root |E| is locally conical, so 10x finer sampling shrinks
    // the minimum by ~10x; a smooth benign dip barely moves.
    if (fine_min < 0.2 * mb || mb < 1e-10 * median)
      out.brackets.emplace_back(la, lc);
  }
  return out;
}

// Closed contours, counterclockwise, as a continuous parametrisation on [0, 1].
struct Contour {
  std::function<Complex(double)> at;
  int n_min = 64;
  std::string description;
};

// First-quadrant quarter circle of radius r closed along the axes, with insets
// so the origin does not sit on the path.
inline Contour quarter_circle_contour(double r, double inset = 1e-6, int n_min = 128) {
  Contour c;
  c.description = "quarter-circle r=" + g17(r);
  c.n_min = n_min;
  c.at = [r, inset](double s) -> Complex {
    const double pi = 3.14159265358979323846;
    if (s < 0.25) {  // out along the real axis
      const double t = s / 0.25;
      return Complex(inset + (r - inset) * t, 0.0);
    }
    if (s < 0.5) {  // the big arc
      const double t = (s - 0.25) / 0.25;
      return std::polar(r, 0.5 * pi * t);
    }
    if (s < 0.75) {  // down the imaginary axis
      const double t = (s - 0.5) / 0.25;
      return Complex(0.0, r + (inset - r) * t);
    }
    // small arc around the origin, avoiding lambda = 0 on the path
    const double t = (s - 0.75) / 0.25;
    return std::polar(inset, 0.5 * pi * (1.0 - t));
  };
  return c;
}

inline Contour circle_contour(Complex centre, double r, int n_min = 64) {
  Contour c;
  c.description = "circle centre=" + g17(centre.real()) + "+" + g17(centre.imag()) +
                  "i r=" + g17(r);
  c.n_min = n_min;
  c.at = [centre, r](double s) {
    return centre + std::polar(r, 2.0 * 3.14159265358979323846 * s);
  };
  return c;
}

inline Contour rectangle_contour(Complex lo, Complex hi, int n_min = 128) {
  if (!(lo.real() < hi.real() && lo.imag() < hi.imag()))
    throw NumericalError("rectangle_contour: corners must be ordered");
  Contour c;
  c.description = "rectangle [" + g17(lo.real()) + "," + g17(hi.real()) + "]x[" +
                  g17(lo.imag()) + "," + g17(hi.imag()) + "]";
  c.n_min = n_min;
  const Complex a = lo, b(hi.real(), lo.imag()), d(lo.real(), hi.imag());
  c.at = [a, b, hi, d](double s) -> Complex {
    const double t = 4.0 * s;
    if (t < 1) return a + (b - a) * t;
    if (t < 2) return b + (hi - b) * (t - 1);
    if (t < 3) return hi + (d - hi) * (t - 2);
    return d + (a - d) * (t - 3);
  };
  return c;
}

struct WindingOptions {
  double path_floor = 1e-13;    // |E| below this on the path -> OnPath
  double max_increment = 1.570796326794896558;  // pi/2 cap per accepted step
  double residual_cap = 0.05;
  std::size_t max_samples = 200000;
};

struct WindingResult {
  int winding = 0;
  double residual = 0.0;
  std::size_t n_samples = 0;
  std::string contour;
};

// Accumulated principal-argument increments with adaptive bisection until each
// increment is below pi/2; the rounded total must sit within residual_cap of
// an integer.
inline WindingResult winding_number(const EvansFn& f, const Contour& contour,
                                    const WindingOptions& opt = {}) {
  struct Node {
    double s;
    Complex E;
  };
  auto eval = [&](double s) {
    const Complex lam = contour.at(s);
    const Complex E = f(lam);
    if (std::abs(E) < opt.path_floor)
      throw OnPath("winding_number: |E| = " + g17(std::abs(E)) +
                   " on the path at lambda = " + g17(lam.real()) + "+" +
                   g17(lam.imag()) + "i");
    return E;
  };
  std::vector<Node> nodes;
  const int n0 = std::max(contour.n_min, 8);
  nodes.reserve(n0 + 1);
  for (int i = 0; i <= n0; ++i) {
    const double s = double(i) / n0;
    nodes.push_back({s, eval(s)});
  }
  std::size_t evals = nodes.size();
  for (std::size_t i = 0; i + 1 < nodes.size();) {
    const double d = std::abs(std::arg(nodes[i + 1].E / nodes[i].E));
    if (d < opt.max_increment) {
      ++i;
      continue;
    }
    if (++evals > opt.max_samples)
      throw NonConvergentRefinement("winding_number: sample budget exhausted");
    const double sm = 0.5 * (nodes[i].s + nodes[i + 1].s);
    if (sm == nodes[i].s || sm == nodes[i + 1].s)
      throw NonConvergentRefinement("winding_number: parameter interval collapsed");
    nodes.insert(nodes.begin() + static_cast<std::ptrdiff_t>(i) + 1, {sm, eval(sm)});
  }
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i)
    total += std::arg(nodes[i + 1].E / nodes[i].E);
  const double turns = total / (2.0 * 3.14159265358979323846);
  const double nearest = std::round(turns);
  WindingResult res;
  res.residual = std::abs(turns - nearest);
  if (res.residual >= opt.residual_cap)
    throw NonConvergentRefinement("winding_number: rounding residual " +
                                  g17(res.residual));
  res.winding = static_cast<int>(nearest);
  res.n_samples = nodes.size();
  res.contour = contour.description;
  return res;
}

struct RootRecord {
  Complex lambda_root;
  double c = 0.0;
  double residual = 0.0;
  int multiplicity = 1;
};

struct PolishOptions {
  double tol = 1e-10;       // |Newton step| convergence threshold
  double max_jump = 0.5;    // divergence guard on a single step
  int max_iter = 40;
};

// Newton on lambda with a central-difference derivative; E is analytic away
// from poles, so complex finite differences converge cleanly.
inline Complex newton_polish(const EvansFn& f, Complex seed,
                             const PolishOptions& opt = {}) {
  Complex lam = seed;
  for (int it = 0; it < opt.max_iter; ++it) {
    const double h = 1e-6 * std::max(1.0, std::abs(lam));
    const Complex fv = f(lam);
    const Complex fp = (f(lam + h) - f(lam - h)) / (2.0 * h);
    if (fp == Complex(0, 0))
      throw RootLost("newton_polish: vanishing derivative at lambda = " +
                     g17(lam.real()) + "+" + g17(lam.imag()) + "i");
    const Complex step = fv / fp;
    if (std::abs(step) > opt.max_jump)
      throw RootLost("newton_polish: step " + g17(std::abs(step)) + " diverges");
    lam -= step;
    if (std::abs(step) < opt.tol) return lam;
  }
  throw RootLost("newton_polish: no convergence from seed " + g17(seed.real()) +
                 "+" + g17(seed.imag()) + "i");
}

struct LocateOptions {
  double coarse_tol = 1e-2;   // cell diameter at which Newton takes over
  double min_cell = 1e-5;     // unresolved-cluster floor
  WindingOptions winding;
  PolishOptions polish;
};

struct RootSearchResult {
  std::vector<RootRecord> roots;
  std::vector<RootRecord> poles;  // negative local winding, reported separately
};

namespace detail {

inline WindingResult cell_winding(const EvansFn& f, Complex lo, Complex hi,
                                  const WindingOptions& wopt) {
  // nudge the cell if a root or pole sits on its boundary
  const double dx = hi.real() - lo.real(), dy = hi.imag() - lo.imag();
  for (double nudge : {0.0, 0.013, -0.029}) {
    try {
      const Complex off(nudge * dx, nudge * dy);
      return winding_number(f, rectangle_contour(lo - off, hi + off, 32), wopt);
    } catch (const OnPath&) {
      continue;
    }
  }
  throw OnPath("cell_winding: boundary keeps hitting a zero or pole");
}

inline bool in_cell(Complex lam, Complex lo, Complex hi, double margin) {
  const double mx = margin * (hi.real() - lo.real());
  const double my = margin * (hi.imag() - lo.imag());
  return lam.real() >= lo.real() - mx && lam.real() <= hi.real() + mx &&
         lam.imag() >= lo.imag() - my && lam.imag() <= hi.imag() + my;
}

// 1/E with failed evaluations mapped to 0: approaching a pole of E the Riccati
// flow leaves the chart and the evaluation throws, which for the reciprocal is
// exactly the limit value.
inline EvansFn reciprocal_of(const EvansFn& f) {
  return [&f](Complex z) {
    try {
      return Complex(1, 0) / f(z);
    } catch (const NumericalError&) {
      return Complex(0, 0);
    }
  };
}

// Dense magnitude scan of the region. The argument principle alone cannot find
// a zero-pole pair (from outside any enclosing contour the pair is a dipole
// with net winding 0), so candidate seeds come from the magnitude landscape:
// deep local minima seed zeros, spikes and failed evaluations seed poles.
struct Candidate {
  Complex z;
  bool pole_like;
};

inline std::vector<Candidate> scan_candidates(const EvansFn& f, Complex lo,
                                              Complex hi, double spacing) {
  const double wx = hi.real() - lo.real(), wy = hi.imag() - lo.imag();
  const int nx = std::clamp(static_cast<int>(std::ceil(wx / spacing)) + 1, 8, 160);
  const int ny = std::clamp(static_cast<int>(std::ceil(wy / spacing)) + 1, 5, 160);
  std::vector<double> mag(static_cast<std::size_t>(nx) * ny,
                          std::numeric_limits<double>::quiet_NaN());
  auto at = [&](int i, int j) -> double& {
    return mag[static_cast<std::size_t>(j) * nx + i];
  };
  auto point = [&](int i, int j) {
    return Complex(lo.real() + wx * i / (nx - 1.0), lo.imag() + wy * j / (ny - 1.0));
  };
  std::vector<double> ok;
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      try {
        at(i, j) = std::abs(f(point(i, j)));
        ok.push_back(at(i, j));
      } catch (const NumericalError&) {
      }
    }
  std::vector<Candidate> cands;
  if (ok.empty()) return cands;
  std::sort(ok.begin(), ok.end());
  const double median = ok[ok.size() / 2];
  auto push_merged = [&](Complex z, bool pole_like) {
    for (const auto& c : cands)
      if (c.pole_like == pole_like && std::abs(c.z - z) < 2.0 * spacing) return;
    cands.push_back({z, pole_like});
  };
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      const double m = at(i, j);
      if (std::isnan(m)) {
        push_merged(point(i, j), true);  // evaluation failed: pole suspect
        continue;
      }
      bool is_min = true, is_max = true;
      for (int dj = -1; dj <= 1; ++dj)
        for (int di = -1; di <= 1; ++di) {
          if (di == 0 && dj == 0) continue;
          const int ii = i + di, jj = j + dj;
          if (ii < 0 || jj < 0 || ii >= nx || jj >= ny) continue;
          const double n = at(ii, jj);
          if (std::isnan(n)) continue;
          if (n < m) is_min = false;
          if (n > m) is_max = false;
        }
      if (is_min && m < 0.2 * median) push_merged(point(i, j), false);
      if (is_max && m > 5.0 * median) push_merged(point(i, j), true);
    }
  return cands;
}

inline void resolve_box(const EvansFn& f, Complex centre, double half,
                        const LocateOptions& opt, RootSearchResult& out) {
  const Complex lo = centre - Complex(half, half), hi = centre + Complex(half, half);
  const WindingResult w = cell_winding(f, lo, hi, opt.winding);
  const EvansFn recip = reciprocal_of(f);
  if (std::abs(w.winding) > 1) {
    if (half < opt.min_cell)
      throw ClusterUnresolved("locate_roots: winding " + std::to_string(w.winding) +
                              " in a cell of half-width " + g17(half));
    for (double sx : {-0.5, 0.5})
      for (double sy : {-0.5, 0.5})
        resolve_box(f, centre + Complex(sx * half, sy * half), 0.5 * half, opt, out);
    return;
  }
  if (w.winding == 1) {
    const Complex root = newton_polish(f, centre, opt.polish);
    out.roots.push_back({root, 0.0, std::abs(f(root)), 1});
  } else if (w.winding == -1) {
    const Complex pole = newton_polish(recip, centre, opt.polish);
    out.poles.push_back({pole, 0.0, std::abs(recip(pole)), 1});
  } else {
    // Net winding 0 inside the box: either a benign dip (both polishes fail or
    // escape) or a still-unseparated zero-pole pair (both land inside).
    try {
      const Complex root = newton_polish(f, centre, opt.polish);
      if (in_cell(root, lo, hi, 0.5))
        out.roots.push_back({root, 0.0, std::abs(f(root)), 1});
    } catch (const NumericalError&) {
    }
    try {
      const Complex pole = newton_polish(recip, centre, opt.polish);
      if (in_cell(pole, lo, hi, 0.5))
        out.poles.push_back({pole, 0.0, std::abs(recip(pole)), 1});
    } catch (const NumericalError&) {
    }
  }
}

}  // namespace detail

// Dense-scan candidate detection followed by local winding boxes and Newton
// polish, cross-checked against the boundary winding of the whole region.
inline RootSearchResult locate_roots(const EvansFn& f, Complex lo, Complex hi,
                                     const LocateOptions& opt = {}) {
  RootSearchResult out;
  const auto cands = detail::scan_candidates(f, lo, hi, 0.5 * opt.coarse_tol);
  if (cands.size() > 64)
    throw ClusterUnresolved("locate_roots: " + std::to_string(cands.size()) +
                            " candidate seeds; refine the region");
  for (const auto& c : cands)
    detail::resolve_box(f, c.z, 0.5 * opt.coarse_tol, opt, out);
  // Companion search: a zero close to a pole (or vice versa) flattens its
  // partner's signature in the magnitude scan, so probe a ring of seeds around
  // each resolved singularity for a nearby partner of the opposite kind.
  const EvansFn recip = detail::reciprocal_of(f);
  auto find_companions = [&](const std::vector<RootRecord>& anchors,
                             const EvansFn& target, std::vector<RootRecord>& dest) {
    for (const auto& a : anchors)
      for (int k = 0; k < 8; ++k) {
        const double th = 2.0 * 3.14159265358979323846 * k / 8.0;
        const Complex seed =
            a.lambda_root + 0.5 * opt.coarse_tol * Complex(std::cos(th), std::sin(th));
        try {
          const Complex z = newton_polish(target, seed, opt.polish);
          if (std::abs(z - a.lambda_root) < 3.0 * opt.coarse_tol)
            dest.push_back({z, 0.0, std::abs(target(z)), 1});
        } catch (const NumericalError&) {
        }
      }
  };
  find_companions(out.poles, f, out.roots);
  find_companions(out.roots, recip, out.poles);
  auto dedupe = [](std::vector<RootRecord>& v) {
    std::sort(v.begin(), v.end(), [](const RootRecord& a, const RootRecord& b) {
      return a.lambda_root.real() != b.lambda_root.real()
                 ? a.lambda_root.real() < b.lambda_root.real()
                 : a.lambda_root.imag() < b.lambda_root.imag();
    });
    std::vector<RootRecord> u;
    for (const auto& r : v) {
      if (!u.empty() && std::abs(u.back().lambda_root - r.lambda_root) < 1e-8) {
        ++u.back().multiplicity;
        continue;
      }
      u.push_back(r);
    }
    for (auto& r : u) r.multiplicity = 1;
    v = u;
  };
  dedupe(out.roots);
  dedupe(out.poles);
  auto inside = [&](std::vector<RootRecord>& v) {
    std::erase_if(v, [&](const RootRecord& r) {
      return !detail::in_cell(r.lambda_root, lo, hi, 0.0);
    });
  };
  inside(out.roots);
  inside(out.poles);
  const WindingResult total = detail::cell_winding(f, lo, hi, opt.winding);
  const int found = static_cast<int>(out.roots.size()) -
                    static_cast<int>(out.poles.size());
  if (total.winding != found)
    throw ClusterUnresolved("locate_roots: boundary winding " +
                            std::to_string(total.winding) + " but resolved " +
                            std::to_string(out.roots.size()) + " roots and " +
                            std::to_string(out.poles.size()) + " poles");
  return out;
}

struct RootPath {
  std::vector<RootRecord> points;
  bool crossed = false;
  double c_before = 0.0, c_after = 0.0;  // bracket around the sign flip of Re lambda*
};

// Continue a root in the wave speed: at each c step the wave is recomputed from
// the previous profile and the root re-polished from the previous lambda.
inline RootPath track_root_in_c(const WaveProfile& start, double c_end, int n_steps,
                                Complex seed, const Chart& chart,
                                const SolverConfig& solver_cfg = {},
                                const RiccatiOptions& ropt = {},
                                const PolishOptions& popt = {}) {
  if (n_steps < 1) throw NumericalError("track_root_in_c: n_steps must be >= 1");
  RootPath path;
  WaveProfile wave = start;
  Complex lam = newton_polish(make_evans(wave, chart, 0.0, ropt), seed, popt);
  path.points.push_back({lam, wave.params.c,
                         std::abs(riccati_evans(lam, wave, chart, 0.0, ropt)), 1});
  const double c0 = start.params.c;
  for (int k = 1; k <= n_steps; ++k) {
    const double c = c0 + (c_end - c0) * k / n_steps;
    auto seq = continue_in_c(wave, c, 1, solver_cfg);
    wave = seq.back();
    const EvansFn f = make_evans(wave, chart, 0.0, ropt);
    try {
      lam = newton_polish(f, lam, popt);
    } catch (const RootLost&) {
      // local relocation: scan a small real neighbourhood for the lost root
      Complex best = lam;
      double best_mag = std::numeric_limits<double>::infinity();
      for (int j = -10; j <= 10; ++j) {
        const Complex probe = lam + Complex(0.01 * j, 0.0);
        try {
          const double m = std::abs(f(probe));
          if (m < best_mag) {
            best_mag = m;
            best = probe;
          }
        } catch (const NumericalError&) {
        }
      }
      lam = newton_polish(f, best, popt);  // RootLost propagates if this fails too
    }
    const double prev_re = path.points.back().lambda_root.real();
    path.points.push_back({lam, c, std::abs(f(lam)), 1});
    if (!path.crossed && (prev_re < 0) != (lam.real() < 0)) {
      path.crossed = true;
      path.c_before = path.points[path.points.size() - 2].c;
      path.c_after = c;
    }
  }
  return path;
}

struct ArgumentField {
  int nx = 0, ny = 0;
  Complex lo, hi;
  std::vector<Complex> lambda;     // row-major, ny rows of nx
  std::vector<double> arg;         // principal argument of E
  std::vector<std::string> status; // "ok" or the per-sample error
};

inline ArgumentField argument_field(const EvansFn& f, Complex lo, Complex hi, int nx,
                                    int ny) {
  if (nx < 1 || ny < 1) throw NumericalError("argument_field: grid must be >= 1x1");
  ArgumentField out;
  out.nx = nx;
  out.ny = ny;
  out.lo = lo;
  out.hi = hi;
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      const double x =
          nx == 1 ? lo.real() : lo.real() + (hi.real() - lo.real()) * i / (nx - 1);
      const double y =
          ny == 1 ? lo.imag() : lo.imag() + (hi.imag() - lo.imag()) * j / (ny - 1);
      const Complex lam(x, y);
      out.lambda.push_back(lam);
      try {
        out.arg.push_back(std::arg(f(lam)));
        out.status.push_back("ok");
      } catch (const NumericalError& e) {
        out.arg.push_back(std::numeric_limits<double>::quiet_NaN());
        out.status.push_back(e.what());
      }
    }
  return out;
}

}  // namespace ricwave

#endif
