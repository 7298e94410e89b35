#ifndef RICWAVE_COMPOSITE_HPP
#define RICWAVE_COMPOSITE_HPP

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "ricwave/model.hpp"
#include "ricwave/ode.hpp"

// Singular (epsilon = 0) composite waves: reduced orbits of the desingularised
// system glued with fast-fibre jumps, z-parametrised and phase-anchored so they
// seed the collocation solver directly.

namespace ricwave {

enum class WaveType { I, II, III, IV };

inline const char* wave_type_name(WaveType t) {
  switch (t) {
    case WaveType::I: return "I";
    case WaveType::II: return "II";
    case WaveType::III: return "III";
    case WaveType::IV: return "IV";
  }
  return "?";
}

struct JumpRecord {
  double u;
  double v_minus, w_minus;
  double v_plus, w_plus;
  double y;
};

// A sampled (u,w)-orbit with derivatives, evaluable by cubic Hermite pieces.
struct Path2 {
  std::vector<double> t;
  std::vector<Vec2> x;
  std::vector<Vec2> dx;

  void push(double tt, const Vec2& xx, const Vec2& dd) {
    t.push_back(tt);
    x.push_back(xx);
    dx.push_back(dd);
  }

  void sort_increasing() {
    if (t.size() > 1 && t.front() > t.back()) {
      std::reverse(t.begin(), t.end());
      std::reverse(x.begin(), x.end());
      std::reverse(dx.begin(), dx.end());
    }
  }

  double t_min() const { return std::min(t.front(), t.back()); }
  double t_max() const { return std::max(t.front(), t.back()); }

  Vec2 eval(double tt) const {
    if (t.size() < 2) return x.front();
    const bool inc = t.back() >= t.front();
    auto seg = [&](std::size_t i, double s) {
      const double h = t[i + 1] - t[i];
      const double th = (s - t[i]) / h;
      const double h00 = (1 + 2 * th) * (1 - th) * (1 - th);
      const double h10 = th * (1 - th) * (1 - th);
      const double h01 = th * th * (3 - 2 * th);
      const double h11 = th * th * (th - 1);
      return Vec2(h00 * x[i] + h * h10 * dx[i] + h01 * x[i + 1] + h * h11 * dx[i + 1]);
    };
    std::size_t lo = 0, hi = t.size() - 1;
    const double s = inc ? std::clamp(tt, t.front(), t.back())
                         : std::clamp(tt, t.back(), t.front());
    while (hi - lo > 1) {
      const std::size_t mid = (lo + hi) / 2;
      if ((t[mid] <= s) == inc)
        lo = mid;
      else
        hi = mid;
    }
    return seg(lo, s);
  }
};

struct ReducedSegment {
  Path2 path;          // z-parametrised (u,w) orbit, z increasing
  bool on_repelling;   // z runs against the desingularised time on S_r
};

struct SingularComposite {
  double c = 0, u_inf = 0;
  std::vector<ReducedSegment> segments;
  std::optional<JumpRecord> jump;
  double z_jump = 0;
  WaveType type = WaveType::I;
  double w_phase = 0.5;
};

namespace detail {

inline double bisect(const std::function<double(double)>& f, double a, double b,
                     double fa, double fb, double xtol = 1e-13, int max_iter = 80) {
  if (fa == 0) return a;
  if (fb == 0) return b;
  if ((fa < 0) == (fb < 0)) throw NumericalError("bisect: no sign change");
  for (int i = 0; i < max_iter && std::abs(b - a) > xtol; ++i) {
    const double m = 0.5 * (a + b);
    const double fm = f(m);
    if (fm == 0) return m;
    if ((fm < 0) == (fa < 0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
      fb = fm;
    }
  }
  return 0.5 * (a + b);
}

// Integrate and record every accepted step, with optional event termination.
template <class RHS>
Path2 sample_path(RHS&& f, Vec2 x0, double t0, double t1, const OdeOptions& opt,
                  const std::function<double(double, const Vec2&)>& event = nullptr,
                  const std::function<bool(double, const Vec2&)>& stop = nullptr) {
  Path2 p;
  p.push(t0, x0, f(t0, x0));
  auto rec = [&](double t, const Vec2& x) {
    p.push(t, x, f(t, x));
    return !stop || stop(t, x);
  };
  auto res = integrate_dp54<Vec2>(f, x0, t0, t1, opt, event, rec);
  if (p.t.back() != res.t) p.push(res.t, res.x, f(res.t, res.x));
  return p;
}

// Stable eigenvector of the desingularised Jacobian at the canard point,
// oriented so that stepping delta along it lands on the requested sheet.
inline Vec2 canard_offset(double c, double delta, Sheet target) {
  const Vec2 H = canard_point(c);
  const Mat2 J = desingularised_jacobian(H[0], H[1], c);
  Eigen::EigenSolver<Mat2> es(J);
  int i = es.eigenvalues()(0).real() < es.eigenvalues()(1).real() ? 0 : 1;
  Vec2 vs = es.eigenvectors().col(i).real().normalized();
  for (int s : {+1, -1}) {
    const Vec2 x = H + s * delta * vs;
    if (classify_sheet(x[0], x[1], c, 0.0) == target) return x;
  }
  throw NumericalError("canard_offset: neither direction reaches the target sheet");
}

}  // namespace detail

// Desingularised-time canard orbit on S_r, from the canard point outward
// (backward in desingularised time), terminated at u = u_max.
inline Path2 canard_orbit_sr(double c, double u_max = 4.0) {
  const Vec2 x0 = detail::canard_offset(c, 1e-9, Sheet::repelling);
  auto f = [c](double, const Vec2& x) { return Vec2(-desingularised_rhs(x[0], x[1], c)); };
  OdeOptions opt;
  opt.rtol = 1e-12;
  opt.atol = 1e-14;
  auto p = detail::sample_path(
      f, x0, 0.0, 1e4, opt,
      [u_max](double, const Vec2& x) { return x[0] - u_max; });
  if (p.x.back()[0] < u_max - 1e-6)
    throw NumericalError("canard_orbit_sr: escape to u_max not reached");
  return p;
}

// Jump from (u, w_minus) on S_r, then follow the post-jump reduced orbit on S_a
// until w ~ 0; returns the landing u value.
inline double landing_u(double c, double u, double w_minus, double* w_plus_out = nullptr) {
  const Vec2 vy = critical_manifold_lift(u, w_minus, c);
  const Vec2 jp = jump_target(u, vy[0], w_minus, c);
  const double w_p = jp[1];
  if (w_plus_out) *w_plus_out = w_p;
  if (std::abs(w_p) < 1e-13) return u;
  auto f = [c](double, const Vec2& x) { return Vec2(desingularised_rhs(x[0], x[1], c)); };
  OdeOptions opt;
  opt.rtol = 1e-12;
  opt.atol = 1e-14;
  auto res = integrate_dp54<Vec2>(
      f, Vec2(u, w_p), 0.0, 2000.0, opt,
      [](double, const Vec2& x) { return std::abs(x[1]) - 1e-11; });
  return res.x[0];
}

// Jump point on the S_r canard orbit whose post-jump orbit lands at u_inf.
inline std::optional<JumpRecord> solve_jump(double c, double u_inf) {
  const Path2 orbit = canard_orbit_sr(c);
  const double t_end = orbit.t.back();
  auto f = [&](double t) {
    const Vec2 x = orbit.eval(t);
    return landing_u(c, x[0], x[1]) - u_inf;
  };
  const int n = 400;
  double ta = 0.0, fa = f(ta);
  for (int i = 1; i <= n; ++i) {
    const double tb = t_end * i / n;
    const double fb = f(tb);
    if ((fa < 0) != (fb < 0) || fb == 0) {
      const double tj = detail::bisect(f, ta, tb, fa, fb);
      const Vec2 x = orbit.eval(tj);
      const Vec2 vy = critical_manifold_lift(x[0], x[1], c);
      const Vec2 jp = jump_target(x[0], vy[0], x[1], c);
      return JumpRecord{x[0], vy[0], x[1], jp[0], jp[1], vy[1]};
    }
    ta = tb;
    fa = fb;
  }
  return std::nullopt;
}

namespace detail {

// Reduced flow parametrised by the wave coordinate z; the denominator
// c^2 - 2u^2 w changes sign on S_r, which encodes the orientation flip.
inline Vec2 reduced_rhs_z(const Vec2& x, double c) {
  const double d = c * c - 2.0 * x[0] * x[0] * x[1];
  return desingularised_rhs(x[0], x[1], c) / d;
}

}  // namespace detail

// Glue reduced orbits and (if needed) a fast-fibre jump into the singular wave.
// Phase anchors: type I has w(0) = 1/2; shock waves have the canard point at z = 0.
inline SingularComposite build_singular_composite(double c, const ModelParams& p,
                                                  double L = 50.0) {
  p.validate();
  if (c <= 0) throw NumericalError("build_singular_composite: c must be > 0");
  const double u_inf = p.u_inf;
  SingularComposite sc;
  sc.c = c;
  sc.u_inf = u_inf;

  OdeOptions opt;
  opt.rtol = 1e-11;
  opt.atol = 1e-13;
  auto rhs_z = [c](double, const Vec2& x) { return detail::reduced_rhs_z(x, c); };

  // Smooth attempt: reduced orbit backward in z from the right state along the
  // stable direction; succeeds iff it reaches w -> 1 without meeting the fold.
  {
    Vec2 psi(-u_inf * u_inf, 1.0);
    psi.normalize();
    const Vec2 x0 = Vec2(u_inf, 0.0) + 1e-8 * psi;
    Path2 path = detail::sample_path(
        rhs_z, x0, 0.0, -3.0 * L, opt,
        [c](double, const Vec2& x) { return fold_value(x[0], x[1], c) + 1e-6; },
        [](double, const Vec2& x) { return x[1] < 1.0 - 1e-9; });
    const bool fold_hit =
        std::abs(fold_value(path.x.back()[0], path.x.back()[1], c)) < 2e-6;
    if (!fold_hit && path.x.back()[1] > 1.0 - 1e-6) {
      // locate z where w = 1/2 and shift the phase there
      double zc = path.t.back();
      for (std::size_t i = 1; i < path.t.size(); ++i) {
        const double fa = path.x[i - 1][1] - 0.5, fb = path.x[i][1] - 0.5;
        if ((fa < 0) != (fb < 0) || fb == 0) {
          zc = detail::bisect([&](double z) { return path.eval(z)[1] - 0.5; },
                              path.t[i - 1], path.t[i], fa, fb);
          break;
        }
      }
      for (auto& z : path.t) z -= zc;
      path.sort_increasing();
      sc.segments.push_back({std::move(path), false});
      sc.type = WaveType::I;
      sc.w_phase = 0.5;
      return sc;
    }
  }

  // Shock route through the canard point.
  auto jmp = solve_jump(c, u_inf);
  if (!jmp)
    throw FoldCollision(
        "build_singular_composite: reduced orbit meets the fold and no canard "
        "jump lands at u_inf; no singular wave at c = " + std::to_string(c));

  const Vec2 xa0 = detail::canard_offset(c, 1e-8, Sheet::attracting);
  const Vec2 xr0 = detail::canard_offset(c, 1e-8, Sheet::repelling);

  Path2 sa = detail::sample_path(rhs_z, xa0, 0.0, -3.0 * L, opt, nullptr,
                                 [](double, const Vec2& x) { return x[1] < 1.0 - 1e-9; });
  sa.sort_increasing();

  const double u_j = jmp->u;
  Path2 sr = detail::sample_path(
      rhs_z, xr0, 0.0, 3.0 * L, opt,
      [u_j](double, const Vec2& x) { return x[0] - u_j; });
  const double z_jump = sr.t.back();

  sc.segments.push_back({std::move(sa), false});
  sc.segments.push_back({std::move(sr), true});
  sc.jump = *jmp;
  sc.z_jump = z_jump;

  const double w_tol = 1e-6;
  if (std::abs(jmp->w_plus) > w_tol) {
    Path2 sp = detail::sample_path(
        rhs_z, Vec2(u_j, jmp->w_plus), 0.0, 3.0 * L, opt,
        [](double, const Vec2& x) { return std::abs(x[1]) - 1e-9; });
    for (auto& z : sp.t) z += z_jump;
    sc.segments.push_back({std::move(sp), false});
  }
  sc.type = jmp->w_plus > w_tol    ? WaveType::II
            : jmp->w_plus < -w_tol ? WaveType::IV
                                   : WaveType::III;
  sc.w_phase = canard_point(c)[1];
  return sc;
}

struct GuessGrid {
  std::vector<double> z;
  std::vector<Vec4> x;
  double w_phase = 0.5;
  WaveType type = WaveType::I;
};

// Assemble the composite into a lifted 4-component guess on a z-grid with a
// tanh shock layer of width O(epsilon) at the jump.
inline GuessGrid composite_guess(const SingularComposite& sc, const ModelParams& p,
                                 double L = 50.0) {
  const double c = sc.c;
  GuessGrid g;
  g.w_phase = sc.w_phase;
  g.type = sc.type;

  std::vector<double> z;
  const int n_base = sc.jump ? 2001 : 1201;
  for (int i = 0; i < n_base; ++i) z.push_back(-L + 2.0 * L * i / (n_base - 1));
  if (sc.jump)
    for (int i = 0; i < 400; ++i)
      z.push_back(sc.z_jump - 1.0 + 2.0 * i / 399.0);
  std::sort(z.begin(), z.end());
  z.erase(std::unique(z.begin(), z.end(),
                      [](double a, double b) { return std::abs(a - b) < 1e-9; }),
          z.end());

  auto lifted = [&](const Vec2& uw) { return lift_state(uw[0], uw[1], c); };

  if (!sc.jump) {
    const Path2& path = sc.segments.front().path;
    for (double zz : z) {
      Vec4 s;
      if (zz <= path.t_min())
        s = Vec4(0, c, 0, 1);
      else if (zz >= path.t_max())
        s = Vec4(p.u_inf, 0, 0, 0);
      else
        s = lifted(path.eval(zz));
      g.z.push_back(zz);
      g.x.push_back(s);
    }
    return g;
  }

  const JumpRecord& j = *sc.jump;
  const double delta = 4.0 * p.epsilon;
  const Path2& sa = sc.segments[0].path;
  const Path2& sr = sc.segments[1].path;
  const Path2* sp = sc.segments.size() > 2 ? &sc.segments[2].path : nullptr;

  for (double zz : z) {
    Vec4 s;
    if (zz <= 0.0) {
      s = zz <= sa.t_min() ? Vec4(0, c, 0, 1) : lifted(sa.eval(zz));
    } else if (zz < sc.z_jump) {
      s = lifted(sr.eval(zz));
    } else {
      const double t = zz - sc.z_jump;
      if (t < 8.0 * delta) {
        const double s01 = 0.5 * (1.0 + std::tanh((t - 2.0 * delta) / delta));
        s = Vec4(j.u, j.y, j.v_minus + (j.v_plus - j.v_minus) * s01,
                 j.w_minus + (j.w_plus - j.w_minus) * s01);
      } else if (sp && t - 8.0 * delta < sp->t_max() - sc.z_jump) {
        s = lifted(sp->eval(sc.z_jump + t - 8.0 * delta));
      } else {
        s = Vec4(p.u_inf, 0, 0, 0);
      }
    }
    g.z.push_back(zz);
    g.x.push_back(s);
  }
  return g;
}

}  // namespace ricwave

#endif
