// Acceptance gate: one line per criterion, PASS or FAIL, nonzero exit on any
// failure. Each check drives the public API end to end.

#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "ricwave/evans.hpp"

using namespace ricwave;

namespace {

int failures = 0;

void report(int id, const std::string& name, bool ok, const std::string& detail) {
  std::printf("%s: criterion %d (%s): %s\n", ok ? "PASS" : "FAIL", id,
              name.c_str(), detail.c_str());
  if (!ok) ++failures;
}

WaveProfile wave(double c) {
  ModelParams p;
  p.c = c;
  return compute_wave(p);
}

void criterion_1(const WaveProfile& w70) {
  const RootPath path =
      track_root_in_c(w70, 0.65, 10, Complex(-0.06, 0.0), default_chart());
  double max_im = 0.0;
  for (const auto& pt : path.points)
    max_im = std::max(max_im, std::abs(pt.lambda_root.imag()));
  const double lo = std::min(path.c_before, path.c_after);
  const double hi = std::max(path.c_before, path.c_after);
  const bool in_window = path.crossed && lo >= 0.6701 - 0.02 && hi <= 0.6701 + 0.02;
  const bool real_track = max_im < 1e-8;
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "crossing bracket [%.4f, %.4f], window 0.6701 +/- 0.02, max "
                "|Im lambda| = %.1e",
                lo, hi, max_im);
  report(1, "stability flip while tracking the root in c", in_window && real_track,
         buf);
}

void criterion_2(const WaveProfile& w1) {
  const EvansFn f = make_evans(w1, default_chart());
  const auto sw = sweep_real(0.0, 20.0, 101, f);
  double min_mag = 1e300;
  std::vector<double> mags;
  for (const auto& s : sw.samples)
    if (s.status == "ok") {
      mags.push_back(std::abs(s.E));
      min_mag = std::min(min_mag, std::abs(s.E));
    }
  std::sort(mags.begin(), mags.end());
  const double median = mags.empty() ? 0.0 : mags[mags.size() / 2];
  const bool sweep_ok = !mags.empty() && min_mag > 1e-3 * median &&
                        sw.brackets.empty();
  bool winding_ok = true;
  double res10 = -1, res1e4 = -1;
  int wnd10 = -99, wnd1e4 = -99;
  try {
    const auto a = winding_number(f, quarter_circle_contour(10.0));
    const auto b = winding_number(f, quarter_circle_contour(1e4));
    wnd10 = a.winding;
    wnd1e4 = b.winding;
    res10 = a.residual;
    res1e4 = b.residual;
    winding_ok = a.winding == 0 && b.winding == 0 && a.residual < 0.05 &&
                 b.residual < 0.05;
  } catch (const NumericalError&) {
    winding_ok = false;
  }
  char buf[200];
  std::snprintf(buf, sizeof buf,
                "sweep min/median = %.3f, winding(r=10) = %d (res %.1e), "
                "winding(r=1e4) = %d (res %.1e)",
                min_mag / median, wnd10, res10, wnd1e4, res1e4);
  report(2, "type I wave has a quiescent point spectrum", sweep_ok && winding_ok,
         buf);
}

void criterion_3() {
  ModelParams p;  // c = 1, eps = 0.01
  bool ok = absolute_spectrum_edge(p) == -24.0;
  std::vector<double> ks;
  for (int i = -40; i <= 40; ++i) ks.push_back(0.25 * i);
  const auto curves = dispersion_curves(p, ks);
  for (const auto& c : curves)
    for (const auto& s : c.pts)
      if (s.k == 0.0) {
        const double want = c.label == "A-" ? -1.0 : c.label == "A+" ? 1.0 : 0.0;
        ok = ok && s.lambda == Complex(want, 0.0);
      }
  const auto t3 = dispersion_curves(p, ks, true);
  double max_dev = 0.0;
  for (const auto& s : t3[2].pts) {
    const double km = s.k / p.epsilon;
    const Complex on2(-p.epsilon * km * km, p.c * km);
    max_dev = std::max(max_dev,
                       std::abs(on2 - s.lambda) / (1.0 + std::abs(s.lambda)));
  }
  ok = ok && max_dev < 1e-10;
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "edge = %.17g, k = 0 intercepts exact, type III curve 2/3 "
                "overlap dev = %.1e",
                absolute_spectrum_edge(p), max_dev);
  report(3, "essential/absolute spectrum geometry", ok, buf);
}

void criterion_4() {
  ModelParams p;
  std::mt19937 rng(90210);
  std::uniform_real_distribution<double> rad(0.0, 20.0), ang(0.0, 6.2831853);
  int tested = 0;
  double worst = 0.0;
  while (tested < 200) {
    const double r = rad(rng), th = ang(rng);
    const Complex lam(r * std::cos(th), r * std::sin(th));
    bool near_bp = false;
    for (int s : {-1, 0, 1})
      if (std::abs(lam - branch_point(s, p)) < 0.5) near_bp = true;
    if (near_bp) continue;
    ++tested;
    for (auto side : {AsymptoticSide::minus, AsymptoticSide::plus_slow,
                      AsymptoticSide::plus_fast}) {
      const bool fast = side == AsymptoticSide::plus_fast;
      const int other = side == AsymptoticSide::minus ? -1 : 1;
      const Mat4c M = asymptotic_matrix(side, lam, p);
      Eigen::ComplexEigenSolver<Mat4c> es(M);
      for (int sub : {0, other})
        for (int sign : {+1, -1}) {
          const Complex mu = spatial_eigenvalue({sub, sign}, lam, p, fast);
          double best = 1e300;
          for (int i = 0; i < 4; ++i)
            best = std::min(best, std::abs(mu - es.eigenvalues()[i]));
          worst = std::max(worst, best / (1.0 + std::abs(mu)));
        }
    }
  }
  char buf[120];
  std::snprintf(buf, sizeof buf, "200 random lambda, worst relative mismatch %.1e",
                worst);
  report(4, "closed-form spatial eigenvalues match the eigensolver",
         worst < 1e-10, buf);
}

void criterion_5(const WaveProfile& w1) {
  std::mt19937 rng(555);
  std::uniform_real_distribution<double> zpick(-40.0, 39.0), re(1.3, 3.0),
      im(-2.0, 2.0), entry(-0.5, 0.5);
  std::vector<Complex> lams;
  while (lams.size() < 10) {
    const Complex lam(re(rng), im(rng));
    if (region_classify(lam, w1.params) == Region::Omega1) lams.push_back(lam);
  }
  double worst = 0.0;
  const Chart ch = default_chart();
  for (int span = 0; span < 20; ++span) {
    const double z0 = zpick(rng), z1 = z0 + 1.0;
    const Complex lam = lams[span % lams.size()];
    Mat2c W0;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) W0(i, j) = Complex(entry(rng), entry(rng));
    const Mat2c W1 = integrate_riccati(W0, z0, z1, lam, w1, ch);
    Frame g = chart_to_frame(W0, ch);
    OdeOptions oo;
    oo.rtol = 1e-12;
    oo.atol = 1e-14;
    auto res = integrate_dp54<Frame>(
        [&](double z, const Frame& fr) -> Frame {
          return slow_coeff_matrix(z, lam, w1) * fr;
        },
        g, z0, z1, oo);
    const Mat2c W1_lin = frame_to_chart(res.x, ch);
    worst = std::max(worst,
                     (W1 - W1_lin).cwiseAbs().maxCoeff() / (1.0 + W1_lin.norm()));
  }
  char buf[120];
  std::snprintf(buf, sizeof buf, "20 spans x 10 lambda, worst deviation %.1e",
                worst);
  report(5, "Riccati flow equals the chart image of the linear flow",
         worst < 1e-6, buf);
}

void criterion_6(const WaveProfile& w65) {
  const Chart ch = default_chart();
  const EvansFn fr = make_evans(w65, ch);
  // The raw direct determinant jumps wherever the renormalisation count
  // changes; dividing out a fixed reference correction restores the analytic
  // (and, on the real axis, real-valued) Evans determinant up to a constant.
  const Complex log_ref = direct_evans(Complex(0, 0), w65).log_correction;
  const EvansFn fd = [&](Complex lam) {
    const DirectEvans d = direct_evans(lam, w65);
    return d.value * std::exp(d.log_correction - log_ref);
  };
  bool ok = true;
  double gap = -1.0;
  try {
    // The rescaled direct determinant is real-valued on the real axis, so its
    // zeros are exactly the sign changes; the Riccati determinant carries a
    // complex constant, so its zeros come from the magnitude sweep instead.
    std::vector<std::pair<double, double>> bd;
    {
      double prev_x = 0.0, prev_v = 0.0;
      bool have_prev = false;
      for (int i = 0; i <= 100; ++i) {
        const double x = -0.5 + 0.01 * i;
        double v;
        try {
          v = fd(Complex(x, 0.0)).real();
        } catch (const NumericalError&) {
          have_prev = false;
          continue;
        }
        if (have_prev && prev_v * v < 0.0) bd.emplace_back(prev_x, x);
        prev_x = x;
        prev_v = v;
        have_prev = true;
      }
    }
    const auto sr = sweep_real(-0.5, 0.5, 101, fr);
    ok = bd.size() == 1 && sr.brackets.size() == 1;
    const Complex zd =
        newton_polish(fd, Complex(0.5 * (bd.at(0).first + bd.at(0).second), 0.0));
    const auto& [ra, rb] = sr.brackets.at(0);
    const Complex zr = newton_polish(fr, Complex(0.5 * (ra + rb), 0.0));
    ok = ok && ra <= zr.real() && zr.real() <= rb;
    gap = std::abs(zr.real() - zd.real());
    ok = ok && gap < 1e-4;
  } catch (const NumericalError&) {
    ok = false;
  } catch (const std::out_of_range&) {
    ok = false;
  }
  // block-determinant identity behind the factorisation
  std::mt19937 rng(77);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    Mat2c Xu, Xs, Yu, Ys;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        Xu(i, j) = Complex(d(rng), d(rng));
        Xs(i, j) = Complex(d(rng), d(rng));
        Yu(i, j) = Complex(d(rng), d(rng));
        Ys(i, j) = Complex(d(rng), d(rng));
      }
    Mat4c M;
    M.topLeftCorner<2, 2>() = Xu;
    M.topRightCorner<2, 2>() = Xs;
    M.bottomLeftCorner<2, 2>() = Yu;
    M.bottomRightCorner<2, 2>() = Ys;
    const Complex lhs = M.determinant();
    const Complex rhs = Xu.determinant() * Xs.determinant() *
                        (Ys * Xs.inverse() - Yu * Xu.inverse()).determinant();
    worst = std::max(worst, std::abs(lhs - rhs) / (1.0 + std::abs(lhs)));
  }
  ok = ok && worst < 1e-12;
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "root abscissa gap %.1e, det identity worst residual %.1e", gap,
                worst);
  report(6, "direct and Riccati Evans zeros coincide; det factorisation", ok,
         buf);
}

void criterion_7(const WaveProfile& w65) {
  // Pluecker relation along linear flows
  std::mt19937 rng(13);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  double pl_worst = 0.0;
  for (int trial = 0; trial < 5; ++trial) {
    Mat4c M;
    Frame fr;
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) M(i, j) = 0.7 * Complex(d(rng), d(rng));
      for (int j = 0; j < 2; ++j) fr(i, j) = Complex(d(rng), d(rng));
    }
    OdeOptions oo;
    oo.rtol = 1e-12;
    oo.atol = 1e-14;
    for (int leg = 0; leg < 4; ++leg) {
      auto res = integrate_dp54<Frame>(
          [&](double, const Frame& g) -> Frame { return M * g; }, fr, 0.0, 0.3,
          oo);
      fr = res.x;
      const PluckerPoint pt = plucker_embed(fr);
      pl_worst = std::max(pl_worst,
                          std::abs(pt.relation()) / (1.0 + pt.K.squaredNorm()));
    }
  }
  // jump involution and canard-on-fold
  double jump_worst = 0.0, fold_worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const double u = 0.3 + d(rng) * 0.2 + 0.7, c = 0.6 + 0.4 * std::abs(d(rng));
    const double wm = 0.1 + 0.3 * std::abs(d(rng)), vm = d(rng);
    const Vec2 plus = jump_target(u, vm, wm, c);
    const Vec2 back = jump_target(u, plus[0], plus[1], c);
    jump_worst = std::max({jump_worst, std::abs(back[0] - vm),
                           std::abs(back[1] - wm)});
  }
  for (double c : {0.65, 0.70, 1.0, 1.5}) {
    const Vec2 q = canard_point(c);
    fold_worst = std::max(fold_worst, std::abs(fold_value(q[0], q[1], c)));
  }
  // z0-independence of the detected root
  double z0_spread = 0.0;
  bool z0_ok = true;
  try {
    const Chart ch = default_chart();
    Complex base(0, 0);
    // Offsets are bounded by the fast decay rate c/eps: the subdominant
    // component of the matched frames drops below double precision once the
    // matching point moves more than ~0.5 past the layer.
    base = newton_polish(make_evans(w65, ch, 0.0), Complex(0.02, 0.0));
    for (double z0 : {-0.5, 0.5}) {
      const EvansFn f = make_evans(w65, ch, z0);
      const Complex r = newton_polish(f, base);
      z0_spread = std::max(z0_spread, std::abs(r - base));
    }
  } catch (const NumericalError&) {
    z0_ok = false;
  }
  const bool ok = pl_worst < 1e-8 && jump_worst < 1e-12 && fold_worst < 1e-12 &&
                  z0_ok && z0_spread < 1e-6;
  char buf[200];
  std::snprintf(buf, sizeof buf,
                "Pluecker %.1e, jump involution %.1e, canard-on-fold %.1e, z0 "
                "root spread %.1e",
                pl_worst, jump_worst, fold_worst, z0_spread);
  report(7, "geometric invariants", ok, buf);
}

}  // namespace

int main() {
  try {
    const WaveProfile w1 = wave(1.0);
    const WaveProfile w70 = wave(0.70);
    const WaveProfile w65 = wave(0.65);
    criterion_1(w70);
    criterion_2(w1);
    criterion_3();
    criterion_4();
    criterion_5(w1);
    criterion_6(w65);
    criterion_7(w65);
  } catch (const std::exception& e) {
    std::printf("FAIL: acceptance harness aborted: %s\n", e.what());
    return 1;
  }
  std::printf("%s\n", failures == 0 ? "acceptance: all criteria passed"
                                    : "acceptance: FAILURES present");
  return failures;
}
