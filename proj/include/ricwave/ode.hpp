#ifndef RICWAVE_ODE_HPP
#define RICWAVE_ODE_HPP

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>

#include "ricwave/types.hpp"

namespace ricwave {

struct OdeOptions {
  double rtol = 1e-10;
  double atol = 1e-12;
  double h_init = 1e-4;
  double h_min = 1e-14;
  double h_max = std::numeric_limits<double>::infinity();
  std::int64_t max_steps = 50'000'000;
};

template <class State>
struct IvpResult {
  State x;
  double t = 0.0;
  bool event_hit = false;
  std::int64_t n_steps = 0;
};

namespace detail {

// Weighted rms error for the embedded pair.
template <class State>
double error_norm(const State& err, const State& x0, const State& x1,
                  double rtol, double atol) {
  const auto e = err.array().abs();
  const auto sc = atol + rtol * x0.array().abs().max(x1.array().abs());
  return std::sqrt((e / sc).square().sum() / static_cast<double>(err.size()));
}

}  // namespace detail

// Dormand-Prince 5(4) embedded pair, adaptive step, optional scalar event and
// per-step monitor. Works on any fixed-size Eigen state (real or complex).
// The event terminates integration at its sign change, located by step bisection.
// The monitor may veto continuation (returns false -> NumericalError from caller side).
template <class State, class RHS>
IvpResult<State> integrate_dp54(
    RHS&& f, State x, double t0, double t1, const OdeOptions& opt = {},
    const std::function<double(double, const State&)>& event = nullptr,
    const std::function<bool(double, const State&)>& monitor = nullptr) {
  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                          a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                          a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                          b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                          e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

  const double dir = (t1 >= t0) ? 1.0 : -1.0;
  double t = t0;
  double h = dir * std::min(opt.h_init, std::abs(t1 - t0));
  if (h == 0.0) return {x, t0, false, 0};

  IvpResult<State> out;
  State k1 = f(t, x);

  auto step_once = [&](const State& x0, double tt, double hh, State& x_out,
                       State& k1_next, double& errn) {
    State k2 = f(tt + c2 * hh, (x0 + hh * (a21 * k1)).eval());
    State k3 = f(tt + c3 * hh, (x0 + hh * (a31 * k1 + a32 * k2)).eval());
    State k4 = f(tt + c4 * hh, (x0 + hh * (a41 * k1 + a42 * k2 + a43 * k3)).eval());
    State k5 = f(tt + c5 * hh,
                 (x0 + hh * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4)).eval());
    State k6 = f(tt + hh,
                 (x0 + hh * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5)).eval());
    x_out = x0 + hh * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    k1_next = f(tt + hh, x_out);  // FSAL
    State err = hh * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k1_next);
    errn = detail::error_norm(err, x0, x_out, opt.rtol, opt.atol);
  };

  double g_prev = event ? event(t, x) : 0.0;
  std::int64_t steps = 0;
  while (dir * (t1 - t) > 0.0) {
    if (++steps > opt.max_steps)
      throw NumericalError("integrate_dp54: step budget exhausted");
    bool last = false;
    if (dir * (t + h - t1) >= 0.0) {
      h = t1 - t;
      last = true;
    }

    State x_new, k1_new;
    double errn;
    step_once(x, t, h, x_new, k1_new, errn);

    if (errn <= 1.0) {  // accept
      double t_new = last ? t1 : t + h;
      if (event) {
        double g_new = event(t_new, x_new);
        if (g_prev != 0.0 && g_new != 0.0 && ((g_prev < 0) != (g_new < 0))) {
          // bisect on sub-step length within the accepted step
          double lo = 0.0, hi = h;
          State x_hit = x_new;
          for (int it = 0; it < 80 && std::abs(hi - lo) > 1e-14 * std::abs(h); ++it) {
            double mid = 0.5 * (lo + hi);
            State xm, km;
            double en;
            step_once(x, t, mid, xm, km, en);
            double gm = event(t + mid, xm);
            if (gm == 0.0 || ((g_prev < 0) == (gm < 0)))
              lo = mid;
            else {
              hi = mid;
              x_hit = xm;
            }
          }
          out.x = x_hit;
          out.t = t + hi;
          out.event_hit = true;
          out.n_steps = steps;
          return out;
        }
        g_prev = g_new;
      }
      x = x_new;
      k1 = k1_new;
      t = t_new;
      if (monitor && !monitor(t, x)) {
        out.x = x;
        out.t = t;
        out.n_steps = steps;
        return out;
      }
      double fac = 0.9 * std::pow(std::max(errn, 1e-10), -0.2);
      h *= std::min(5.0, std::max(0.2, fac));
    } else {
      h *= std::max(0.1, 0.9 * std::pow(errn, -0.2));
    }
    if (std::abs(h) > opt.h_max) h = dir * opt.h_max;
    if (std::abs(h) < opt.h_min)
      throw NumericalError("integrate_dp54: step size underflow at t = " + std::to_string(t));
  }
  out.x = x;
  out.t = t;
  out.n_steps = steps;
  return out;
}

}  // namespace ricwave

#endif
