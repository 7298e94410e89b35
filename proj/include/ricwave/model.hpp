#ifndef RICWAVE_MODEL_HPP
#define RICWAVE_MODEL_HPP

#include <array>
#include <cmath>
#include <vector>

#include "ricwave/types.hpp"

// Right-hand sides and geometric objects of the nonlinear travelling-wave
// problem for the haptotaxis model, in Lienard coordinates.
// State ordering is fixed project-wide as (u, y, v, w).

namespace ricwave {

struct ModelParams {
  double epsilon = 0.01;
  double c = 1.0;
  double u_inf = 1.0;

  void validate() const {
    if (epsilon < 0) throw NumericalError("ModelParams: epsilon must be >= 0");
    if (c <= 0) throw NumericalError("ModelParams: c must be > 0");
    if (u_inf <= 0) throw NumericalError("ModelParams: u_inf must be > 0");
  }
};

inline Vec4 slow_rhs(const Vec4& s, const ModelParams& p) {
  if (p.epsilon == 0.0)
    throw SingularLimit("slow_rhs: epsilon = 0; use layer_rhs/reduced dynamics");
  const double u = s[0], y = s[1], v = s[2], w = s[3];
  return {v, -w * (1.0 - w), (-p.c * v + u * u * w) / p.epsilon,
          (y + v * w - p.c * w) / p.epsilon};
}

inline Vec4 fast_rhs(const Vec4& s, const ModelParams& p) {
  const double u = s[0], y = s[1], v = s[2], w = s[3];
  return {p.epsilon * v, -p.epsilon * w * (1.0 - w), -p.c * v + u * u * w,
          y + v * w - p.c * w};
}

inline Vec4 layer_rhs(const Vec4& s, double c) {
  const double u = s[0], y = s[1], v = s[2], w = s[3];
  return {0.0, 0.0, -c * v + u * u * w, y + v * w - c * w};
}

// Jacobian of slow_rhs, used by the collocation solver and projection BCs.
inline Mat4 slow_jacobian(const Vec4& s, const ModelParams& p) {
  if (p.epsilon == 0.0) throw SingularLimit("slow_jacobian: epsilon = 0");
  const double u = s[0], v = s[2], w = s[3], c = p.c, e = p.epsilon;
  Mat4 J;
  J << 0, 0, 1, 0,
       0, 0, 0, -1.0 + 2.0 * w,
       2.0 * u * w / e, 0, -c / e, u * u / e,
       0, 1.0 / e, w / e, (v - c) / e;
  return J;
}

// Critical manifold S as a graph over (u, w): v = u^2 w / c, y = -u^2 w^2 / c + c w.
inline Vec2 critical_manifold_lift(double u, double w, double c) {
  return {u * u * w / c, -u * u * w * w / c + c * w};
}

inline Vec4 lift_state(double u, double w, double c) {
  const Vec2 vy = critical_manifold_lift(u, w, c);
  return {u, vy[1], vy[0], w};
}

// Fold function F = 2 u^2 w - c^2; F < 0 on the attracting sheet S_a,
// F > 0 on the repelling sheet S_r.
inline double fold_value(double u, double w, double c) {
  return 2.0 * u * u * w - c * c;
}

enum class Sheet { attracting, on_fold, repelling };

inline Sheet classify_sheet(double u, double w, double c, double dead_band = 1e-10) {
  const double F = fold_value(u, w, c);
  if (std::abs(F) < dead_band) return Sheet::on_fold;
  return F < 0 ? Sheet::attracting : Sheet::repelling;
}

inline Vec2 desingularised_rhs(double u, double w, double c) {
  const double u2 = u * u;
  return {c * u2 * w - 2.0 * u2 * u2 * w * w / c,
          -c * w * (1.0 - w) + 2.0 * u2 * u * w * w * w / c};
}

inline Mat2 desingularised_jacobian(double u, double w, double c) {
  const double u2 = u * u, u3 = u2 * u, u4 = u2 * u2;
  Mat2 J;
  J << 2.0 * c * u * w - 8.0 * u3 * w * w / c, c * u2 - 4.0 * u4 * w / c,
       6.0 * u2 * w * w * w / c, -c * (1.0 - 2.0 * w) + 6.0 * u3 * w * w / c;
  return J;
}

// Folded-saddle canard point of the desingularised system.
inline Vec2 canard_point(double c) {
  const double uH = 0.25 * c * (c + std::sqrt(c * c + 8.0));
  return {uH, 1.0 / (uH + 1.0)};
}

// Closed-form eigenvector slope at the canard point: psi_pm = (f_pm(c), -1).
inline double canard_eigvec_slope(double c, int sign) {
  const double G = std::sqrt(c * c + 8.0);
  const double cg = c + G;
  const double rad = std::sqrt(16.0 + 24.0 * c * G - 48.0 * c * c +
                               6.0 * c * c * c * G - 6.0 * c * c * c * c);
  const double den = 64.0 * (c * c + c * G + 1.0) + sign * 2.0 * cg * cg * rad;
  return c * c * cg * cg * cg * cg / den;
}

enum class EquilibriumKind { centre_unstable, centre_stable, folded_saddle_canard };

struct EquilibriumInfo {
  Vec2 location;
  std::array<double, 2> eigenvalues;
  std::array<Vec2, 2> eigenvectors;
  EquilibriumKind kind;
};

namespace detail {

inline Vec2 normalise_eigvec(Vec2 v) {
  v.normalize();
  for (int i = 0; i < 2; ++i) {
    if (std::abs(v[i]) > 1e-14) {
      if (v[i] < 0) v = -v;
      break;
    }
  }
  return v;
}

}  // namespace detail

// Equilibria of the desingularised system with deterministic eigen-data.
// The canard-point eigenvalues come from the analytic Jacobian (trace/det
// closed form); the eigenvectors from the closed-form slopes f_pm(c), which
// pair with lambda_pm respectively.
inline std::vector<EquilibriumInfo> equilibria(double c, double u_inf) {
  std::vector<EquilibriumInfo> eq;
  eq.push_back({{0.0, 1.0},
                {c, 0.0},
                {detail::normalise_eigvec({0.0, 1.0}), detail::normalise_eigvec({1.0, 0.0})},
                EquilibriumKind::centre_unstable});
  eq.push_back({{u_inf, 0.0},
                {-c, 0.0},
                {detail::normalise_eigvec({-u_inf * u_inf, 1.0}),
                 detail::normalise_eigvec({1.0, 0.0})},
                EquilibriumKind::centre_stable});

  const Vec2 H = canard_point(c);
  const Mat2 J = desingularised_jacobian(H[0], H[1], c);
  const double tr = J.trace(), det = J.determinant();
  const double disc = std::sqrt(tr * tr - 4.0 * det);
  const double lp = 0.5 * (tr + disc), lm = 0.5 * (tr - disc);
  const Vec2 psi_p = detail::normalise_eigvec({canard_eigvec_slope(c, +1), -1.0});
  const Vec2 psi_m = detail::normalise_eigvec({canard_eigvec_slope(c, -1), -1.0});
  // consistency guard against the numerical Jacobian
  const double err_p = (J * psi_p - lp * psi_p).norm();
  const double err_m = (J * psi_m - lm * psi_m).norm();
  if (err_p > 1e-8 || err_m > 1e-8)
    throw NumericalError("equilibria: closed-form canard eigenpairs disagree with Jacobian");
  eq.push_back({H, {lp, lm}, {psi_p, psi_m}, EquilibriumKind::folded_saddle_canard});
  return eq;
}

// Fast-fibre jump across the fold: u and y are conserved, w reflects about the
// fold symmetry w_+ + w_- = c^2/u^2, and v shifts consistently.
inline Vec2 jump_target(double u, double v_minus, double w_minus, double c) {
  if (u == 0.0) throw DegenerateJump("jump_target: u = 0");
  const double w_plus = c * c / (u * u) - w_minus;
  const double v_plus = v_minus + (u * u / c) * (w_plus - w_minus);
  return {v_plus, w_plus};
}

}  // namespace ricwave

#endif
