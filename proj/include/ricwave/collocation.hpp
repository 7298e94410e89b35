#ifndef RICWAVE_COLLOCATION_HPP
#define RICWAVE_COLLOCATION_HPP

#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <vector>

#include "ricwave/composite.hpp"
#include "ricwave/model.hpp"
#include "ricwave/wave.hpp"

// Fourth-order collocation (3-point Lobatto IIIA) boundary-value solver for the
// epsilon > 0 travelling-wave problem, with projection boundary conditions, an
// interior phase condition, residual-driven mesh refinement, and continuation
// in the wave speed c.

namespace ricwave {

struct SolverConfig {
  double tol_newton = 1e-9;
  double tol_bc = 1e-7;
  double tol_resid = 1e-8;
  int max_iter = 50;
  int max_refine = 8;
  std::size_t max_nodes = 60000;
};

namespace detail {

struct BcData {
  Vec4 left_row0, left_row1;  // annihilate the strongly stable directions at the left state
  Vec4 right_row;             // kill the centre component at the right state
  Vec4 xm, xp;
};

inline BcData make_bc(const ModelParams& p) {
  BcData bc;
  bc.xm = Vec4(0, p.c, 0, 1);
  bc.xp = Vec4(p.u_inf, 0, 0, 0);

  const Mat4 JT = slow_jacobian(bc.xm, p).transpose();
  Eigen::EigenSolver<Mat4> es(JT);
  std::array<int, 4> idx = {0, 1, 2, 3};
  std::sort(idx.begin(), idx.end(), [&](int a, int b) {
    return es.eigenvalues()(a).real() < es.eigenvalues()(b).real();
  });
  std::array<Vec4, 2> rows;
  for (int k = 0; k < 2; ++k) {
    const auto v = es.eigenvectors().col(idx[k]);
    if (v.imag().norm() > 1e-8 * v.norm())
      throw NumericalError("make_bc: complex strong-stable eigenvector at the left state");
    Vec4 r = v.real().normalized();
    for (int i = 0; i < 4; ++i) {
      if (std::abs(r[i]) > 1e-12) {
        if (r[i] < 0) r = -r;
        break;
      }
    }
    rows[k] = r;
  }
  bc.left_row0 = rows[0];
  bc.left_row1 = rows[1];

  Vec4 l0(p.c, p.u_inf * p.u_inf, p.epsilon, 0.0);
  bc.right_row = l0.normalized();
  return bc;
}

// One damped-Newton solve on a fixed mesh; returns the infinity norm of the
// final residual. Unknowns are the node states, equations are the Lobatto IIIA
// interval residuals plus 2 left projection rows, 1 right centre row, and the
// interior phase row w(z_phase) = w_phase.
inline double newton_on_mesh(const std::vector<double>& z, std::vector<Vec4>& x,
                             const ModelParams& p, std::size_t phase_node,
                             double w_phase, const SolverConfig& cfg) {
  const std::size_t n = z.size();
  const std::size_t m = 4 * n;
  const BcData bc = make_bc(p);

  auto residual = [&](const std::vector<Vec4>& s, Eigen::VectorXd& R) {
    R.resize(static_cast<Eigen::Index>(m));
    for (std::size_t i = 0; i + 1 < n; ++i) {
      const double h = z[i + 1] - z[i];
      const Vec4 fi = slow_rhs(s[i], p), fj = slow_rhs(s[i + 1], p);
      const Vec4 xm = 0.5 * (s[i] + s[i + 1]) + (h / 8.0) * (fi - fj);
      const Vec4 fm = slow_rhs(xm, p);
      const Vec4 r = s[i + 1] - s[i] - (h / 6.0) * (fi + 4.0 * fm + fj);
      R.segment<4>(4 * static_cast<Eigen::Index>(i)) = r;
    }
    const Eigen::Index base = 4 * static_cast<Eigen::Index>(n - 1);
    R[base + 0] = bc.left_row0.dot(s[0] - bc.xm);
    R[base + 1] = bc.left_row1.dot(s[0] - bc.xm);
    R[base + 2] = bc.right_row.dot(s[n - 1] - bc.xp);
    R[base + 3] = s[phase_node][3] - w_phase;
  };

  Eigen::SparseMatrix<double> J(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(64 * n);
  Eigen::VectorXd R;
  residual(x, R);
  double rn = R.lpNorm<Eigen::Infinity>();

  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  for (int it = 0; it < cfg.max_iter; ++it) {
    if (rn < cfg.tol_newton) return rn;

    trip.clear();
    for (std::size_t i = 0; i + 1 < n; ++i) {
      const double h = z[i + 1] - z[i];
      const Mat4 Ji = slow_jacobian(x[i], p), Jj = slow_jacobian(x[i + 1], p);
      const Vec4 fi = slow_rhs(x[i], p), fj = slow_rhs(x[i + 1], p);
      const Vec4 xm = 0.5 * (x[i] + x[i + 1]) + (h / 8.0) * (fi - fj);
      const Mat4 Jm = slow_jacobian(xm, p);
      const Mat4 I = Mat4::Identity();
      const Mat4 dmi = 0.5 * I + (h / 8.0) * Ji;
      const Mat4 dmj = 0.5 * I - (h / 8.0) * Jj;
      const Mat4 Bi = -I - (h / 6.0) * (Ji + 4.0 * Jm * dmi);
      const Mat4 Bj = I - (h / 6.0) * (Jj + 4.0 * Jm * dmj);
      const Eigen::Index r0 = 4 * static_cast<Eigen::Index>(i);
      for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) {
          trip.emplace_back(r0 + a, r0 + b, Bi(a, b));
          trip.emplace_back(r0 + a, r0 + 4 + b, Bj(a, b));
        }
    }
    const Eigen::Index base = 4 * static_cast<Eigen::Index>(n - 1);
    for (int b = 0; b < 4; ++b) {
      trip.emplace_back(base + 0, b, bc.left_row0[b]);
      trip.emplace_back(base + 1, b, bc.left_row1[b]);
      trip.emplace_back(base + 2, base + b, bc.right_row[b]);
    }
    trip.emplace_back(base + 3, 4 * static_cast<Eigen::Index>(phase_node) + 3, 1.0);

    J.setFromTriplets(trip.begin(), trip.end());
    lu.compute(J);
    if (lu.info() != Eigen::Success)
      throw NoConvergence("newton_on_mesh: singular collocation Jacobian");
    Eigen::VectorXd dx = lu.solve(-R);

    double alpha = 1.0;
    std::vector<Vec4> x_try(n);
    Eigen::VectorXd R_try;
    double rn_try = 0;
    for (;;) {
      for (std::size_t i = 0; i < n; ++i)
        x_try[i] = x[i] + alpha * dx.segment<4>(4 * static_cast<Eigen::Index>(i));
      residual(x_try, R_try);
      rn_try = R_try.lpNorm<Eigen::Infinity>();
      if (rn_try < (1.0 - 1e-4 * alpha) * rn || rn_try < cfg.tol_newton) break;
      alpha *= 0.5;
      if (alpha < 1.0 / 1024)
        throw NoConvergence("newton_on_mesh: line search stalled, residual " +
                            std::to_string(rn));
    }
    x.swap(x_try);
    R.swap(R_try);
    rn = rn_try;
  }
  if (rn < cfg.tol_newton) return rn;
  throw NoConvergence("newton_on_mesh: max iterations, residual " + std::to_string(rn));
}

// Scaled defect of the collocation cubic at the interval quarter points.
inline double interval_defect(const std::vector<double>& z, const std::vector<Vec4>& x,
                              const ModelParams& p, std::size_t i) {
  const double h = z[i + 1] - z[i];
  const Vec4 f0 = slow_rhs(x[i], p), f1 = slow_rhs(x[i + 1], p);
  double worst = 0;
  for (double th : {0.25, 0.75}) {
    const double h00 = (1 + 2 * th) * (1 - th) * (1 - th);
    const double h10 = th * (1 - th) * (1 - th);
    const double h01 = th * th * (3 - 2 * th);
    const double h11 = th * th * (th - 1);
    const Vec4 xt = h00 * x[i] + h * h10 * f0 + h01 * x[i + 1] + h * h11 * f1;
    const double d00 = (6 * th * th - 6 * th) / h;
    const double d10 = 3 * th * th - 4 * th + 1;
    const double d01 = (6 * th - 6 * th * th) / h;
    const double d11 = 3 * th * th - 2 * th;
    const Vec4 xp = d00 * x[i] + d10 * f0 + d01 * x[i + 1] + d11 * f1;
    const Vec4 ft = slow_rhs(xt, p);
    worst = std::max(worst, h * (xp - ft).norm() / (1.0 + ft.norm()));
  }
  return worst;
}

}  // namespace detail

inline WaveProfile refine_wave(const GuessGrid& guess, const ModelParams& p,
                               const SolverConfig& cfg = {}) {
  p.validate();
  if (p.epsilon <= 0)
    throw SingularLimit("refine_wave: epsilon must be > 0 for the collocation solve");
  std::vector<double> z = guess.z;
  std::vector<Vec4> x = guess.x;
  if (z.size() < 3) throw NumericalError("refine_wave: guess mesh too small");

  auto phase_node = [&]() {
    std::size_t k = 0;
    for (std::size_t i = 1; i < z.size(); ++i)
      if (std::abs(z[i]) < std::abs(z[k])) k = i;
    return k;
  };

  double rn = detail::newton_on_mesh(z, x, p, phase_node(), guess.w_phase, cfg);
  double defect = 0;
  for (int pass = 0; pass <= cfg.max_refine; ++pass) {
    defect = 0;
    std::vector<std::size_t> split;
    for (std::size_t i = 0; i + 1 < z.size(); ++i) {
      const double d = detail::interval_defect(z, x, p, i);
      defect = std::max(defect, d);
      if (d > cfg.tol_resid) split.push_back(i);
    }
    if (split.empty()) break;
    if (pass == cfg.max_refine)
      throw NonConvergentRefinement("refine_wave: defect " + std::to_string(defect) +
                                    " above tolerance after max refinement passes");
    if (z.size() + split.size() > cfg.max_nodes)
      throw NonConvergentRefinement("refine_wave: node budget exhausted");
    std::vector<double> z2;
    std::vector<Vec4> x2;
    z2.reserve(z.size() + split.size());
    x2.reserve(z.size() + split.size());
    std::size_t si = 0;
    for (std::size_t i = 0; i + 1 < z.size(); ++i) {
      z2.push_back(z[i]);
      x2.push_back(x[i]);
      if (si < split.size() && split[si] == i) {
        ++si;
        const double h = z[i + 1] - z[i];
        const Vec4 f0 = slow_rhs(x[i], p), f1 = slow_rhs(x[i + 1], p);
        z2.push_back(z[i] + 0.5 * h);
        x2.push_back(0.5 * (x[i] + x[i + 1]) + (h / 8.0) * (f0 - f1));
      }
    }
    z2.push_back(z.back());
    x2.push_back(x.back());
    z.swap(z2);
    x.swap(x2);
    rn = detail::newton_on_mesh(z, x, p, phase_node(), guess.w_phase, cfg);
  }

  const detail::BcData bc = detail::make_bc(p);
  const double bc_right = (x.back() - bc.xp).lpNorm<Eigen::Infinity>();
  if (bc_right > cfg.tol_bc)
    throw DomainTooShort("refine_wave: right endpoint mismatch " +
                         std::to_string(bc_right));
  // The left state is approached algebraically along the centre direction:
  // u ~ c/L with slaved O(u^2/c^2) corrections in y, v, w. The adequacy check
  // verifies only contamination beyond that envelope.
  const double u0 = x.front()[0];
  const double envelope = cfg.tol_bc + 3.0 * u0 * u0 / (p.c * p.c);
  double bc_left = std::abs(u0) - 3.0 * p.c / (z.back() - z.front()) * 2.0;
  for (int k : {1, 2, 3})
    bc_left = std::max(bc_left, std::abs(x.front()[k] - bc.xm[k]) - envelope);
  if (bc_left > 0)
    throw DomainTooShort("refine_wave: left endpoint outside the centre-direction "
                         "envelope by " + std::to_string(bc_left));

  WaveProfile w;
  w.z = std::move(z);
  w.x = std::move(x);
  w.params = p;
  w.bvp_residual = std::max(rn, defect);
  w.type = classify_wave(w);
  return w;
}

// Re-solve from a converged profile (idempotent on converged input).
inline WaveProfile refine_wave(const WaveProfile& start, const ModelParams& p,
                               const SolverConfig& cfg = {}) {
  GuessGrid g;
  g.z = start.z;
  g.x = start.x;
  std::size_t k = 0;
  for (std::size_t i = 1; i < g.z.size(); ++i)
    if (std::abs(g.z[i]) < std::abs(g.z[k])) k = i;
  g.w_phase = start.x[k][3];
  g.type = start.type;
  return refine_wave(g, p, cfg);
}

inline WaveProfile compute_wave(const ModelParams& p, double L = 50.0,
                                const SolverConfig& cfg = {}) {
  const SingularComposite sc = build_singular_composite(p.c, p, L);
  return refine_wave(composite_guess(sc, p, L), p, cfg);
}

inline std::vector<WaveProfile> continue_in_c(const WaveProfile& start, double c_target,
                                              int n_steps, const SolverConfig& cfg = {}) {
  if (n_steps < 1) throw NumericalError("continue_in_c: n_steps must be >= 1");
  std::vector<WaveProfile> out;
  if (c_target == start.params.c) {
    out.push_back(start);
    return out;
  }
  const double full = (c_target - start.params.c) / n_steps;
  const double min_step = std::abs(full) / 64.0;
  WaveProfile cur = start;
  double step = full;
  while (std::abs(cur.params.c - c_target) > 1e-14) {
    if (std::abs(step) > std::abs(c_target - cur.params.c))
      step = c_target - cur.params.c;
    ModelParams p = cur.params;
    p.c = cur.params.c + step;
    try {
      WaveProfile next = refine_wave(cur, p, cfg);
      cur = std::move(next);
      out.push_back(cur);
      if (std::abs(step) < std::abs(full)) step *= 2.0;
    } catch (const NumericalError&) {
      step *= 0.5;
      if (std::abs(step) < min_step)
        throw ContinuationStuck("continue_in_c: stuck at c = " +
                                std::to_string(cur.params.c));
    }
  }
  return out;
}

}  // namespace ricwave

#endif
