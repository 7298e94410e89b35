#ifndef RICWAVE_LINEARIZATION_HPP
#define RICWAVE_LINEARIZATION_HPP

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "ricwave/model.hpp"
#include "ricwave/wave.hpp"

// The lambda-dependent 4x4 coefficient matrices of the linearised spectral
// problem along a wave, their asymptotic limits, closed-form spatial
// eigenvalues with analytic branch selection, dispersion relations, and the
// exponential-weight interval. Frame ordering is fixed as (p, s, q, r).

namespace ricwave {

// A built from point data (u, v, w) of the wave.
inline Mat4c coeff_matrix(Complex lambda, double u, double v, double w,
                          const ModelParams& p) {
  if (p.epsilon <= 0) throw SingularLimit("coeff_matrix: epsilon must be > 0");
  const double c = p.c, e = p.epsilon;
  Mat4c A = Mat4c::Zero();
  A(0, 2) = 1;
  A(1, 3) = lambda - 1.0 + 2.0 * w;
  A(2, 0) = (lambda + 2.0 * u * w) / e;
  A(2, 2) = -c / e;
  A(2, 3) = u * u / e;
  A(3, 1) = 1.0 / e;
  A(3, 2) = w / e;
  A(3, 3) = (v - c) / e;
  return A;
}

inline Mat4c slow_coeff_matrix(double z, Complex lambda, const WaveProfile& wave) {
  const Vec4 s = wave.state(z);
  return coeff_matrix(lambda, s[0], s[2], s[3], wave.params);
}

// B of the fast system; equals epsilon * A under the variable identification.
inline Mat4c fast_coeff_matrix(Complex lambda, double u, double v, double w,
                               const ModelParams& p) {
  const double c = p.c, e = p.epsilon;
  Mat4c B = Mat4c::Zero();
  B(0, 2) = e;
  B(1, 3) = e * (lambda - 1.0 + 2.0 * w);
  B(2, 0) = lambda + 2.0 * u * w;
  B(2, 2) = -c;
  B(2, 3) = u * u;
  B(3, 1) = 1;
  B(3, 2) = w;
  B(3, 3) = v - c;
  return B;
}

enum class AsymptoticSide { minus, plus_slow, plus_fast };

inline Mat4c asymptotic_matrix(AsymptoticSide side, Complex lambda,
                               const ModelParams& p) {
  switch (side) {
    case AsymptoticSide::minus:
      return coeff_matrix(lambda, 0.0, 0.0, 1.0, p);
    case AsymptoticSide::plus_slow:
      return coeff_matrix(lambda, p.u_inf, 0.0, 0.0, p);
    case AsymptoticSide::plus_fast:
      return fast_coeff_matrix(lambda, p.u_inf, 0.0, 0.0, p);
  }
  throw NumericalError("asymptotic_matrix: bad side");
}

struct AsymptoticMatrices {
  Mat4c A_minus, A_plus, B_plus;
};

inline AsymptoticMatrices asymptotic_matrices(Complex lambda, const ModelParams& p) {
  return {asymptotic_matrix(AsymptoticSide::minus, lambda, p),
          asymptotic_matrix(AsymptoticSide::plus_slow, lambda, p),
          asymptotic_matrix(AsymptoticSide::plus_fast, lambda, p)};
}

// Branch naming: the subscript is the lambda at which the +root vanishes,
// the sign picks the square root. beta values are the epsilon-scaled ones.
struct BranchTag {
  int subscript;  // -1, 0, or 1
  int sign;       // +1 or -1
};

inline Complex branch_point(int subscript, const ModelParams& p) {
  return Complex(subscript - p.c * p.c / (4.0 * p.epsilon), 0.0);
}

inline Complex spatial_eigenvalue(BranchTag tag, Complex lambda, const ModelParams& p,
                                  bool fast_scaled = false) {
  const double c = p.c, e = p.epsilon;
  if (std::abs(lambda - branch_point(tag.subscript, p)) < 1e-12)
    throw BranchPoint("spatial_eigenvalue: lambda at the subscript " +
                      std::to_string(tag.subscript) + " branch point");
  const Complex rad = std::sqrt(c * c + 4.0 * e * (lambda - double(tag.subscript)));
  const Complex mu = (-c + double(tag.sign) * rad) / (2.0 * e);
  return fast_scaled ? e * mu : mu;
}

struct AsymptoticEigenData {
  AsymptoticSide side;
  std::array<Complex, 4> eigenvalues;
  std::array<Vec4c, 4> eigenvectors;
  std::array<BranchTag, 4> tags;
};

namespace detail {

inline Vec4c null_vector(const Mat4c& M) {
  Eigen::JacobiSVD<Mat4c> svd(M, Eigen::ComputeFullV);
  Vec4c v = svd.matrixV().col(3);
  for (int i = 0; i < 4; ++i) {
    if (std::abs(v[i]) > 1e-8) {
      v *= std::conj(v[i]) / std::abs(v[i]);
      break;
    }
  }
  return v;
}

}  // namespace detail

inline AsymptoticEigenData asymptotic_eigendata(AsymptoticSide side, Complex lambda,
                                                const ModelParams& p) {
  const bool fast = side == AsymptoticSide::plus_fast;
  const int other = side == AsymptoticSide::minus ? -1 : 1;
  AsymptoticEigenData d;
  d.side = side;
  d.tags = {BranchTag{0, +1}, BranchTag{0, -1}, BranchTag{other, +1},
            BranchTag{other, -1}};
  const Mat4c M = asymptotic_matrix(side, lambda, p);
  for (int i = 0; i < 4; ++i) {
    d.eigenvalues[i] = spatial_eigenvalue(d.tags[i], lambda, p, fast);
    for (int j = 0; j < i; ++j)
      if (std::abs(d.eigenvalues[i] - d.eigenvalues[j]) < 1e-10)
        throw NearDegenerate("asymptotic_eigendata: eigenvalues of branches " +
                             std::to_string(i) + "," + std::to_string(j) +
                             " are numerically degenerate");
    d.eigenvectors[i] =
        detail::null_vector(M - d.eigenvalues[i] * Mat4c::Identity());
    const double res = (M * d.eigenvectors[i] - d.eigenvalues[i] * d.eigenvectors[i])
                           .norm();
    if (res > 1e-8 * (1.0 + std::abs(d.eigenvalues[i])))
      throw NumericalError("asymptotic_eigendata: eigenpair residual " +
                           std::to_string(res));
  }
  return d;
}

// Frame of the branch-continued unstable directions of A_- (branches mu_0^+,
// mu_{-1}^+). Branch-selected, not sign-selected, so it continues analytically
// into the essential spectrum.
inline Mat42c unstable_frame_minus(Complex lambda, const ModelParams& p) {
  const auto d = asymptotic_eigendata(AsymptoticSide::minus, lambda, p);
  Mat42c F;
  F.col(0) = d.eigenvectors[0];  // mu_0^+
  F.col(1) = d.eigenvectors[2];  // mu_{-1}^+
  return F;
}

// Branches rho_0^-, rho_1^- of A_+ (or beta_0^-, beta_1^- of B_+).
inline Mat42c stable_frame_plus(Complex lambda, const ModelParams& p,
                                AsymptoticSide side = AsymptoticSide::plus_slow) {
  if (side == AsymptoticSide::minus)
    throw NumericalError("stable_frame_plus: side must be plus_slow or plus_fast");
  const auto d = asymptotic_eigendata(side, lambda, p);
  Mat42c F;
  F.col(0) = d.eigenvectors[1];  // rho_0^- / beta_0^-
  F.col(1) = d.eigenvectors[3];  // rho_1^- / beta_1^-
  return F;
}

struct DispersionSample {
  double k;
  Complex lambda;
};

struct DispersionCurve {
  std::string label;
  std::vector<DispersionSample> pts;
};

inline std::vector<DispersionCurve> dispersion_curves(const ModelParams& p,
                                                      const std::vector<double>& ks,
                                                      bool type3 = false) {
  const double c = p.c, e = p.epsilon;
  std::vector<DispersionCurve> out;
  auto fill = [&](const std::string& label, auto f) {
    DispersionCurve curve;
    curve.label = label;
    for (double k : ks) curve.pts.push_back({k, f(k)});
    out.push_back(std::move(curve));
  };
  if (!type3) {
    fill("A-", [&](double k) { return Complex(-e * k * k - 1.0, c * k); });
    fill("A+-", [&](double k) { return Complex(-e * k * k, c * k); });
    fill("A+", [&](double k) { return Complex(1.0 - e * k * k, c * k); });
  } else {
    fill("III-1:A-", [&](double k) { return Complex(-e * k * k - 1.0, c * k); });
    fill("III-2:A-", [&](double k) { return Complex(-e * k * k, c * k); });
    fill("III-3:B+", [&](double k) { return Complex(-k * k / e, c * k / e); });
    fill("III-4:B+", [&](double k) { return Complex(1.0 - k * k / e, c * k / e); });
  }
  return out;
}

inline double absolute_spectrum_edge(const ModelParams& p) {
  return 1.0 - p.c * p.c / (4.0 * p.epsilon);
}

inline std::pair<double, double> weight_interval(const ModelParams& p) {
  const double disc = p.c * p.c - 4.0 * p.epsilon;
  if (disc <= 0)
    throw NoStabilisingWeight("weight_interval: requires c^2 > 4 epsilon");
  const double r = std::sqrt(disc);
  return {(p.c - r) / (2.0 * p.epsilon), (p.c + r) / (2.0 * p.epsilon)};
}

enum class Region { Omega1, EssentialSpectrum, Omega2 };

inline Region region_classify(Complex lambda, const ModelParams& p,
                              double boundary_tol = 1e-12) {
  const double k = lambda.imag() / p.c;
  const double re = lambda.real();
  const double right = 1.0 - p.epsilon * k * k;
  const double left = -1.0 - p.epsilon * k * k;
  if (re > right + boundary_tol) return Region::Omega1;
  if (re < left - boundary_tol) return Region::Omega2;
  return Region::EssentialSpectrum;
}

}  // namespace ricwave

#endif
