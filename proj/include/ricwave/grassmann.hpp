#ifndef RICWAVE_GRASSMANN_HPP
#define RICWAVE_GRASSMANN_HPP

#include <cmath>
#include <string>

#include "ricwave/linearization.hpp"
#include "ricwave/ode.hpp"
#include "ricwave/wave.hpp"

// 2-planes in C^4 as frames and Pluecker points, the chart-parametrised matrix
// Riccati flow induced by the linearised system, the Riccati-Evans function,
// and a direct linear-flow Evans oracle for cross-validation.

namespace ricwave {

using Frame = Mat42c;

// Coordinate order (K12, K13, K14, K23, K24, K34).
struct PluckerPoint {
  Vec6c K;
  Complex relation() const {
    return K[0] * K[5] - K[1] * K[4] + K[2] * K[3];
  }
};

struct Chart {
  Mat4c T;
  std::string label;
};

inline Chart default_chart() {
  Mat4c T = Mat4c::Zero();
  const Complex i(0, 1);
  T(0, 0) = -i; T(0, 2) = 1;
  T(1, 1) = i;  T(1, 3) = 1;
  T(2, 2) = i;
  T(3, 3) = -i;
  return {T, "paper"};
}

inline Chart identity_chart() { return {Mat4c::Identity(), "identity"}; }

inline void check_frame_rank(const Frame& f) {
  Eigen::JacobiSVD<Frame> svd(f);
  const auto& s = svd.singularValues();
  if (!(s[1] > 1e-12 * s[0]))
    throw DegenerateFrame("frame is numerically rank-deficient");
}

inline PluckerPoint plucker_embed(const Frame& f) {
  check_frame_rank(f);
  const auto v = f.col(0), w = f.col(1);
  PluckerPoint p;
  int idx = 0;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) p.K[idx++] = v[i] * w[j] - v[j] * w[i];
  return p;
}

// W = Y X^{-1} of the chart-transformed frame T f = [X; Y].
inline Mat2c frame_to_chart(const Frame& f, const Chart& chart) {
  const Frame g = chart.T * f;
  const Mat2c X = g.topRows<2>();
  const Mat2c Y = g.bottomRows<2>();
  Eigen::JacobiSVD<Mat2c> svd(X);
  const auto& s = svd.singularValues();
  if (!(s[1] > 1e-10 * s[0]) || s[1] == 0)
    throw NotInChart("frame_to_chart: chart block X is singular (cond > 1e10)");
  return Y * X.inverse();
}

inline Frame chart_to_frame(const Mat2c& W, const Chart& chart) {
  Frame g;
  g.topRows<2>() = Mat2c::Identity();
  g.bottomRows<2>() = W;
  return chart.T.inverse() * g;
}

inline Mat2c riccati_rhs(const Mat2c& W, const Mat2c& A, const Mat2c& B,
                         const Mat2c& C, const Mat2c& D) {
  return C + D * W - W * A - W * B * W;
}

inline Mat2c riccati_rhs(const Mat2c& W, const Mat4c& M) {
  return riccati_rhs(W, M.topLeftCorner<2, 2>(), M.topRightCorner<2, 2>(),
                     M.bottomLeftCorner<2, 2>(), M.bottomRightCorner<2, 2>());
}

struct RiccatiOptions {
  double rtol = 1e-10;
  double atol = 1e-12;
  double blowup = 1e6;
  double relax_span = 10.0;  // frozen-coefficient lead-in at the endpoints
};

namespace detail {

template <class MatFn>
Mat2c integrate_riccati_rhs(Mat2c W0, double z_start, double z_end, MatFn&& M_of_z,
                            const RiccatiOptions& opt) {
  if (z_start == z_end) return W0;
  bool blown = false;
  double z_hit = z_start;
  OdeOptions oo;
  oo.rtol = opt.rtol;
  oo.atol = opt.atol;
  oo.h_min = 1e-10;
  auto rhs = [&](double z, const Mat2c& W) { return riccati_rhs(W, M_of_z(z)); };
  auto guard = [&](double z, const Mat2c& W) {
    if (W.cwiseAbs().maxCoeff() > opt.blowup) {
      blown = true;
      z_hit = z;
      return false;
    }
    return true;
  };
  auto res = integrate_dp54<Mat2c>(rhs, W0, z_start, z_end, oo, nullptr, guard);
  if (blown) throw ChartSingularity(z_hit);
  return res.x;
}

}  // namespace detail

inline Mat2c integrate_riccati(const Mat2c& W0, double z_start, double z_end,
                               Complex lambda, const WaveProfile& wave,
                               const Chart& chart, const RiccatiOptions& opt = {}) {
  const Mat4c Tinv = chart.T.inverse();
  auto M_of_z = [&](double z) -> Mat4c {
    return chart.T * slow_coeff_matrix(z, lambda, wave) * Tinv;
  };
  return detail::integrate_riccati_rhs(W0, z_start, z_end, M_of_z, opt);
}

namespace detail {

// Chart image of an asymptotic frame after a frozen-coefficient relaxation leg,
// which damps the truncation transient of the initial data.
inline Mat2c relaxed_endpoint(const Frame& f, const Mat4c& A_const, const Chart& chart,
                              double z_end, double direction,
                              const RiccatiOptions& opt) {
  Mat2c W = frame_to_chart(f, chart);
  if (opt.relax_span <= 0) return W;
  const Mat4c M = chart.T * A_const * chart.T.inverse();
  return integrate_riccati_rhs(W, z_end - direction * opt.relax_span, z_end,
                               [&](double) { return M; }, opt);
}

inline AsymptoticSide right_side_for(const WaveProfile& wave) {
  return wave.type == WaveType::III ? AsymptoticSide::plus_fast
                                    : AsymptoticSide::plus_slow;
}

}  // namespace detail

// E_T(z0; lambda) = det(W^s(z0) - W^u(z0)) with W^u carried from the left
// endpoint and W^s from the right endpoint.
inline Complex riccati_evans(Complex lambda, const WaveProfile& wave,
                             const Chart& chart, double z0 = 0.0,
                             const RiccatiOptions& opt = {}) {
  if (std::abs(chart.T.determinant() - Complex(1, 0)) > 1e-12)
    throw NumericalError("riccati_evans: chart must have det T = 1");
  const ModelParams& p = wave.params;
  const double zl = wave.z_left(), zr = wave.z_right();
  const Frame Fu = unstable_frame_minus(lambda, p);
  const Frame Fs = stable_frame_plus(lambda, p, detail::right_side_for(wave));
  const Mat4c Am = asymptotic_matrix(AsymptoticSide::minus, lambda, p);
  const Mat4c Ap = asymptotic_matrix(AsymptoticSide::plus_slow, lambda, p);

  Mat2c Wu = detail::relaxed_endpoint(Fu, Am, chart, zl, +1.0, opt);
  Mat2c Ws = detail::relaxed_endpoint(Fs, Ap, chart, zr, -1.0, opt);
  Wu = integrate_riccati(Wu, zl, z0, lambda, wave, chart, opt);
  Ws = integrate_riccati(Ws, zr, z0, lambda, wave, chart, opt);
  return (Ws - Wu).determinant();
}

struct DirectEvans {
  Complex value;           // det of the joined renormalised frames at z0
  Complex log_correction;  // accumulated log det of the QR renormalisations
  Frame frame_u, frame_s;  // renormalised frames at z0
};

namespace detail {

// Integrate G' = A(z) G with QR renormalisation whenever the column norms
// spread beyond `ratio` or the overall scale leaves [1/scale_cap, scale_cap].
inline Complex integrate_frame(Frame& G, double z_start, double z_end,
                               Complex lambda, const WaveProfile& wave,
                               const RiccatiOptions& opt) {
  Complex logdet(0, 0);
  // Renormalise whenever the scale leaves [1/cap, cap]: the spread between the
  // two growth rates is what erodes the subdominant direction, and bounding the
  // overall growth since the last QR bounds that spread.
  const double scale_cap = 1e6;
  auto rhs = [&](double z, const Frame& g) -> Frame {
    return slow_coeff_matrix(z, lambda, wave) * g;
  };
  OdeOptions oo;
  oo.rtol = opt.rtol;
  oo.atol = opt.atol;
  double z = z_start;
  while (z != z_end) {
    bool flagged = false;
    auto guard = [&](double, const Frame& g) {
      const double n0 = g.col(0).norm(), n1 = g.col(1).norm();
      const double hi = std::max(n0, n1);
      if (hi > scale_cap || hi < 1.0 / scale_cap) {
        flagged = true;
        return false;
      }
      return true;
    };
    auto res = integrate_dp54<Frame>(rhs, G, z, z_end, oo, nullptr, guard);
    G = res.x;
    z = res.t;
    if (flagged || z != z_end) {
      Eigen::HouseholderQR<Frame> qr(G);
      const Mat2c R = qr.matrixQR().topRows<2>().template triangularView<Eigen::Upper>();
      G = qr.householderQ() * Eigen::Matrix<Complex, 4, 2>::Identity();
      logdet += std::log(R(0, 0) * R(1, 1));
      if (!flagged) break;  // renormalised exactly at the endpoint
    } else {
      break;
    }
  }
  return logdet;
}

}  // namespace detail

// Evans determinant from the full linear flow, up to the exactly-logged
// renormalisation factor: D(lambda) = value * exp(log_correction).
inline DirectEvans direct_evans(Complex lambda, const WaveProfile& wave,
                                double z0 = 0.0, const RiccatiOptions& opt = {}) {
  DirectEvans out;
  out.frame_u = unstable_frame_minus(lambda, wave.params);
  out.frame_s =
      stable_frame_plus(lambda, wave.params, detail::right_side_for(wave));
  out.log_correction =
      detail::integrate_frame(out.frame_u, wave.z_left(), z0, lambda, wave, opt);
  out.log_correction +=
      detail::integrate_frame(out.frame_s, wave.z_right(), z0, lambda, wave, opt);
  Mat4c J;
  J.leftCols<2>() = out.frame_u;
  J.rightCols<2>() = out.frame_s;
  out.value = J.determinant();
  return out;
}

inline Complex direct_evans_oracle(Complex lambda, const WaveProfile& wave,
                                   double z0 = 0.0, const RiccatiOptions& opt = {}) {
  return direct_evans(lambda, wave, z0, opt).value;
}

}  // namespace ricwave

#endif
