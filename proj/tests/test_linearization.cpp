#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "ricwave/linearization.hpp"

using namespace ricwave;

TEST_CASE("coefficient matrix entries follow the linearised system") {
  ModelParams p;  // epsilon 0.01, c 1
  const Complex lam(0.3, 0.1);
  const double u = 0.8, v = 0.2, w = 0.4;
  const Mat4c A = coeff_matrix(lam, u, v, w, p);
  CHECK(A(0, 2) == Complex(1, 0));
  CHECK(A(1, 3) == lam - 1.0 + 2.0 * w);
  CHECK(A(2, 0) == (lam + 2.0 * u * w) / p.epsilon);
  CHECK(A(2, 2) == Complex(-p.c / p.epsilon, 0));
  CHECK(A(2, 3) == Complex(u * u / p.epsilon, 0));
  CHECK(A(3, 1) == Complex(1.0 / p.epsilon, 0));
  CHECK(A(3, 3) == Complex((v - p.c) / p.epsilon, 0));
  // zero pattern
  for (auto [i, j] : {std::pair{0, 0}, {0, 1}, {0, 3}, {1, 0}, {1, 1}, {1, 2},
                      {2, 1}, {3, 0}})
    CHECK(A(i, j) == Complex(0, 0));
  // the fast matrix is the epsilon-scaled version
  const Mat4c B = fast_coeff_matrix(lam, u, v, w, p);
  CHECK((B - p.epsilon * A).cwiseAbs().maxCoeff() < 1e-14);
  ModelParams bad = p;
  bad.epsilon = 0.0;
  CHECK_THROWS_AS(coeff_matrix(lam, u, v, w, bad), SingularLimit);
}

TEST_CASE("closed-form spatial eigenvalues satisfy the characteristic equation") {
  ModelParams p;
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> d(-5.0, 5.0);
  for (int trial = 0; trial < 40; ++trial) {
    const Complex lam(d(rng), d(rng));
    for (auto side : {AsymptoticSide::minus, AsymptoticSide::plus_slow,
                      AsymptoticSide::plus_fast}) {
      const bool fast = side == AsymptoticSide::plus_fast;
      const int other = side == AsymptoticSide::minus ? -1 : 1;
      const Mat4c M = asymptotic_matrix(side, lam, p);
      for (int sub : {0, other})
        for (int sign : {+1, -1}) {
          const Complex mu = spatial_eigenvalue({sub, sign}, lam, p, fast);
          const Mat4c shifted = M - mu * Mat4c::Identity();
          Eigen::JacobiSVD<Mat4c> svd(shifted);
          const auto& s = svd.singularValues();
          CHECK(s[3] < 1e-8 * (1.0 + s[0]));  // mu is an eigenvalue of M
        }
    }
  }
}

TEST_CASE("branch points guard and square-root branch structure") {
  ModelParams p;  // c = 1, eps = 0.01 -> branch points at s - 25
  CHECK(branch_point(0, p) == Complex(-25.0, 0));
  CHECK(branch_point(1, p) == Complex(-24.0, 0));
  CHECK(branch_point(-1, p) == Complex(-26.0, 0));
  CHECK_THROWS_AS(spatial_eigenvalue({0, +1}, Complex(-25.0, 0), p), BranchPoint);
  // away from branch points the two signs give distinct eigenvalues
  const Complex a = spatial_eigenvalue({0, +1}, Complex(1, 0), p);
  const Complex b = spatial_eigenvalue({0, -1}, Complex(1, 0), p);
  CHECK(std::abs(a - b) > 1.0);
  // sum of the pair is -c/eps (Vieta)
  CHECK(std::abs(a + b - Complex(-100, 0)) < 1e-9);
}

TEST_CASE("asymptotic eigendata is consistent and deterministically normalised") {
  ModelParams p;
  const Complex lam(2.0, 0.7);
  for (auto side : {AsymptoticSide::minus, AsymptoticSide::plus_slow,
                    AsymptoticSide::plus_fast}) {
    const auto d = asymptotic_eigendata(side, lam, p);
    const Mat4c M = asymptotic_matrix(side, lam, p);
    for (int i = 0; i < 4; ++i) {
      CHECK((M * d.eigenvectors[i] - d.eigenvalues[i] * d.eigenvectors[i]).norm() <
            1e-8 * (1.0 + std::abs(d.eigenvalues[i])));
      CHECK(d.eigenvectors[i].norm() == doctest::Approx(1.0).epsilon(1e-10));
      // first significant component rotated positive real
      for (int k = 0; k < 4; ++k)
        if (std::abs(d.eigenvectors[i][k]) > 1e-8) {
          CHECK(d.eigenvectors[i][k].real() > 0);
          CHECK(std::abs(d.eigenvectors[i][k].imag()) < 1e-10);
          break;
        }
    }
  }
}

TEST_CASE("frames carry the correct growth directions in the resolvent set") {
  ModelParams p;
  const Complex lam(2.0, 0.0);  // to the right of the essential spectrum
  const Mat42c Fu = unstable_frame_minus(lam, p);
  const Mat4c Am = asymptotic_matrix(AsymptoticSide::minus, lam, p);
  for (int j = 0; j < 2; ++j) {
    const Complex mu = (Fu.col(j).adjoint() * Am * Fu.col(j))(0, 0);
    CHECK(mu.real() > 0);  // decays towards z -> -inf
  }
  const Mat42c Fs = stable_frame_plus(lam, p);
  const Mat4c Ap = asymptotic_matrix(AsymptoticSide::plus_slow, lam, p);
  for (int j = 0; j < 2; ++j) {
    const Complex mu = (Fs.col(j).adjoint() * Ap * Fs.col(j))(0, 0);
    CHECK(mu.real() < 0);  // decays towards z -> +inf
  }
  CHECK_THROWS_AS(stable_frame_plus(lam, p, AsymptoticSide::minus), NumericalError);
}

TEST_CASE("dispersion curves: intercepts, eigenline membership, type III overlap") {
  ModelParams p;
  std::vector<double> ks;
  for (int i = -50; i <= 50; ++i) ks.push_back(i * 0.2);
  const auto curves = dispersion_curves(p, ks);
  REQUIRE(curves.size() == 3);
  // k = 0 intercepts are exactly {-1, 0, 1}
  for (const auto& [label, want] :
       std::vector<std::pair<std::string, double>>{{"A-", -1.0}, {"A+-", 0.0},
                                                   {"A+", 1.0}}) {
    bool found = false;
    for (const auto& c : curves)
      if (c.label == label) {
        found = true;
        for (const auto& s : c.pts)
          if (s.k == 0.0) CHECK(s.lambda == Complex(want, 0.0));
      }
    CHECK(found);
  }
  // every sample makes i k a spatial eigenvalue of the corresponding matrix
  for (const auto& c : curves) {
    const auto side = c.label == "A-" ? AsymptoticSide::minus
                                      : AsymptoticSide::plus_slow;
    for (int idx : {10, 50, 73}) {
      const auto& s = c.pts[idx];
      Mat4c M;
      if (c.label == "A+-")
        M = coeff_matrix(s.lambda, 0.0, 0.0, 0.0, p);  // degenerate middle branch
      else
        M = asymptotic_matrix(side, s.lambda, p);
      const Mat4c shifted = M - Complex(0, s.k) * Mat4c::Identity();
      Eigen::JacobiSVD<Mat4c> svd(shifted);
      const auto& sv = svd.singularValues();
      CHECK(sv[3] < 1e-10 * (1.0 + sv[0]));  // i k is a spatial eigenvalue
    }
  }
  // type III: the second and third curves coincide as point sets
  const auto t3 = dispersion_curves(p, ks, true);
  REQUIRE(t3.size() == 4);
  for (const auto& s : t3[2].pts) {  // third curve, sampled at k
    const double k_match = s.k / p.epsilon;  // second curve at k/eps
    const Complex lam2(-p.epsilon * k_match * k_match, p.c * k_match);
    CHECK(std::abs(lam2 - s.lambda) < 1e-10 * (1.0 + std::abs(s.lambda)));
  }
}

TEST_CASE("absolute spectrum edge and weight interval") {
  ModelParams p;  // c = 1, eps = 0.01
  CHECK(absolute_spectrum_edge(p) == -24.0);
  const auto [lo, hi] = weight_interval(p);
  const double r = std::sqrt(1.0 - 0.04);
  CHECK(lo == doctest::Approx((1.0 - r) / 0.02).epsilon(1e-14));
  CHECK(hi == doctest::Approx((1.0 + r) / 0.02).epsilon(1e-14));
  CHECK(lo > 0);
  CHECK(hi > lo);
  ModelParams q = p;
  q.c = 0.1;  // c^2 < 4 eps has no stabilising weight
  CHECK_THROWS_AS(weight_interval(q), NoStabilisingWeight);
}

TEST_CASE("region classification against the rightmost dispersion curve") {
  ModelParams p;
  CHECK(region_classify(Complex(2.0, 0.0), p) == Region::Omega1);
  CHECK(region_classify(Complex(0.5, 0.0), p) == Region::EssentialSpectrum);
  CHECK(region_classify(Complex(-30.0, 0.0), p) == Region::Omega2);
  // on the curve lambda = 1 - eps k^2 + i c k itself
  const double k = 3.0;
  CHECK(region_classify(Complex(1.0 - p.epsilon * k * k, p.c * k), p) ==
        Region::EssentialSpectrum);
}
