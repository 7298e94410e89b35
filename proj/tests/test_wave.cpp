#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "ricwave/collocation.hpp"

using namespace ricwave;

namespace {
const WaveProfile& wave_at(double c) {
  static std::map<double, WaveProfile> cache;
  auto it = cache.find(c);
  if (it == cache.end()) {
    ModelParams p;
    p.c = c;
    it = cache.emplace(c, compute_wave(p)).first;
  }
  return it->second;
}
}  // namespace

TEST_CASE("c = 1 wave: smooth type I profile with correct limits") {
  const WaveProfile& w = wave_at(1.0);
  CHECK(w.type == WaveType::I);
  CHECK(w.bvp_residual < 1e-8);
  const Vec4 right = w.x.back();
  CHECK(right[0] == doctest::Approx(1.0).epsilon(1e-6));   // u -> u_inf
  CHECK(std::abs(right[3]) < 1e-6);                        // w -> 0
  const Vec4 left = w.x.front();
  CHECK(left[3] == doctest::Approx(1.0).epsilon(1e-3));    // w -> 1
  CHECK(left[1] == doctest::Approx(1.0).epsilon(1e-2));    // y -> c
  // u decreases towards the left algebraically but stays positive
  for (const auto& s : w.x) CHECK(s[0] > 0.0);
  // monotone grid
  for (std::size_t i = 1; i < w.z.size(); ++i) CHECK(w.z[i] > w.z[i - 1]);
}

TEST_CASE("c = 0.70 wave is a shock-fronted type II wave") {
  const WaveProfile& w = wave_at(0.70);
  CHECK(w.type == WaveType::II);
  double min_w = 1e300, max_slope = 0.0;
  for (std::size_t i = 0; i < w.z.size(); ++i) {
    min_w = std::min(min_w, w.x[i][3]);
    max_slope = std::max(max_slope, std::abs(w.deriv(w.z[i])[3]));
  }
  CHECK(min_w > -1e-6);  // w stays non-negative
  CHECK(max_slope > 0.1 / std::sqrt(w.params.epsilon));  // sharp interior layer
}

TEST_CASE("c = 0.65 wave is type IV with negative w dip") {
  const WaveProfile& w = wave_at(0.65);
  CHECK(w.type == WaveType::IV);
  double min_w = 1e300;
  for (const auto& s : w.x) min_w = std::min(min_w, s[3]);
  // frozen from an independent collocation prototype of the same BVP
  CHECK(min_w == doctest::Approx(-0.03512069).epsilon(2e-3));
}

TEST_CASE("state evaluation interpolates the nodes") {
  const WaveProfile& w = wave_at(1.0);
  const std::size_t i = w.z.size() / 2;
  const Vec4 s = w.state(w.z[i]);
  for (int k = 0; k < 4; ++k) CHECK(s[k] == doctest::Approx(w.x[i][k]).epsilon(1e-14));
  // between nodes the interpolant stays consistent with the vector field
  const double zm = 0.5 * (w.z[i] + w.z[i + 1]);
  const Vec4 d = w.deriv(zm);
  const Vec4 f = slow_rhs(w.state(zm), w.params);
  for (int k = 0; k < 4; ++k)
    CHECK(d[k] == doctest::Approx(f[k]).epsilon(1e-3).scale(1.0 + std::abs(f[k])));
  CHECK_THROWS_AS(w.state(w.z_right() + 1.0), OutOfDomain);
}

TEST_CASE("profile file round-trips byte-identically") {
  const WaveProfile& w = wave_at(1.0);
  const std::string text = profile_to_string(w);
  std::istringstream in(text);
  const WaveProfile back = profile_from_stream(in);
  CHECK(profile_to_string(back) == text);
  CHECK(back.type == w.type);
  CHECK(back.params.c == w.params.c);
}

TEST_CASE("malformed profile files raise BadProfileFile") {
  const WaveProfile& w = wave_at(1.0);
  const std::string good = profile_to_string(w);

  auto expect_bad = [](const std::string& text) {
    std::istringstream in(text);
    CHECK_THROWS_AS(profile_from_stream(in), BadProfileFile);
  };
  expect_bad("");
  expect_bad("not-a-profile 1\n");
  expect_bad(good.substr(0, good.size() / 2));              // truncated
  std::string wrong_magic = good;
  wrong_magic[0] = 'x';
  expect_bad(wrong_magic);
  CHECK_THROWS_AS(load_profile("/nonexistent/profile.txt"), BadProfileFile);
}

TEST_CASE("classification options control the type boundaries") {
  const WaveProfile& w = wave_at(0.70);
  CHECK(classify_wave(w) == WaveType::II);
  ClassifyOptions loose;
  loose.kappa = 1e6;  // slope threshold unreachable: the shock is not detected
  CHECK(classify_wave(w, loose) == WaveType::I);
}

TEST_CASE("continuation in c tracks the family") {
  const WaveProfile& start = wave_at(1.0);
  const auto seq = continue_in_c(start, 0.9, 2);
  CHECK(seq.back().params.c == doctest::Approx(0.9).epsilon(1e-14));
  CHECK(seq.back().bvp_residual < 1e-8);
  // zero-length continuation returns the starting wave
  const auto same = continue_in_c(start, 1.0, 3);
  CHECK(same.size() == 1);
  CHECK(same.front().params.c == 1.0);
}

TEST_CASE("re-solving a converged profile is idempotent") {
  const WaveProfile& w = wave_at(1.0);
  const WaveProfile r = refine_wave(w, w.params, SolverConfig{});
  double max_dw = 0.0;
  for (std::size_t i = 0; i < std::min(w.z.size(), r.z.size()); ++i)
    max_dw = std::max(max_dw, std::abs(r.state(w.z[i])[3] - w.x[i][3]));
  CHECK(max_dw < 1e-8);
}
