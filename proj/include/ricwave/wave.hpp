#ifndef RICWAVE_WAVE_HPP
#define RICWAVE_WAVE_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "ricwave/composite.hpp"
#include "ricwave/model.hpp"
#include "ricwave/numfmt.hpp"

namespace ricwave {

// Converged epsilon > 0 travelling-wave profile on a truncated z-domain.
// Interpolation is cubic Hermite with node derivatives taken from the ODE
// right-hand side, which the converged profile satisfies.
struct WaveProfile {
  std::vector<double> z;
  std::vector<Vec4> x;
  ModelParams params;
  WaveType type = WaveType::I;
  double bvp_residual = 0.0;

  std::size_t size() const { return z.size(); }
  double z_left() const { return z.front(); }
  double z_right() const { return z.back(); }

  std::size_t locate(double zz) const {
    if (zz < z.front() - 1e-12 || zz > z.back() + 1e-12)
      throw OutOfDomain("WaveProfile: z = " + std::to_string(zz) + " outside grid");
    std::size_t lo = 0, hi = z.size() - 1;
    while (hi - lo > 1) {
      const std::size_t mid = (lo + hi) / 2;
      if (z[mid] <= zz)
        lo = mid;
      else
        hi = mid;
    }
    return lo;
  }

  Vec4 state(double zz) const {
    const std::size_t i = locate(zz);
    const double h = z[i + 1] - z[i];
    const double th = std::clamp((zz - z[i]) / h, 0.0, 1.0);
    const Vec4 d0 = slow_rhs(x[i], params), d1 = slow_rhs(x[i + 1], params);
    const double h00 = (1 + 2 * th) * (1 - th) * (1 - th);
    const double h10 = th * (1 - th) * (1 - th);
    const double h01 = th * th * (3 - 2 * th);
    const double h11 = th * th * (th - 1);
    return h00 * x[i] + h * h10 * d0 + h01 * x[i + 1] + h * h11 * d1;
  }

  Vec4 deriv(double zz) const { return slow_rhs(state(zz), params); }
};

struct ClassifyOptions {
  double tol_w = 1e-6;
  double kappa = 0.1;
};

// IV if w dips below -tol_w; II if an interior layer steeper than the slow
// scale is present (max |w'| > kappa / sqrt(epsilon)); I otherwise.
// Type III is only ever reported as a bracketing label between II and IV.
inline WaveType classify_wave(const WaveProfile& wave, const ClassifyOptions& opt = {}) {
  double min_w = std::numeric_limits<double>::infinity();
  double max_wp = 0.0;
  for (const Vec4& s : wave.x) {
    min_w = std::min(min_w, s[3]);
    const double wp = (s[1] + s[2] * s[3] - wave.params.c * s[3]) / wave.params.epsilon;
    max_wp = std::max(max_wp, std::abs(wp));
  }
  if (min_w < -opt.tol_w) return WaveType::IV;
  if (max_wp > opt.kappa / std::sqrt(wave.params.epsilon)) return WaveType::II;
  return WaveType::I;
}

inline WaveType parse_wave_type(const std::string& s) {
  if (s == "I") return WaveType::I;
  if (s == "II") return WaveType::II;
  if (s == "III") return WaveType::III;
  if (s == "IV") return WaveType::IV;
  throw BadProfileFile("unknown wave_type '" + s + "'");
}

inline std::string profile_to_string(const WaveProfile& wave) {
  std::ostringstream os;
  os << "ricwave-profile 1\n";
  os << "epsilon " << g17(wave.params.epsilon) << "\n";
  os << "c " << g17(wave.params.c) << "\n";
  os << "u_inf " << g17(wave.params.u_inf) << "\n";
  os << "wave_type " << wave_type_name(wave.type) << "\n";
  os << "residual " << g17(wave.bvp_residual) << "\n";
  os << "n_nodes " << wave.size() << "\n";
  os << "columns z u y v w\n";
  for (std::size_t i = 0; i < wave.size(); ++i) {
    os << g17(wave.z[i]);
    for (int k : {0, 1, 2, 3}) os << " " << g17(wave.x[i][k]);
    os << "\n";
  }
  return os.str();
}

inline void save_profile(const WaveProfile& wave, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw BadProfileFile("cannot open for writing: " + path);
  f << profile_to_string(wave);
}

inline WaveProfile profile_from_stream(std::istream& in) {
  auto expect_key = [&](const std::string& key) {
    std::string k;
    if (!(in >> k) || k != key)
      throw BadProfileFile("expected field '" + key + "'");
  };
  std::string magic;
  int version = 0;
  if (!(in >> magic >> version) || magic != "ricwave-profile")
    throw BadProfileFile("not a ricwave profile file");
  if (version != 1)
    throw BadProfileFile("unsupported profile version " + std::to_string(version));

  WaveProfile w;
  expect_key("epsilon");
  if (!(in >> w.params.epsilon)) throw BadProfileFile("bad epsilon");
  expect_key("c");
  if (!(in >> w.params.c)) throw BadProfileFile("bad c");
  expect_key("u_inf");
  if (!(in >> w.params.u_inf)) throw BadProfileFile("bad u_inf");
  expect_key("wave_type");
  std::string t;
  in >> t;
  w.type = parse_wave_type(t);
  expect_key("residual");
  if (!(in >> w.bvp_residual)) throw BadProfileFile("bad residual");
  expect_key("n_nodes");
  std::size_t n = 0;
  if (!(in >> n) || n < 2) throw BadProfileFile("bad n_nodes");
  expect_key("columns");
  std::string cz, cu, cy, cv, cw;
  if (!(in >> cz >> cu >> cy >> cv >> cw) ||
      cz != "z" || cu != "u" || cy != "y" || cv != "v" || cw != "w")
    throw BadProfileFile("unexpected column layout");

  w.z.resize(n);
  w.x.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(in >> w.z[i] >> w.x[i][0] >> w.x[i][1] >> w.x[i][2] >> w.x[i][3]))
      throw BadProfileFile("truncated profile: row " + std::to_string(i));
    if (i > 0 && w.z[i] <= w.z[i - 1])
      throw BadProfileFile("grid not strictly increasing at row " + std::to_string(i));
  }
  return w;
}

inline WaveProfile load_profile(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw BadProfileFile("cannot open: " + path);
  return profile_from_stream(f);
}

}  // namespace ricwave

#endif
