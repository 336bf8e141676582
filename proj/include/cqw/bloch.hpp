#pragma once

// Closed-form momentum-space analysis of the uniform-coin walk. With
// a = T*theta/2 the Bloch unitary is diag(e^{-ik}, e^{ik}) R(a) and its
// eigenphases are +-E(k) with cos E = cos k cos a.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <optional>
#include <vector>

#include "cqw/angle.hpp"
#include "cqw/error.hpp"
#include "cqw/walk.hpp"

namespace cqw::bloch {

// |sin E| below this counts as a closed gap.
inline constexpr double kGapTolerance = 1e-9;
// |denominator| below this makes the effective mass undefined.
inline constexpr double kMassTolerance = 1e-12;

using Vector3 = Eigen::Vector3d;

inline double half_angle(double theta, int step_dependency) {
  return 0.5 * static_cast<double>(step_dependency) * theta;
}

struct MomentumSample {
  double k = 0.0;
  std::optional<int> k_index;

  static MomentumSample on_cycle(int k_prime, int sites) {
    if (sites < 3 || k_prime < 0 || k_prime >= sites) {
      throw InvalidArgument("momentum index outside [0, N)");
    }
    return {kTwoPi * static_cast<double>(k_prime) / static_cast<double>(sites), k_prime};
  }
};

struct Bands {
  double upper = 0.0;
  double lower = 0.0;
};

struct SpectralPoint {
  double k = 0.0;
  double e_plus = 0.0;
  double e_minus = 0.0;
  std::optional<Vector3> n_hat;  // empty when the gap is closed
  Vector3 a_hat = Vector3::Zero();
  std::optional<double> v_gr;    // empty when the gap is closed
  std::optional<double> m_eff;   // empty = undefined mass
};

struct DiracPoint {
  Angle theta;
  double k = 0.0;
  double energy = 0.0;  // 0 or pi
};

inline Matrix2c bloch_unitary(double k, double theta, int step_dependency) {
  const Complex phase = std::polar(1.0, -k);
  Matrix2c shift = Matrix2c::Zero();
  shift(0, 0) = phase;
  shift(1, 1) = std::conj(phase);
  return shift * build_coin_matrix(theta, step_dependency, 1);
}

inline double band_cosine(double k, double theta, int step_dependency) {
  return std::clamp(std::cos(k) * std::cos(half_angle(theta, step_dependency)), -1.0, 1.0);
}

/// Upper band arccos(cos k cos(T theta/2)) in [0, pi]; lower band is its negative.
inline Bands dispersion(double k, double theta, int step_dependency) {
  const double e = std::acos(band_cosine(k, theta, step_dependency));
  return {e, -e};
}

inline double sin_energy(double k, double theta, int step_dependency) {
  const double c = band_cosine(k, theta, step_dependency);
  return std::sqrt(std::max(0.0, 1.0 - c * c));
}

inline bool gap_open(double k, double theta, int step_dependency) {
  return sin_energy(k, theta, step_dependency) >= kGapTolerance;
}

inline Vector3 winding_vector(double k, double theta, int step_dependency) {
  const double s = sin_energy(k, theta, step_dependency);
  if (s < kGapTolerance) throw GapClosed("winding vector undefined: gap closed");
  const double a = half_angle(theta, step_dependency);
  return Vector3(-std::sin(k) * std::sin(a), std::cos(k) * std::sin(a),
                 std::sin(k) * std::cos(a)) /
         s;
}

// Fixed axis A = (cos a, 0, sin a), orthogonal to n(k) for every k.
inline Vector3 reference_axis(double theta, int step_dependency) {
  const double a = half_angle(theta, step_dependency);
  return Vector3(std::cos(a), 0.0, std::sin(a));
}

/// dE/dk of the upper band.
inline double group_velocity(double k, double theta, int step_dependency) {
  const double s = sin_energy(k, theta, step_dependency);
  if (s < kGapTolerance) throw GapClosed("group velocity undefined: gap closed");
  return std::cos(half_angle(theta, step_dependency)) * std::sin(k) / s;
}

/// Upper-band effective mass 1/(d^2E/dk^2); empty when the curvature vanishes
/// (flat-band angles, Dirac angles, cos k = 0).
inline std::optional<double> effective_mass(double k, double theta, int step_dependency) {
  const double a = half_angle(theta, step_dependency);
  const double ca = std::cos(a);
  const double sa = std::sin(a);
  const double den = std::cos(k) * ca * sa * sa;
  if (std::abs(den) < kMassTolerance) return std::nullopt;
  const double ck = std::cos(k);
  return std::pow(1.0 - ca * ca * ck * ck, 1.5) / den;
}

inline SpectralPoint spectral_point(double k, double theta, int step_dependency) {
  SpectralPoint p;
  p.k = k;
  const Bands b = dispersion(k, theta, step_dependency);
  p.e_plus = b.upper;
  p.e_minus = b.lower;
  p.a_hat = reference_axis(theta, step_dependency);
  if (gap_open(k, theta, step_dependency)) {
    p.n_hat = winding_vector(k, theta, step_dependency);
    p.v_gr = group_velocity(k, theta, step_dependency);
  }
  p.m_eff = effective_mass(k, theta, step_dependency);
  return p;
}

enum class ClosingSet {
  ZeroEnergy,  // cos k cos(T theta/2) = +1, the E = 0 cones
  All,         // also the E = +-pi closings
};

/// Gap closings over theta, k in [0, 2pi]. They sit at theta = 2 m pi / T
/// where cos(T theta/2) = (-1)^m; E = 0 needs cos k = (-1)^m, E = pi needs
/// cos k = -(-1)^m.
inline std::vector<DiracPoint> dirac_points(int step_dependency,
                                            ClosingSet set = ClosingSet::ZeroEnergy) {
  if (step_dependency < 1) throw InvalidArgument("step dependency T must be >= 1");
  std::vector<DiracPoint> out;
  for (int m = 0; m <= step_dependency; ++m) {
    const Angle theta(2 * m, step_dependency);
    const bool even = m % 2 == 0;
    const std::vector<double> zero_k = even ? std::vector<double>{0.0, kTwoPi}
                                            : std::vector<double>{kPi};
    for (double k : zero_k) out.push_back({theta, k, 0.0});
    if (set == ClosingSet::All) {
      const std::vector<double> pi_k = even ? std::vector<double>{kPi}
                                            : std::vector<double>{0.0, kTwoPi};
      for (double k : pi_k) out.push_back({theta, k, kPi});
    }
  }
  return out;
}

/// Distinct theta values among dirac_points(T).
inline std::vector<Angle> dirac_angles(int step_dependency) {
  std::vector<Angle> out;
  for (int m = 0; m <= step_dependency; ++m) out.emplace_back(2 * m, step_dependency);
  return out;
}

/// Odd multiples of pi/T inside [0, 2pi]; the bands are flat at E = +-pi/2 there.
inline std::vector<Angle> flat_band_angles(int step_dependency) {
  if (step_dependency < 1) throw InvalidArgument("step dependency T must be >= 1");
  std::vector<Angle> out;
  for (int n = 0; 2 * n + 1 <= 2 * step_dependency; ++n) {
    out.emplace_back(2 * n + 1, step_dependency);
  }
  return out;
}

/// Momenta k' = N(2n+1)/4 where the dispersion does not depend on theta.
/// Empty unless N is a multiple of 4.
inline std::vector<int> rotational_flat_momenta(int sites) {
  if (sites < 3) throw InvalidSpec("cycle needs at least 3 sites");
  std::vector<int> out;
  if (sites % 4 != 0) return out;
  for (int n = 0; sites * (2 * n + 1) / 4 < sites; ++n) out.push_back(sites * (2 * n + 1) / 4);
  return out;
}

}  // namespace cqw::bloch
