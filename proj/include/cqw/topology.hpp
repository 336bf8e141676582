#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "cqw/angle.hpp"
#include "cqw/bloch.hpp"
#include "cqw/error.hpp"
#include "cqw/parallel.hpp"

namespace cqw::topology {

// Smallest allowed |N (1 - cos^2 k cos^2 a)| in the discrete sum.
inline constexpr double kDiscreteGapTolerance = 1e-12;
// |cos(T theta/2)| above 1 - this closes the continuum gap.
inline constexpr double kContinuumGapTolerance = 1e-9;
inline constexpr int kDefaultQuadraturePoints = 4096;
inline constexpr double kTransitionJump = 0.5;

enum class WindingStatus { Valid, GapClosed };

inline const char* to_string(WindingStatus s) {
  return s == WindingStatus::Valid ? "valid" : "gap-closed";
}

/// Either a finite N-cycle or the k continuum (evaluated by quadrature).
struct Lattice {
  std::optional<int> sites;
  int quadrature_points = kDefaultQuadraturePoints;

  static Lattice cycle(int n) {
    if (n < 3) throw InvalidSpec("cycle needs at least 3 sites");
    return {n, kDefaultQuadraturePoints};
  }
  static Lattice continuum(int quadrature_points = kDefaultQuadraturePoints) {
    return {std::nullopt, quadrature_points};
  }
  bool is_continuum() const noexcept { return !sites.has_value(); }
};

struct WindingResult {
  double theta = 0.0;
  int step_dependency = 1;
  std::optional<int> sites;  // empty for the continuum
  double omega = std::numeric_limits<double>::quiet_NaN();
  WindingStatus status = WindingStatus::GapClosed;

  bool valid() const noexcept { return status == WindingStatus::Valid; }
};

/// omega = sum_k' sin a / (N (1 - cos^2(2 pi k'/N) cos^2 a)), a = T theta/2.
/// Reported unrounded; small cycles give values like 1.06066.
inline WindingResult winding_number_discrete(double theta, int step_dependency, int sites) {
  if (sites < 3) throw InvalidSpec("cycle needs at least 3 sites");
  if (step_dependency < 1) throw InvalidArgument("step dependency T must be >= 1");
  const double a = bloch::half_angle(theta, step_dependency);
  const double sa = std::sin(a);
  const double ca2 = std::cos(a) * std::cos(a);
  const double n = static_cast<double>(sites);

  WindingResult r{theta, step_dependency, sites};
  double sum = 0.0;
  for (int kp = 0; kp < sites; ++kp) {
    const double ck = std::cos(kTwoPi * static_cast<double>(kp) / n);
    const double den = n * (1.0 - ck * ck * ca2);
    if (std::abs(den) < kDiscreteGapTolerance) return r;
    sum += sa / den;
  }
  r.omega = sum;
  r.status = WindingStatus::Valid;
  return r;
}

/// Zak phase / pi from the closed-form loop integral
/// Z = -(sin a / 2) * integral_0^{2pi} dk / (cos^2 a cos^2 k - 1),
/// evaluated with the midpoint rule. An even point count keeps every node
/// off k = 0, pi, 2pi.
inline WindingResult zak_phase_continuum(double theta, int step_dependency,
                                         int quadrature_points = kDefaultQuadraturePoints) {
  if (quadrature_points < 64 || quadrature_points % 2 != 0) {
    throw InvalidArgument("quadrature needs an even point count >= 64");
  }
  if (step_dependency < 1) throw InvalidArgument("step dependency T must be >= 1");
  const double a = bloch::half_angle(theta, step_dependency);
  const double ca = std::cos(a);
  WindingResult r{theta, step_dependency, std::nullopt};
  if (std::abs(ca) > 1.0 - kContinuumGapTolerance) return r;

  const double h = kTwoPi / static_cast<double>(quadrature_points);
  const double ca2 = ca * ca;
  double integral = 0.0;
  for (int j = 0; j < quadrature_points; ++j) {
    const double ck = std::cos((static_cast<double>(j) + 0.5) * h);
    integral += 1.0 / (ca2 * ck * ck - 1.0);
  }
  integral *= h;
  const double zak = -0.5 * std::sin(a) * integral;
  r.omega = zak / kPi;
  r.status = WindingStatus::Valid;
  return r;
}

inline WindingResult winding_number(double theta, int step_dependency, const Lattice& lattice) {
  return lattice.is_continuum()
             ? zak_phase_continuum(theta, step_dependency, lattice.quadrature_points)
             : winding_number_discrete(theta, step_dependency, *lattice.sites);
}

// omega is undefined inside the bracket; the transition lies strictly between.
struct Transition {
  double theta_lo = 0.0;
  double theta_hi = 0.0;
  double omega_lo = 0.0;
  double omega_hi = 0.0;
};

struct WindingScan {
  int step_dependency = 1;
  Lattice lattice;
  std::vector<Angle> theta_grid;
  std::vector<WindingResult> omegas;  // one per grid point, gap-closed ones included
  std::vector<Transition> transitions;
};

/// Uniform grid theta_j = 2 pi j / (samples - 1), kept as exact fractions of pi.
inline std::vector<Angle> uniform_theta_grid(int samples) {
  if (samples < 2) throw InvalidArgument("theta grid needs at least 2 samples");
  std::vector<Angle> grid;
  grid.reserve(static_cast<std::size_t>(samples));
  for (int j = 0; j < samples; ++j) grid.emplace_back(2 * j, samples - 1);
  return grid;
}

/// Phase transitions between adjacent valid samples: omega jumps by more
/// than 0.5 and changes sign. Near a Dirac angle the finite-N sum diverges
/// like 1/(N sin a), so large same-sign jumps there are not phase changes.
inline std::vector<Transition> find_transitions(const std::vector<WindingResult>& results) {
  std::vector<Transition> out;
  const WindingResult* prev = nullptr;
  for (const WindingResult& r : results) {
    if (!r.valid()) continue;
    if (prev != nullptr && std::abs(r.omega - prev->omega) > kTransitionJump &&
        std::signbit(r.omega) != std::signbit(prev->omega)) {
      out.push_back({prev->theta, r.theta, prev->omega, r.omega});
    }
    prev = &r;
  }
  return out;
}

inline WindingScan winding_scan(int step_dependency, const Lattice& lattice, int theta_samples,
                                int jobs = 1) {
  if (theta_samples < 16) throw InvalidArgument("winding scan needs at least 16 theta samples");
  WindingScan scan{step_dependency, lattice, uniform_theta_grid(theta_samples), {}, {}};
  scan.omegas.resize(scan.theta_grid.size());
  parallel_for(scan.theta_grid.size(), jobs, [&](std::size_t i) {
    scan.omegas[i] = winding_number(scan.theta_grid[i].value(), step_dependency, lattice);
  });
  scan.transitions = find_transitions(scan.omegas);
  return scan;
}

/// |omega_N - omega_continuum|.
inline double discrete_continuum_agreement(double theta, int step_dependency, int sites,
                                           int quadrature_points = kDefaultQuadraturePoints) {
  const WindingResult d = winding_number_discrete(theta, step_dependency, sites);
  const WindingResult c = zak_phase_continuum(theta, step_dependency, quadrature_points);
  if (!d.valid() || !c.valid()) {
    throw GapClosed("winding undefined at theta = " + std::to_string(theta));
  }
  return std::abs(d.omega - c.omega);
}

}  // namespace cqw::topology
