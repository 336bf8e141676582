#pragma once

// Brute-force cross-checks of the closed forms in bloch.hpp. Spectra come
// from a generic dense eigensolver and derivatives from finite differences;
// the analytic formulas only appear as the comparison target.

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cqw/angle.hpp"
#include "cqw/bloch.hpp"
#include "cqw/walk.hpp"

namespace cqw::oracle {

inline constexpr std::uint64_t kDefaultSeed = 7;
inline constexpr double kDispersionTolerance = 1e-10;
inline constexpr double kSpectrumTolerance = 1e-9;
inline constexpr double kVelocityTolerance = 1e-6;
inline constexpr double kMassRelativeTolerance = 1e-4;
inline constexpr double kTheoremTolerance = 1e-9;
inline constexpr double kDiracSlopeTolerance = 1e-3;
inline constexpr double kSingularMargin = 1e-3;
inline constexpr std::size_t kMaxOffending = 20;

struct VerificationReport {
  std::string suite;
  std::string metric;  // what max_deviation measures
  std::size_t cases = 0;
  double max_deviation = 0.0;
  double tolerance = 0.0;
  bool passed = true;
  std::vector<std::string> offending;
};

namespace detail {

class Tally {
 public:
  Tally(std::string suite, std::string metric, double tolerance) {
    report_.suite = std::move(suite);
    report_.metric = std::move(metric);
    report_.tolerance = tolerance;
  }

  template <typename Describe>
  void record(double deviation, Describe&& describe) {
    ++report_.cases;
    if (!(deviation <= report_.tolerance)) {
      report_.passed = false;
      if (report_.offending.size() < kMaxOffending) {
        std::ostringstream os;
        os.precision(6);
        os << describe() << " deviation=" << deviation;
        report_.offending.push_back(os.str());
      }
    }
    if (std::isnan(deviation)) {
      report_.max_deviation = deviation;
    } else if (!std::isnan(report_.max_deviation)) {
      report_.max_deviation = std::max(report_.max_deviation, deviation);
    }
  }

  VerificationReport finish() { return std::move(report_); }

 private:
  VerificationReport report_;
};

class Uniform {
 public:
  explicit Uniform(std::uint64_t seed) : engine_(seed) {}
  double operator()(double lo, double hi) {
    return lo + (hi - lo) * static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }
  int integer(int lo, int hi) {
    return lo + static_cast<int>(engine_() % static_cast<std::uint64_t>(hi - lo + 1));
  }

 private:
  std::mt19937_64 engine_;
};

inline std::string point(double k, double theta, int t) {
  std::ostringstream os;
  os.precision(17);
  os << "k=" << k << " theta=" << theta << " T=" << t;
  return os.str();
}

// Eigenphases E with eigenvalue e^{-iE}, E in (-pi, pi].
template <typename Matrix>
std::vector<double> eigenphases(const Matrix& u) {
  Eigen::ComplexEigenSolver<Matrix> solver(u, false);
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(u.rows()));
  for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
    double e = -std::arg(solver.eigenvalues()(i));
    if (e <= -kPi) e += kTwoPi;
    out.push_back(e);
  }
  return out;
}

inline std::vector<double> sorted_magnitudes(std::vector<double> phases) {
  for (double& p : phases) p = std::abs(p);
  std::sort(phases.begin(), phases.end());
  return phases;
}

}  // namespace detail

/// Eigenphases of the 2x2 Bloch unitary against +-arccos(cos k cos(T theta/2)).
inline VerificationReport verify_dispersion_vs_eigenphase(
    int samples, int max_step_dependency, std::uint64_t seed = kDefaultSeed,
    double tolerance = kDispersionTolerance) {
  if (samples < 1 || max_step_dependency < 1) {
    throw InvalidArgument("dispersion check needs samples >= 1 and T_max >= 1");
  }
  detail::Tally tally("dispersion", "max |eigenphase| - E(k)", tolerance);
  detail::Uniform rng(seed);
  for (int i = 0; i < samples; ++i) {
    const double k = rng(0.0, kTwoPi);
    const double theta = rng(0.0, kTwoPi);
    const int t = rng.integer(1, max_step_dependency);
    const auto mags =
        detail::sorted_magnitudes(detail::eigenphases(bloch::bloch_unitary(k, theta, t)));
    const double e = bloch::dispersion(k, theta, t).upper;
    const double dev = std::max(std::abs(mags[0] - e), std::abs(mags[1] - e));
    tally.record(dev, [&] { return detail::point(k, theta, t); });
  }
  return tally.finish();
}

/// The 2N eigenphases of the real-space step operator against the union of
/// the Bloch bands sampled at k = 2 pi k'/N, paired by sorted magnitude.
inline VerificationReport verify_fullspectrum_blockdiag(int sites, double theta,
                                                        int step_dependency,
                                                        double tolerance = kSpectrumTolerance) {
  const CycleSpec spec(sites);
  const CoinProfile profile =
      CoinProfile::uniform(spec, Angle::from_radians(theta), step_dependency);
  const auto numeric =
      detail::sorted_magnitudes(detail::eigenphases(evolution_operator(profile, spec).matrix));

  std::vector<double> analytic;
  for (int kp = 0; kp < sites; ++kp) {
    const double k = kTwoPi * static_cast<double>(kp) / static_cast<double>(sites);
    const double e = bloch::dispersion(k, theta, step_dependency).upper;
    analytic.push_back(e);
    analytic.push_back(e);
  }
  std::sort(analytic.begin(), analytic.end());

  detail::Tally tally("spectrum", "max |sorted eigenphase magnitude - sorted band energy|",
                      tolerance);
  double dev = 0.0;
  for (std::size_t i = 0; i < analytic.size(); ++i) {
    dev = std::max(dev, std::abs(numeric[i] - analytic[i]));
  }
  tally.record(dev, [&] {
    return "N=" + std::to_string(sites) + " " + detail::point(0.0, theta, step_dependency);
  });
  return tally.finish();
}

/// Full-spectrum check over N in [n_min, n_max], T in [1, t_max] and
/// `angles` random theta per (N, T).
inline VerificationReport verify_fullspectrum_sweep(int n_min, int n_max, int t_max, int angles,
                                                    std::uint64_t seed = kDefaultSeed,
                                                    double tolerance = kSpectrumTolerance) {
  detail::Tally tally("spectrum", "max |sorted eigenphase magnitude - sorted band energy|",
                      tolerance);
  detail::Uniform rng(seed);
  for (int n = n_min; n <= n_max; ++n) {
    for (int t = 1; t <= t_max; ++t) {
      for (int a = 0; a < angles; ++a) {
        const double theta = rng(0.0, kTwoPi);
        const auto r = verify_fullspectrum_blockdiag(n, theta, t, tolerance);
        tally.record(r.max_deviation, [&] {
          return "N=" + std::to_string(n) + " " + detail::point(0.0, theta, t);
        });
      }
    }
  }
  return tally.finish();
}

inline bool derivative_admissible(double k, double theta, int step_dependency) {
  const double a = bloch::half_angle(theta, step_dependency);
  return bloch::sin_energy(k, theta, step_dependency) > kSingularMargin &&
         std::abs(std::cos(k)) > kSingularMargin && std::abs(std::cos(a)) > kSingularMargin &&
         std::abs(std::sin(a)) > kSingularMargin;
}

/// Group velocity against a central difference of E (h = 1e-5), and the
/// effective mass against 1 / (central difference of v). The deviation is
/// reported in units of each quantity's tolerance, so the suite passes at <= 1.
inline VerificationReport verify_derivatives(int samples, std::uint64_t seed = kDefaultSeed,
                                             double velocity_tolerance = kVelocityTolerance,
                                             double mass_tolerance = kMassRelativeTolerance,
                                             int max_step_dependency = 6) {
  constexpr double h = 1e-5;
  detail::Tally tally("derivatives",
                      "max(|v - dE/dk| / v_tol, |m - 1/(dv/dk)| / |m| / m_tol)", 1.0);
  detail::Uniform rng(seed);
  int accepted = 0;
  while (accepted < samples) {
    const double k = rng(0.0, kTwoPi);
    const double theta = rng(0.0, kTwoPi);
    const int t = rng.integer(1, max_step_dependency);
    if (!derivative_admissible(k, theta, t) || !derivative_admissible(k - h, theta, t) ||
        !derivative_admissible(k + h, theta, t)) {
      continue;
    }
    ++accepted;
    const double fd_v = (bloch::dispersion(k + h, theta, t).upper -
                         bloch::dispersion(k - h, theta, t).upper) /
                        (2.0 * h);
    const double v = bloch::group_velocity(k, theta, t);
    const double fd_dv =
        (bloch::group_velocity(k + h, theta, t) - bloch::group_velocity(k - h, theta, t)) /
        (2.0 * h);
    const auto m = bloch::effective_mass(k, theta, t);
    const double mass_dev =
        m ? std::abs(*m - 1.0 / fd_dv) / std::abs(*m) : std::numeric_limits<double>::infinity();
    const double dev =
        std::max(std::abs(v - fd_v) / velocity_tolerance, mass_dev / mass_tolerance);
    tally.record(dev, [&] { return detail::point(k, theta, t); });
  }
  return tally.finish();
}

/// One-sided slope |E(k0 +- 1e-4) - E(k0)| / 1e-4 at every gap closing with
/// T <= max_step_dependency; a Dirac cone has slope 1.
inline VerificationReport verify_dirac_slopes(int max_step_dependency,
                                              double tolerance = kDiracSlopeTolerance) {
  constexpr double dk = 1e-4;
  detail::Tally tally("dirac-slopes", "max ||dE/dk| - 1|", tolerance);
  for (int t = 1; t <= max_step_dependency; ++t) {
    for (const auto& p : bloch::dirac_points(t, bloch::ClosingSet::All)) {
      const double theta = p.theta.value();
      const double probe = p.k + dk <= kTwoPi ? p.k + dk : p.k - dk;
      const double slope = std::abs(bloch::dispersion(probe, theta, t).upper -
                                    bloch::dispersion(p.k, theta, t).upper) /
                           dk;
      tally.record(std::abs(slope - 1.0), [&] { return detail::point(p.k, theta, t); });
    }
  }
  return tally.finish();
}

/// Exhaustive small-space check of the three band theorems:
///  (a) every enumerated gap closing has |cos k cos(T theta/2)| = 1 and a
///      numerically degenerate Bloch spectrum;
///  (b) flat-band angles give k-independent bands and random other angles do not;
///  (c) the theta-independent momenta on each N-cycle are exactly those
///      returned by rotational_flat_momenta (none unless 4 | N).
/// Boolean failures contribute a deviation of 1.
inline VerificationReport fuzz_theorem_conditions(int max_step_dependency, int max_sites,
                                                  std::uint64_t seed = kDefaultSeed,
                                                  double tolerance = kTheoremTolerance) {
  detail::Tally tally("theorems", "max violation (closure residual, band variation, or 1)",
                      tolerance);
  detail::Uniform rng(seed);
  constexpr int k_grid = 257;
  const auto band_variation = [&](double theta, int t) {
    double lo = kPi;
    double hi = 0.0;
    for (int j = 0; j < k_grid; ++j) {
      const double k = kTwoPi * static_cast<double>(j) / (k_grid - 1);
      for (double e :
           detail::sorted_magnitudes(detail::eigenphases(bloch::bloch_unitary(k, theta, t)))) {
        lo = std::min(lo, e);
        hi = std::max(hi, e);
      }
    }
    return hi - lo;
  };

  for (int t = 1; t <= max_step_dependency; ++t) {
    // (a)
    for (const auto& p : bloch::dirac_points(t, bloch::ClosingSet::All)) {
      const double theta = p.theta.value();
      const double residual =
          std::abs(1.0 - std::abs(std::cos(p.k) * std::cos(bloch::half_angle(theta, t))));
      Eigen::ComplexEigenSolver<Matrix2c> solver(bloch::bloch_unitary(p.k, theta, t), false);
      const double split = std::abs(solver.eigenvalues()(0) - solver.eigenvalues()(1));
      tally.record(std::max(residual, split),
                   [&] { return "(a) " + detail::point(p.k, theta, t); });
    }
    // (b)
    const auto flats = bloch::flat_band_angles(t);
    for (const Angle& f : flats) {
      tally.record(band_variation(f.value(), t),
                   [&] { return "(b) flat " + detail::point(0.0, f.value(), t); });
    }
    for (int i = 0; i < 20; ++i) {
      const double theta = rng(0.0, kTwoPi);
      const bool near_flat = std::any_of(flats.begin(), flats.end(), [&](const Angle& f) {
        return std::abs(f.value() - theta) < kSingularMargin;
      });
      if (near_flat) continue;
      tally.record(band_variation(theta, t) > 1e-6 ? 0.0 : 1.0,
                   [&] { return "(b) non-flat " + detail::point(0.0, theta, t); });
    }
  }

  // (c)
  for (int n = 3; n <= max_sites; ++n) {
    std::vector<int> zero_cos;
    for (int kp = 0; kp < n; ++kp) {
      if (std::abs(std::cos(kTwoPi * kp / n)) < 1e-9) zero_cos.push_back(kp);
    }
    const auto expected = bloch::rotational_flat_momenta(n);
    tally.record(zero_cos == expected ? 0.0 : 1.0,
                 [&] { return "(c) momenta N=" + std::to_string(n); });
    for (int kp : expected) {
      const double k = kTwoPi * kp / n;
      double lo = kPi;
      double hi = 0.0;
      for (int t = 1; t <= max_step_dependency; ++t) {
        for (int j = 0; j < 50; ++j) {
          const double theta = kTwoPi * j / 50.0;
          for (double e : detail::sorted_magnitudes(
                   detail::eigenphases(bloch::bloch_unitary(k, theta, t)))) {
            lo = std::min(lo, e);
            hi = std::max(hi, e);
          }
        }
      }
      tally.record(hi - lo, [&] {
        return "(c) rotational flat N=" + std::to_string(n) + " k'=" + std::to_string(kp);
      });
    }
  }
  return tally.finish();
}

}  // namespace cqw::oracle
