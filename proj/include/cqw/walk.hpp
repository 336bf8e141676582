#pragma once

// Real-space cyclic quantum walk: a walker on an N-site ring with a two-level
// coin. Composite basis index is 2*x + c (position-major) everywhere,
// including every file the CLI writes.

#include <Eigen/Dense>

#include <cassert>
#include <cmath>
#include <complex>
#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "cqw/angle.hpp"
#include "cqw/error.hpp"

namespace cqw {

using Complex = std::complex<double>;
using Matrix2c = Eigen::Matrix2cd;
using MatrixXc = Eigen::MatrixXcd;
using VectorXc = Eigen::VectorXcd;

inline constexpr double kNormTolerance = 1e-12;

inline constexpr Eigen::Index basis_index(int site, int coin) noexcept {
  return 2 * static_cast<Eigen::Index>(site) + coin;
}

class CycleSpec {
 public:
  explicit CycleSpec(int sites) : sites_(sites) {
    if (sites < 3) {
      throw InvalidSpec("cycle needs at least 3 sites, got " + std::to_string(sites));
    }
  }

  int sites() const noexcept { return sites_; }
  Eigen::Index dimension() const noexcept { return 2 * static_cast<Eigen::Index>(sites_); }

  friend bool operator==(const CycleSpec&, const CycleSpec&) = default;

 private:
  int sites_;
};

/// How the coin angle scales with the step-dependency parameter.
/// FixedMultiplier rotates by T*theta/2 on every step; PerStepMultiplier
/// rotates by t*theta/2 on step t and ignores T.
enum class CoinMode { FixedMultiplier, PerStepMultiplier };

inline const char* to_string(CoinMode mode) {
  return mode == CoinMode::FixedMultiplier ? "fixed" : "per-step";
}

/// Per-site coin angles for one walk. Angles are stored wrapped into [0, 2pi).
class CoinProfile {
 public:
  CoinProfile(std::vector<Angle> angles, int step_dependency,
              CoinMode mode = CoinMode::FixedMultiplier)
      : step_dependency_(step_dependency), mode_(mode) {
    if (step_dependency < 1) {
      throw InvalidProfile("step dependency T must be >= 1, got " +
                           std::to_string(step_dependency));
    }
    angles_.reserve(angles.size());
    for (const Angle& a : angles) angles_.push_back(a.reduced());
  }

  static CoinProfile uniform(const CycleSpec& spec, const Angle& theta, int step_dependency,
                             CoinMode mode = CoinMode::FixedMultiplier) {
    return CoinProfile(std::vector<Angle>(static_cast<std::size_t>(spec.sites()), theta),
                       step_dependency, mode);
  }

  // Builds a profile from an explicit site -> angle table; every site of the
  // cycle must be present.
  static CoinProfile from_sites(const CycleSpec& spec, const std::map<int, Angle>& angles,
                                int step_dependency,
                                CoinMode mode = CoinMode::FixedMultiplier) {
    std::vector<Angle> table;
    table.reserve(static_cast<std::size_t>(spec.sites()));
    for (int x = 0; x < spec.sites(); ++x) {
      const auto it = angles.find(x);
      if (it == angles.end()) {
        throw InvalidProfile("no coin angle for site " + std::to_string(x));
      }
      table.push_back(it->second);
    }
    if (angles.size() != table.size()) {
      throw InvalidProfile("coin angle given for a site outside the cycle");
    }
    return CoinProfile(std::move(table), step_dependency, mode);
  }

  int sites() const noexcept { return static_cast<int>(angles_.size()); }
  int step_dependency() const noexcept { return step_dependency_; }
  CoinMode mode() const noexcept { return mode_; }
  const std::vector<Angle>& angles() const noexcept { return angles_; }
  const Angle& angle(int site) const { return angles_.at(static_cast<std::size_t>(site)); }
  double radians(int site) const { return angle(site).value(); }

  CoinProfile with_angle(int site, const Angle& theta) const {
    CoinProfile out = *this;
    out.angles_.at(static_cast<std::size_t>(site)) = theta.reduced();
    return out;
  }

  // Adds the same offset to every site.
  CoinProfile shifted(double offset) const {
    CoinProfile out = *this;
    for (Angle& a : out.angles_) a = a.plus(offset).reduced();
    return out;
  }

  friend bool operator==(const CoinProfile&, const CoinProfile&) = default;

 private:
  std::vector<Angle> angles_;
  int step_dependency_;
  CoinMode mode_;
};

/// Normalized amplitude vector over (site, coin).
class WalkerState {
 public:
  static WalkerState from_amplitudes(VectorXc amplitudes) {
    if (amplitudes.size() < 6 || amplitudes.size() % 2 != 0) {
      throw InvalidArgument("amplitude vector must have even length 2N with N >= 3");
    }
    const double n = amplitudes.squaredNorm();
    if (std::abs(n - 1.0) > kNormTolerance) {
      throw InvalidArgument("walker state is not normalized (norm^2 = " + std::to_string(n) +
                            ")");
    }
    return WalkerState(std::move(amplitudes));
  }

  static WalkerState basis(const CycleSpec& spec, int site, int coin) {
    return localized(spec, site, coin == 0 ? Complex(1.0) : Complex(0.0),
                     coin == 0 ? Complex(0.0) : Complex(1.0));
  }

  static WalkerState localized(const CycleSpec& spec, int site, Complex coin0, Complex coin1) {
    if (site < 0 || site >= spec.sites()) {
      throw InvalidArgument("site " + std::to_string(site) + " outside the cycle");
    }
    VectorXc amps = VectorXc::Zero(spec.dimension());
    amps(basis_index(site, 0)) = coin0;
    amps(basis_index(site, 1)) = coin1;
    return from_amplitudes(std::move(amps));
  }

  // |site> (x) (|0> + |1>)/sqrt(2)
  static WalkerState balanced(const CycleSpec& spec, int site) {
    const double h = 1.0 / std::sqrt(2.0);
    return localized(spec, site, h, h);
  }

  int sites() const noexcept { return static_cast<int>(amplitudes_.size() / 2); }
  const VectorXc& amplitudes() const noexcept { return amplitudes_; }
  Complex amplitude(int site, int coin) const { return amplitudes_(basis_index(site, coin)); }
  double norm_squared() const { return amplitudes_.squaredNorm(); }

 private:
  explicit WalkerState(VectorXc amplitudes) : amplitudes_(std::move(amplitudes)) {}

  friend WalkerState step(const WalkerState&, const CoinProfile&, const CycleSpec&, int);
  friend WalkerState apply(const MatrixXc&, const WalkerState&);

  VectorXc amplitudes_;
};

/// Shift operator: (x, q) -> ((x + (-1)^q) mod N, q).
inline MatrixXc build_shift(const CycleSpec& spec) {
  const int n = spec.sites();
  MatrixXc s = MatrixXc::Zero(spec.dimension(), spec.dimension());
  for (int x = 0; x < n; ++x) {
    s(basis_index((x + 1) % n, 0), basis_index(x, 0)) = 1.0;
    s(basis_index((x - 1 + n) % n, 1), basis_index(x, 1)) = 1.0;
  }
  return s;
}

/// Coin rotation exp(-i a sigma_y) = [[cos a, -sin a], [sin a, cos a]] with
/// a = T*theta/2 (FixedMultiplier) or a = step*theta/2 (PerStepMultiplier).
inline Matrix2c build_coin_matrix(double theta, int step_dependency, int step,
                                  CoinMode mode = CoinMode::FixedMultiplier) {
  if (step_dependency < 1) throw InvalidArgument("step dependency T must be >= 1");
  if (mode == CoinMode::PerStepMultiplier && step < 1) {
    throw InvalidArgument("per-step coin needs step >= 1");
  }
  const int multiplier = mode == CoinMode::FixedMultiplier ? step_dependency : step;
  const double half = 0.5 * static_cast<double>(multiplier) * theta;
  const double c = std::cos(half);
  const double s = std::sin(half);
  Matrix2c m;
  m << c, -s, s, c;
  return m;
}

inline Matrix2c site_coin(const CoinProfile& profile, int site, int step) {
  return build_coin_matrix(profile.radians(site), profile.step_dependency(), step,
                           profile.mode());
}

inline void require_matching(const CoinProfile& profile, const CycleSpec& spec) {
  if (profile.sites() != spec.sites()) {
    throw InvalidProfile("coin profile covers " + std::to_string(profile.sites()) +
                         " sites but the cycle has " + std::to_string(spec.sites()));
  }
}

/// Block-diagonal sum_x |x><x| (x) C(theta(x)).
inline MatrixXc build_global_coin(const CoinProfile& profile, const CycleSpec& spec,
                                  int step = 1) {
  require_matching(profile, spec);
  MatrixXc c = MatrixXc::Zero(spec.dimension(), spec.dimension());
  for (int x = 0; x < spec.sites(); ++x) {
    c.block<2, 2>(basis_index(x, 0), basis_index(x, 0)) = site_coin(profile, x, step);
  }
  return c;
}

struct EvolutionOperator {
  MatrixXc matrix;
  int sites = 0;
  int step_dependency = 1;
  CoinMode mode = CoinMode::FixedMultiplier;
  int step_index = 1;  // only meaningful for PerStepMultiplier
};

/// Dense one-step operator S * C for step `step`.
inline EvolutionOperator evolution_operator(const CoinProfile& profile, const CycleSpec& spec,
                                            int step = 1) {
  return EvolutionOperator{build_shift(spec) * build_global_coin(profile, spec, step),
                           spec.sites(), profile.step_dependency(), profile.mode(), step};
}

// Largest entrywise deviation of M^dagger M from the identity.
inline double unitarity_defect(const MatrixXc& m) {
  const MatrixXc d = m.adjoint() * m - MatrixXc::Identity(m.cols(), m.cols());
  return d.cwiseAbs().maxCoeff();
}

inline WalkerState apply(const MatrixXc& op, const WalkerState& state) {
  if (op.cols() != state.amplitudes().size() || op.rows() != op.cols()) {
    throw InvalidArgument("operator and state dimensions differ");
  }
  return WalkerState(op * state.amplitudes());
}

/// One walk step at time t >= 1: coin on every site, then the shift.
/// Applied directly from the block structure; no dense operator is formed.
inline WalkerState step(const WalkerState& state, const CoinProfile& profile,
                        const CycleSpec& spec, int t) {
  require_matching(profile, spec);
  if (state.sites() != spec.sites()) throw InvalidArgument("state and cycle sizes differ");
  if (t < 1) throw InvalidArgument("step index must be >= 1");

  const int n = spec.sites();
  const VectorXc& in = state.amplitudes();
  VectorXc out(in.size());
  for (int x = 0; x < n; ++x) {
    const Matrix2c coin = site_coin(profile, x, t);
    const Complex up = in(basis_index(x, 0));
    const Complex down = in(basis_index(x, 1));
    out(basis_index((x + 1) % n, 0)) = coin(0, 0) * up + coin(0, 1) * down;
    out(basis_index((x - 1 + n) % n, 1)) = coin(1, 0) * up + coin(1, 1) * down;
  }
  assert(std::abs(out.squaredNorm() - 1.0) < 1e-9);
  return WalkerState(std::move(out));
}

/// P(x) = |psi(x,0)|^2 + |psi(x,1)|^2.
inline Eigen::VectorXd position_probabilities(const WalkerState& state) {
  const int n = state.sites();
  Eigen::VectorXd p(n);
  for (int x = 0; x < n; ++x) {
    p(x) = std::norm(state.amplitude(x, 0)) + std::norm(state.amplitude(x, 1));
  }
  return p;
}

/// Position-space vector of the momentum state |k'>, entries e^{2 pi i k' x / N}/sqrt(N).
inline VectorXc fourier_mode(const CycleSpec& spec, int k_prime) {
  const int n = spec.sites();
  if (k_prime < 0 || k_prime >= n) {
    throw InvalidArgument("momentum index " + std::to_string(k_prime) + " outside [0, " +
                          std::to_string(n) + ")");
  }
  VectorXc v(n);
  const double norm = 1.0 / std::sqrt(static_cast<double>(n));
  for (int x = 0; x < n; ++x) {
    // Reduce k'x mod N before scaling so large products keep full precision.
    const double phase = kTwoPi * static_cast<double>((static_cast<long long>(k_prime) * x) % n) /
                         static_cast<double>(n);
    v(x) = std::polar(norm, phase);
  }
  return v;
}

// Columns are the momentum modes, so position = F * momentum.
inline MatrixXc fourier_matrix(const CycleSpec& spec) {
  MatrixXc f(spec.sites(), spec.sites());
  for (int k = 0; k < spec.sites(); ++k) f.col(k) = fourier_mode(spec, k);
  return f;
}

inline VectorXc to_momentum(const CycleSpec& spec, const VectorXc& position) {
  if (position.size() != spec.sites()) throw InvalidArgument("vector length differs from N");
  return fourier_matrix(spec).adjoint() * position;
}

inline VectorXc to_position(const CycleSpec& spec, const VectorXc& momentum) {
  if (momentum.size() != spec.sites()) throw InvalidArgument("vector length differs from N");
  return fourier_matrix(spec) * momentum;
}

/// |<initial|evolved>|^2.
inline double return_fidelity(const WalkerState& initial, const WalkerState& evolved) {
  if (initial.sites() != evolved.sites()) {
    throw InvalidArgument("fidelity between states on different cycles");
  }
  return std::norm(initial.amplitudes().dot(evolved.amplitudes()));
}

}  // namespace cqw
