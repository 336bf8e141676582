#pragma once

// Coin disorder on prepared edge-state profiles.
//
// Random numbers are part of the output contract. Realization r uses
//   seed_r = SplitMix64 output at stream position r + 1 from master_seed,
// feeds it to std::mt19937_64, and turns each 64-bit draw into an offset
//   delta = -pi + 2 pi * (draw >> 11) * 2^-53   (uniform on [-pi, pi)).
// Static disorder draws one delta per site in ascending site order; dynamic
// disorder draws one delta per step for t = 1..J.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "cqw/angle.hpp"
#include "cqw/edge.hpp"
#include "cqw/error.hpp"
#include "cqw/parallel.hpp"
#include "cqw/topology.hpp"
#include "cqw/walk.hpp"

namespace cqw::disorder {

inline constexpr std::uint64_t kDefaultMasterSeed = 20240917;
inline constexpr int kDefaultRealizations = 500;
// Disordered / clean tail probability at or above this counts as robust.
inline constexpr double kRobustRetention = 0.5;

enum class DisorderKind { None, Static, Dynamic };

inline const char* to_string(DisorderKind k) {
  switch (k) {
    case DisorderKind::Static:
      return "static";
    case DisorderKind::Dynamic:
      return "dynamic";
    case DisorderKind::None:
      break;
  }
  return "none";
}

inline DisorderKind parse_kind(const std::string& text) {
  if (text == "static") return DisorderKind::Static;
  if (text == "dynamic") return DisorderKind::Dynamic;
  if (text == "none") return DisorderKind::None;
  throw InvalidArgument("unknown disorder kind '" + text + "'");
}

struct DisorderConfig {
  DisorderKind kind = DisorderKind::None;
  double strength = 0.0;
  int realizations = kDefaultRealizations;
  std::uint64_t master_seed = kDefaultMasterSeed;

  void validate() const {
    if (!(strength >= 0.0) || !std::isfinite(strength)) {
      throw InvalidArgument("disorder strength must be a finite value >= 0");
    }
    if (realizations < 1) throw InvalidArgument("need at least one disorder realization");
  }
};

inline std::uint64_t realization_seed(std::uint64_t master_seed, std::uint64_t index) {
  std::uint64_t z = master_seed + (index + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Uniform offsets on [-pi, pi).
class OffsetSampler {
 public:
  explicit OffsetSampler(std::uint64_t seed) : engine_(seed) {}

  double operator()() {
    const double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    return -kPi + kTwoPi * u;
  }

 private:
  std::mt19937_64 engine_;
};

/// theta(x) -> theta(x) + strength * delta(x), fixed for the whole evolution.
inline CoinProfile static_realization(const CoinProfile& profile, double strength,
                                      std::uint64_t seed) {
  if (!(strength >= 0.0)) throw InvalidArgument("static disorder strength must be >= 0");
  OffsetSampler draw(seed);
  std::vector<Angle> angles;
  angles.reserve(profile.angles().size());
  for (const Angle& a : profile.angles()) angles.push_back(a.plus(strength * draw()));
  return CoinProfile(std::move(angles), profile.step_dependency(), profile.mode());
}

/// Element t-1 is the shift strength * delta(t) added to every site on step t.
inline std::vector<double> dynamic_offsets(double strength, int steps, std::uint64_t seed) {
  if (!(strength >= 0.0)) throw InvalidArgument("dynamic disorder strength must be >= 0");
  if (steps < 1) throw InvalidArgument("need at least one step");
  OffsetSampler draw(seed);
  std::vector<double> out(static_cast<std::size_t>(steps));
  for (double& v : out) v = strength * draw();
  return out;
}

inline Eigen::MatrixXd realization_heatmap(const edge::EdgeExperiment& exp,
                                           const DisorderConfig& config, std::uint64_t index) {
  const std::uint64_t seed = realization_seed(config.master_seed, index);
  const CoinProfile& base = exp.profile();
  switch (config.kind) {
    case DisorderKind::Static: {
      const CoinProfile disordered = static_realization(base, config.strength, seed);
      return edge::evolve_heatmap(exp.spec(), exp.initial_state(), exp.steps(),
                                  [&](int) -> const CoinProfile& { return disordered; });
    }
    case DisorderKind::Dynamic: {
      const std::vector<double> offsets = dynamic_offsets(config.strength, exp.steps(), seed);
      return edge::evolve_heatmap(exp.spec(), exp.initial_state(), exp.steps(), [&](int t) {
        return base.shifted(offsets[static_cast<std::size_t>(t - 1)]);
      });
    }
    case DisorderKind::None:
      break;
  }
  return edge::evolve_heatmap(exp.spec(), exp.initial_state(), exp.steps(),
                              [&](int) -> const CoinProfile& { return base; });
}

struct EnsembleResult {
  DisorderConfig config;
  edge::EdgeReport averaged;         // metrics of the realization-averaged heatmap
  edge::EdgeReport clean_reference;  // same experiment without disorder
  double boundary_retention = 0.0;   // averaged.tail_avg / clean_reference.tail_avg

  const Eigen::MatrixXd& averaged_heatmap() const noexcept { return averaged.heatmap; }
  bool robust() const noexcept { return boundary_retention >= kRobustRetention; }
};

/// Runs config.realizations disordered evolutions and averages P(x, t).
///
/// Realizations are independent and may run on `jobs` threads, but they are
/// folded into a running mean strictly in ascending index order, so the
/// result is bit-identical for every thread count. The running mean also
/// reproduces the clean heatmap exactly when all realizations coincide.
inline EnsembleResult run_ensemble(const edge::EdgeExperiment& exp, const DisorderConfig& config,
                                   int jobs = 1) {
  config.validate();
  EnsembleResult out;
  out.config = config;
  out.clean_reference = edge::run_edge_experiment(exp);

  Eigen::MatrixXd mean = Eigen::MatrixXd::Zero(exp.steps() + 1, exp.spec().sites());
  const std::size_t total = static_cast<std::size_t>(config.realizations);
  const std::size_t chunk = static_cast<std::size_t>(std::max(jobs, 1)) * 8;
  std::vector<Eigen::MatrixXd> batch;
  for (std::size_t first = 0; first < total; first += chunk) {
    const std::size_t count = std::min(chunk, total - first);
    batch.assign(count, Eigen::MatrixXd());
    parallel_for(count, jobs, [&](std::size_t i) {
      batch[i] = realization_heatmap(exp, config, first + i);
    });
    for (std::size_t i = 0; i < count; ++i) {
      const double r = static_cast<double>(first + i + 1);
      mean += (batch[i] - mean) / r;
    }
  }
  out.averaged = edge::make_report(std::move(mean), exp.boundary_site());
  out.boundary_retention = out.averaged.tail_avg / out.clean_reference.tail_avg;
  return out;
}

/// A different grid angle 2 pi j / search_grid whose discrete winding has the
/// same sign and rounds to the same integer as theta's. Nearest candidates
/// come first; ties go to the larger angle.
inline Angle phase_preserving_perturbation(const Angle& theta, int step_dependency, int sites,
                                           int search_grid = 10) {
  if (search_grid < 2) throw InvalidArgument("search grid needs at least 2 points");
  const double origin = theta.reduced().value();
  const auto base = topology::winding_number_discrete(origin, step_dependency, sites);
  if (!base.valid()) throw GapClosed("winding undefined at " + to_string(theta));

  std::vector<Angle> candidates;
  for (int j = 0; j < search_grid; ++j) candidates.emplace_back(2 * j, search_grid);
  // Distances quantized to 1e-9 rad so symmetric neighbours tie exactly.
  const auto distance = [&](const Angle& a) {
    return std::llround(std::abs(a.value() - origin) * 1e9);
  };
  std::stable_sort(candidates.begin(), candidates.end(), [&](const Angle& a, const Angle& b) {
    const auto da = distance(a);
    const auto db = distance(b);
    if (da != db) return da < db;
    return a.value() > b.value();
  });
  for (const Angle& c : candidates) {
    if (std::abs(c.value() - origin) < 1e-12) continue;
    const auto w = topology::winding_number_discrete(c.value(), step_dependency, sites);
    if (w.valid() && std::signbit(w.omega) == std::signbit(base.omega) &&
        std::lround(w.omega) == std::lround(base.omega)) {
      return c;
    }
  }
  throw NotFound("no phase-preserving angle on a " + std::to_string(search_grid) +
                 "-point grid for " + to_string(theta));
}

}  // namespace cqw::disorder
