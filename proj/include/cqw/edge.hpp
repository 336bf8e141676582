#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <utility>

#include "cqw/angle.hpp"
#include "cqw/error.hpp"
#include "cqw/topology.hpp"
#include "cqw/walk.hpp"

namespace cqw::edge {

// Tail-window boundary probability over the uniform value 1/N that counts
// as an edge state.
inline constexpr double kEdgeContrastThreshold = 2.0;
inline constexpr int kDefaultPeriodicityHorizon = 100;
inline constexpr double kDefaultPeriodicityEpsilon = 1e-6;

/// Profile with theta_boundary at one site and theta_bulk elsewhere.
///
/// Both angles must carry valid winding numbers of opposite sign on the
/// N-cycle; `force` skips that check for control runs (e.g. equal angles).
inline CoinProfile make_boundary_profile(const CycleSpec& spec, int boundary_site,
                                         const Angle& theta_boundary, const Angle& theta_bulk,
                                         int step_dependency, bool force = false,
                                         CoinMode mode = CoinMode::FixedMultiplier) {
  if (boundary_site < 0 || boundary_site >= spec.sites()) {
    throw InvalidArgument("boundary site " + std::to_string(boundary_site) +
                          " outside the cycle");
  }
  if (!force) {
    const auto wb = topology::winding_number_discrete(theta_boundary.reduced().value(),
                                                      step_dependency, spec.sites());
    const auto wk = topology::winding_number_discrete(theta_bulk.reduced().value(),
                                                      step_dependency, spec.sites());
    const bool ok = wb.valid() && wk.valid() && std::signbit(wb.omega) != std::signbit(wk.omega);
    if (!ok) {
      throw NoBoundary("no topological boundary: omega(" + to_string(theta_boundary) +
                           ") = " + std::to_string(wb.omega) + ", omega(" +
                           to_string(theta_bulk) + ") = " + std::to_string(wk.omega),
                       wb.omega, wk.omega);
    }
  }
  std::vector<Angle> angles(static_cast<std::size_t>(spec.sites()), theta_bulk);
  angles[static_cast<std::size_t>(boundary_site)] = theta_boundary;
  return CoinProfile(std::move(angles), step_dependency, mode);
}

class EdgeExperiment {
 public:
  static EdgeExperiment make(const CycleSpec& spec, int step_dependency, int boundary_site,
                             const Angle& theta_boundary, const Angle& theta_bulk, int steps,
                             bool force = false, CoinMode mode = CoinMode::FixedMultiplier) {
    if (steps < 1) throw InvalidArgument("edge experiment needs at least one step");
    CoinProfile profile = make_boundary_profile(spec, boundary_site, theta_boundary, theta_bulk,
                                                step_dependency, force, mode);
    return EdgeExperiment(spec, step_dependency, boundary_site, theta_boundary, theta_bulk, steps,
                          WalkerState::balanced(spec, boundary_site), std::move(profile));
  }

  EdgeExperiment with_initial_state(WalkerState state) const {
    if (state.sites() != spec_.sites()) throw InvalidArgument("initial state on another cycle");
    EdgeExperiment out = *this;
    out.initial_state_ = std::move(state);
    return out;
  }

  const CycleSpec& spec() const noexcept { return spec_; }
  int step_dependency() const noexcept { return step_dependency_; }
  int boundary_site() const noexcept { return boundary_site_; }
  const Angle& theta_boundary() const noexcept { return theta_boundary_; }
  const Angle& theta_bulk() const noexcept { return theta_bulk_; }
  int steps() const noexcept { return steps_; }
  const WalkerState& initial_state() const noexcept { return initial_state_; }
  const CoinProfile& profile() const noexcept { return profile_; }

 private:
  EdgeExperiment(CycleSpec spec, int step_dependency, int boundary_site, Angle theta_boundary,
                 Angle theta_bulk, int steps, WalkerState initial, CoinProfile profile)
      : spec_(spec),
        step_dependency_(step_dependency),
        boundary_site_(boundary_site),
        theta_boundary_(theta_boundary),
        theta_bulk_(theta_bulk),
        steps_(steps),
        initial_state_(std::move(initial)),
        profile_(std::move(profile)) {}

  CycleSpec spec_;
  int step_dependency_;
  int boundary_site_;
  Angle theta_boundary_;
  Angle theta_bulk_;
  int steps_;
  WalkerState initial_state_;
  CoinProfile profile_;
};

/// Evolves `steps` steps; row t of the result is P(., t), t = 0..steps.
/// profile_at(t) supplies the coin profile used on step t.
template <typename ProfileAt>
Eigen::MatrixXd evolve_heatmap(const CycleSpec& spec, WalkerState state, int steps,
                               ProfileAt&& profile_at) {
  Eigen::MatrixXd heat(steps + 1, spec.sites());
  heat.row(0) = position_probabilities(state).transpose();
  for (int t = 1; t <= steps; ++t) {
    state = step(state, profile_at(t), spec, t);
    heat.row(t) = position_probabilities(state).transpose();
  }
  return heat;
}

// First step of the late-time window: the last floor(J/4) steps (at least one).
inline int default_tail_start(int steps) { return steps - std::max(1, steps / 4) + 1; }

inline double window_mean(const Eigen::MatrixXd& heatmap, int site, int first, int last) {
  double sum = 0.0;
  for (int t = first; t <= last; ++t) sum += heatmap(t, site);
  return sum / static_cast<double>(last - first + 1);
}

struct EdgeReport {
  Eigen::MatrixXd heatmap;  // (J+1) x N
  int boundary_site = 0;
  double boundary_avg = 0.0;  // mean P(boundary, t), t in [1, J]
  double tail_avg = 0.0;      // same over the tail window
  double uniform_baseline = 0.0;

  int steps() const noexcept { return static_cast<int>(heatmap.rows()) - 1; }
  int sites() const noexcept { return static_cast<int>(heatmap.cols()); }
  double contrast() const { return tail_avg / uniform_baseline; }
  bool edge_state() const { return contrast() > kEdgeContrastThreshold; }
};

inline EdgeReport make_report(Eigen::MatrixXd heatmap, int boundary_site) {
  EdgeReport r;
  const int steps = static_cast<int>(heatmap.rows()) - 1;
  if (steps < 1) throw InvalidArgument("heatmap needs at least one evolved step");
  r.boundary_site = boundary_site;
  r.boundary_avg = window_mean(heatmap, boundary_site, 1, steps);
  r.tail_avg = window_mean(heatmap, boundary_site, default_tail_start(steps), steps);
  r.uniform_baseline = 1.0 / static_cast<double>(heatmap.cols());
  r.heatmap = std::move(heatmap);
  return r;
}

inline EdgeReport run_edge_experiment(const EdgeExperiment& exp) {
  const CoinProfile& profile = exp.profile();
  auto heat = evolve_heatmap(exp.spec(), exp.initial_state(), exp.steps(),
                             [&](int) -> const CoinProfile& { return profile; });
  return make_report(std::move(heat), exp.boundary_site());
}

struct EdgeMetric {
  double boundary_avg = 0.0;
  double tail_avg = 0.0;
  double contrast = 0.0;

  bool edge_state(double threshold = kEdgeContrastThreshold) const {
    return contrast > threshold;
  }
};

/// Metrics with the tail window starting at `window_start`.
inline EdgeMetric edge_metric(const EdgeReport& report, int window_start) {
  if (window_start < 0 || window_start > report.steps()) {
    throw InvalidArgument("metric window outside [0, J]");
  }
  const double tail =
      window_mean(report.heatmap, report.boundary_site, window_start, report.steps());
  return {report.boundary_avg, tail, tail / report.uniform_baseline};
}

inline EdgeMetric edge_metric(const EdgeReport& report) {
  return edge_metric(report, default_tail_start(report.steps()));
}

struct PeriodicityVerdict {
  enum class Kind { Periodic, Chaotic };

  Kind kind = Kind::Chaotic;
  int period = 0;  // 0 when chaotic
  int horizon = 0;
  double fidelity_threshold = 0.0;
  double max_fidelity = 0.0;  // best return fidelity seen up to the stopping step

  bool periodic() const noexcept { return kind == Kind::Periodic; }
};

/// Evolves |0> (x) (|0>+|1>)/sqrt(2) under a uniform coin and reports the
/// first step p <= horizon with return fidelity above 1 - epsilon.
inline PeriodicityVerdict classify_periodicity(const Angle& theta, int step_dependency,
                                               int sites,
                                               int horizon = kDefaultPeriodicityHorizon,
                                               double epsilon = kDefaultPeriodicityEpsilon) {
  if (horizon < 2) throw InvalidArgument("periodicity horizon must be >= 2");
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw InvalidArgument("epsilon must lie in (0, 1)");
  const CycleSpec spec(sites);
  const CoinProfile profile = CoinProfile::uniform(spec, theta, step_dependency);
  const WalkerState initial = WalkerState::balanced(spec, 0);

  PeriodicityVerdict v;
  v.horizon = horizon;
  v.fidelity_threshold = 1.0 - epsilon;
  WalkerState state = initial;
  for (int t = 1; t <= horizon; ++t) {
    state = step(state, profile, spec, t);
    const double f = return_fidelity(initial, state);
    v.max_fidelity = std::max(v.max_fidelity, f);
    if (f > v.fidelity_threshold) {
      v.kind = PeriodicityVerdict::Kind::Periodic;
      v.period = t;
      return v;
    }
  }
  return v;
}

}  // namespace cqw::edge
