// cqw: command-line front end for cyclic quantum walk simulations.
//
//   cqw dispersion | winding | edge | disorder | periodicity | verify [options]
//
// Every subcommand writes PREFIX.csv and/or PREFIX.json plus
// PREFIX.manifest.json, where PREFIX is --out (default: the subcommand name).
// Exit codes: 0 ok, 1 verification failure, 2 invalid arguments, 3 I/O error.

#include <CLI11.hpp>

#include <algorithm>
#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "cqw/cqw.hpp"

namespace {

using cqw::Angle;
using cqw::io::Json;

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitInvalid = 2;
constexpr int kExitIo = 3;

struct Common {
  int sites = 8;
  int step_dependency = 2;
  int jobs = 1;
  std::string out;
  bool per_step = false;
};

struct EdgeArgs {
  int boundary_site = 0;
  std::string boundary_angle = "7pi/5";
  std::string bulk_angle = "pi/3";
  int steps = 100;
  bool force = false;
  bool phase_preserving = false;
};

Angle parse_cli_angle(const std::string& text, const char* flag) {
  Angle a = cqw::parse_angle(text);
  if (!a.exact() && a.numerator() == 0) {
    std::cerr << "warning: " << flag << " '" << text
              << "' is a decimal; periodicity detection may be affected\n";
  }
  return a;
}

cqw::CoinMode mode_of(const Common& c) {
  return c.per_step ? cqw::CoinMode::PerStepMultiplier : cqw::CoinMode::FixedMultiplier;
}

void add_common(CLI::App* cmd, Common& c, bool with_mode) {
  cmd->add_option("--sites,-N", c.sites, "Number of cycle sites N (>= 3)")->capture_default_str();
  cmd->add_option("--step-dep,-T", c.step_dependency, "Step dependency T (>= 1)")
      ->capture_default_str();
  cmd->add_option("--jobs,-j", c.jobs, "Worker threads (does not change output)")
      ->capture_default_str();
  cmd->add_option("--out,-o", c.out, "Output prefix (default: subcommand name)");
  if (with_mode) {
    cmd->add_flag("--per-step", c.per_step, "Use the angle t*theta at step t instead of T*theta");
  }
}

void add_edge_options(CLI::App* cmd, EdgeArgs& e) {
  cmd->add_option("--boundary-site", e.boundary_site, "Site carrying the boundary coin")
      ->capture_default_str();
  cmd->add_option("--boundary-angle", e.boundary_angle, "Boundary coin angle, e.g. 7pi/5")
      ->capture_default_str();
  cmd->add_option("--bulk-angle", e.bulk_angle, "Bulk coin angle")->capture_default_str();
  cmd->add_option("--steps,-J", e.steps, "Number of walk steps J")->capture_default_str();
  cmd->add_flag("--force", e.force, "Skip the opposite-winding boundary check");
  cmd->add_flag("--phase-preserving", e.phase_preserving,
                "Replace the boundary angle by its nearest phase-preserving grid angle");
}

std::string prefix_or(const Common& c, const char* fallback) {
  return c.out.empty() ? std::string(fallback) : c.out;
}

Json common_parameters(const Common& c) {
  Json p;
  p["sites"] = c.sites;
  p["step_dependency"] = c.step_dependency;
  p["coin_mode"] = cqw::to_string(mode_of(c));
  return p;
}

std::string heatmap_csv(const Eigen::MatrixXd& heat) {
  cqw::io::CsvWriter csv({"t", "x", "P"});
  for (Eigen::Index t = 0; t < heat.rows(); ++t) {
    for (Eigen::Index x = 0; x < heat.cols(); ++x) {
      csv.cell(static_cast<int>(t)).cell(static_cast<int>(x)).cell(heat(t, x));
      csv.end_row();
    }
  }
  return csv.str();
}

const char* verdict(bool present) {
  return present ? "edge-state-present" : "edge-state-absent";
}

// ---------------------------------------------------------------- dispersion

struct DispersionArgs {
  std::optional<std::string> coin_angle;
  int samples = 64;
};

int cmd_dispersion(const Common& c, const DispersionArgs& a) {
  const cqw::CycleSpec spec(c.sites);
  if (c.step_dependency < 1) throw cqw::InvalidArgument("step dependency T must be >= 1");
  std::vector<Angle> thetas;
  if (a.coin_angle) {
    thetas.push_back(parse_cli_angle(*a.coin_angle, "--coin-angle"));
  } else {
    if (a.samples < 2) throw cqw::InvalidArgument("--samples must be >= 2");
    thetas = cqw::topology::uniform_theta_grid(a.samples);
  }
  const auto flat = cqw::bloch::rotational_flat_momenta(c.sites);

  std::vector<std::string> blocks(thetas.size());
  cqw::parallel_for(thetas.size(), c.jobs, [&](std::size_t i) {
    std::string text;
    const double theta = thetas[i].reduced().value();
    for (int kp = 0; kp < c.sites; ++kp) {
      const auto m = cqw::bloch::MomentumSample::on_cycle(kp, c.sites);
      const auto p = cqw::bloch::spectral_point(m.k, theta, c.step_dependency);
      const auto num = [](const std::optional<double>& v) {
        return v ? cqw::io::format_double(*v) : std::string("undefined");
      };
      const bool is_flat = std::find(flat.begin(), flat.end(), kp) != flat.end();
      text += cqw::io::format_double(theta) + ',' + std::to_string(kp) + ',' +
              cqw::io::format_double(m.k) + ',' + cqw::io::format_double(p.e_plus) + ',' +
              cqw::io::format_double(p.e_minus) + ',' + num(p.v_gr) + ',' + num(p.m_eff) + ',' +
              (is_flat ? "1" : "0") + '\n';
    }
    blocks[i] = std::move(text);
  });
  std::string csv = "theta,k_prime,k,E_plus,E_minus,v_gr,m_eff,is_rotational_flat\n";
  for (const auto& b : blocks) csv += b;

  Json params = common_parameters(c);
  if (a.coin_angle) {
    params["coin_angle"] = cqw::to_string(thetas.front());
  } else {
    params["theta_samples"] = a.samples;
  }
  cqw::io::RunOutput out(prefix_or(c, "dispersion"), "dispersion", params);
  const auto path = out.add(".csv", std::move(csv));
  out.write();
  std::cout << "wrote " << path << " (" << thetas.size() * static_cast<std::size_t>(c.sites)
            << " rows)\n";
  return kExitOk;
}

// ------------------------------------------------------------------- winding

struct WindingArgs {
  bool continuum = false;
  int samples = 201;
  int quadrature = cqw::topology::kDefaultQuadraturePoints;
  std::optional<std::string> coin_angle;
};

int cmd_winding(const Common& c, const WindingArgs& a) {
  if (c.step_dependency < 1) throw cqw::InvalidArgument("step dependency T must be >= 1");
  const auto lattice = a.continuum ? cqw::topology::Lattice::continuum(a.quadrature)
                                   : cqw::topology::Lattice::cycle(c.sites);
  Json params;
  if (a.continuum) {
    params["lattice"] = "continuum";
    params["quadrature_points"] = a.quadrature;
  } else {
    params["lattice"] = "cycle";
    params["sites"] = c.sites;
  }
  params["step_dependency"] = c.step_dependency;

  cqw::io::CsvWriter rows({"theta", "omega", "status"});
  std::string sidecar;
  if (a.coin_angle) {
    const Angle theta = parse_cli_angle(*a.coin_angle, "--coin-angle");
    params["coin_angle"] = cqw::to_string(theta);
    const auto r =
        cqw::topology::winding_number(theta.reduced().value(), c.step_dependency, lattice);
    rows.cell(r.theta).cell(r.omega).cell(cqw::topology::to_string(r.status));
    rows.end_row();
    std::cout << "omega(" << cqw::to_string(theta) << ") = " << cqw::io::format_double(r.omega)
              << " [" << cqw::topology::to_string(r.status) << "]\n";
  } else {
    params["theta_samples"] = a.samples;
    const auto scan = cqw::topology::winding_scan(c.step_dependency, lattice, a.samples, c.jobs);
    for (const auto& r : scan.omegas) {
      rows.cell(r.theta).cell(r.omega).cell(cqw::topology::to_string(r.status));
      rows.end_row();
    }
    cqw::io::CsvWriter tr({"theta_lo", "theta_hi", "omega_lo", "omega_hi"});
    for (const auto& t : scan.transitions) {
      tr.cell(t.theta_lo).cell(t.theta_hi).cell(t.omega_lo).cell(t.omega_hi);
      tr.end_row();
    }
    sidecar = tr.str();
    std::cout << scan.transitions.size() << " phase transition(s)\n";
  }

  cqw::io::RunOutput out(prefix_or(c, "winding"), "winding", params);
  out.add(".csv", rows.str());
  if (!a.coin_angle) out.add(".transitions.csv", std::move(sidecar));
  out.write();
  return kExitOk;
}

// ---------------------------------------------------------------------- edge

struct PreparedEdge {
  cqw::edge::EdgeExperiment experiment;
  Json parameters;
  double omega_boundary;
  double omega_bulk;
};

PreparedEdge prepare_edge(const Common& c, const EdgeArgs& e) {
  const cqw::CycleSpec spec(c.sites);
  Angle boundary = parse_cli_angle(e.boundary_angle, "--boundary-angle");
  const Angle bulk = parse_cli_angle(e.bulk_angle, "--bulk-angle");
  if (e.phase_preserving) {
    const Angle swapped =
        cqw::disorder::phase_preserving_perturbation(boundary, c.step_dependency, c.sites);
    std::cout << "phase-preserving boundary: " << cqw::to_string(boundary) << " -> "
              << cqw::to_string(swapped) << '\n';
    boundary = swapped;
  }
  auto exp = cqw::edge::EdgeExperiment::make(spec, c.step_dependency, e.boundary_site, boundary,
                                             bulk, e.steps, e.force, mode_of(c));
  Json p = common_parameters(c);
  p["boundary_site"] = e.boundary_site;
  p["boundary_angle"] = cqw::to_string(boundary);
  p["bulk_angle"] = cqw::to_string(bulk);
  p["steps"] = e.steps;
  p["force"] = e.force;
  const auto wb = cqw::topology::winding_number_discrete(boundary.reduced().value(),
                                                         c.step_dependency, c.sites);
  const auto wk =
      cqw::topology::winding_number_discrete(bulk.reduced().value(), c.step_dependency, c.sites);
  return {std::move(exp), std::move(p), wb.omega, wk.omega};
}

Json omega_json(double v) { return std::isnan(v) ? Json(nullptr) : Json(v); }

int cmd_edge(const Common& c, const EdgeArgs& e) {
  const PreparedEdge prep = prepare_edge(c, e);
  const auto report = cqw::edge::run_edge_experiment(prep.experiment);
  const int first = cqw::edge::default_tail_start(report.steps());

  Json m;
  m["boundary_site"] = report.boundary_site;
  m["omega_boundary"] = omega_json(prep.omega_boundary);
  m["omega_bulk"] = omega_json(prep.omega_bulk);
  m["boundary_avg"] = report.boundary_avg;
  m["tail_avg"] = report.tail_avg;
  m["tail_window"] = Json::array({first, report.steps()});
  m["uniform_baseline"] = report.uniform_baseline;
  m["contrast"] = report.contrast();
  m["threshold"] = cqw::edge::kEdgeContrastThreshold;
  m["verdict"] = verdict(report.edge_state());

  cqw::io::RunOutput out(prefix_or(c, "edge"), "edge", prep.parameters);
  out.add(".csv", heatmap_csv(report.heatmap));
  out.add(".json", cqw::io::dump(m));
  out.write();
  std::cout << "contrast " << cqw::io::format_double(report.contrast()) << " -> "
            << verdict(report.edge_state()) << '\n';
  return kExitOk;
}

// ------------------------------------------------------------------ disorder

struct DisorderArgs {
  std::string kind = "static";
  double strength = 0.1;
  int realizations = cqw::disorder::kDefaultRealizations;
  std::uint64_t seed = cqw::disorder::kDefaultMasterSeed;
};

int cmd_disorder(const Common& c, const EdgeArgs& e, const DisorderArgs& d) {
  cqw::disorder::DisorderConfig config;
  config.kind = cqw::disorder::parse_kind(d.kind);
  config.strength = d.strength;
  config.realizations = d.realizations;
  config.master_seed = d.seed;
  config.validate();
  const PreparedEdge prep = prepare_edge(c, e);
  const auto result = cqw::disorder::run_ensemble(prep.experiment, config, c.jobs);

  Json params = prep.parameters;
  params["kind"] = cqw::disorder::to_string(config.kind);
  params["strength"] = config.strength;
  params["realizations"] = config.realizations;

  Json m;
  m["kind"] = cqw::disorder::to_string(config.kind);
  m["strength"] = config.strength;
  m["realizations"] = config.realizations;
  m["master_seed"] = config.master_seed;
  m["clean_tail_avg"] = result.clean_reference.tail_avg;
  m["disordered_tail_avg"] = result.averaged.tail_avg;
  m["boundary_retention"] = result.boundary_retention;
  m["robust"] = result.robust();
  m["contrast"] = result.averaged.contrast();
  m["verdict"] = verdict(result.averaged.edge_state());

  cqw::io::RunOutput out(prefix_or(c, "disorder"), "disorder", params);
  out.set_seed(config.master_seed);
  out.add(".csv", heatmap_csv(result.averaged_heatmap()));
  out.add(".json", cqw::io::dump(m));
  out.write();
  std::cout << "retention " << cqw::io::format_double(result.boundary_retention)
            << (result.robust() ? " (robust)" : " (not robust)") << '\n';
  return kExitOk;
}

// --------------------------------------------------------------- periodicity

struct PeriodicityArgs {
  std::string coin_angle = "pi/7";
  int horizon = cqw::edge::kDefaultPeriodicityHorizon;
  double epsilon = cqw::edge::kDefaultPeriodicityEpsilon;
};

int cmd_periodicity(const Common& c, const PeriodicityArgs& a) {
  const Angle theta = parse_cli_angle(a.coin_angle, "--coin-angle");
  const auto v =
      cqw::edge::classify_periodicity(theta, c.step_dependency, c.sites, a.horizon, a.epsilon);
  Json params;
  params["sites"] = c.sites;
  params["step_dependency"] = c.step_dependency;
  params["coin_angle"] = cqw::to_string(theta);
  params["horizon"] = a.horizon;
  params["epsilon"] = a.epsilon;

  Json m;
  m["verdict"] = v.periodic() ? "periodic" : "chaotic";
  m["period"] = v.periodic() ? Json(v.period) : Json(nullptr);
  m["horizon"] = v.horizon;
  m["fidelity_threshold"] = v.fidelity_threshold;
  m["max_fidelity"] = v.max_fidelity;

  cqw::io::RunOutput out(prefix_or(c, "periodicity"), "periodicity", params);
  out.add(".json", cqw::io::dump(m));
  out.write();
  std::cout << (v.periodic() ? "periodic, period " + std::to_string(v.period) : "chaotic")
            << '\n';
  return kExitOk;
}

// -------------------------------------------------------------------- verify

struct VerifyArgs {
  std::string suite = "all";
  std::uint64_t seed = cqw::oracle::kDefaultSeed;
  std::optional<double> tolerance;
};

Json report_json(const cqw::oracle::VerificationReport& r) {
  Json j;
  j["suite"] = r.suite;
  j["metric"] = r.metric;
  j["cases"] = r.cases;
  j["max_deviation"] = r.max_deviation;
  j["tolerance"] = r.tolerance;
  j["passed"] = r.passed;
  j["offending"] = r.offending;
  return j;
}

int cmd_verify(const Common& c, const VerifyArgs& a) {
  namespace o = cqw::oracle;
  const auto tol = [&](double fallback) { return a.tolerance.value_or(fallback); };
  const bool all = a.suite == "all";
  std::vector<o::VerificationReport> reports;
  if (all || a.suite == "dispersion") {
    reports.push_back(o::verify_dispersion_vs_eigenphase(1000, 6, a.seed,
                                                         tol(o::kDispersionTolerance)));
  }
  if (all || a.suite == "spectrum") {
    reports.push_back(o::verify_fullspectrum_sweep(3, 12, 3, 5, a.seed,
                                                   tol(o::kSpectrumTolerance)));
  }
  if (all || a.suite == "derivatives") {
    reports.push_back(o::verify_derivatives(500, a.seed, tol(o::kVelocityTolerance),
                                            tol(o::kMassRelativeTolerance)));
  }
  if (all || a.suite == "theorems") {
    reports.push_back(o::fuzz_theorem_conditions(6, 16, a.seed, tol(o::kTheoremTolerance)));
    reports.push_back(o::verify_dirac_slopes(4, tol(o::kDiracSlopeTolerance)));
  }

  bool passed = true;
  Json list = Json::array();
  for (const auto& r : reports) {
    passed = passed && r.passed;
    list.push_back(report_json(r));
    std::cout << (r.passed ? "PASS " : "FAIL ") << r.suite << ": " << r.cases
              << " cases, max deviation " << cqw::io::format_double(r.max_deviation)
              << " (tolerance " << cqw::io::format_double(r.tolerance) << ")\n";
    for (const auto& bad : r.offending) std::cout << "  " << bad << '\n';
  }
  Json doc;
  doc["passed"] = passed;
  doc["reports"] = std::move(list);

  Json params;
  params["suite"] = a.suite;
  params["seed"] = a.seed;
  params["tolerance"] = a.tolerance ? Json(*a.tolerance) : Json(nullptr);
  cqw::io::RunOutput out(prefix_or(c, "verify"), "verify", params);
  out.set_seed(a.seed);
  out.add(".json", cqw::io::dump(doc));
  out.write();
  return passed ? kExitOk : kExitVerifyFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cyclic quantum walks: bands, winding numbers, edge states and disorder"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(cqw::io::kToolVersion));

  Common common;
  EdgeArgs edge_args;

  DispersionArgs disp;
  auto* disp_cmd = app.add_subcommand("dispersion", "Band structure E(k) on the N-cycle");
  add_common(disp_cmd, common, false);
  disp_cmd->add_option("--coin-angle", disp.coin_angle, "Single theta (default: theta grid)");
  disp_cmd->add_option("--samples", disp.samples, "Theta grid points over [0, 2pi]")
      ->capture_default_str();

  WindingArgs wind;
  auto* wind_cmd = app.add_subcommand("winding", "Winding number versus theta");
  add_common(wind_cmd, common, false);
  wind_cmd->add_flag("--continuum", wind.continuum, "Use the k continuum instead of the cycle");
  wind_cmd->add_option("--quadrature", wind.quadrature, "Continuum quadrature points (even)")
      ->capture_default_str();
  wind_cmd->add_option("--samples", wind.samples, "Theta grid points over [0, 2pi] (>= 16)")
      ->capture_default_str();
  wind_cmd->add_option("--coin-angle", wind.coin_angle, "Evaluate a single theta");

  auto* edge_cmd = app.add_subcommand("edge", "Edge-state heatmap at a coin boundary");
  add_common(edge_cmd, common, true);
  add_edge_options(edge_cmd, edge_args);

  DisorderArgs dis;
  auto* dis_cmd = app.add_subcommand("disorder", "Disorder-averaged edge-state heatmap");
  add_common(dis_cmd, common, true);
  add_edge_options(dis_cmd, edge_args);
  dis_cmd->add_option("--kind", dis.kind, "static | dynamic | none")
      ->check(CLI::IsMember({"static", "dynamic", "none"}))
      ->capture_default_str();
  dis_cmd->add_option("--strength", dis.strength, "Disorder strength (>= 0)")
      ->capture_default_str();
  dis_cmd->add_option("--realizations,-R", dis.realizations, "Number of realizations")
      ->capture_default_str();
  dis_cmd->add_option("--seed", dis.seed, "Master seed")->capture_default_str();

  PeriodicityArgs per;
  auto* per_cmd = app.add_subcommand("periodicity", "Periodic or chaotic uniform-coin walk");
  add_common(per_cmd, common, false);
  per_cmd->add_option("--coin-angle", per.coin_angle, "Coin angle")->capture_default_str();
  per_cmd->add_option("--horizon", per.horizon, "Largest period searched")
      ->capture_default_str();
  per_cmd->add_option("--epsilon", per.epsilon, "Return fidelity must exceed 1 - epsilon")
      ->capture_default_str();

  VerifyArgs ver;
  auto* ver_cmd = app.add_subcommand("verify", "Run the numerical oracle suites");
  add_common(ver_cmd, common, false);
  ver_cmd->add_option("suite", ver.suite, "dispersion | spectrum | derivatives | theorems | all")
      ->check(CLI::IsMember({"dispersion", "spectrum", "derivatives", "theorems", "all"}))
      ->capture_default_str();
  ver_cmd->add_option("--seed", ver.seed, "Sampling seed")->capture_default_str();
  ver_cmd->add_option("--tolerance", ver.tolerance, "Override every suite tolerance");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInvalid;
  }

  try {
    if (*disp_cmd) return cmd_dispersion(common, disp);
    if (*wind_cmd) return cmd_winding(common, wind);
    if (*edge_cmd) return cmd_edge(common, edge_args);
    if (*dis_cmd) return cmd_disorder(common, edge_args, dis);
    if (*per_cmd) return cmd_periodicity(common, per);
    if (*ver_cmd) return cmd_verify(common, ver);
  } catch (const cqw::NoBoundary& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const cqw::IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const cqw::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalid;
  }
  return kExitInvalid;
}
