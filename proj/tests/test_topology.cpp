#include <catch_amalgamated.hpp>

#include <cstring>
#include <random>

#include "cqw/topology.hpp"

using namespace cqw;
using namespace cqw::topology;
using Catch::Matchers::WithinAbs;

namespace {

double distance_to_dirac(double theta, int t) {
  double best = kTwoPi;
  for (const Angle& a : bloch::dirac_angles(t)) best = std::min(best, std::abs(theta - a.value()));
  return best;
}

}  // namespace

TEST_CASE("discrete winding numbers on small cycles") {
  CHECK_THAT(winding_number_discrete(kPi / 2, 1, 7).omega, WithinAbs(1.00001, 2e-5));
  CHECK_THAT(winding_number_discrete(kPi / 2, 1, 4).omega, WithinAbs(1.06066, 2e-5));
  CHECK_THAT(winding_number_discrete(kPi / 2, 1, 4).omega, WithinAbs(0.75 * std::sqrt(2.0), 1e-14));
  CHECK_THAT(winding_number_discrete(3 * kPi / 2, 2, 8).omega, WithinAbs(-1.0, 1e-14));
  CHECK_THAT(winding_number_discrete(kPi / 3, 2, 8).omega, WithinAbs(1.00005, 2e-5));
  CHECK_THAT(winding_number_discrete(kPi / 2, 1, 5).omega,
             WithinAbs(29.0 * std::sqrt(2.0) / 41.0, 1e-14));
  CHECK(winding_number_discrete(kPi / 2, 1, 5).valid());
}

TEST_CASE("discrete winding is gap-closed at Dirac angles") {
  const auto r = winding_number_discrete(0.0, 1, 6);
  CHECK(r.status == WindingStatus::GapClosed);
  CHECK(std::isnan(r.omega));
  CHECK(winding_number_discrete(kPi, 2, 8).status == WindingStatus::GapClosed);
  // k' = 0 is on every cycle, so odd N close there too.
  CHECK(winding_number_discrete(kPi, 2, 7).status == WindingStatus::GapClosed);
  CHECK_THROWS_AS(winding_number_discrete(1.0, 1, 2), InvalidSpec);
}

TEST_CASE("continuum Zak phase") {
  CHECK_THAT(zak_phase_continuum(kPi / 2, 1).omega, WithinAbs(1.0, 1e-12));
  CHECK_THAT(zak_phase_continuum(3 * kPi / 2, 2).omega, WithinAbs(-1.0, 1e-12));
  CHECK_THAT(zak_phase_continuum(kPi, 1, 64).omega, WithinAbs(1.0, 1e-14));
  CHECK(zak_phase_continuum(0.0, 1).status == WindingStatus::GapClosed);
  CHECK(zak_phase_continuum(kPi, 2).status == WindingStatus::GapClosed);
  CHECK_THROWS_AS(zak_phase_continuum(1.0, 1, 63), InvalidArgument);
  CHECK_THROWS_AS(zak_phase_continuum(1.0, 1, 65), InvalidArgument);
  CHECK_THROWS_AS(zak_phase_continuum(1.0, 1, 32), InvalidArgument);
}

TEST_CASE("continuum winding is quantized away from Dirac angles") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(0.0, kTwoPi);
  int checked = 0;
  while (checked < 200) {
    const double theta = u(rng);
    const int t = 1 + checked % 4;
    if (distance_to_dirac(theta, t) <= 0.05) continue;
    ++checked;
    const auto r = zak_phase_continuum(theta, t);
    REQUIRE(r.valid());
    CHECK_THAT(std::abs(r.omega), WithinAbs(1.0, 1e-6));
  }
}

TEST_CASE("discrete and continuum winding agree") {
  CHECK(discrete_continuum_agreement(kPi / 2, 1, 1000) < 1e-6);
  CHECK(discrete_continuum_agreement(kPi / 3, 2, 1000) < 1e-6);
  CHECK(discrete_continuum_agreement(kPi / 3, 2, 7) <= 1e-4);
  CHECK_THAT(discrete_continuum_agreement(kPi / 2, 1, 4), WithinAbs(0.06066, 1e-5));
  CHECK_THROWS_AS(discrete_continuum_agreement(0.0, 1, 10), GapClosed);

  std::mt19937_64 rng(37);
  std::uniform_real_distribution<double> u(0.0, kTwoPi);
  int checked = 0;
  while (checked < 10) {
    const double theta = u(rng);
    const int t = 1 + checked % 4;
    if (distance_to_dirac(theta, t) <= 0.05) continue;
    ++checked;
    CHECK(discrete_continuum_agreement(theta, t, 2000) < 1e-6);
  }
}

TEST_CASE("sign of omega follows sin(T theta / 2)") {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> u(0.0, kTwoPi);
  for (int i = 0; i < 2000; ++i) {
    const double theta = u(rng);
    const int t = 1 + i % 6;
    const int n = 3 + i % 14;
    const auto r = winding_number_discrete(theta, t, n);
    if (!r.valid()) continue;
    const double s = std::sin(bloch::half_angle(theta, t));
    if (s == 0.0) continue;
    CHECK(std::signbit(r.omega) == std::signbit(s));
  }
}

TEST_CASE("theta grid") {
  const auto g = uniform_theta_grid(201);
  REQUIRE(g.size() == 201);
  CHECK(g.front().value() == 0.0);
  CHECK(g.back() == Angle(2, 1));
  for (std::size_t i = 1; i < g.size(); ++i) CHECK(g[i].value() > g[i - 1].value());
  CHECK_THROWS_AS(winding_scan(1, Lattice::cycle(8), 15), InvalidArgument);
}

TEST_CASE("phase diagrams") {
  SECTION("T = 1, N = 1000 has no interior transition") {
    const auto scan = winding_scan(1, Lattice::cycle(1000), 201);
    CHECK(scan.transitions.empty());
    for (std::size_t i = 1; i + 1 < scan.omegas.size(); ++i) {
      if (scan.omegas[i].valid()) CHECK_THAT(scan.omegas[i].omega, WithinAbs(1.0, 0.05));
    }
  }
  SECTION("T = 2, N = 1000 flips sign at theta = pi") {
    const auto scan = winding_scan(2, Lattice::cycle(1000), 201);
    REQUIRE(scan.transitions.size() == 1);
    const auto& tr = scan.transitions.front();
    CHECK(tr.theta_lo < kPi);
    CHECK(tr.theta_hi > kPi);
    CHECK_THAT(tr.omega_lo, WithinAbs(1.0, 1e-3));
    CHECK_THAT(tr.omega_hi, WithinAbs(-1.0, 1e-3));
  }
  SECTION("every transition brackets a Dirac angle") {
    for (int t = 1; t <= 5; ++t) {
      for (const Lattice& lat : {Lattice::cycle(7), Lattice::cycle(8), Lattice::cycle(1000),
                                 Lattice::continuum()}) {
        const auto scan = winding_scan(t, lat, 201);
        const double spacing = kTwoPi / 200.0;
        for (const auto& tr : scan.transitions) {
          bool bracketed = false;
          for (const Angle& d : bloch::dirac_angles(t)) {
            if (d.value() >= tr.theta_lo - 1e-12 && d.value() <= tr.theta_hi + 1e-12) {
              bracketed = true;
            }
          }
          CHECK(bracketed);
          CHECK(tr.theta_hi - tr.theta_lo <= 2 * spacing + 1e-12);
        }
      }
    }
  }
  SECTION("T = 2, N = 8 transitions sit at the interior Dirac angle") {
    const auto scan = winding_scan(2, Lattice::cycle(8), 201);
    REQUIRE(scan.transitions.size() == 1);
    CHECK(std::abs(0.5 * (scan.transitions[0].theta_lo + scan.transitions[0].theta_hi) - kPi) <
          kTwoPi / 200.0);
  }
  SECTION("thread count does not change the scan") {
    const auto a = winding_scan(3, Lattice::continuum(), 101, 1);
    const auto b = winding_scan(3, Lattice::continuum(), 101, 4);
    for (std::size_t i = 0; i < a.omegas.size(); ++i) {
      CHECK(std::memcmp(&a.omegas[i].omega, &b.omegas[i].omega, sizeof(double)) == 0);
    }
  }
}
