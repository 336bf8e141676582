#include <catch_amalgamated.hpp>

#include <random>

#include "cqw/walk.hpp"

using namespace cqw;
using Catch::Matchers::WithinAbs;

namespace {

VectorXc random_unit_vector(Eigen::Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  VectorXc v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = Complex(g(rng), g(rng));
  return v.normalized();
}

CoinProfile random_profile(const CycleSpec& spec, int t, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, kTwoPi);
  std::vector<Angle> angles;
  for (int x = 0; x < spec.sites(); ++x) angles.push_back(Angle::from_radians(u(rng)));
  return CoinProfile(std::move(angles), t);
}

}  // namespace

TEST_CASE("cycle needs three sites") {
  CHECK_THROWS_AS(CycleSpec(2), InvalidSpec);
  CHECK_NOTHROW(CycleSpec(3));
}

TEST_CASE("shift moves coin-up right and coin-down left") {
  const CycleSpec spec(4);
  const MatrixXc s = build_shift(spec);
  CHECK(s(basis_index(1, 0), basis_index(0, 0)) == Complex(1.0));
  CHECK(s(basis_index(3, 1), basis_index(0, 1)) == Complex(1.0));
}

TEST_CASE("shift is the exact permutation for N = 3..12") {
  for (int n = 3; n <= 12; ++n) {
    const CycleSpec spec(n);
    const MatrixXc s = build_shift(spec);
    for (int x = 0; x < n; ++x) {
      for (int q = 0; q < 2; ++q) {
        const int target = ((x + (q == 0 ? 1 : -1)) % n + n) % n;
        for (Eigen::Index r = 0; r < s.rows(); ++r) {
          const Complex expected = r == basis_index(target, q) ? 1.0 : 0.0;
          REQUIRE(s(r, basis_index(x, q)) == expected);
        }
      }
    }
  }
}

TEST_CASE("eight shifts on the 8-cycle act as identity on coin-up states") {
  const CycleSpec spec(8);
  const MatrixXc s = build_shift(spec);
  MatrixXc p = MatrixXc::Identity(16, 16);
  for (int i = 0; i < 8; ++i) p = s * p;
  for (int x = 0; x < 8; ++x) {
    CHECK((p.col(basis_index(x, 0)) - MatrixXc::Identity(16, 16).col(basis_index(x, 0))).norm() ==
          0.0);
  }
}

TEST_CASE("coin matrix entries") {
  const Matrix2c h = build_coin_matrix(kPi / 2, 1, 1);
  const double r = std::sqrt(0.5);
  CHECK_THAT(h(0, 0).real(), WithinAbs(r, 1e-15));
  CHECK_THAT(h(0, 1).real(), WithinAbs(-r, 1e-15));
  CHECK_THAT(h(1, 0).real(), WithinAbs(r, 1e-15));
  CHECK_THAT(h(1, 1).real(), WithinAbs(r, 1e-15));

  for (int t = 1; t <= 5; ++t) CHECK(build_coin_matrix(0.0, t, 1) == Matrix2c::Identity());

  const Matrix2c flip = build_coin_matrix(kPi / 2, 2, 1);
  CHECK_THAT(flip(0, 0).real(), WithinAbs(0.0, 1e-15));
  CHECK_THAT(flip(0, 1).real(), WithinAbs(-1.0, 1e-15));
  CHECK_THAT(flip(1, 0).real(), WithinAbs(1.0, 1e-15));
  CHECK_THAT(flip(1, 1).real(), WithinAbs(0.0, 1e-15));
}

TEST_CASE("coin is real orthogonal with unit determinant") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, kTwoPi);
  for (int i = 0; i < 200; ++i) {
    const auto mode = i % 2 ? CoinMode::PerStepMultiplier : CoinMode::FixedMultiplier;
    const Matrix2c c = build_coin_matrix(u(rng), 1 + i % 6, 1 + i % 9, mode);
    CHECK(c.imag().cwiseAbs().maxCoeff() == 0.0);
    CHECK_THAT(c.determinant().real(), WithinAbs(1.0, 1e-14));
    CHECK((c.adjoint() * c - Matrix2c::Identity()).cwiseAbs().maxCoeff() < 1e-14);
  }
}

TEST_CASE("per-step mode uses t*theta") {
  const double theta = 0.37;
  CHECK((build_coin_matrix(theta, 2, 5, CoinMode::PerStepMultiplier) -
         build_coin_matrix(theta, 5, 1))
            .norm() < 1e-15);
  CHECK_THROWS_AS(build_coin_matrix(theta, 2, 0, CoinMode::PerStepMultiplier), InvalidArgument);
}

TEST_CASE("profile angles are reduced into [0, 2pi)") {
  const CycleSpec spec(3);
  const auto p = CoinProfile::from_sites(
      spec, {{0, Angle(-1, 2)}, {1, Angle(7, 2)}, {2, Angle::from_radians(20.0)}}, 1);
  for (const Angle& a : p.angles()) {
    CHECK(a.value() >= 0.0);
    CHECK(a.value() < kTwoPi);
  }
  CHECK(p.angle(0) == Angle(3, 2));
  CHECK(p.angle(1) == Angle(3, 2));
  CHECK_THROWS_AS(CoinProfile(std::vector<Angle>(3, Angle(1, 3)), 0), InvalidProfile);
}

TEST_CASE("global coin") {
  const CycleSpec spec(8);
  SECTION("uniform profile is I (x) C") {
    const auto p = CoinProfile::uniform(spec, Angle(1, 3), 2);
    const Matrix2c c = build_coin_matrix(kPi / 3, 2, 1);
    const MatrixXc g = build_global_coin(p, spec);
    MatrixXc expected = MatrixXc::Zero(16, 16);
    for (int x = 0; x < 8; ++x) expected.block<2, 2>(2 * x, 2 * x) = c;
    CHECK((g - expected).cwiseAbs().maxCoeff() < 1e-15);
  }
  SECTION("boundary profile has one distinct block") {
    const auto p = CoinProfile::uniform(spec, Angle(1, 3), 2).with_angle(0, Angle(7, 5));
    const MatrixXc g = build_global_coin(p, spec);
    CHECK((g.block<2, 2>(0, 0) - build_coin_matrix(7 * kPi / 5, 2, 1)).norm() < 1e-15);
    for (int x = 1; x < 8; ++x) {
      CHECK((g.block<2, 2>(2 * x, 2 * x) - build_coin_matrix(kPi / 3, 2, 1)).norm() < 1e-15);
    }
    CHECK((g.block<2, 14>(0, 2).norm()) == 0.0);
  }
  SECTION("missing site angle") {
    CHECK_THROWS_AS(CoinProfile::from_sites(spec, {{0, Angle(1, 3)}}, 2), InvalidProfile);
    CHECK_THROWS_AS(build_global_coin(CoinProfile::uniform(CycleSpec(5), Angle(1, 3), 2), spec),
                    InvalidProfile);
  }
  SECTION("random profiles are unitary") {
    std::mt19937_64 rng(3);
    for (int i = 0; i < 20; ++i) {
      const auto p = random_profile(spec, 1 + i % 4, rng);
      CHECK(unitarity_defect(build_global_coin(p, spec)) < 1e-12);
    }
  }
}

TEST_CASE("evolution operators preserve norms of random states") {
  std::mt19937_64 rng(5);
  for (int n : {3, 4, 7, 8, 12}) {
    const CycleSpec spec(n);
    const auto op = evolution_operator(random_profile(spec, 1 + n % 3, rng), spec);
    CHECK(unitarity_defect(op.matrix) < 1e-12);
    for (int i = 0; i < 100; ++i) {
      const auto psi = WalkerState::from_amplitudes(random_unit_vector(spec.dimension(), rng));
      CHECK_THAT(apply(op.matrix, psi).amplitudes().norm(), WithinAbs(1.0, 1e-12));
    }
  }
}

TEST_CASE("identity coin walks are pure shifts") {
  const CycleSpec spec(5);
  const auto p = CoinProfile::uniform(spec, Angle(0, 1), 1);
  const auto start = WalkerState::basis(spec, 0, 0);
  auto psi = step(start, p, spec, 1);
  CHECK(psi.amplitude(1, 0) == Complex(1.0));
  for (int t = 2; t <= 5; ++t) psi = step(psi, p, spec, t);
  CHECK((psi.amplitudes() - start.amplitudes()).norm() == 0.0);
  CHECK(return_fidelity(start, psi) == 1.0);
}

TEST_CASE("structured step matches dense matrix powers") {
  const CycleSpec spec(8);
  SECTION("Hadamard-class walk, three steps") {
    const auto p = CoinProfile::uniform(spec, Angle(1, 2), 1);
    const MatrixXc u = evolution_operator(p, spec).matrix;
    auto psi = WalkerState::balanced(spec, 0);
    VectorXc dense = psi.amplitudes();
    for (int t = 1; t <= 3; ++t) {
      psi = step(psi, p, spec, t);
      dense = u * dense;
    }
    CHECK((psi.amplitudes() - dense).cwiseAbs().maxCoeff() < 1e-14);
  }
  SECTION("uniform fixed-multiplier profile, 100 steps") {
    const auto p = CoinProfile::uniform(spec, Angle(1, 3), 2);
    const MatrixXc u = evolution_operator(p, spec).matrix;
    MatrixXc power = MatrixXc::Identity(16, 16);
    auto psi = WalkerState::localized(spec, 3, Complex(0.6, 0.0), Complex(0.0, 0.8));
    const VectorXc start = psi.amplitudes();
    for (int t = 1; t <= 100; ++t) {
      psi = step(psi, p, spec, t);
      power = u * power;
    }
    CHECK(((power * start) - psi.amplitudes()).cwiseAbs().maxCoeff() < 1e-10);
  }
  SECTION("per-step mode uses the operator of each step") {
    const auto p = CoinProfile::uniform(spec, Angle(1, 5), 1, CoinMode::PerStepMultiplier);
    auto psi = WalkerState::balanced(spec, 2);
    VectorXc dense = psi.amplitudes();
    for (int t = 1; t <= 10; ++t) {
      psi = step(psi, p, spec, t);
      dense = evolution_operator(p, spec, t).matrix * dense;
    }
    CHECK((psi.amplitudes() - dense).cwiseAbs().maxCoeff() < 1e-13);
  }
}

TEST_CASE("probability is conserved for 1000 steps") {
  std::mt19937_64 rng(17);
  const CycleSpec spec(9);
  const auto p = random_profile(spec, 3, rng);
  auto psi = WalkerState::from_amplitudes(random_unit_vector(spec.dimension(), rng));
  for (int t = 1; t <= 1000; ++t) {
    psi = step(psi, p, spec, t);
    REQUIRE_THAT(position_probabilities(psi).sum(), WithinAbs(1.0, 1e-12));
  }
}

TEST_CASE("position probabilities") {
  const CycleSpec spec(6);
  const Eigen::VectorXd p0 = position_probabilities(WalkerState::basis(spec, 0, 0));
  const Eigen::VectorXd p1 = position_probabilities(WalkerState::balanced(spec, 0));
  Eigen::VectorXd e0 = Eigen::VectorXd::Zero(6);
  e0(0) = 1.0;
  CHECK((p0 - e0).norm() == 0.0);
  CHECK((p1 - e0).norm() < 1e-15);

  std::mt19937_64 rng(23);
  const auto psi = WalkerState::from_amplitudes(random_unit_vector(12, rng));
  const Eigen::VectorXd p = position_probabilities(psi);
  CHECK(p.minCoeff() >= 0.0);
  CHECK_THAT(p.sum(), WithinAbs(1.0, 1e-12));
}

TEST_CASE("state normalization is enforced") {
  VectorXc v = VectorXc::Zero(6);
  v(0) = 2.0;
  CHECK_THROWS_AS(WalkerState::from_amplitudes(v), InvalidArgument);
  CHECK_THROWS_AS(WalkerState::from_amplitudes(VectorXc::Zero(5)), InvalidArgument);
}

TEST_CASE("Fourier modes") {
  SECTION("k' = 0 is uniform") {
    const VectorXc v = fourier_mode(CycleSpec(7), 0);
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      CHECK_THAT(std::abs(v(i) - Complex(1.0 / std::sqrt(7.0))), WithinAbs(0.0, 1e-15));
    }
  }
  SECTION("orthonormal on the 7-cycle") {
    const CycleSpec spec(7);
    for (int a = 0; a < 7; ++a) {
      for (int b = 0; b < 7; ++b) {
        const Complex ip = fourier_mode(spec, a).dot(fourier_mode(spec, b));
        CHECK(std::abs(ip - Complex(a == b ? 1.0 : 0.0)) < 1e-14);
      }
    }
  }
  SECTION("transform matrix is unitary for N = 3..16") {
    for (int n = 3; n <= 16; ++n) CHECK(unitarity_defect(fourier_matrix(CycleSpec(n))) < 1e-12);
  }
  SECTION("round trip") {
    std::mt19937_64 rng(29);
    for (int n = 3; n <= 16; ++n) {
      const CycleSpec spec(n);
      const VectorXc v = random_unit_vector(n, rng);
      CHECK((to_position(spec, to_momentum(spec, v)) - v).cwiseAbs().maxCoeff() < 1e-12);
    }
  }
  SECTION("out of range") {
    CHECK_THROWS_AS(fourier_mode(CycleSpec(5), 5), InvalidArgument);
    CHECK_THROWS_AS(fourier_mode(CycleSpec(5), -1), InvalidArgument);
  }
}

TEST_CASE("return fidelity") {
  const CycleSpec spec(4);
  const auto a = WalkerState::basis(spec, 1, 0);
  CHECK(return_fidelity(a, a) == 1.0);
  CHECK(return_fidelity(a, WalkerState::basis(spec, 1, 1)) == 0.0);
  CHECK_THROWS_AS(return_fidelity(a, WalkerState::basis(CycleSpec(5), 0, 0)), InvalidArgument);
}
