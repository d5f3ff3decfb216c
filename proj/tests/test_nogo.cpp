#include <cmath>
#include <complex>
#include <numbers>

#include "doctest.h"
#include "osqbc/nogo.hpp"

using namespace osqbc;
using Cplx = std::complex<double>;

namespace {

nogo::JointState random_state(int dim_a, int dim_b, Rng& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::VectorXcd amps(Eigen::Index(dim_a) * dim_b);
  for (Eigen::Index i = 0; i < amps.size(); ++i) amps[i] = Cplx(gauss(rng), gauss(rng));
  amps /= amps.norm();
  return nogo::make_joint_state(std::move(amps), dim_a, dim_b);
}

Eigen::MatrixXcd random_unitary(int dim, Rng& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::MatrixXcd m(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) m(i, j) = Cplx(gauss(rng), gauss(rng));
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(m);
  Eigen::MatrixXcd q = qr.householderQ();
  return q;
}

// Independent check of the closed form: hill-climb over U(dim_a) on the
// objective |<psi1|(U x I)|psi0>|^2.
double brute_force_cheat(const nogo::JointState& psi0, const nogo::JointState& psi1, Rng& rng) {
  Eigen::MatrixXcd cross = psi0.as_matrix() * psi1.as_matrix().adjoint();
  const int dim = psi0.dim_a;
  auto value = [&](const Eigen::MatrixXcd& u) { return std::norm((cross * u).trace()); };
  double best = 0.0;
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int start = 0; start < 6; ++start) {
    Eigen::MatrixXcd u = random_unitary(dim, rng);
    double cur = value(u);
    double step = 0.8;
    while (step > 1e-7) {
      bool improved = false;
      for (int attempt = 0; attempt < 24; ++attempt) {
        // random Hermitian direction, exponentiated to stay unitary
        Eigen::MatrixXcd h(dim, dim);
        for (int i = 0; i < dim; ++i)
          for (int j = 0; j < dim; ++j) h(i, j) = Cplx(gauss(rng), gauss(rng));
        h = (h + h.adjoint().eval()) / 2.0;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
        Eigen::VectorXcd phases(dim);
        for (int i = 0; i < dim; ++i)
          phases[i] = std::exp(Cplx(0.0, step * es.eigenvalues()[i]));
        Eigen::MatrixXcd cand =
            es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint() * u;
        double v = value(cand);
        if (v > cur) {
          cur = v;
          u = cand;
          improved = true;
        }
      }
      if (!improved) step *= 0.5;
    }
    best = std::max(best, cur);
  }
  return best;
}

}  // namespace

TEST_CASE("reduced density basics") {
  // product state |0>|+>
  Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(4);
  amps[0] = 1.0 / std::numbers::sqrt2;
  amps[1] = 1.0 / std::numbers::sqrt2;
  auto product = nogo::make_joint_state(amps, 2, 2);
  auto rho = nogo::reduced_density(product, nogo::Keep::B);
  nogo::check_density_matrix(rho);
  CHECK(std::abs((rho * rho).trace().real() - 1.0) < 1e-12);

  auto bell = nogo::bb84_style_state(0);
  auto half = nogo::reduced_density(bell, nogo::Keep::B);
  CHECK((half - Eigen::MatrixXcd::Identity(2, 2) * 0.5).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("Schmidt weights appear as reduced eigenvalues") {
  Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(4);
  double l0 = std::sqrt(0.3), l1 = std::sqrt(0.7);
  amps[0] = l0;
  amps[3] = l1;
  auto psi = nogo::make_joint_state(amps, 2, 2);
  auto rho = nogo::reduced_density(psi, nogo::Keep::A);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho, Eigen::EigenvaluesOnly);
  CHECK(es.eigenvalues()[0] == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(es.eigenvalues()[1] == doctest::Approx(0.7).epsilon(1e-12));
}

TEST_CASE("joint state validation") {
  CHECK_THROWS(nogo::make_joint_state(Eigen::VectorXcd::Zero(4), 2, 2));
  CHECK_THROWS(nogo::make_joint_state(Eigen::VectorXcd::Ones(4), 2, 3));
  Eigen::MatrixXcd not_herm(2, 2);
  not_herm << 1.0, Cplx(0.0, 1.0), 0.0, 0.0;
  CHECK_THROWS(nogo::check_density_matrix(not_herm));
}

TEST_CASE("fidelity basics") {
  Rng rng = make_stream(50, 0);
  auto psi = random_state(2, 3, rng);
  auto rho = nogo::reduced_density(psi, nogo::Keep::B);
  CHECK(nogo::uhlmann_fidelity(rho, rho) == doctest::Approx(1.0).epsilon(1e-8));

  Eigen::MatrixXcd p0 = Eigen::MatrixXcd::Zero(2, 2), p1 = Eigen::MatrixXcd::Zero(2, 2);
  p0(0, 0) = 1.0;
  p1(1, 1) = 1.0;
  CHECK(nogo::uhlmann_fidelity(p0, p1) < 1e-12);
  CHECK(nogo::trace_distance(p0, p1) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS(nogo::uhlmann_fidelity(p0, Eigen::MatrixXcd::Identity(3, 3) / 3.0));
}

TEST_CASE("fidelity matches the purification-overlap oracle") {
  Rng rng = make_stream(51, 0);
  for (int t = 0; t < 20; ++t) {
    auto rho0 = nogo::reduced_density(random_state(3, 3, rng), nogo::Keep::B);
    auto rho1 = nogo::reduced_density(random_state(3, 3, rng), nogo::Keep::B);
    // purify via eigen-decomposition, then maximize overlap over the
    // purifying unitary: nuclear norm of A0 A1^dagger
    auto purify = [](const Eigen::MatrixXcd& rho) {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho);
      Eigen::VectorXd vals = es.eigenvalues().cwiseMax(0.0);
      return Eigen::MatrixXcd(es.eigenvectors() * vals.cwiseSqrt().asDiagonal());
    };
    Eigen::MatrixXcd a0 = purify(rho0), a1 = purify(rho1);
    double oracle =
        (a0.adjoint() * a1).jacobiSvd().singularValues().sum();
    CHECK(nogo::uhlmann_fidelity(rho0, rho1) == doctest::Approx(oracle).epsilon(1e-8));
  }
}

TEST_CASE("cheat success extremes") {
  auto bb0 = nogo::bb84_style_state(0);
  auto bb1 = nogo::bb84_style_state(1);
  CHECK(nogo::cheat_success(bb0, bb1) == doctest::Approx(1.0).epsilon(1e-9));

  auto code = codes::make_code("repetition(2)");
  codes::PartitionKey key{codes::word_from_string("10"), 2};
  auto c0 = nogo::commitment_state(code, key, 0);
  auto c1 = nogo::commitment_state(code, key, 1);
  CHECK(nogo::cheat_success(c0, c1) < 1e-12);
}

TEST_CASE("cheat success equals squared fidelity of the B states") {
  Rng rng = make_stream(52, 0);
  for (int t = 0; t < 10; ++t) {
    auto psi0 = random_state(3, 3, rng);
    auto psi1 = random_state(3, 3, rng);
    double f = nogo::uhlmann_fidelity(nogo::reduced_density(psi0, nogo::Keep::B),
                                      nogo::reduced_density(psi1, nogo::Keep::B));
    CHECK(nogo::cheat_success(psi0, psi1) == doctest::Approx(f * f).epsilon(1e-9));
  }
}

TEST_CASE("cheat success matches brute-force unitary maximization") {
  Rng rng = make_stream(53, 0);
  for (int t = 0; t < 5; ++t) {
    auto psi0 = random_state(2, 2, rng);
    auto psi1 = random_state(2, 2, rng);
    double closed = nogo::cheat_success(psi0, psi1);
    double brute = brute_force_cheat(psi0, psi1, rng);
    CHECK(closed == doctest::Approx(brute).epsilon(2e-4));
  }
}

TEST_CASE("optimal cheat unitary is a witness") {
  Rng rng = make_stream(54, 0);
  auto psi0 = random_state(3, 3, rng);
  auto psi1 = random_state(3, 3, rng);
  auto u = nogo::optimal_cheat_unitary(psi0, psi1);
  CHECK((u * u.adjoint() - Eigen::MatrixXcd::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-9);
  Eigen::MatrixXcd cross = psi0.as_matrix() * psi1.as_matrix().adjoint();
  CHECK(std::norm((cross * u).trace()) ==
        doctest::Approx(nogo::cheat_success(psi0, psi1)).epsilon(1e-9));
}

TEST_CASE("cheat success is invariant under local unitaries") {
  Rng rng = make_stream(55, 0);
  auto psi0 = random_state(3, 3, rng);
  auto psi1 = random_state(3, 3, rng);
  double base = nogo::cheat_success(psi0, psi1);
  auto u = random_unitary(3, rng);
  Eigen::MatrixXcd rotated = u * psi0.as_matrix();
  Eigen::VectorXcd amps(9);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) amps[i * 3 + j] = rotated(i, j);
  auto psi0r = nogo::make_joint_state(amps, 3, 3);
  CHECK(nogo::cheat_success(psi0r, psi1) == doctest::Approx(base).epsilon(1e-9));
  CHECK(nogo::cheat_success(psi0, psi0) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("cheat success decreases along the orthogonalizing family") {
  double prev_cheat = 1.1;
  double prev_dist = -0.1;
  for (int i = 0; i <= 8; ++i) {
    double theta = (std::numbers::pi / 2) * i / 8.0;
    Eigen::VectorXcd a0 = Eigen::VectorXcd::Zero(4), a1 = Eigen::VectorXcd::Zero(4);
    a0[0] = std::cos(theta);
    a0[1] = std::sin(theta);
    a1[0] = 1.0;
    auto psi0 = nogo::make_joint_state(a0, 2, 2);
    auto psi1 = nogo::make_joint_state(a1, 2, 2);
    double cheat = nogo::cheat_success(psi0, psi1);
    double dist = nogo::trace_distance(nogo::reduced_density(psi0, nogo::Keep::B),
                                       nogo::reduced_density(psi1, nogo::Keep::B));
    CHECK(cheat < prev_cheat + 1e-12);
    CHECK(dist > prev_dist - 1e-12);
    prev_cheat = cheat;
    prev_dist = dist;
  }
  CHECK(prev_cheat < 1e-12);
}

TEST_CASE("commitment_state rejects oversized codes") {
  auto code = codes::make_code("hamming7");
  CHECK_THROWS(nogo::commitment_state(code, {1, 7}, 0));
}
