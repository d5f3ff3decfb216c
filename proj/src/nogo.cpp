#include "osqbc/nogo.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace osqbc::nogo {

Eigen::MatrixXcd JointState::as_matrix() const {
  // amplitudes are ordered with the B index fastest.
  return Eigen::Map<const Eigen::Matrix<std::complex<double>, Eigen::Dynamic, Eigen::Dynamic,
                                        Eigen::RowMajor>>(amplitudes.data(), dim_a, dim_b);
}

JointState make_joint_state(Eigen::VectorXcd amplitudes, int dim_a, int dim_b) {
  if (dim_a < 1 || dim_b < 1 || dim_a > kMaxFactorDim || dim_b > kMaxFactorDim)
    throw std::invalid_argument("make_joint_state: factor dimension out of range");
  if (amplitudes.size() != Eigen::Index(dim_a) * dim_b)
    throw std::invalid_argument("make_joint_state: amplitude count mismatch");
  double norm = amplitudes.norm();
  if (std::abs(norm - 1.0) > 1e-9)
    throw std::invalid_argument("make_joint_state: state not normalized");
  return {std::move(amplitudes), dim_a, dim_b};
}

Eigen::MatrixXcd reduced_density(const JointState& psi, Keep keep) {
  Eigen::MatrixXcd a = psi.as_matrix();
  if (keep == Keep::A) return a * a.adjoint();
  return a.transpose() * a.conjugate();
}

void check_density_matrix(const Eigen::MatrixXcd& rho) {
  if (rho.rows() != rho.cols()) throw std::invalid_argument("density matrix not square");
  if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > 1e-9)
    throw std::invalid_argument("density matrix not Hermitian");
  if (std::abs(rho.trace().real() - 1.0) > 1e-9 || std::abs(rho.trace().imag()) > 1e-9)
    throw std::invalid_argument("density matrix trace != 1");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -1e-9)
    throw std::invalid_argument("density matrix not positive semidefinite");
}

namespace {

Eigen::MatrixXcd matrix_sqrt(const Eigen::MatrixXcd& rho) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho);
  Eigen::VectorXd vals = es.eigenvalues().cwiseMax(0.0);
  return es.eigenvectors() * vals.cwiseSqrt().asDiagonal() * es.eigenvectors().adjoint();
}

double nuclear_norm(const Eigen::MatrixXcd& m) {
  return m.jacobiSvd().singularValues().sum();
}

}  // namespace

double uhlmann_fidelity(const Eigen::MatrixXcd& rho0, const Eigen::MatrixXcd& rho1) {
  if (rho0.rows() != rho1.rows() || rho0.cols() != rho1.cols())
    throw std::invalid_argument("uhlmann_fidelity: dimension mismatch");
  Eigen::MatrixXcd s0 = matrix_sqrt(rho0);
  Eigen::MatrixXcd inner = s0 * rho1 * s0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(inner, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
}

double trace_distance(const Eigen::MatrixXcd& rho0, const Eigen::MatrixXcd& rho1) {
  if (rho0.rows() != rho1.rows() || rho0.cols() != rho1.cols())
    throw std::invalid_argument("trace_distance: dimension mismatch");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho0 - rho1, Eigen::EigenvaluesOnly);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

double cheat_success(const JointState& psi0, const JointState& psi1) {
  if (psi0.dim_a != psi1.dim_a || psi0.dim_b != psi1.dim_b)
    throw std::invalid_argument("cheat_success: mismatched splits");
  // <psi1|(U x I)|psi0> = tr(U A0 A1^dagger); the maximum modulus over
  // unitary U is the sum of singular values of the cross matrix.
  Eigen::MatrixXcd cross = psi0.as_matrix() * psi1.as_matrix().adjoint();
  double overlap = nuclear_norm(cross);
  return overlap * overlap;
}

Eigen::MatrixXcd optimal_cheat_unitary(const JointState& psi0, const JointState& psi1) {
  if (psi0.dim_a != psi1.dim_a || psi0.dim_b != psi1.dim_b)
    throw std::invalid_argument("optimal_cheat_unitary: mismatched splits");
  Eigen::MatrixXcd cross = psi0.as_matrix() * psi1.as_matrix().adjoint();
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(cross, Eigen::ComputeFullU | Eigen::ComputeFullV);
  // tr(U W S V^dagger) with U = V W^dagger gives the sum of singular values.
  return svd.matrixV() * svd.matrixU().adjoint();
}

JointState commitment_state(const codes::LinearCode& code, const codes::PartitionKey& r, int b) {
  if (code.n > 6) throw std::invalid_argument("commitment_state: 2^n exceeds the dimension cap");
  auto subset = codes::partition_subset(code, r, b);
  if (subset.empty()) throw std::runtime_error("commitment_state: empty subset");
  int dim_a = int(subset.size());
  int dim_b = 1 << code.n;
  Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(Eigen::Index(dim_a) * dim_b);
  double w = 1.0 / std::sqrt(double(dim_a));
  for (int j = 0; j < dim_a; ++j) amps[Eigen::Index(j) * dim_b + Eigen::Index(subset[j])] = w;
  return make_joint_state(std::move(amps), dim_a, dim_b);
}

JointState bb84_style_state(int b) {
  // b = 0: (|0>|0> + |1>|1>)/sqrt(2); b = 1: same pair with the A basis
  // rotated by 45 degrees. Reduced B state is I/2 either way.
  Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(4);
  double inv = 1.0 / std::numbers::sqrt2;
  if (b == 0) {
    amps[0] = inv;  // |0>|0>
    amps[3] = inv;  // |1>|1>
  } else {
    amps[0] = 0.5;
    amps[1] = 0.5;
    amps[2] = 0.5;
    amps[3] = -0.5;  // (|+>|0> + |->|1>)/sqrt(2)
  }
  return make_joint_state(std::move(amps), 2, 2);
}

}  // namespace osqbc::nogo
