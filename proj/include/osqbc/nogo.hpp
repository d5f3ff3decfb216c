#pragma once

#include <Eigen/Dense>

#include "osqbc/codes.hpp"

namespace osqbc::nogo {

constexpr int kMaxFactorDim = 64;

// Pure state on a declared dim_a x dim_b product space. Row index of
// as_matrix() runs over the A factor.
struct JointState {
  Eigen::VectorXcd amplitudes;
  int dim_a = 0;
  int dim_b = 0;

  Eigen::MatrixXcd as_matrix() const;  // dim_a x dim_b
};

JointState make_joint_state(Eigen::VectorXcd amplitudes, int dim_a, int dim_b);

enum class Keep { A, B };

// Partial trace of |psi><psi| over the complementary factor.
Eigen::MatrixXcd reduced_density(const JointState& psi, Keep keep);

void check_density_matrix(const Eigen::MatrixXcd& rho);

// Tr sqrt(sqrt(rho0) rho1 sqrt(rho0)).
double uhlmann_fidelity(const Eigen::MatrixXcd& rho0, const Eigen::MatrixXcd& rho1);

double trace_distance(const Eigen::MatrixXcd& rho0, const Eigen::MatrixXcd& rho1);

// max over local unitaries U on the A factor of |<psi1|(U x I)|psi0>|^2,
// in closed form: the squared nuclear norm of the cross matrix
// M = A0 A1^dagger. Equals uhlmann_fidelity(rho0_B, rho1_B)^2.
double cheat_success(const JointState& psi0, const JointState& psi1);

// The maximizing local unitary (the optimizer's witness).
Eigen::MatrixXcd optimal_cheat_unitary(const JointState& psi0, const JointState& psi1);

// The entangled commitment of this protocol: branch c -> |e_c> x |Psi_c>
// with B basis vectors indexed by codeword. dim_a = |subset|, dim_b = 2^n.
JointState commitment_state(const codes::LinearCode& code, const codes::PartitionKey& r, int b);

// Toy commitment with identical reduced B states (maximally entangled pair
// in a rotated A basis): the configuration the cheating unitary exploits.
JointState bb84_style_state(int b);

}  // namespace osqbc::nogo
