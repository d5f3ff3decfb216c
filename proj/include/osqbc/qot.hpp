#pragma once

#include <Eigen/Dense>
#include <complex>
#include <optional>
#include <vector>

#include "osqbc/adversary.hpp"
#include "osqbc/codes.hpp"
#include "osqbc/rng.hpp"

namespace osqbc::qot {

using Matrix8cd = Eigen::Matrix<std::complex<double>, 8, 8>;
using Vector8cd = Eigen::Matrix<std::complex<double>, 8, 1>;

// --- register-level machinery -------------------------------------------

// Qubit |a,g>: a picks the basis (0 computational, 1 Hadamard), g the state.
Eigen::Vector2cd basis_state(int a, int g);

// B x phi x H product for one transmitted qubit: B = (|0>+|1>)/sqrt(2),
// phi = |a,g>, H = |0>. Qubit order (B, phi, H), B most significant.
Vector8cd init_index_registers(int a, int g);

// Coherent measure-and-record: if B = |b> then measure phi in basis b and
// store the result in H, without collapse.
Matrix8cd u1_matrix();
Vector8cd apply_u1(const Vector8cd& registers);

// Compare the announced basis a with B and store (a != b) xor s' in Gamma.
// Acts on (S', B, Gamma), S' most significant.
Matrix8cd u3_matrix(int announced_basis);

// Per-index registers tracked through the curious run. gamma is set once
// the comparison qubit has been measured.
struct IndexRegisters {
  int a = 0;
  int g = 0;
  Vector8cd state;  // B x phi x H
  std::optional<int> gamma;
};

// Branch-tracked commitment of a qubit register: register value 0 paired
// with uniform support on C_(0), value 1 with its image on C_(1).
struct BranchCommitment {
  std::complex<double> amp0, amp1;
  adversary::SuperposedCommitment sc0, sc1;
  double p0() const;
  double p1() const;
};

BranchCommitment commit_at_quantum_level(const Eigen::Vector2cd& register_state,
                                         const codes::LinearCode& code,
                                         const codes::PartitionKey& r);

// --- POVM stage -----------------------------------------------------------

struct Povm {
  Eigen::Matrix3cd e0;
  Eigen::Matrix3cd e1;
};

Povm optimal_povm();
Povm projective_guess_povm();  // E0 = diag(1,0,1/2): measure, guess on fail
void check_povm(const Povm& povm, double tol = 1e-9);

// (|b> + |?>)/sqrt(2) in the ordered basis {decode 0, decode 1, fail}.
// s is the announced selector; the reduction identifies |b> with
// |s> x |I_s matched> and |?> with the failed branch.
Eigen::Vector3cd build_phi_b(int s, int b);

// Average success probability discriminating {Phi_0, Phi_1} at equal priors.
double povm_reliability(const Povm& povm);

// --- protocol runs --------------------------------------------------------

struct QotParams {
  int n = 16;
  // |R| defaults to ceil(n/4); |I_0| = |I_1| = floor(0.24 n).
  int test_subset_size(int n_) const;
  int announce_subset_size(int n_) const;
};

struct HonestOutcome {
  bool decoded = false;
  int b = 0;       // Alice's input
  int b_out = 0;   // Bob's output (guess on failure)
  bool correct = false;
};

HonestOutcome run_qot_honest(int n, Rng& rng);

struct CuriousOutcome {
  int b = 0;
  int guess = 0;
  bool correct = false;
  double amp_decode = 0.0;  // validated against 1/sqrt(2)
  double amp_fail = 0.0;
};

CuriousOutcome run_qot_curious(int n, Rng& rng);

}  // namespace osqbc::qot
