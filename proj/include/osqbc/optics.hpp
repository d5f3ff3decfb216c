#pragma once

#include <compare>
#include <complex>
#include <map>

#include "osqbc/rng.hpp"

namespace osqbc::optics {

using Amplitude = std::complex<double>;

constexpr double kNormTolerance = 1e-9;

enum class ModeKind { channel_a, channel_b, held_by_bob, detector_d0, detector_d1, discarded };

struct ModeLabel {
  ModeKind kind = ModeKind::channel_a;
  int slot = 1;  // time index; a channel_b packet is timed tau after channel_a
  auto operator<=>(const ModeLabel&) const = default;
};

// Single optical excitation over labeled modes plus a vacuum component.
// Only the single-photon sector is tracked; the protocol never brings two
// photons to the same splitter.
struct PhotonState {
  std::map<ModeLabel, Amplitude> amplitudes;
  Amplitude vacuum = 0.0;

  double norm2() const;
  Amplitude amplitude(const ModeLabel& mode) const;
};

PhotonState vacuum_state();

// bit -> (|a> + (-1)^bit |b>)/sqrt(2) on the given slot.
PhotonState encode_qubit(int bit, int slot = 1);

Amplitude inner_product(const PhotonState& x, const PhotonState& y);

// Real balanced splitter [[1,1],[1,-1]]/sqrt(2) on the two listed modes;
// everything else untouched. The matrix is its own inverse.
PhotonState beam_splitter(const PhotonState& state, const ModeLabel& in1, const ModeLabel& in2,
                          const ModeLabel& out1, const ModeLabel& out2);

PhotonState phase_shift(const PhotonState& state, const ModeLabel& mode, double phi);

enum class Detection { d0, d1, no_click };

struct DetectionOutcome {
  Detection result = Detection::no_click;
  int slot = 1;
};

struct DetectionDistribution {
  double p_d0 = 0.0;
  double p_d1 = 0.0;
  double p_no_click = 0.0;
};

// Balanced Mach-Zehnder readout: delay channel A by tau, recombine with
// channel B on a splitter, Born probabilities at D0/D1. Vacuum, discarded
// and held components count as no-click.
DetectionDistribution mz_measure(const PhotonState& state);
Detection sample_detection(const DetectionDistribution& dist, Rng& rng);
Detection sample_detection(const PhotonState& state, Rng& rng);

// Dephasing flips the sign of every channel_b amplitude with probability
// eps_dephase; loss moves all channel amplitude to vacuum with probability
// eps_loss.
PhotonState apply_channel_noise(const PhotonState& state, double eps_dephase, double eps_loss,
                                Rng& rng);

}  // namespace osqbc::optics
