#include "osqbc/optics.hpp"

#include <cmath>
#include <numbers>
#include <set>
#include <stdexcept>

namespace osqbc::optics {

namespace {
constexpr double kInvSqrt2 = std::numbers::sqrt2 / 2.0;
}

double PhotonState::norm2() const {
  double total = std::norm(vacuum);
  for (const auto& [mode, amp] : amplitudes) total += std::norm(amp);
  return total;
}

Amplitude PhotonState::amplitude(const ModeLabel& mode) const {
  auto it = amplitudes.find(mode);
  return it == amplitudes.end() ? Amplitude{0.0} : it->second;
}

PhotonState vacuum_state() {
  PhotonState s;
  s.vacuum = 1.0;
  return s;
}

PhotonState encode_qubit(int bit, int slot) {
  PhotonState s;
  s.amplitudes[{ModeKind::channel_a, slot}] = kInvSqrt2;
  s.amplitudes[{ModeKind::channel_b, slot}] = (bit ? -kInvSqrt2 : kInvSqrt2);
  return s;
}

Amplitude inner_product(const PhotonState& x, const PhotonState& y) {
  Amplitude acc = std::conj(x.vacuum) * y.vacuum;
  for (const auto& [mode, amp] : x.amplitudes) acc += std::conj(amp) * y.amplitude(mode);
  return acc;
}

PhotonState beam_splitter(const PhotonState& state, const ModeLabel& in1, const ModeLabel& in2,
                          const ModeLabel& out1, const ModeLabel& out2) {
  if (in1 == in2 || out1 == out2)
    throw std::invalid_argument("beam_splitter: coincident mode labels");
  PhotonState out = state;
  Amplitude a1 = out.amplitude(in1);
  Amplitude a2 = out.amplitude(in2);
  out.amplitudes.erase(in1);
  out.amplitudes.erase(in2);
  if (out.amplitudes.count(out1) || out.amplitudes.count(out2))
    throw std::invalid_argument("beam_splitter: output mode already occupied");
  out.amplitudes[out1] = (a1 + a2) * kInvSqrt2;
  out.amplitudes[out2] = (a1 - a2) * kInvSqrt2;
  return out;
}

PhotonState phase_shift(const PhotonState& state, const ModeLabel& mode, double phi) {
  PhotonState out = state;
  auto it = out.amplitudes.find(mode);
  if (it != out.amplitudes.end()) it->second *= std::polar(1.0, phi);
  return out;
}

DetectionDistribution mz_measure(const PhotonState& state) {
  if (std::abs(state.norm2() - 1.0) > kNormTolerance)
    throw std::invalid_argument("mz_measure: state is not normalized");
  DetectionDistribution dist;
  dist.p_no_click = std::norm(state.vacuum);
  // Gather the slots carrying channel amplitude; the A packet of slot t is
  // delayed by tau so it meets the B packet of the same slot at the splitter.
  std::set<int> slots;
  for (const auto& [mode, amp] : state.amplitudes) {
    switch (mode.kind) {
      case ModeKind::channel_a:
      case ModeKind::channel_b:
        slots.insert(mode.slot);
        break;
      default:
        dist.p_no_click += std::norm(amp);
        break;
    }
  }
  for (int t : slots) {
    Amplitude a = state.amplitude({ModeKind::channel_a, t});
    Amplitude b = state.amplitude({ModeKind::channel_b, t});
    dist.p_d0 += std::norm((a + b) * kInvSqrt2);
    dist.p_d1 += std::norm((a - b) * kInvSqrt2);
  }
  // Exact unit total: fold rounding residue into the largest entry.
  double sum = dist.p_d0 + dist.p_d1 + dist.p_no_click;
  double* largest = &dist.p_no_click;
  if (dist.p_d0 >= *largest) largest = &dist.p_d0;
  if (dist.p_d1 >= *largest) largest = &dist.p_d1;
  *largest += 1.0 - sum;
  return dist;
}

Detection sample_detection(const DetectionDistribution& dist, Rng& rng) {
  double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  if (u < dist.p_d0) return Detection::d0;
  if (u < dist.p_d0 + dist.p_d1) return Detection::d1;
  return Detection::no_click;
}

Detection sample_detection(const PhotonState& state, Rng& rng) {
  return sample_detection(mz_measure(state), rng);
}

PhotonState apply_channel_noise(const PhotonState& state, double eps_dephase, double eps_loss,
                                Rng& rng) {
  if (eps_dephase < 0.0 || eps_dephase > 1.0 || eps_loss < 0.0 || eps_loss > 1.0)
    throw std::invalid_argument("apply_channel_noise: probability out of range");
  PhotonState out = state;
  if (flip(rng, eps_dephase)) {
    for (auto& [mode, amp] : out.amplitudes)
      if (mode.kind == ModeKind::channel_b) amp = -amp;
  }
  if (flip(rng, eps_loss)) {
    double lost = 0.0;
    for (auto it = out.amplitudes.begin(); it != out.amplitudes.end();) {
      if (it->first.kind == ModeKind::channel_a || it->first.kind == ModeKind::channel_b) {
        lost += std::norm(it->second);
        it = out.amplitudes.erase(it);
      } else {
        ++it;
      }
    }
    // Photon absorbed: the channel weight reappears as vacuum.
    double v = std::norm(out.vacuum) + lost;
    out.vacuum = std::sqrt(v);
  }
  return out;
}

}  // namespace osqbc::optics
