#pragma once

#include <optional>
#include <vector>

#include "eacomm/gaussian.hpp"
#include "eacomm/mathcore.hpp"

namespace eacomm {

// Binary phase modulation of TMSV signals read out by an optical parametric
// amplifier followed by a photon counter over blocks of m modes.
struct OpaParams {
  ChannelParams channel;
  double gain = 1.01;
  double prior = 0.5;  // probability of theta = 0
  long m = 1;

  void validate() const;
  // sqrt(eta N_S (N_S + 1)).
  double coupling() const;
  // eta N_S + (1 - eta) N_B + 1; differs from ChannelParams::n_s_prime by +1.
  double shifted_n_s_prime() const;
  // 1 + (1 - eta) N_B.
  double shifted_n_b() const;
  // Mean photons per mode at the counter for phase theta.
  double mean_photons(double theta) const;
};

// P(k | theta) for the total count over the block (negative binomial).
double opa_photon_count_prob(long k, double theta, const OpaParams& opa);

// Count cutoff with tail mass far below 1e-12 for both phases.
long opa_default_k_max(const OpaParams& opa);

// Mutual information between theta in {0, pi} and the block count.
double opa_exact_mutual_info(const OpaParams& opa, std::optional<long> k_max = std::nullopt,
                             LogUnit unit = LogUnit::Bits);

// Small-N_S leading-order capacity per mode.
double opa_ea_capacity_leading(const ChannelParams& params, double gain, LogUnit unit = LogUnit::Bits);

// opa_exact_mutual_info / (m * holevo capacity).
double opa_gain_ratio(const OpaParams& opa);

// Green Machine outputs of an L-slot BPSK codeword b after nulling with
// codeword c, fed by K sum-frequency stages.
struct VonNullingScenario {
  std::vector<int> codeword;  // b, entries +-1
  std::vector<int> nulling;   // c, entries +-1
  double alpha0 = 0.0;
  double n_t0 = 0.0;
  std::vector<double> stage_alphas;  // alpha_1 .. alpha_K
  long k_stages() const { return static_cast<long>(stage_alphas.size()); }
  long l() const { return static_cast<long>(codeword.size()); }
  long matched_slots() const;
  void validate() const;
};

// Stage amplitudes alpha_k^2 = alpha1_sq * ratio^(k-1) for k = 1..K and
// alpha0^2 = sum_k alpha_k^2.
VonNullingScenario make_von_scenario(std::vector<int> codeword, std::vector<int> nulling, double alpha1_sq,
                                     double ratio, long k_stages, double n_t0);
// Same, with alpha1_sq = m eta N_S (1 + N_S)/K and ratio (1 - (1 + N_S')/K)^2.
VonNullingScenario make_von_scenario(std::vector<int> codeword, std::vector<int> nulling,
                                     const ChannelParams& params, long m, long k_stages, double n_t0);

// Vacuum probability with every stage kept separately (q-Pochhammer form).
double von_true_vacuum_prob(const VonNullingScenario& s);
// Vacuum probability of the nulled effective codeword with amplitude 2 sqrt(2) alpha0.
double von_effective_vacuum_prob(const VonNullingScenario& s);

}  // namespace eacomm
