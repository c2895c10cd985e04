#pragma once

#include <optional>

#include "eacomm/gaussian.hpp"
#include "eacomm/mathcore.hpp"

namespace eacomm {

struct CapacityReport {
  double value = 0.0;  // per mode, in `unit`
  LogUnit unit = LogUnit::Bits;
  std::optional<double> optimal_prior;
  std::optional<double> expansion_residual;  // value minus its small-n_s expansion
  bool truncation_warning = false;
  int cutoff_used = 0;  // Fock cutoff of Fock-backed results, 0 otherwise
};

// Holevo capacity g(N_S') - g((1-eta) N_B).
CapacityReport holevo_capacity(const ChannelParams& params);
// Leading small-n_s term eta n_s log2(1 + 1/((1-eta) N_B)), in bits.
double holevo_capacity_small_ns(const ChannelParams& params);

// Entanglement-assisted capacity.
CapacityReport ea_capacity(const ChannelParams& params);

// Limit of C_E / (C ln(1/n_s)) as n_s -> 0.
double ce_over_c_limit(const ChannelParams& params);

// Cutoff, raised from `start_cutoff`, at which a single-mode state keeps all
// but `budget` of its trace.
int adaptive_cutoff_for(const GaussianState& single_mode, int start_cutoff, double budget);

// BPSK Holevo quantity with equal priors. Closed form when eta = 1 and N_B = 0,
// Fock diagonalization otherwise.
CapacityReport bpsk_holevo(const ChannelParams& params, int cutoff = 25);
// Always evaluated in the Fock basis, with the cutoff raised until the
// truncation budget is below 1e-4.
CapacityReport bpsk_holevo_fock(const ChannelParams& params, int cutoff = 25);
// -n ln n + n + n^2 ln n, in nats.
double bpsk_holevo_small_ns_nats(double n_s);

// OOK Holevo capacity maximized over the on-prior.
CapacityReport ook_holevo(const ChannelParams& params, int cutoff = 25);
// Noiseless two-state Holevo quantity at on-prior p, in bits.
double ook_holevo_noiseless_at(double n_s, double p);
// Noisy two-state Holevo quantity at on-prior p via Fock diagonalization.
CapacityReport ook_holevo_fock_at(const ChannelParams& params, double p, int cutoff = 25);
// -n ln n + n + sqrt(2) n^{3/2} ln n, in nats.
double ook_holevo_small_ns_nats(double n_s);
// Smallest on-prior searched for noisy OOK: on-pulses carry at most 25 received
// signal photons.
double ook_min_prior(const ChannelParams& params);

// Helstrom-limited BPSK symbol-by-symbol capacity 1 - h2(q).
CapacityReport helstrom_bpsk_c1(double n_s);
double helstrom_error_probability(double n_s);

// Hadamard code with the Green Machine and direct detection, lossless and
// noiseless: (1 - exp(-L n_s)) log2(L) / L bits per mode.
double hadamard_gm_classical_rate(double n_s, long L);

// Photon information efficiency: capacity per transmitted photon.
double pie(double capacity_bits_per_mode, double n_s);

}  // namespace eacomm
