#pragma once

#include <vector>

#include "eacomm/capacity_classical.hpp"
#include "eacomm/fock.hpp"
#include "eacomm/gaussian.hpp"

namespace eacomm {

enum class EaModulationKind { TmsvBpsk, TmsvOok };

struct EaModulation {
  EaModulationKind kind = EaModulationKind::TmsvBpsk;
  double prior = 0.5;  // BPSK: prior of theta = 0; OOK: on-prior
  void validate() const;
  // Mean photon number of the pre-shared TMSV for average signal brightness n_s.
  double tmsv_brightness(double n_s) const;
};

// Two-mode (received, idler) Fock representation with the cutoff raised from
// `cutoff` until the truncation budget is below `budget`.
FockDensity adaptive_two_mode_fock(const GaussianState& state, int cutoff, double budget = 1e-3);

// Holevo information of the equiprobable {0, pi} phase-modulated TMSV ensemble
// at the channel output, in bits per mode.
CapacityReport ea_bpsk_tmsv_capacity(const ChannelParams& params, int cutoff = 12);

// Two-state Holevo information of TMSV on-off keying at on-prior p.
CapacityReport ea_ook_tmsv_at(const ChannelParams& params, double prior, int cutoff = 12);
// Maximized over the on-prior.
CapacityReport ea_ook_tmsv_capacity(const ChannelParams& params, int cutoff = 12);
// Smallest on-prior searched: pre-shared TMSV brightness at most 2 photons.
double ea_ook_min_prior(double n_s);

// Entanglement spent per mode, in ebits.
double entanglement_consumption(const EaModulation& mod, double n_s);

// Least-squares slope of y against ln(1/x).
double log_inverse_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace eacomm
