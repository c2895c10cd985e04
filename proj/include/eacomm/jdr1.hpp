#pragma once

#include <vector>

#include "eacomm/gaussian.hpp"
#include "eacomm/mathcore.hpp"

namespace eacomm {

// Code and receiver dimensions: m modes per symbol, code order l, k SFG
// stages with tap fraction 1/k.
struct JdrConfig {
  long m = 1;
  long l = 2;
  long k = 100;
  double kappa() const { return 1.0 / static_cast<double>(k); }
  void validate() const;
};

// Default code-order grid 2^1 .. 2^21.
std::vector<long> default_l_grid(int max_exponent = 21);

struct SfgStageValues {
  std::vector<double> alpha;  // per-stage mean-field magnitudes
  double mu;                  // (1 - kappa (1 + N_S'))^2
  double n_t;                 // kappa N_S N_S'
};

SfgStageValues stage_values(const ChannelParams& params, const JdrConfig& cfg);

struct ClickProbs {
  double p_c;  // click in the pulse-carrying block
  double p_b;  // click in a given other block
};

ClickProbs click_probs(const ChannelParams& params, const JdrConfig& cfg);
// Small-n_s, large-K approximations of the click probabilities.
ClickProbs click_probs_approx(const ChannelParams& params, const JdrConfig& cfg);

struct DmcProbs {
  double p_e;  // click only in the correct slot
  double p_d;  // click only in one given wrong slot
};

DmcProbs dmc_probs(double p_c, double p_b, long L);

struct PpmInfo {
  double bits;      // per L-slot block, divided by L
  bool degenerate;  // p_e = 0 with p_d > 0
};

// Mutual information of the L-input (L+1)-output PPM erasure channel.
PpmInfo ppm_mutual_info(double p_e, double p_d, long L);

// Exact JDR1 rate in bits per mode.
double jdr1_rate(const ChannelParams& params, const JdrConfig& cfg);

struct Envelope {
  long best_l;
  double best_rate;
};

// Maximum of jdr1_rate over l_grid (ties go to the smaller L).
Envelope envelope_over_l(const ChannelParams& params, long m, long k, const std::vector<long>& l_grid);
// Argmax of any rate-versus-L table with the same tie rule.
Envelope envelope_of(const std::vector<long>& l_grid, const std::vector<double>& rates);

struct PpmApproxParams {
  double eps;        // mean received signal photons per slot in the PPM picture
  double lam;        // dark click probability per slot, c * eps
  double c;
  double gamma_fac;  // 1 - exp(-2 (1 + (1-eta) N_B))
  double w, u, v;
};

PpmApproxParams ppm_approx_params(const ChannelParams& params, long m);

struct ApproxRate {
  double l;     // optimal (possibly non-integer) code order
  double rate;  // bits per mode
};

// Small-n_s expansion with the Lambert-W optimal order.
ApproxRate approx_rate_jarzyna(const ChannelParams& params, long m);
// Coherent-state PPM with dark clicks proportional to the signal; requires
// eps < 1/e.
ApproxRate approx_rate_wang_wornell(const ChannelParams& params, long m);

struct PpmSchemeRate {
  double rate;                    // identical to jdr1_rate
  double preshared_brightness;    // L n_s photons per pre-shared mode
  double entanglement_ratio;      // g(L n_s) / g(n_s)
};

// Direct PPM modulation of pre-shared pairs; induces the same channel as JDR1.
PpmSchemeRate ppm_scheme_rate(const ChannelParams& params, long m, long l, long k);

}  // namespace eacomm
