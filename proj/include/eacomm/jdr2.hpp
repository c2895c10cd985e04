#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "eacomm/gaussian.hpp"
#include "eacomm/jdr1.hpp"
#include "eacomm/mathcore.hpp"

namespace eacomm {

// Combining-splitter transmissivities gamma_1 .. gamma_{K-1} that merge the
// K sum-frequency mean fields into one mode.
std::vector<double> gamma_transmissivities(const ChannelParams& params, long k_stages);

// |alpha_0|^2 in the K -> infinity limit.
double alpha0_squared_limit(const ChannelParams& params, long m);
// |alpha_0|^2 = sum over the K stages of the per-stage mean photon numbers.
double alpha0_squared(const ChannelParams& params, long m, long k_stages);

// One step of the combined-thermal-noise recurrence: noise `n_prev` on the
// running output, per-stage noise `stage_noise`, combining splitter `gamma`.
double noise_recurrence_step(double n_prev, double stage_noise, double gamma);

// Thermal mean of the combined mode after K stages. The first stage carries
// kappa N_S N_S' unless `initial` overrides it.
double thermal_noise_recurrence(const ChannelParams& params, long k_stages,
                                std::optional<double> initial = std::nullopt);

struct Jdr2Values {
  std::vector<double> gammas;
  double alpha0;  // combined mean-field magnitude
  double n_t0;    // combined thermal mean
};

Jdr2Values jdr2_values(const ChannelParams& params, long m, long k_stages);

// Slice time t in [0, T] with T = 1, Kennedy nulling amplitude beta, code
// order l, and the Green Machine input state (alpha0, n_t0).
struct Jdr2IntegrandContext {
  double t = 0.0;
  double T = 1.0;
  double beta = 0.0;
  long l = 2;
  double n_t0 = 0.0;
  double alpha0 = 0.0;
  void validate() const;
  // Exact nulling beta = sqrt(L) alpha0.
  static Jdr2IntegrandContext exact_nulling(double t, long l, double alpha0, double n_t0);
};

// Density of the first click at time t in the pulse-carrying output
// (carrier = true) or in one given other output.
double first_click_density(const Jdr2IntegrandContext& ctx, bool carrier);

// Probability that the Kennedy stage decides "-" after a first click at time t.
// sign_in is the phase of the transmitted pulse; ignored off the carrier.
double kennedy_minus_probability(const Jdr2IntegrandContext& ctx, bool carrier, int sign_in);

// Probability of no click in any Green Machine output.
double erasure_probability(long l, double alpha0, double n_t0);

// The six independent transition probabilities plus the off-carrier "+"
// entry, each from its own quadrature.
struct TransitionEntries {
  long l = 2;
  double x11 = 0, x12 = 0, x21 = 0, x22 = 0;  // carrier: (+|+), (-|+), (+|-), (-|-)
  double x13 = 0, x14 = 0;                    // one other output: "+", "-"
  double erasure = 0;
  double x13_completion() const;  // x13 implied by row normalization
  double row_sum_plus() const;
  double row_sum_minus() const;
};

TransitionEntries transition_entries(long l, double alpha0, double n_t0, const Tolerance& tol = {});

struct TransitionMatrix {
  TransitionEntries entries;
  // Rows: 2L codewords (odd = plus word, even = minus word, 1-based). Columns:
  // 2L signed outcomes in the same order plus the erasure.
  Eigen::MatrixXd x;
};

TransitionMatrix transition_matrix(const ChannelParams& params, long m, long l, long k_stages,
                                   const Tolerance& tol = {});
TransitionMatrix assemble_transition_matrix(const TransitionEntries& e);

// Mutual information of the Reed-Muller channel in bits per codeword, plus
// words with total prior p_plus.
double mutual_info_rm(const TransitionEntries& e, double p_plus);
// Mutual information of a generic channel matrix (rows = inputs) in bits.
double dmc_mutual_information(const Eigen::MatrixXd& x, const std::vector<double>& priors);

struct RmRate {
  double rate;    // bits per mode
  double p_plus;  // optimal prior of the plus half
};

RmRate rate_rm_from_entries(const TransitionEntries& e, long m);
RmRate rate_rm(const ChannelParams& params, long m, long l, long k_stages);
// Hadamard code on the same receiver: minus words unused, L - 1 modes per word.
double rate_hadamard_variant(const ChannelParams& params, long m, long l, long k_stages);
double rate_hadamard_from_entries(const TransitionEntries& e, long m);

// Lossless noiseless coherent-state Reed-Muller code with Green Machine and
// Kennedy receiver: no thermal noise and |alpha_0|^2 = n_s.
double classical_rm_gm_kennedy_rate(double n_s, long l);

// Best rate_rm over l_grid (ties go to the smaller L).
Envelope envelope_rm(const ChannelParams& params, long m, long k_stages, const std::vector<long>& l_grid);

}  // namespace eacomm
