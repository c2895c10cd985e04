#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "eacomm/mathcore.hpp"

namespace eacomm {

// Lossy thermal-noise bosonic channel: transmissivity eta, mean transmitted
// photons per mode n_s, mean environment photons per mode n_b.
struct ChannelParams {
  double eta = 1.0;
  double n_s = 0.0;
  double n_b = 0.0;

  // Mean received photons per mode.
  double n_s_prime() const { return eta * n_s + (1 - eta) * n_b; }
  // Mean thermal photons added by the channel.
  double n_noise() const { return (1 - eta) * n_b; }
  void validate() const;
};

// n-mode Gaussian state. Quadratures are ordered (q1, p1, q2, p2, ...) with
// a = (q + i p)/sqrt(2), so the vacuum covariance is I/2.
class GaussianState {
 public:
  GaussianState(Eigen::VectorXd mean, Eigen::MatrixXd cov);

  static GaussianState vacuum(int n_modes);
  static GaussianState thermal(double nbar);
  static GaussianState coherent(std::complex<double> alpha);
  static GaussianState displaced_thermal(std::complex<double> alpha, double nbar);

  int n_modes() const { return static_cast<int>(mean_.size() / 2); }
  const Eigen::VectorXd& mean() const { return mean_; }
  const Eigen::MatrixXd& cov() const { return cov_; }

  // Smallest eigenvalue of cov + (i/2) Omega.
  double physicality_margin() const;
  bool is_physical(double tol = 1e-10) const;

  std::complex<double> mean_field(int mode) const;
  // <a_j a_k> and <a_j^dag a_k> including the mean-field contributions.
  std::complex<double> moment_aa(int j, int k) const;
  std::complex<double> moment_adag_a(int j, int k) const;
  // Same moments of the fluctuations only.
  std::complex<double> central_aa(int j, int k) const;
  std::complex<double> central_adag_a(int j, int k) const;
  double mean_photons(int mode) const { return moment_adag_a(mode, mode).real(); }

  // Symplectic transform x -> S x (+ d).
  GaussianState transformed(const Eigen::MatrixXd& s) const;

 private:
  void check_mode(int m) const;
  Eigen::VectorXd mean_;
  Eigen::MatrixXd cov_;
};

Eigen::MatrixXd symplectic_form(int n_modes);

// Product state a (x) b with a's modes first.
GaussianState tensor(const GaussianState& a, const GaussianState& b);
// Keep the listed modes in the listed order (reduction and permutation).
GaussianState select_modes(const GaussianState& s, const std::vector<int>& modes);

GaussianState tmsv(double nbar);

// a -> sqrt(t) a + sqrt(1-t) b, b -> -sqrt(1-t) a + sqrt(t) b.
GaussianState apply_beamsplitter(const GaussianState& s, int mode_a, int mode_b,
                                 double transmissivity);
// a -> sqrt(1+r^2) a + r b^dag, b -> sqrt(1+r^2) b + r a^dag.
GaussianState apply_two_mode_squeezer(const GaussianState& s, int mode_a, int mode_b, double r);
// a -> exp(-i theta) a, the Heisenberg action of exp(i theta a^dag a).
GaussianState apply_phase(const GaussianState& s, int mode, double theta);
// a -> sqrt(eta) a + sqrt(1-eta) e with e thermal of mean n_b.
GaussianState apply_lossy_thermal_channel(const GaussianState& s, int mode,
                                          const ChannelParams& params);

// Received mode (0) and idler (1) after phase theta on the signal arm of a
// TMSV with mean n_s and transmission through the channel.
GaussianState received_ri_state(double theta, const ChannelParams& params);

// Tapped signal (0), through signal (1) and idler (2) at the receiver input,
// filled in from the closed-form covariance entries.
GaussianState receiver_input_three_mode(const ChannelParams& params, double theta, double kappa);
// Same state built by composing received_ri_state with a kappa tap.
GaussianState receiver_input_three_mode_composed(const ChannelParams& params, double theta,
                                                 double kappa);

std::vector<double> symplectic_eigenvalues(const GaussianState& s);
double gaussian_entropy(const GaussianState& s, LogUnit unit = LogUnit::Bits);

struct SandwichConfig {
  double r = 0.0;
  double kappa = 0.1;
  double theta = 0.0;
  void validate() const;
};

struct SandwichMoments {
  double xi;  // effective squeezer coefficient magnitude with sign
  double noise_photons, noise_photons_leading;                  // <e^dag e>
  std::complex<double> idler_corr;                               // <a_S2 a_I>
  double idler_corr_leading;
  std::complex<double> signal_corr;                              // <a_S2^dag a_S1>
  double signal_corr_leading;
  double noise_photons_diff, idler_corr_diff, signal_corr_diff;  // absolute deviations
};

// Effective squeezer coefficient xi_{theta,r}.
double sandwich_xi(const ChannelParams& params, const SandwichConfig& cfg);

// Gaussian state after the squeezer-sandwiched effective SFG stage.
// Modes: 0 = recombined signal, 1 = idler, 2 = noise port e.
GaussianState sandwiched_sie_state(const ChannelParams& params, const SandwichConfig& cfg);

SandwichMoments sandwiched_sfg_moments(const ChannelParams& params, const SandwichConfig& cfg);

}  // namespace eacomm
