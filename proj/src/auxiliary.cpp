#include "eacomm/auxiliary.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include <boost/math/special_functions/beta.hpp>

#include "eacomm/capacity_classical.hpp"

namespace eacomm {

void OpaParams::validate() const {
  channel.validate();
  if (!(gain > 1)) throw DomainError("OpaParams: gain must exceed 1");
  if (!(prior >= 0 && prior <= 1)) throw DomainError("OpaParams: prior outside [0,1]");
  if (m < 1) throw DomainError("OpaParams: m must be positive");
  if (!(mean_photons(0.0) >= 0 && mean_photons(M_PI) >= 0)) {
    throw DomainError("OpaParams: negative mean photon number");
  }
}

double OpaParams::coupling() const { return std::sqrt(channel.eta * channel.n_s * (channel.n_s + 1)); }

double OpaParams::shifted_n_s_prime() const { return channel.n_s_prime() + 1; }

double OpaParams::shifted_n_b() const { return 1 + channel.n_noise(); }

double OpaParams::mean_photons(double theta) const {
  return gain * channel.n_s + (gain - 1) * shifted_n_s_prime() +
         2 * coupling() * std::sqrt(gain * (gain - 1)) * std::cos(theta);
}

namespace {

double log_count_prob(long k, double n, long m) {
  const double md = double(m), kd = double(k);
  double lp = -md * std::log1p(n) + std::lgamma(kd + md) - std::lgamma(kd + 1) - std::lgamma(md);
  if (k > 0) lp += n > 0 ? kd * std::log(n / (1 + n)) : -INFINITY;
  return lp;
}

}  // namespace

double opa_photon_count_prob(long k, double theta, const OpaParams& opa) {
  opa.validate();
  if (k < 0) throw DomainError("opa_photon_count_prob: negative count");
  return std::exp(log_count_prob(k, opa.mean_photons(theta), opa.m));
}

long opa_default_k_max(const OpaParams& opa) {
  opa.validate();
  const double n = std::max(opa.mean_photons(0.0), opa.mean_photons(M_PI));
  const double mean = double(opa.m) * n;
  return static_cast<long>(std::ceil(mean + 40 * std::sqrt(mean * (1 + n)) + 200));
}

double opa_exact_mutual_info(const OpaParams& opa, std::optional<long> k_max, LogUnit unit) {
  opa.validate();
  const long kmax = k_max.value_or(opa_default_k_max(opa));
  if (kmax < 0) throw DomainError("opa_exact_mutual_info: negative k_max");
  const double n0 = opa.mean_photons(0.0), n1 = opa.mean_photons(M_PI);
  const double q = opa.prior;
  double info = 0;
  for (long k = 0; k <= kmax; ++k) {
    const double p0 = std::exp(log_count_prob(k, n0, opa.m));
    const double p1 = std::exp(log_count_prob(k, n1, opa.m));
    const double py = q * p0 + (1 - q) * p1;
    if (py <= 0) continue;
    if (p0 > 0 && q > 0) info += q * p0 * std::log(p0 / py);
    if (p1 > 0 && q < 1) info += (1 - q) * p1 * std::log(p1 / py);
  }
  // P(count > kmax) = I_{1-p}(kmax + 1, m) with success probability p = 1/(1 + n).
  auto tail_of = [&](double n) {
    return n > 0 ? boost::math::ibeta(double(kmax + 1), double(opa.m), n / (1 + n)) : 0.0;
  };
  const double tail = std::max(tail_of(n0), tail_of(n1));
  if (tail > 1e-12) {
    std::ostringstream msg;
    msg << "opa_exact_mutual_info: k_max too small, tail mass " << std::scientific << tail;
    throw NumericalError(msg.str(),
                         from_nats(info, unit));
  }
  return from_nats(std::max(info, 0.0), unit);
}

double opa_ea_capacity_leading(const ChannelParams& p, double gain, LogUnit unit) {
  p.validate();
  if (!(gain > 1)) throw DomainError("opa_ea_capacity_leading: gain must exceed 1");
  const double nb_shift = 1 + p.n_noise();
  const double nats = 2 * p.eta * gain * p.n_s / (nb_shift * (gain + (gain - 1) * p.n_noise()));
  return from_nats(nats, unit);
}

double opa_gain_ratio(const OpaParams& opa) {
  const double c = holevo_capacity(opa.channel).value;
  if (!(c > 0)) throw DomainError("opa_gain_ratio: zero Holevo capacity");
  return opa_exact_mutual_info(opa, std::nullopt, LogUnit::Bits) / (double(opa.m) * c);
}

long VonNullingScenario::matched_slots() const {
  long n = 0;
  for (std::size_t i = 0; i < codeword.size(); ++i) n += codeword[i] == nulling[i];
  return n;
}

void VonNullingScenario::validate() const {
  if (codeword.empty() || codeword.size() != nulling.size()) {
    throw DomainError("VonNullingScenario: codeword and nulling lengths differ or are zero");
  }
  auto sign = [](int v) { return v == 1 || v == -1; };
  if (!std::all_of(codeword.begin(), codeword.end(), sign) || !std::all_of(nulling.begin(), nulling.end(), sign)) {
    throw DomainError("VonNullingScenario: entries must be +1 or -1");
  }
  if (!(alpha0 >= 0 && n_t0 >= 0)) throw DomainError("VonNullingScenario: negative amplitude or noise");
  if (stage_alphas.empty()) throw DomainError("VonNullingScenario: no stages");
}

VonNullingScenario make_von_scenario(std::vector<int> codeword, std::vector<int> nulling, double alpha1_sq,
                                     double ratio, long k_stages, double n_t0) {
  if (k_stages < 1) throw DomainError("make_von_scenario: k_stages must be positive");
  if (!(alpha1_sq >= 0 && ratio >= 0)) throw DomainError("make_von_scenario: negative stage parameters");
  VonNullingScenario s;
  s.codeword = std::move(codeword);
  s.nulling = std::move(nulling);
  s.n_t0 = n_t0;
  double a2 = alpha1_sq, sum = 0;
  for (long k = 0; k < k_stages; ++k) {
    s.stage_alphas.push_back(std::sqrt(a2));
    sum += a2;
    a2 *= ratio;
  }
  s.alpha0 = std::sqrt(sum);
  s.validate();
  return s;
}

VonNullingScenario make_von_scenario(std::vector<int> codeword, std::vector<int> nulling,
                                     const ChannelParams& p, long m, long k_stages, double n_t0) {
  p.validate();
  if (m < 1 || k_stages < 1) throw DomainError("make_von_scenario: m and k_stages must be positive");
  const double kd = double(k_stages);
  const double base = 1 - (1 + p.n_s_prime()) / kd;
  return make_von_scenario(std::move(codeword), std::move(nulling), double(m) * p.eta * p.n_s * (1 + p.n_s) / kd,
                           base * base, k_stages, n_t0);
}

double von_true_vacuum_prob(const VonNullingScenario& s) {
  s.validate();
  double stages = 1;
  for (double a : s.stage_alphas) stages *= vacuum_probability(0.0, 4 * a * a);
  const double unmatched = vacuum_probability(0.0, s.n_t0);
  const double matched = stages * vacuum_probability(2 * s.alpha0, s.n_t0);
  const long lm = s.matched_slots();
  return std::pow(matched, double(lm)) * std::pow(unmatched, double(s.l() - lm));
}

double von_effective_vacuum_prob(const VonNullingScenario& s) {
  s.validate();
  const double matched = vacuum_probability(2 * std::sqrt(2.0) * s.alpha0, s.n_t0);
  const double unmatched = vacuum_probability(0.0, s.n_t0);
  const long lm = s.matched_slots();
  return std::pow(matched, double(lm)) * std::pow(unmatched, double(s.l() - lm));
}

}  // namespace eacomm
