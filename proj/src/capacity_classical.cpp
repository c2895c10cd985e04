#include "eacomm/capacity_classical.hpp"

#include <algorithm>
#include <cmath>

#include "eacomm/fock.hpp"

namespace eacomm {

namespace {

constexpr double kFockBudget = 1e-4;
constexpr int kMaxCutoff = 400;

bool is_power_of_two(long l) { return l >= 2 && (l & (l - 1)) == 0; }

// Cutoff at which the given single-mode state keeps all but `budget` of its
// trace.
int cutoff_for(const GaussianState& s, int start, double budget) {
  int c = std::max(start, 1);
  while (true) {
    const FockDensity f = gaussian_to_fock(s, {c});
    if (1 - f.trace() < budget || c >= kMaxCutoff) return c;
    c = std::min(kMaxCutoff, c + std::max(5, c / 2));
  }
}

CapacityReport two_state_holevo(const GaussianState& s0, const GaussianState& s1, double p1,
                                int cutoff) {
  const int c = std::max(cutoff_for(s0, cutoff, kFockBudget), cutoff_for(s1, cutoff, kFockBudget));
  Ensemble ens;
  ens.states = {gaussian_to_fock(s0, {c}), gaussian_to_fock(s1, {c})};
  ens.priors = {1 - p1, p1};
  CapacityReport r;
  r.value = std::max(0.0, holevo_information(ens, LogUnit::Bits));
  r.cutoff_used = c;
  r.truncation_warning = ens.states[0].truncation_budget > kFockBudget ||
                         ens.states[1].truncation_budget > kFockBudget;
  return r;
}

}  // namespace

CapacityReport holevo_capacity(const ChannelParams& p) {
  p.validate();
  CapacityReport r;
  r.value = std::max(0.0, g_entropy_difference(p.n_noise(), p.n_s_prime() - p.n_noise()));
  if (p.n_noise() > 0) r.expansion_residual = r.value - holevo_capacity_small_ns(p);
  return r;
}

double holevo_capacity_small_ns(const ChannelParams& p) {
  p.validate();
  const double x = p.n_noise();
  if (x == 0) throw DomainError("holevo_capacity_small_ns: needs thermal noise");
  return p.eta * p.n_s * std::log2(1 + 1 / x);
}

CapacityReport ea_capacity(const ChannelParams& p) {
  p.validate();
  const double ns = p.n_s, nsp = p.n_s_prime();
  const double d2 = (ns + nsp + 1) * (ns + nsp + 1) - 4 * p.eta * ns * (ns + 1);
  const double d = std::sqrt(std::max(d2, 1.0));
  const double ap = std::max(0.0, (d - 1 + (nsp - ns)) / 2);
  const double am = std::max(0.0, (d - 1 - (nsp - ns)) / 2);
  CapacityReport r;
  r.value = std::max(0.0, g_entropy(ns) + g_entropy(nsp) - g_entropy(ap) - g_entropy(am));
  return r;
}

double ce_over_c_limit(const ChannelParams& p) {
  p.validate();
  if (!(p.eta < 1)) throw DomainError("ce_over_c_limit: needs eta < 1");
  const double x = p.n_noise();
  if (x == 0) return 0.0;
  return 1 / ((1 + x) * std::log1p(1 / x));
}

int adaptive_cutoff_for(const GaussianState& s, int start, double budget) {
  if (s.n_modes() != 1) throw DomainError("adaptive_cutoff_for: single-mode states only");
  return cutoff_for(s, start, budget);
}

CapacityReport bpsk_holevo(const ChannelParams& p, int cutoff) {
  p.validate();
  if (p.eta == 1 && p.n_b == 0) {
    CapacityReport r;
    r.value = binary_entropy((1 + std::exp(-2 * p.n_s)) / 2);
    r.optimal_prior = 0.5;
    if (p.n_s > 0) r.expansion_residual = r.value - from_nats(bpsk_holevo_small_ns_nats(p.n_s), LogUnit::Bits);
    return r;
  }
  return bpsk_holevo_fock(p, cutoff);
}

CapacityReport bpsk_holevo_fock(const ChannelParams& p, int cutoff) {
  p.validate();
  const double amp = std::sqrt(p.eta * p.n_s);
  CapacityReport r = two_state_holevo(GaussianState::displaced_thermal(amp, p.n_noise()),
                                      GaussianState::displaced_thermal(-amp, p.n_noise()), 0.5, cutoff);
  r.optimal_prior = 0.5;
  return r;
}

double bpsk_holevo_small_ns_nats(double n) {
  if (!(n > 0)) throw DomainError("expansion needs n_s > 0");
  return -n * std::log(n) + n + n * n * std::log(n);
}

double ook_holevo_noiseless_at(double n_s, double p) {
  if (!(p > 0 && p <= 1)) throw DomainError("ook: prior outside (0,1]");
  if (!(n_s >= 0)) throw DomainError("ook: negative n_s");
  const double root = std::sqrt((1 - 2 * p) * (1 - 2 * p) + 4 * std::exp(-n_s / p) * p * (1 - p));
  return binary_entropy(std::clamp(0.5 * (1 - root), 0.0, 1.0));
}

CapacityReport ook_holevo_fock_at(const ChannelParams& p, double prior, int cutoff) {
  p.validate();
  if (!(prior > 0 && prior <= 1)) throw DomainError("ook: prior outside (0,1]");
  const double amp = std::sqrt(p.eta * p.n_s / prior);
  CapacityReport r = two_state_holevo(GaussianState::thermal(p.n_noise()),
                                      GaussianState::displaced_thermal(amp, p.n_noise()), prior, cutoff);
  r.optimal_prior = prior;
  return r;
}

double ook_holevo_small_ns_nats(double n) {
  if (!(n > 0)) throw DomainError("expansion needs n_s > 0");
  return -n * std::log(n) + n + std::sqrt(2.0) * std::pow(n, 1.5) * std::log(n);
}

double ook_min_prior(const ChannelParams& p) {
  return std::clamp(p.eta * p.n_s / 25, 1e-6, 1.0);
}

CapacityReport ook_holevo(const ChannelParams& p, int cutoff) {
  p.validate();
  CapacityReport r;
  if (p.n_s == 0) {
    r.value = 0;
    r.optimal_prior = 1.0;
    return r;
  }
  const bool noiseless = p.eta == 1 && p.n_b == 0;
  const double pmin = noiseless ? 1e-6 : ook_min_prior(p);
  if (pmin >= 1) return ook_holevo_fock_at(p, 1.0, cutoff);
  Tolerance tol;
  tol.abs_tol = 1e-8;
  if (noiseless) {
    const Maximum m = maximize_scalar(
        [&](double u) { return ook_holevo_noiseless_at(p.n_s, std::exp(u)); }, std::log(pmin), 0.0, tol);
    r.value = m.value;
    r.optimal_prior = std::exp(m.argmax);
    r.expansion_residual = r.value - from_nats(ook_holevo_small_ns_nats(p.n_s), LogUnit::Bits);
    return r;
  }
  bool warn = false;
  int cut = cutoff;
  const Maximum m = maximize_scalar(
      [&](double u) {
        const CapacityReport at = ook_holevo_fock_at(p, std::exp(u), cutoff);
        warn = warn || at.truncation_warning;
        cut = std::max(cut, at.cutoff_used);
        return at.value;
      },
      std::log(pmin), 0.0, tol);
  r.value = m.value;
  r.optimal_prior = std::exp(m.argmax);
  r.truncation_warning = warn;
  r.cutoff_used = cut;
  return r;
}

double helstrom_error_probability(double n_s) {
  if (!(n_s >= 0)) throw DomainError("helstrom: negative n_s");
  return 0.5 * (1 - std::sqrt(-std::expm1(-4 * n_s)));
}

CapacityReport helstrom_bpsk_c1(double n_s) {
  CapacityReport r;
  const double q = helstrom_error_probability(n_s);
  r.value = std::max(0.0, 1 - binary_entropy(q));
  r.optimal_prior = 0.5;
  return r;
}

double hadamard_gm_classical_rate(double n_s, long L) {
  if (!(n_s >= 0)) throw DomainError("hadamard_gm: negative n_s");
  if (!is_power_of_two(L)) throw DomainError("hadamard_gm: L must be a power of two");
  const double pe = std::exp(-double(L) * n_s);
  return (1 - pe) * std::log2(double(L)) / double(L);
}

double pie(double capacity_bits_per_mode, double n_s) {
  if (!(n_s > 0)) throw DomainError("pie: n_s must be positive");
  return capacity_bits_per_mode / n_s;
}

}  // namespace eacomm
