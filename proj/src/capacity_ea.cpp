#include "eacomm/capacity_ea.hpp"

#include <algorithm>
#include <cmath>

namespace eacomm {

namespace {
constexpr double kTwoModeBudget = 1e-3;
constexpr int kMaxTwoModeCutoff = 40;
}  // namespace

void EaModulation::validate() const {
  if (!(prior > 0 && prior <= 1)) throw DomainError("EaModulation: prior outside (0,1]");
}

double EaModulation::tmsv_brightness(double n_s) const {
  validate();
  return kind == EaModulationKind::TmsvOok ? n_s / prior : n_s;
}

FockDensity adaptive_two_mode_fock(const GaussianState& state, int cutoff, double budget) {
  if (state.n_modes() != 2) throw DomainError("adaptive_two_mode_fock: two-mode states only");
  int c = std::max(cutoff, 1);
  while (true) {
    FockDensity f = gaussian_to_fock(state, {c, c}, budget);
    if (f.truncation_budget < budget || c >= kMaxTwoModeCutoff) return f;
    c = std::min(kMaxTwoModeCutoff, c + 4);
  }
}

namespace {

CapacityReport two_state(const GaussianState& s0, const GaussianState& s1, double p1, int cutoff) {
  // Size the basis on the brighter state, then reuse its cutoff for both.
  const double b0 = s0.mean_photons(0) + s0.mean_photons(1);
  const double b1 = s1.mean_photons(0) + s1.mean_photons(1);
  const FockDensity first = adaptive_two_mode_fock(b1 >= b0 ? s1 : s0, cutoff, kTwoModeBudget);
  const int c = first.cutoffs[0];
  FockDensity other = gaussian_to_fock(b1 >= b0 ? s0 : s1, {c, c}, kTwoModeBudget);
  Ensemble ens;
  if (b1 >= b0) {
    ens.states = {other, first};
  } else {
    ens.states = {first, other};
  }
  ens.priors = {1 - p1, p1};
  CapacityReport r;
  r.value = std::max(0.0, holevo_information(ens, LogUnit::Bits));
  r.cutoff_used = c;
  r.truncation_warning = first.truncation_warning || other.truncation_warning;
  return r;
}

}  // namespace

CapacityReport ea_bpsk_tmsv_capacity(const ChannelParams& p, int cutoff) {
  p.validate();
  CapacityReport r = two_state(received_ri_state(0.0, p), received_ri_state(M_PI, p), 0.5, cutoff);
  r.optimal_prior = 0.5;
  return r;
}

double ea_ook_min_prior(double n_s) { return std::clamp(n_s / 2, 1e-6, 1.0); }

CapacityReport ea_ook_tmsv_at(const ChannelParams& p, double prior, int cutoff) {
  p.validate();
  if (!(prior > 0 && prior <= 1)) throw DomainError("ea_ook: prior outside (0,1]");
  const double bright = p.n_s / prior;
  const GaussianState off = tensor(GaussianState::thermal(p.n_noise()), GaussianState::thermal(bright));
  const GaussianState on = received_ri_state(0.0, {p.eta, bright, p.n_b});
  CapacityReport r = two_state(off, on, prior, cutoff);
  r.optimal_prior = prior;
  return r;
}

CapacityReport ea_ook_tmsv_capacity(const ChannelParams& p, int cutoff) {
  p.validate();
  if (p.n_s == 0) {
    CapacityReport r;
    r.optimal_prior = 1.0;
    return r;
  }
  const double pmin = ea_ook_min_prior(p.n_s);
  if (pmin >= 1) return ea_ook_tmsv_at(p, 1.0, cutoff);
  bool warn = false;
  int cut = cutoff;
  Tolerance tol;
  tol.abs_tol = 1e-8;
  const Maximum m = maximize_scalar(
      [&](double u) {
        const CapacityReport at = ea_ook_tmsv_at(p, std::exp(u), cutoff);
        warn = warn || at.truncation_warning;
        cut = std::max(cut, at.cutoff_used);
        return at.value;
      },
      std::log(pmin), 0.0, tol);
  CapacityReport r;
  r.value = m.value;
  r.optimal_prior = std::exp(m.argmax);
  r.truncation_warning = warn;
  r.cutoff_used = cut;
  return r;
}

double entanglement_consumption(const EaModulation& mod, double n_s) {
  if (!(n_s >= 0)) throw DomainError("entanglement_consumption: negative n_s");
  return g_entropy(mod.tmsv_brightness(n_s));
}

double log_inverse_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw DomainError("log_inverse_slope: need two or more points");
  const double n = static_cast<double>(x.size());
  double su = 0, sy = 0, suu = 0, suy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0)) throw DomainError("log_inverse_slope: x must be positive");
    const double u = -std::log(x[i]);
    su += u;
    sy += y[i];
    suu += u * u;
    suy += u * y[i];
  }
  const double den = n * suu - su * su;
  if (den == 0) throw DomainError("log_inverse_slope: degenerate abscissae");
  return (n * suy - su * sy) / den;
}

}  // namespace eacomm
