#include "eacomm/jdr1.hpp"

#include <algorithm>
#include <cmath>

namespace eacomm {

void JdrConfig::validate() const {
  if (m < 1) throw DomainError("JdrConfig: m must be positive");
  if (l < 2) throw DomainError("JdrConfig: l must be at least 2");
  if (k < 1) throw DomainError("JdrConfig: k must be positive");
}

std::vector<long> default_l_grid(int max_exponent) {
  if (max_exponent < 1 || max_exponent > 62) throw DomainError("default_l_grid: bad exponent");
  std::vector<long> g;
  for (int e = 1; e <= max_exponent; ++e) g.push_back(1L << e);
  return g;
}

SfgStageValues stage_values(const ChannelParams& p, const JdrConfig& cfg) {
  p.validate();
  cfg.validate();
  const double kap = cfg.kappa();
  const double base = 1 - kap * (1 + p.n_s_prime());
  SfgStageValues v;
  v.mu = base * base;
  v.n_t = kap * p.n_s * p.n_s_prime();
  const double a1sq = double(cfg.m) * kap * p.eta * p.n_s * (1 + p.n_s);
  double mk = 1;
  for (long k = 0; k < cfg.k; ++k) {
    v.alpha.push_back(std::sqrt(a1sq * mk));
    mk *= v.mu;
  }
  return v;
}

ClickProbs click_probs(const ChannelParams& p, const JdrConfig& cfg) {
  p.validate();
  cfg.validate();
  const double kap = cfg.kappa();
  const double nt = kap * p.n_s * p.n_s_prime();
  const double base = 1 - kap * (1 + p.n_s_prime());
  const double mu = base * base;
  const double a = double(cfg.m) * double(cfg.l) * kap * p.eta * p.n_s * (p.n_s + 1) / (nt + 1);
  // (1 - mu^K)/(1 - mu), with the mu -> 1 limit K.
  const double geo = std::abs(1 - mu) < 1e-15 ? double(cfg.k)
                                              : -std::expm1(double(cfg.k) * std::log(mu)) / (1 - mu);
  const double log_thermal = -double(cfg.k) * std::log1p(nt);
  ClickProbs c;
  c.p_b = -std::expm1(log_thermal);
  c.p_c = -std::expm1(log_thermal - a * geo);
  return c;
}

ClickProbs click_probs_approx(const ChannelParams& p, const JdrConfig& cfg) {
  p.validate();
  cfg.validate();
  const double x = p.n_noise();
  const double gam = -std::expm1(-2 * (1 + x));
  ClickProbs c;
  c.p_c = -std::expm1(-p.n_s * (double(cfg.m) * double(cfg.l) * p.eta * gam / (2 * (1 + x)) + x));
  c.p_b = -std::expm1(-p.n_s * x);
  return c;
}

DmcProbs dmc_probs(double p_c, double p_b, long L) {
  if (!(p_c >= 0 && p_c <= 1 && p_b >= 0 && p_b <= 1)) throw DomainError("dmc_probs: probabilities outside [0,1]");
  if (L < 2) throw DomainError("dmc_probs: L must be at least 2");
  const double lq = std::log1p(-p_b);
  DmcProbs d;
  d.p_e = p_c * std::exp(double(L - 1) * lq);
  d.p_d = (1 - p_c) * p_b * std::exp(double(L - 2) * lq);
  return d;
}

PpmInfo ppm_mutual_info(double pe, double pd, long L) {
  if (L < 2) throw DomainError("ppm_mutual_info: L must be at least 2");
  if (!(pe >= 0 && pd >= 0)) throw DomainError("ppm_mutual_info: negative probability");
  if (pe == 0) return {0.0, pd > 0};
  const double l = double(L);
  double bits = pe / l * std::log2(l);
  if (pd > 0) {
    const double r = (l - 1) * pd / pe;
    bits += (l - 1) / l * pd * std::log2(l * pd / pe);
    bits -= (pe + (l - 1) * pd) / l * std::log1p(r) / std::log(2.0);
  }
  return {std::max(bits, 0.0), false};
}

double jdr1_rate(const ChannelParams& p, const JdrConfig& cfg) {
  const ClickProbs c = click_probs(p, cfg);
  const DmcProbs d = dmc_probs(c.p_c, c.p_b, cfg.l);
  return ppm_mutual_info(d.p_e, d.p_d, cfg.l).bits / double(cfg.m);
}

Envelope envelope_of(const std::vector<long>& l_grid, const std::vector<double>& rates) {
  if (l_grid.empty() || l_grid.size() != rates.size()) throw DomainError("envelope: empty or mismatched grid");
  Envelope e{l_grid[0], rates[0]};
  for (std::size_t i = 1; i < l_grid.size(); ++i) {
    if (rates[i] > e.best_rate || (rates[i] == e.best_rate && l_grid[i] < e.best_l)) {
      e = {l_grid[i], rates[i]};
    }
  }
  return e;
}

Envelope envelope_over_l(const ChannelParams& p, long m, long k, const std::vector<long>& l_grid) {
  std::vector<double> rates;
  for (long l : l_grid) rates.push_back(jdr1_rate(p, {m, l, k}));
  return envelope_of(l_grid, rates);
}

PpmApproxParams ppm_approx_params(const ChannelParams& p, long m) {
  p.validate();
  if (m < 1) throw DomainError("ppm_approx_params: m must be positive");
  const double x = p.n_noise();
  const double md = double(m);
  PpmApproxParams a;
  a.gamma_fac = -std::expm1(-2 * (1 + x));
  a.eps = md * p.eta * p.n_s / (2 * (1 + x));
  a.c = 2 * x * (1 + x) / (md * p.eta);
  a.lam = a.c * a.eps;
  const double mg = md * p.eta * a.gamma_fac;
  a.w = 4 * (1 + x) / (mg + 4 * x * (1 + x));
  a.u = p.n_s * mg / (2 * (1 + x) * std::log(2.0));
  a.v = p.n_s * p.n_s * mg * (mg + 4 * x * (1 + x)) / (8 * (1 + x) * (1 + x) * std::log(2.0));
  return a;
}

ApproxRate approx_rate_jarzyna(const ChannelParams& p, long m) {
  const PpmApproxParams a = ppm_approx_params(p, m);
  if (!(p.n_s > 0)) throw DomainError("approx_rate_jarzyna: n_s must be positive");
  const double x = p.n_noise();
  const double ratio = a.u / a.v;
  ApproxRate r;
  r.l = ratio / lambert_w0(ratio * M_E);
  const double noise_term = x > 0 ? g_entropy(2 * x * (1 + x) / (double(m) * p.eta * a.gamma_fac)) : 0.0;
  r.rate = p.eta * p.n_s * a.gamma_fac / (2 * (1 + x)) *
           (std::log2(a.w / p.n_s) - std::log2(std::log(a.w * M_E / p.n_s)) - noise_term);
  return r;
}

ApproxRate approx_rate_wang_wornell(const ChannelParams& p, long m) {
  const PpmApproxParams a = ppm_approx_params(p, m);
  if (!(a.eps > 0 && a.eps < 1 / M_E)) throw DomainError("approx_rate_wang_wornell: needs 0 < eps < 1/e");
  // Natural logarithms throughout; the capacity is in nats.
  const double li = std::log(1 / a.eps);
  const double c_nats = a.eps * li - a.eps * std::log(li) - a.eps * std::log1p(a.c);
  ApproxRate r;
  r.l = std::floor(1 / (a.eps * li));
  r.rate = from_nats(c_nats, LogUnit::Bits) / double(m);
  return r;
}

PpmSchemeRate ppm_scheme_rate(const ChannelParams& p, long m, long l, long k) {
  PpmSchemeRate s;
  s.rate = jdr1_rate(p, {m, l, k});
  s.preshared_brightness = double(l) * p.n_s;
  s.entanglement_ratio = p.n_s > 0 ? g_entropy(s.preshared_brightness) / g_entropy(p.n_s) : 1.0;
  return s;
}

}  // namespace eacomm
